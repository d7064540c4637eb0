import sys

from netclust.cli import main

sys.exit(main())
