"""Command-line front end: ``netclust {cluster,audit,distance,ingest-check}``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from netclust.errors import NetClustError, UsageError
from netclust.ingest import FORMATS, ZERO_POLICIES, IngestionSpec, ingest
from netclust.io import dendrogram_to_json, network_to_csv, to_newick
from netclust.methods import parse_method, run_method
from netclust.metric import DEFAULT_CAP, network_distance_exact, network_distance_upper
from netclust.network import dendrogram_from_ultrametric
from netclust.properties import DEFAULT_ALPHAS, PROPERTIES, audit


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse's default prints a usage block; keep errors to one line
        raise UsageError(message.replace("\n", " "))


def _emit(text: str, path) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(args, path=None):
    return ingest(IngestionSpec(path or args.input, args.format, args.zero_policy))


def _parse_alphas(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"--alphas expects comma-separated numbers, got {text!r}") from None
    if not vals:
        raise UsageError("--alphas is empty")
    return vals


def _parse_map(text: str) -> dict[str, str]:
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise UsageError(f"--map entries look like src=dst, got {item!r}")
        a, b = item.split("=", 1)
        out[a.strip()] = b.strip()
    return out


def cmd_cluster(args) -> int:
    net = _load(args)
    u = run_method(parse_method(args.method), net)
    if args.out_format == "ultra-csv":
        text = network_to_csv(u)
    else:
        dendro = dendrogram_from_ultrametric(u)
        text = to_newick(dendro, digits=9) + "\n" if args.out_format == "newick" else dendrogram_to_json(dendro) + "\n"
    _emit(text, args.output)
    if args.ultra_csv:
        Path(args.ultra_csv).write_text(network_to_csv(u), encoding="utf-8")
    return 0


def cmd_audit(args) -> int:
    method = parse_method(args.method)
    net = _load(args) if args.input else None
    other = _load(args, args.other) if args.other else None
    phi = _parse_map(args.map) if args.map else None
    report = audit(args.property, method, net, seed=args.seed, probes=args.probes,
                   alphas=_parse_alphas(args.alphas), other=other, phi=phi, cap=args.cap)
    _emit(report.to_json() + "\n", args.output)
    return 0 if report.holds else 1


def cmd_distance(args) -> int:
    nx = _load(args, args.first)
    ny = _load(args, args.second)
    if args.upper:
        if args.trials < 1:
            raise UsageError("--trials must be at least 1")
        line = f"upper {network_distance_upper(nx, ny, args.trials, args.seed):.9g}\n"
    else:
        line = f"exact {network_distance_exact(nx, ny, args.cap):.9g}\n"
    _emit(line, args.output)
    return 0


def cmd_ingest_check(args) -> int:
    net = _load(args)
    off = net.off_diagonal()
    lines = [
        f"nodes {net.n}",
        f"symmetric {'yes' if net.is_symmetric() else 'no'}",
    ]
    if off.size:
        lines += [f"min {off.min():.9g}", f"max {off.max():.9g}"]
    sys.stdout.write("\n".join(lines) + "\n")
    if args.output:
        Path(args.output).write_text(network_to_csv(net), encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", help="network file")
    common.add_argument("--format", default="matrix", choices=sorted(FORMATS),
                        help="input layout (default: matrix)")
    common.add_argument("--zero-policy", default="sentinel", choices=ZERO_POLICIES,
                        help="how zero similarities are handled")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="node cap for exhaustive searches (default: %(default)s)")

    parser = _Parser(prog="netclust", description="Hierarchical clustering of asymmetric networks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cluster", parents=[common], help="cluster a network into a dendrogram")
    p.add_argument("--method", required=True,
                   help="reciprocal | nonreciprocal | semi:T | graft:BETA | representable:FILE")
    p.add_argument("--out-format", default="json", choices=("json", "newick", "ultra-csv"))
    p.add_argument("--ultra-csv", help="also write the ultrametric as CSV to this path")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("audit", parents=[common], help="check an axiom or property")
    p.add_argument("property", choices=PROPERTIES)
    p.add_argument("--method", required=True)
    p.add_argument("--probes", type=int, default=20)
    p.add_argument("--alphas", default=",".join(f"{a:g}" for a in DEFAULT_ALPHAS))
    p.add_argument("--other", help="second network (transform target or stability partner)")
    p.add_argument("--map", help="node map for transform, as src=dst,src=dst,...")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("distance", parents=[common], help="network distance between two files")
    p.add_argument("first")
    p.add_argument("second")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exhaustive search (default)")
    mode.add_argument("--upper", action="store_true", help="randomized upper bound")
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("ingest-check", parents=[common], help="parse and validate an input file")
    p.set_defaults(func=cmd_ingest_check)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command in ("cluster", "ingest-check") and not args.input:
            raise UsageError("--input is required")
        return args.func(args)
    except NetClustError as exc:
        msg = str(exc).replace("\n", " ")
        print(f"ERROR {exc.code}: {msg}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"ERROR IOError: {exc.strerror}: {exc.filename}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
