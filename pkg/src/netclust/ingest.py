"""Turn input files into validated networks.

Three layouts are understood: a labelled dissimilarity matrix, an edge list,
and a similarity table ``U`` (for instance inter-sector flows in an
input-output table) where ``U[i, j]`` is how much of ``i``'s output is used by
``j``.  A similarity table is converted column by column:

    A[i, j] = (U[i, j] / sum_{k != j} U[k, j]) ** -1

so ``A[i, j]`` is small when ``i`` supplies most of ``j``'s inputs.  Zero
flows have no finite inverse; by default they become a sentinel of ten times
the largest finite dissimilarity.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from netclust.errors import NegativeSimilarity, ParseError, ZeroColumnSum, ZeroSimilarity
from netclust.io import read_edge_list, read_matrix_rows, read_network_csv
from netclust.network import Network

FORMATS = {
    "matrix": "matrix",
    "matrix-csv": "matrix",
    "edges": "edges",
    "edge-list": "edges",
    "similarity": "similarity",
    "similarity-table": "similarity",
}
ZERO_POLICIES = ("sentinel", "error")
SENTINEL_FACTOR = 10.0


@dataclass(frozen=True)
class IngestionSpec:
    path: str
    format: str = "matrix"
    zero_policy: str = "sentinel"
    self_use: bool = False

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ParseError(f"unknown input format {self.format!r}")
        object.__setattr__(self, "format", FORMATS[self.format])
        if self.zero_policy not in ZERO_POLICIES:
            raise ParseError(f"unknown zero policy {self.zero_policy!r}")


def similarity_to_network(labels: Sequence[str], table, zero_policy: str = "sentinel",
                          self_use: bool = False) -> Network:
    """Column-normalise a similarity table and invert it into dissimilarities.

    Diagonal entries are ignored unless ``self_use`` is set, in which case they
    count towards the column sums (they never become dissimilarities).
    """
    u = np.array(table, dtype=float)
    n = u.shape[0]
    off = ~np.eye(n, dtype=bool)
    counted = off | np.eye(n, dtype=bool) if self_use else off
    vals = np.where(counted, u, 0.0)
    if np.any(np.isnan(vals)):
        raise ParseError("similarity table has missing entries off the diagonal")
    if np.any(vals < 0):
        i, j = (int(v) for v in np.argwhere(vals < 0)[0])
        raise NegativeSimilarity(f"U({labels[i]},{labels[j]}) = {u[i, j]!r} is negative")
    col = vals.sum(axis=0)
    if np.any(col <= 0):
        j = int(np.flatnonzero(col <= 0)[0])
        raise ZeroColumnSum(f"column {labels[j]!r} has no positive inputs")
    share = vals / col[None, :]
    with np.errstate(divide="ignore"):
        a = np.where(share > 0, 1.0 / share, np.inf)
    zero = off & ~np.isfinite(a)
    if np.any(zero):
        if zero_policy == "error":
            i, j = (int(v) for v in np.argwhere(zero)[0])
            raise ZeroSimilarity(f"U({labels[i]},{labels[j]}) is zero")
        finite = a[off & np.isfinite(a)]
        a[zero] = SENTINEL_FACTOR * finite.max()
    np.fill_diagonal(a, 0.0)
    return Network(tuple(labels), a)


def read_similarity_table(path, zero_policy: str = "sentinel", self_use: bool = False) -> Network:
    with open(path, newline="", encoding="utf-8") as fh:
        labels, table = read_matrix_rows(fh, blank_diagonal=not self_use)
    return similarity_to_network(labels, table, zero_policy, self_use)


def ingest(spec: IngestionSpec) -> Network:
    try:
        if spec.format == "matrix":
            return read_network_csv(spec.path)
        if spec.format == "edges":
            return read_edge_list(spec.path)
        return read_similarity_table(spec.path, spec.zero_policy, spec.self_use)
    except OSError as exc:
        raise ParseError(f"cannot read {spec.path}: {exc.strerror}") from None
