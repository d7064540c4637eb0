"""Min-max path primitives over the (min, max) semiring.

Every function here only takes minima and maxima of input entries, so each
output value is bit-identical to some input dissimilarity.  That is what lets
the rest of the package compare grids with ``==``.

Grids are returned as plain ``numpy`` arrays indexed like the input network.
"""
from __future__ import annotations

import numpy as np

from netclust.errors import InvalidHopBound, NotSymmetric
from netclust.network import Network, Ultrametric


def minmax_product(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """``out[i, j] = min_k max(left[i, k], right[k, j])``."""
    n = left.shape[0]
    out = np.full((n, right.shape[1]), np.inf)
    for k in range(left.shape[1]):
        np.minimum(out, np.maximum(left[:, k, None], right[None, k, :]), out=out)
    return out


def minimax_closure(grid: np.ndarray) -> np.ndarray:
    """Cheapest-bottleneck cost between every ordered pair (Floyd-Warshall).

    The diagonal is forced to 0: the trivial chain ``[x]`` costs nothing.
    """
    d = np.array(grid, dtype=float, copy=True)
    np.fill_diagonal(d, 0.0)
    for k in range(d.shape[0]):
        np.minimum(d, np.maximum(d[:, k, None], d[None, k, :]), out=d)
    return d


def directed_minimax(net: Network) -> np.ndarray:
    """Directed minimum chain cost from every node to every other node."""
    return minimax_closure(net.dissim)


def bounded_hop_minimax(net: Network, t: int) -> np.ndarray:
    """Minimum chain cost restricted to chains of at most ``t`` nodes.

    ``t`` counts both endpoints, so ``t == 2`` admits only the direct link and
    returns the input grid unchanged.  Chains may revisit nodes; that never
    lowers a bottleneck, so growing the hop budget one link at a time is exact.
    """
    if isinstance(t, bool) or int(t) != t or t < 2:
        raise InvalidHopBound(f"hop bound must be an integer >= 2, got {t!r}")
    a = np.array(net.dissim, dtype=float)
    cost = a.copy()
    # after the loop body runs m times, cost covers chains with <= m + 2 nodes
    for _ in range(int(t) - 2):
        nxt = np.minimum(cost, minmax_product(cost, a))
        if np.array_equal(nxt, cost):
            break
        cost = nxt
    return cost


def max_symmetrize(net: Network) -> Network:
    return Network(net.labels, np.maximum(net.dissim, net.dissim.T))


def single_linkage(net: Network) -> Ultrametric:
    """Minimax closure of a symmetric network."""
    if not net.is_symmetric():
        raise NotSymmetric("single linkage needs a symmetric network")
    return Ultrametric(net.labels, minimax_closure(net.dissim))
