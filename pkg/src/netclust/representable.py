"""Representable clustering: methods generated by template networks.

A representer is a small network whose dissimilarities may be defined only on
some ordered pairs.  For a node map ``phi`` from a representer into a network
the expansion constant is the smallest multiple of the representer that makes
``phi`` dissimilarity reducing.  The optimal multiple of a pair ``(x, x')`` is
the smallest expansion constant over maps whose image contains both nodes, the
family multiple takes the minimum over representers, and the clustering output
is single linkage applied to the family multiples.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from netclust.errors import (
    EmptyFamily,
    InvalidNodeMap,
    InvalidRepresenter,
    InvalidSize,
    NonPositiveWeight,
    NotWeaklyConnected,
    RepresenterTooLarge,
)
from netclust.minimax import minmax_product, single_linkage
from netclust.network import Network, Ultrametric

DEFAULT_CAP = 5
_CHUNK = 1 << 16


@dataclass(frozen=True)
class Representer:
    """Template network on nodes ``0..k-1`` with a partial dissimilarity.

    ``edges`` lists ``(src, dst, weight)`` for the defined ordered pairs.
    """

    k: int
    edges: tuple[tuple[int, int, float], ...]
    name: str = ""

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 2:
            raise InvalidSize(f"a representer needs at least 2 nodes, got {self.k!r}")
        k = int(self.k)
        object.__setattr__(self, "k", k)
        edges = []
        seen = set()
        for edge in self.edges:
            try:
                s, d, w = edge
                s, d, w = int(s), int(d), float(w)
            except (TypeError, ValueError):
                raise InvalidRepresenter(f"malformed edge {edge!r}") from None
            if not (0 <= s < k and 0 <= d < k):
                raise InvalidRepresenter(f"edge {edge!r} leaves node range 0..{k - 1}")
            if s == d:
                raise InvalidRepresenter(f"self pair ({s}, {d}) is not allowed")
            if (s, d) in seen:
                raise InvalidRepresenter(f"pair ({s}, {d}) defined twice")
            if not (w > 0) or not np.isfinite(w):
                raise NonPositiveWeight(f"edge ({s}, {d}) has weight {w!r}")
            seen.add((s, d))
            edges.append((s, d, w))
        object.__setattr__(self, "edges", tuple(sorted(edges)))
        if not _weakly_connected(k, edges):
            raise NotWeaklyConnected(f"representer {self.name or '<unnamed>'} is not weakly connected")

    @property
    def sep(self) -> float:
        return min(w for _, _, w in self.edges)

    @property
    def bound(self) -> float:
        return max(w for _, _, w in self.edges)

    def cycle_weights(self) -> Optional[tuple[float, Optional[float]]]:
        """``(forward, backward)`` if this is a uniform cycle on ``k >= 3`` nodes.

        A uniform cycle has every ``i -> i+1 (mod k)`` pair at one weight and
        either no reverse pairs or every reverse pair at one other weight.
        """
        k = self.k
        if k < 3:
            return None
        fwd = {}
        bwd = {}
        for s, d, w in self.edges:
            if d == (s + 1) % k:
                fwd[s] = w
            elif s == (d + 1) % k:
                bwd[d] = w
            else:
                return None
        if len(fwd) != k or len(set(fwd.values())) != 1:
            return None
        if bwd and (len(bwd) != k or len(set(bwd.values())) != 1):
            return None
        return next(iter(fwd.values())), (next(iter(bwd.values())) if bwd else None)


def _weakly_connected(k: int, edges: Iterable[tuple[int, int, float]]) -> bool:
    adj = [set() for _ in range(k)]
    for s, d, _ in edges:
        adj[s].add(d)
        adj[d].add(s)
    seen = {0}
    stack = [0]
    while stack:
        for v in adj[stack.pop()]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == k


@dataclass(frozen=True)
class RepresenterFamily:
    members: tuple[Representer, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise EmptyFamily("a representer family needs at least one member")

    @property
    def sep(self) -> float:
        return min(m.sep for m in self.members)

    @property
    def bound(self) -> float:
        return max(m.bound for m in self.members)

    @property
    def practical(self) -> bool:
        return self.sep > 0

    @property
    def unit_weights(self) -> bool:
        """All weights are 1, so expansion constants involve no rounding."""
        return all(w == 1.0 for m in self.members for _, _, w in m.edges)

    @property
    def lipschitz_constant(self) -> float:
        return 1.0 / self.sep

    def as_records(self) -> list[dict]:
        return [{"name": m.name, "k": m.k, "edges": [list(e) for e in m.edges]}
                for m in self.members]


def validate_family(raw: Sequence) -> RepresenterFamily:
    """Build a family from representers, ``(k, edges[, name])`` tuples or dicts."""
    members = []
    for item in raw:
        if isinstance(item, Representer):
            members.append(item)
        elif isinstance(item, dict):
            members.append(Representer(item["k"], tuple(item["edges"]), item.get("name", "")))
        else:
            members.append(Representer(*item))
    return RepresenterFamily(tuple(members))


def cycle_representer(k: int, forward: float = 1.0, backward: Optional[float] = None,
                      name: Optional[str] = None) -> Representer:
    """Directed ``k``-cycle ``0 -> 1 -> ... -> k-1 -> 0`` at weight ``forward``.

    With ``backward`` every reverse pair is defined too.  For ``k == 2`` the two
    directions are the same pairs, so ``backward`` (default ``forward``) sets
    the ``1 -> 0`` weight.
    """
    if isinstance(k, bool) or int(k) != k or k < 2:
        raise InvalidSize(f"cycle needs at least 2 nodes, got {k!r}")
    k = int(k)
    if k == 2:
        back = forward if backward is None else backward
        edges = ((0, 1, forward), (1, 0, back))
    else:
        edges = tuple((i, (i + 1) % k, forward) for i in range(k))
        if backward is not None:
            edges += tuple(((i + 1) % k, i, backward) for i in range(k))
    if name is None:
        name = f"cycle{k}" if backward is None else f"cycle{k}_{forward:g}_{backward:g}"
    return Representer(k, edges, name)


def reciprocal_family() -> RepresenterFamily:
    return RepresenterFamily((cycle_representer(2, 1.0, 1.0, name="omega_R"),))


def nonreciprocal_family(n: int) -> RepresenterFamily:
    """Unit cycles on 2..2n nodes; on networks with at most ``n`` nodes this
    truncation of the infinite cycle family clusters like nonreciprocal."""
    top = max(2, 2 * int(n))
    return RepresenterFamily(tuple(cycle_representer(k) for k in range(2, top + 1)))


def _check_map(phi: Sequence[int], omega: Representer, n: int) -> np.ndarray:
    phi = np.asarray(phi)
    if phi.shape != (omega.k,):
        raise InvalidNodeMap(f"node map has length {phi.size}, representer has {omega.k} nodes")
    if phi.size and (phi.min() < 0 or phi.max() >= n):
        raise InvalidNodeMap("node map points outside the network")
    return phi.astype(int)


def expansion_constant(phi: Sequence[int], omega: Representer, net: Network) -> float:
    """Smallest multiple of ``omega`` making ``phi`` dissimilarity reducing."""
    phi = _check_map(phi, omega, net.n)
    a = net.dissim
    return max(a[phi[s], phi[d]] / w for s, d, w in omega.edges)


def _enumerated_multiples(omega: Representer, a: np.ndarray) -> np.ndarray:
    # one pass over all n**k maps; each map min-updates every pair in its image
    n, k = a.shape[0], omega.k
    src = np.array([e[0] for e in omega.edges])
    dst = np.array([e[1] for e in omega.edges])
    w = np.array([e[2] for e in omega.edges])
    lam = np.full((n, n), np.inf)
    place = n ** np.arange(k - 1, -1, -1)
    total = n ** k
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK))
        maps = (idx[:, None] // place[None, :]) % n
        cost = np.max(a[maps[:, src], maps[:, dst]] / w, axis=1)
        for p in range(k):
            for q in range(p + 1, k):
                np.minimum.at(lam, (maps[:, p], maps[:, q]), cost)
                np.minimum.at(lam, (maps[:, q], maps[:, p]), cost)
    np.fill_diagonal(lam, 0.0)
    return lam


def _cycle_multiples(a: np.ndarray, k: int, forward: float, backward: Optional[float]) -> np.ndarray:
    # Rotate any map so x sits on node 0 and x' on node s: the cycle splits into
    # an s-step walk x -> x' and a (k-s)-step walk x' -> x.  Zero diagonal makes
    # exactly-m-step walk costs equal at-most-m-step costs (stalling is free).
    step = a / forward
    if backward is not None:
        step = np.maximum(step, a.T / backward)
    walks = [None, step]
    for _ in range(2, k):
        walks.append(minmax_product(walks[-1], step))
    lam = np.full(a.shape, np.inf)
    for s in range(1, k):
        np.minimum(lam, np.maximum(walks[s], walks[k - s].T), out=lam)
    np.fill_diagonal(lam, 0.0)
    return lam


def optimal_multiples(omega: Representer, net: Network, cap: int = DEFAULT_CAP,
                      strategy: str = "auto") -> np.ndarray:
    """Optimal multiple of every node pair with respect to ``omega``.

    ``strategy`` is ``"enumerate"`` (all ``n**k`` maps, refused when ``k`` is
    above ``cap``), ``"cycle"`` (walk recursion, uniform cycles only) or
    ``"auto"`` (cycle when applicable, else enumerate).
    """
    a = np.asarray(net.dissim, dtype=float)
    if strategy not in ("auto", "enumerate", "cycle"):
        raise ValueError(f"unknown strategy {strategy!r}")
    cyc = omega.cycle_weights()
    if strategy == "cycle" and cyc is None:
        raise InvalidRepresenter(f"{omega.name or 'representer'} is not a uniform cycle")
    if strategy == "cycle" or (strategy == "auto" and cyc is not None):
        return _cycle_multiples(a, omega.k, *cyc)
    if omega.k > cap:
        raise RepresenterTooLarge(
            f"representer {omega.name or '<unnamed>'} has {omega.k} nodes; "
            f"enumeration is capped at {cap}"
        )
    return _enumerated_multiples(omega, a)


def family_multiples(family: RepresenterFamily, net: Network, cap: int = DEFAULT_CAP,
                     strategy: str = "auto") -> np.ndarray:
    lam = optimal_multiples(family.members[0], net, cap, strategy)
    for omega in family.members[1:]:
        np.minimum(lam, optimal_multiples(omega, net, cap, strategy), out=lam)
    return lam


def cluster_representable(family: RepresenterFamily, net: Network, cap: int = DEFAULT_CAP,
                          strategy: str = "auto") -> Ultrametric:
    lam = family_multiples(family, net, cap, strategy)
    return single_linkage(Network(net.labels, lam))


def three_cycle_kernel(net: Network, c: float = 3.0) -> np.ndarray:
    """Optimal multiples for the 3-cycle with forward weight 1, backward ``c``.

    ``B[i, j] = min_k max(A[i,j], A[j,k], A[k,i], A[j,i]/c, A[k,j]/c, A[i,k]/c)``
    and the result is ``min(B, B.T)``.
    """
    if not (c >= 1):
        raise ValueError(f"backward/forward ratio must be >= 1, got {c!r}")
    a = np.asarray(net.dissim, dtype=float)
    n = a.shape[0]
    b = np.empty((n, n))
    # columns j, k of the inner grid
    jk = np.maximum(a, a.T / c)
    for i in range(n):
        ij = np.maximum(a[i, :], a[:, i] / c)
        ki = np.maximum(a[:, i], a[i, :] / c)
        b[i] = np.min(np.maximum(np.maximum(ij[:, None], jk), ki[None, :]), axis=1)
    return np.minimum(b, b.T)
