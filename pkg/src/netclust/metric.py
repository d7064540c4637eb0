"""Network distance between networks of possibly different sizes.

``d(N_X, N_Y) = 1/2 * min_R max_{(x,y),(x',y') in R} |A_X(x,x') - A_Y(y,y')|``
over correspondences ``R``.  The exact search only visits correspondences of
the form ``graph(f) | graph(g)`` for maps ``f: X -> Y`` and ``g: Y -> X``.
That loses nothing: every correspondence contains such a union (pick one
partner per node on each side), and removing pairs from a correspondence can
only lower its distortion.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from netclust.errors import InstanceTooLarge, InvalidCorrespondence
from netclust.network import Network, Ultrametric
from netclust.report import HOLDS, VIOLATED, AuditReport

DEFAULT_CAP = 5
STABILITY_SLACK = 1e-9


@dataclass(frozen=True)
class Correspondence:
    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset((int(x), int(y)) for x, y in self.pairs))

    @classmethod
    def from_maps(cls, f: Iterable[int], g: Iterable[int]) -> Correspondence:
        pairs = {(x, int(y)) for x, y in enumerate(f)}
        pairs |= {(int(x), y) for y, x in enumerate(g)}
        return cls(frozenset(pairs))

    @classmethod
    def identity(cls, n: int) -> Correspondence:
        return cls(frozenset((i, i) for i in range(n)))

    def validate(self, nx: int, ny: int) -> None:
        xs = {x for x, _ in self.pairs}
        ys = {y for _, y in self.pairs}
        if not xs <= set(range(nx)) or not ys <= set(range(ny)):
            raise InvalidCorrespondence("correspondence refers to nodes outside the networks")
        if len(xs) != nx or len(ys) != ny:
            raise InvalidCorrespondence("every node on both sides must appear in some pair")


def distortion(corr: Correspondence, nx: Network, ny: Network) -> float:
    """Largest dissimilarity discrepancy over pairs of pairs (no 1/2 factor)."""
    corr.validate(nx.n, ny.n)
    pairs = sorted(corr.pairs)
    xs = np.array([p[0] for p in pairs])
    ys = np.array([p[1] for p in pairs])
    return float(np.abs(nx.dissim[np.ix_(xs, xs)] - ny.dissim[np.ix_(ys, ys)]).max())


def _all_maps(n_from: int, n_to: int) -> np.ndarray:
    idx = np.arange(n_to ** n_from)
    place = n_to ** np.arange(n_from - 1, -1, -1)
    return (idx[:, None] // place[None, :]) % n_to


def _pair_distortion(ax: np.ndarray, ay: np.ndarray, f: np.ndarray, g: np.ndarray) -> float:
    xs = np.concatenate([np.arange(ax.shape[0]), g])
    ys = np.concatenate([f, np.arange(ay.shape[0])])
    return float(np.abs(ax[np.ix_(xs, xs)] - ay[np.ix_(ys, ys)]).max())


def best_function_pair(nx: Network, ny: Network, cap: int = DEFAULT_CAP):
    """Exact minimum distortion and a pair of maps ``(f, g)`` attaining it."""
    if nx.n > cap or ny.n > cap:
        raise InstanceTooLarge(
            f"exact distance is capped at {cap} nodes per side, got {nx.n} and {ny.n}"
        )
    ax, ay = nx.dissim, ny.dissim
    fs = _all_maps(nx.n, ny.n)
    gs = _all_maps(ny.n, nx.n)
    # distortion of graph(f) alone and graph(g) alone
    dis_f = np.abs(ay[fs[:, :, None], fs[:, None, :]] - ax[None]).max(axis=(1, 2))
    dis_g = np.abs(ax[gs[:, :, None], gs[:, None, :]] - ay[None]).max(axis=(1, 2))
    g_order = np.argsort(dis_g, kind="stable")
    g_sorted = dis_g[g_order]
    best, best_f, best_g = np.inf, None, None
    for fi in np.argsort(dis_f, kind="stable"):
        if dis_f[fi] >= best:
            break
        m = int(np.searchsorted(g_sorted, best, side="left"))
        if m == 0:
            break
        cand = g_order[:m]
        f = fs[fi]
        gc = gs[cand]
        # (x, f(x)) against (g(y), y), in both orders
        c1 = np.abs(ax[:, gc] - ay[f][:, None, :]).max(axis=(0, 2))
        c2 = np.abs(ax[gc] - ay[:, f][None]).max(axis=(1, 2))
        total = np.maximum(np.maximum(c1, c2), np.maximum(g_sorted[:m], dis_f[fi]))
        j = int(np.argmin(total))
        if total[j] < best:
            best, best_f, best_g = float(total[j]), f.copy(), gs[cand[j]].copy()
    return best, best_f, best_g


def network_distance_exact(nx: Network, ny: Network, cap: int = DEFAULT_CAP) -> float:
    return 0.5 * best_function_pair(nx, ny, cap)[0]


def _local_search(ax, ay, f, g):
    cost = _pair_distortion(ax, ay, f, g)
    improved = True
    while improved:
        improved = False
        for vec, size in ((f, ay.shape[0]), (g, ax.shape[0])):
            for i in range(vec.size):
                keep = vec[i]
                for cand in range(size):
                    if cand == keep:
                        continue
                    vec[i] = cand
                    c = _pair_distortion(ax, ay, f, g)
                    if c < cost:
                        cost, keep, improved = c, cand, True
                vec[i] = keep
    return cost


def network_distance_upper(nx: Network, ny: Network, trials: int = 20, seed: int = 0) -> float:
    """Upper bound on the distance from random map pairs plus greedy descent.

    Trial 0 starts from the index-aligned maps; later trials start from
    random maps.  Trials are drawn in a fixed order, so more trials with the
    same seed never give a larger bound.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ax, ay = nx.dissim, ny.dissim
    rng = np.random.default_rng(seed)
    best = np.inf
    for trial in range(trials):
        if trial == 0:
            f = np.arange(nx.n) % ny.n
            g = np.arange(ny.n) % nx.n
        else:
            f = rng.integers(0, ny.n, nx.n)
            g = rng.integers(0, nx.n, ny.n)
        best = min(best, _local_search(ax, ay, f, g))
        if best == 0:
            break
    return 0.5 * best


def check_stability(family, nx: Network, ny: Network, cap: int = DEFAULT_CAP) -> AuditReport:
    """Check ``d(H(N_X), H(N_Y)) <= d(N_X, N_Y) / sep(family)`` with exact distances."""
    from netclust.representable import cluster_representable

    d_in = network_distance_exact(nx, ny, cap)
    ux: Ultrametric = cluster_representable(family, nx)
    uy: Ultrametric = cluster_representable(family, ny)
    d_out = network_distance_exact(ux, uy, cap)
    bound = family.lipschitz_constant * d_in
    if d_out <= bound + STABILITY_SLACK:
        return AuditReport("stability", HOLDS, 1)
    witness = {
        "network_x": {"labels": list(nx.labels), "dissim": nx.dissim.tolist()},
        "network_y": {"labels": list(ny.labels), "dissim": ny.dissim.tolist()},
        "input_distance": d_in,
        "output_distance": d_out,
        "lipschitz": family.lipschitz_constant,
        "family": family.as_records(),
    }
    return AuditReport("stability", VIOLATED, 1, witness)
