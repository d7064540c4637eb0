"""Falsification probes for clustering axioms and properties.

Each ``check_*`` function runs one method against one probe (or a fixed grid
of probes) and returns an :class:`~netclust.report.AuditReport`.  A violated
report carries a self-contained witness that :func:`replay` can re-run.
:func:`audit` is the seeded driver used by the command line tool.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from netclust.errors import NotDissimilarityReducing, UnknownProperty, UsageError
from netclust.io import labels_and_grid, network_from_record
from netclust.methods import (
    NONRECIPROCAL,
    RECIPROCAL,
    MethodSpec,
    parse_method,
    representable_method,
    run_method,
)
from netclust.network import Network, partition_at, restrict, scale_network
from netclust.report import HOLDS, VIOLATED, AuditReport, merge_reports

RTOL = 1e-9
DEFAULT_WEIGHTS = (1.0, 2.0, 3.0, 5.0, 8.0)
DEFAULT_ALPHAS = (0.5, 2.0, 10.0)
PROPERTIES = ("excisive", "scale", "idempotent", "value", "transform", "sandwich", "stability")


# ------------------------------------------------------------------ helpers

def _method_record(method: MethodSpec) -> dict:
    rec = {"method": str(method)}
    if method.kind == "representable":
        rec["family"] = method.family.as_records()
    return rec


def _method_from_record(rec: dict) -> MethodSpec:
    if "family" in rec:
        from netclust.representable import validate_family

        source = rec["method"].split(":", 1)[1]
        return representable_method(validate_family(rec["family"]), source=source)
    return parse_method(rec["method"])


def _first_mismatch(a: np.ndarray, b: np.ndarray, exact: bool):
    bad = (a != b) if exact else ~np.isclose(a, b, rtol=RTOL, atol=0.0)
    if np.any(bad):
        return tuple(int(v) for v in np.argwhere(bad)[0])
    return None


def _first_excess(small: np.ndarray, big: np.ndarray, exact: bool):
    """First index where ``small <= big`` fails."""
    bad = (small > big) if exact else (small > big * (1.0 + RTOL))
    if np.any(bad):
        return tuple(int(v) for v in np.argwhere(bad)[0])
    return None


def random_network(rng: np.random.Generator, n: int, weights: Sequence[float] = DEFAULT_WEIGHTS,
                   symmetric: bool = False) -> Network:
    """Network whose off-diagonal entries are drawn from ``weights``."""
    w = np.asarray(weights, dtype=float)
    grid = rng.choice(w, size=(n, n))
    if symmetric:
        grid = np.triu(grid, 1)
        grid = grid + grid.T
    np.fill_diagonal(grid, 0.0)
    return Network(tuple(f"x{i + 1}" for i in range(n)), grid)


def random_contraction(rng: np.random.Generator, nx: Network, m: Optional[int] = None,
                       weights: Sequence[float] = DEFAULT_WEIGHTS):
    """A target network and a dissimilarity reducing map from ``nx`` into it.

    Each target pair hit by the map gets the smallest source dissimilarity it
    receives, scaled down by a factor in {1, 1/2, 1/4}; pairs outside the image
    get a random weight.
    """
    n = nx.n
    m = int(rng.integers(1, n + 1)) if m is None else m
    phi = rng.integers(0, m, n)
    ceiling = np.full((m, m), np.inf)
    for i in range(n):
        for j in range(n):
            if phi[i] != phi[j]:
                ceiling[phi[i], phi[j]] = min(ceiling[phi[i], phi[j]], nx.dissim[i, j])
    shrink = rng.choice([1.0, 0.5, 0.25], size=(m, m))
    free = rng.choice(np.asarray(weights, dtype=float), size=(m, m))
    grid = np.where(np.isfinite(ceiling), ceiling * shrink, free)
    np.fill_diagonal(grid, 0.0)
    ny = Network(tuple(f"y{j + 1}" for j in range(m)), grid)
    return ny, [int(v) for v in phi]


# ------------------------------------------------------------------- checks

def check_excisiveness(method: MethodSpec, net: Network) -> AuditReport:
    """Re-cluster every proper multi-node block at every output resolution."""
    u = run_method(method, net)
    exact = method.division_free
    probes = 0
    seen = set()
    for delta in np.unique(u.off_diagonal()):
        for block in partition_at(u, float(delta)).blocks:
            if len(block) < 2 or len(block) == net.n or block in seen:
                continue
            seen.add(block)
            probes += 1
            branch = restrict(u, block)
            sub = run_method(method, restrict(net, block))
            hit = _first_mismatch(sub.dissim, branch.dissim, exact)
            if hit is not None:
                i, j = hit
                witness = {
                    **_method_record(method),
                    "network": labels_and_grid(net),
                    "resolution": float(delta),
                    "block": list(block),
                    "pair": [block[i], block[j]],
                    "branch_value": float(branch.dissim[i, j]),
                    "reclustered_value": float(sub.dissim[i, j]),
                }
                return AuditReport("excisive", VIOLATED, probes, witness)
    return AuditReport("excisive", HOLDS, probes)


def check_scale_preservation(method: MethodSpec, net: Network,
                             alphas: Sequence[float] = DEFAULT_ALPHAS) -> AuditReport:
    if not alphas:
        raise UsageError("at least one scale factor is required")
    base = run_method(method, net)
    for k, alpha in enumerate(alphas, start=1):
        scaled = run_method(method, scale_network(net, alpha))
        expected = alpha * base.dissim
        hit = _first_mismatch(scaled.dissim, expected, exact=False)
        if hit is not None:
            i, j = hit
            witness = {
                **_method_record(method),
                "network": labels_and_grid(net),
                "alpha": float(alpha),
                "pair": [net.labels[i], net.labels[j]],
                "scaled_output": float(scaled.dissim[i, j]),
                "expected": float(expected[i, j]),
            }
            return AuditReport("scale", VIOLATED, k, witness)
    return AuditReport("scale", HOLDS, len(alphas))


def check_idempotency(method: MethodSpec, net: Network) -> AuditReport:
    u = run_method(method, net)
    again = run_method(method, u)
    hit = _first_mismatch(again.dissim, u.dissim, method.division_free)
    if hit is None:
        return AuditReport("idempotent", HOLDS, 1)
    i, j = hit
    witness = {
        **_method_record(method),
        "network": labels_and_grid(net),
        "pair": [net.labels[i], net.labels[j]],
        "first": float(u.dissim[i, j]),
        "second": float(again.dissim[i, j]),
    }
    return AuditReport("idempotent", VIOLATED, 1, witness)


def default_value_grid(weights: Sequence[float] = DEFAULT_WEIGHTS):
    return [(a, b) for a in weights for b in weights]


def check_value_axiom(method: MethodSpec, grid=None) -> AuditReport:
    """Two-node networks must merge at the larger of their two dissimilarities."""
    grid = default_value_grid() if grid is None else list(grid)
    for k, (alpha, beta) in enumerate(grid, start=1):
        net = Network(("p", "q"), [[0.0, alpha], [beta, 0.0]])
        got = run_method(method, net).dissim[0, 1]
        want = max(alpha, beta)
        ok = got == want if method.division_free else np.isclose(got, want, rtol=RTOL, atol=0.0)
        if not ok:
            witness = {**_method_record(method), "network": labels_and_grid(net),
                       "alpha": float(alpha), "beta": float(beta),
                       "merge": float(got), "expected": float(want)}
            return AuditReport("value", VIOLATED, k, witness)
    return AuditReport("value", HOLDS, len(grid))


def _as_index_map(phi, nx: Network, ny: Network) -> list[int]:
    if isinstance(phi, dict):
        return [ny.index(phi[lab]) for lab in nx.labels]
    phi = [int(v) for v in phi]
    if len(phi) != nx.n or any(not 0 <= v < ny.n for v in phi):
        raise NotDissimilarityReducing("node map must send every source node to a target node")
    return phi


def check_transformation_axiom(method: MethodSpec, nx: Network, ny: Network, phi) -> AuditReport:
    """Contracting the input must not stretch the output ultrametric."""
    idx = _as_index_map(phi, nx, ny)
    pulled = ny.dissim[np.ix_(idx, idx)]
    if np.any(pulled > nx.dissim):
        i, j = (int(v) for v in np.argwhere(pulled > nx.dissim)[0])
        raise NotDissimilarityReducing(
            f"A_X({nx.labels[i]},{nx.labels[j]}) = {nx.dissim[i, j]!r} < "
            f"A_Y(phi(x), phi(x')) = {pulled[i, j]!r}"
        )
    ux = run_method(method, nx).dissim
    uy = run_method(method, ny).dissim[np.ix_(idx, idx)]
    hit = _first_excess(uy, ux, method.division_free)
    if hit is None:
        return AuditReport("transform", HOLDS, 1)
    i, j = hit
    witness = {**_method_record(method), "network": labels_and_grid(nx),
               "target": labels_and_grid(ny), "map": [ny.labels[v] for v in idx],
               "pair": [nx.labels[i], nx.labels[j]],
               "source_value": float(ux[i, j]), "target_value": float(uy[i, j])}
    return AuditReport("transform", VIOLATED, 1, witness)


def check_sandwich(method: MethodSpec, net: Network) -> AuditReport:
    """Nonreciprocal output <= method output <= reciprocal output, entrywise."""
    u = run_method(method, net).dissim
    lo = run_method(NONRECIPROCAL, net).dissim
    hi = run_method(RECIPROCAL, net).dissim
    exact = method.division_free
    for side, small, big in (("lower", lo, u), ("upper", u, hi)):
        hit = _first_excess(small, big, exact)
        if hit is not None:
            i, j = hit
            witness = {**_method_record(method), "network": labels_and_grid(net), "side": side,
                       "pair": [net.labels[i], net.labels[j]],
                       "nonreciprocal": float(lo[i, j]), "value": float(u[i, j]),
                       "reciprocal": float(hi[i, j])}
            return AuditReport("sandwich", VIOLATED, 1, witness)
    return AuditReport("sandwich", HOLDS, 1)


# ------------------------------------------------------------------- driver

def perturbed_partner(rng: np.random.Generator, net: Network, cap: int,
                      weights: Sequence[float] = DEFAULT_WEIGHTS) -> Network:
    """Random nearby network: resample nodes, then rewrite a few entries."""
    n = net.n
    m = int(np.clip(n + rng.integers(-1, 2), 1, cap))
    if m <= n:
        pick = rng.permutation(n)[:m]
    else:
        pick = np.concatenate([rng.permutation(n), rng.integers(0, n, m - n)])
    grid = net.dissim[np.ix_(pick, pick)].copy()
    clash = pick[:, None] == pick[None, :]
    w = np.asarray(weights, dtype=float)
    grid[clash] = rng.choice(w, size=int(clash.sum()))
    flips = rng.random((m, m)) < 0.25
    grid[flips] = rng.choice(w, size=int(flips.sum()))
    np.fill_diagonal(grid, 0.0)
    return Network(tuple(f"y{j + 1}" for j in range(m)), grid)


def audit(prop: str, method: MethodSpec, net: Optional[Network] = None, *, seed: int = 0,
          probes: int = 20, alphas: Sequence[float] = DEFAULT_ALPHAS,
          other: Optional[Network] = None, phi=None, cap: int = 5) -> AuditReport:
    """Run one property audit; random probes are drawn from ``seed``."""
    if prop not in PROPERTIES:
        raise UnknownProperty(f"unknown property {prop!r}; choose from {', '.join(PROPERTIES)}")
    rng = np.random.default_rng(seed)
    if prop == "value":
        return check_value_axiom(method)
    if net is None:
        raise UsageError(f"property {prop!r} needs an input network")
    if prop == "excisive":
        return check_excisiveness(method, net)
    if prop == "scale":
        return check_scale_preservation(method, net, alphas)
    if prop == "idempotent":
        return check_idempotency(method, net)
    if prop == "sandwich":
        return check_sandwich(method, net)
    if prop == "transform":
        if other is not None:
            if phi is None:
                raise UsageError("a target network needs an explicit node map")
            return check_transformation_axiom(method, net, other, phi)
        reports = []
        for _ in range(probes):
            ny, idx = random_contraction(rng, net)
            reports.append(check_transformation_axiom(method, net, ny, idx))
        return merge_reports("transform", reports)
    # stability
    if method.kind != "representable":
        raise UsageError("stability is certified only for representable methods")
    from netclust.metric import check_stability

    if other is not None:
        partners = [other]
    else:
        partners = [perturbed_partner(rng, net, cap) for _ in range(probes)]
    return merge_reports("stability", [check_stability(method.family, net, ny, cap) for ny in partners])


def replay(report: AuditReport) -> AuditReport:
    """Re-run the single probe recorded in a violated report's witness."""
    if report.holds:
        return report
    w = report.witness
    net = network_from_record(w["network"] if "network" in w else w["network_x"])
    prop = report.property
    if prop == "stability":
        from netclust.metric import check_stability
        from netclust.representable import validate_family

        return check_stability(validate_family(w["family"]), net, network_from_record(w["network_y"]))
    method = _method_from_record(w)
    if prop == "excisive":
        return check_excisiveness(method, net)
    if prop == "scale":
        return check_scale_preservation(method, net, [w["alpha"]])
    if prop == "idempotent":
        return check_idempotency(method, net)
    if prop == "value":
        return check_value_axiom(method, [(w["alpha"], w["beta"])])
    if prop == "transform":
        ny = network_from_record(w["target"])
        return check_transformation_axiom(method, net, ny, [ny.index(lab) for lab in w["map"]])
    return check_sandwich(method, net)

