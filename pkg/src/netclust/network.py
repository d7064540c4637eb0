"""Networks, ultrametrics, dendrograms and the conversions between them.

A :class:`Network` is a finite labelled node set together with a square grid
of directed dissimilarities: zero on the diagonal, strictly positive and
finite elsewhere, not necessarily symmetric.  An :class:`Ultrametric` is a
symmetric network that also satisfies the strong triangle inequality
``u[i, j] <= max(u[i, k], u[k, j])``.  Dendrograms and ultrametrics carry the
same information; :func:`dendrogram_from_ultrametric` and
:func:`ultrametric_from_dendrogram` round-trip exactly.

All objects are immutable: the backing arrays are marked read-only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from netclust.errors import (
    DuplicateLabel,
    EmptySubset,
    InvalidDendrogram,
    InvalidPartition,
    NonFinite,
    NonPositiveOffDiagonal,
    NonPositiveScale,
    NonZeroDiagonal,
    NotSymmetric,
    NotUltrametric,
    ShapeMismatch,
    SingletonNetwork,
    UnknownLabel,
)


def _frozen_grid(grid) -> np.ndarray:
    try:
        arr = np.array(grid, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ShapeMismatch(f"dissimilarity grid is not a numeric matrix: {exc}") from None
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Network:
    """Directed dissimilarity network ``(X, A_X)``."""

    labels: tuple[str, ...]
    dissim: np.ndarray

    def __post_init__(self):
        labels = tuple(str(lab) for lab in self.labels)
        object.__setattr__(self, "labels", labels)
        arr = _frozen_grid(self.dissim)
        object.__setattr__(self, "dissim", arr)
        n = len(labels)
        if n < 1:
            raise ShapeMismatch("a network needs at least one node")
        if arr.shape != (n, n):
            raise ShapeMismatch(f"grid shape {arr.shape} does not match {n} labels")
        if len(set(labels)) != n:
            dup = sorted({lab for lab in labels if labels.count(lab) > 1})
            raise DuplicateLabel(f"duplicate labels: {dup}")
        if not np.all(np.isfinite(arr)):
            raise NonFinite("dissimilarities must be finite")
        diag = np.diagonal(arr)
        if np.any(diag != 0):
            i = int(np.flatnonzero(diag != 0)[0])
            raise NonZeroDiagonal(f"A({labels[i]},{labels[i]}) = {diag[i]!r}, expected 0")
        off = ~np.eye(n, dtype=bool)
        bad = off & ~(arr > 0)
        if np.any(bad):
            i, j = (int(v) for v in np.argwhere(bad)[0])
            raise NonPositiveOffDiagonal(
                f"A({labels[i]},{labels[j]}) = {arr[i, j]!r}, expected > 0"
            )

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"unknown label {label!r}") from None

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.dissim, self.dissim.T))

    def off_diagonal(self) -> np.ndarray:
        return self.dissim[~np.eye(self.n, dtype=bool)]

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.dissim, other.dissim)

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(labels={list(self.labels)}, dissim={self.dissim.tolist()})"


def _strong_triangle_violation(u: np.ndarray, rtol: float):
    """First (i, j, k) with u[i, j] > max(u[i, k], u[k, j]), or None."""
    for k in range(u.shape[0]):
        bound = np.maximum(u[:, k, None], u[None, k, :])
        if rtol:
            bad = u > bound * (1.0 + rtol)
        else:
            bad = u > bound
        if np.any(bad):
            i, j = (int(v) for v in np.argwhere(bad)[0])
            return i, j, k
    return None


@dataclass(frozen=True, eq=False, repr=False)
class Ultrametric(Network):
    """Symmetric network satisfying the strong triangle inequality.

    ``rtol`` relaxes the triangle check for grids that went through a
    division upstream; it is 0 (exact) by default.
    """

    rtol: float = field(default=0.0, repr=False)

    def __post_init__(self):
        super().__post_init__()
        u = self.dissim
        if not np.array_equal(u, u.T):
            if not self.rtol or not np.allclose(u, u.T, rtol=self.rtol, atol=0.0):
                raise NotSymmetric("ultrametric must be symmetric")
        hit = _strong_triangle_violation(u, self.rtol)
        if hit is not None:
            i, j, k = hit
            lab = self.labels
            raise NotUltrametric(
                f"u({lab[i]},{lab[j]}) = {u[i, j]!r} > max(u({lab[i]},{lab[k]}), "
                f"u({lab[k]},{lab[j]})) = {max(u[i, k], u[k, j])!r}"
            )

    @property
    def dist(self) -> np.ndarray:
        return self.dissim


def validate_network(labels: Sequence[str], grid) -> Network:
    """Build a :class:`Network`, raising a typed error on any violation."""
    return Network(tuple(labels), grid)


def scale_network(net: Network, alpha: float) -> Network:
    if not (alpha > 0) or not np.isfinite(alpha):
        raise NonPositiveScale(f"scale factor must be positive and finite, got {alpha!r}")
    return Network(net.labels, alpha * net.dissim)


def scale_ultrametric(u: Ultrametric, alpha: float) -> Ultrametric:
    if not (alpha > 0) or not np.isfinite(alpha):
        raise NonPositiveScale(f"scale factor must be positive and finite, got {alpha!r}")
    return Ultrametric(u.labels, alpha * u.dissim, rtol=u.rtol)


def restrict(net: Network, subset: Iterable[str]):
    """Induced subnetwork on ``subset``, keeping the parent's label order.

    Restricting an :class:`Ultrametric` yields an :class:`Ultrametric`.
    """
    wanted = set(subset)
    if not wanted:
        raise EmptySubset("cannot restrict to an empty label set")
    unknown = wanted.difference(net.labels)
    if unknown:
        raise UnknownLabel(f"unknown labels: {sorted(unknown)}")
    idx = [i for i, lab in enumerate(net.labels) if lab in wanted]
    labels = tuple(net.labels[i] for i in idx)
    sub = net.dissim[np.ix_(idx, idx)]
    if isinstance(net, Ultrametric):
        return Ultrametric(labels, sub, rtol=net.rtol)
    return Network(labels, sub)


def separation(net: Network) -> float:
    """Smallest off-diagonal dissimilarity."""
    if net.n < 2:
        raise SingletonNetwork("separation is undefined for a single-node network")
    return float(net.off_diagonal().min())


@dataclass(frozen=True)
class Partition:
    """Disjoint non-empty blocks of labels."""

    blocks: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen: set[str] = set()
        for b in blocks:
            if not b:
                raise InvalidPartition("empty block")
            for lab in b:
                if lab in seen:
                    raise InvalidPartition(f"label {lab!r} appears in two blocks")
                seen.add(lab)

    @classmethod
    def canonical(cls, blocks: Iterable[Iterable[str]], labels: Sequence[str]) -> Partition:
        """Blocks ordered internally and among themselves by ``labels`` order."""
        pos = {lab: i for i, lab in enumerate(labels)}
        try:
            ordered = [sorted(b, key=pos.__getitem__) for b in blocks]
        except KeyError as exc:
            raise InvalidPartition(f"unknown label {exc.args[0]!r}") from None
        ordered.sort(key=lambda b: pos[b[0]] if b else -1)
        return cls(tuple(tuple(b) for b in ordered))

    def covers(self, labels: Iterable[str]) -> bool:
        return {lab for b in self.blocks for lab in b} == set(labels)

    def block_of(self, label: str) -> tuple[str, ...]:
        for b in self.blocks:
            if label in b:
                return b
        raise UnknownLabel(f"unknown label {label!r}")

    def refines(self, other: Partition) -> bool:
        """True when every block here sits inside a block of ``other``."""
        owner = {lab: i for i, b in enumerate(other.blocks) for lab in b}
        return all(len({owner.get(lab) for lab in b}) == 1 and owner.get(b[0]) is not None
                   for b in self.blocks)

    def __len__(self):
        return len(self.blocks)


@dataclass(frozen=True)
class MergeEvent:
    resolution: float
    partition: Partition


@dataclass(frozen=True)
class Dendrogram:
    """Nested partitions indexed by increasing resolution.

    Resolution 0 is implicitly the all-singletons partition; the last event
    holds the single block of all labels.  A one-node dendrogram has no events.
    """

    labels: tuple[str, ...]
    merges: tuple[MergeEvent, ...]

    def __post_init__(self):
        labels = tuple(str(lab) for lab in self.labels)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "merges", tuple(self.merges))
        if not labels:
            raise InvalidDendrogram("a dendrogram needs at least one label")
        if len(set(labels)) != len(labels):
            raise DuplicateLabel("duplicate labels in dendrogram")
        prev = Partition(tuple((lab,) for lab in labels))
        last_res = 0.0
        for ev in self.merges:
            r = ev.resolution
            if not np.isfinite(r) or r <= last_res:
                raise InvalidDendrogram(
                    f"resolutions must be finite and strictly increasing from 0, got {r!r}"
                )
            if not ev.partition.covers(labels):
                raise InvalidDendrogram(f"partition at {r!r} does not cover all labels")
            if not prev.refines(ev.partition) or len(ev.partition) >= len(prev):
                raise InvalidDendrogram(f"partition at {r!r} does not strictly coarsen")
            prev, last_res = ev.partition, r
        if len(prev) != 1:
            raise InvalidDendrogram("the final partition must be a single block")

    def partition_at(self, delta: float) -> Partition:
        current = Partition.canonical([[lab] for lab in self.labels], self.labels)
        for ev in self.merges:
            if ev.resolution > delta:
                break
            current = ev.partition
        return current


def partition_at(u: Ultrametric, delta: float) -> Partition:
    """Equivalence classes of ``u <= delta``."""
    if delta < 0:
        raise ValueError("resolution must be non-negative")
    n = u.n
    assigned = np.full(n, -1)
    blocks = []
    for i in range(n):
        if assigned[i] >= 0:
            continue
        members = np.flatnonzero((u.dissim[i] <= delta) & (assigned < 0))
        assigned[members] = len(blocks)
        blocks.append([u.labels[j] for j in members])
    return Partition.canonical(blocks, u.labels)


def dendrogram_from_ultrametric(u: Ultrametric) -> Dendrogram:
    levels = np.unique(u.off_diagonal())
    merges = tuple(MergeEvent(float(d), partition_at(u, float(d))) for d in levels)
    return Dendrogram(u.labels, merges)


def ultrametric_from_dendrogram(dendro: Dendrogram) -> Ultrametric:
    n = len(dendro.labels)
    pos = {lab: i for i, lab in enumerate(dendro.labels)}
    dist = np.full((n, n), np.nan)
    np.fill_diagonal(dist, 0.0)
    for ev in dendro.merges:
        for block in ev.partition.blocks:
            idx = [pos[lab] for lab in block]
            sub = np.ix_(idx, idx)
            cell = dist[sub]
            cell[np.isnan(cell)] = ev.resolution
            dist[sub] = cell
    return Ultrametric(dendro.labels, dist)
