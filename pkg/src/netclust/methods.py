"""Named hierarchical clustering methods, each a map Network -> Ultrametric.

Text syntax accepted by :func:`parse_method`::

    reciprocal
    nonreciprocal
    semi:<t>                 semi-reciprocal, chains of at most t nodes
    graft:<beta>             grafting nonreciprocal branches below beta
    representable:<file>     representer family file
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Optional

import numpy as np

from netclust.errors import InvalidHopBound, InvalidMethodSpec
from netclust.minimax import bounded_hop_minimax, directed_minimax, max_symmetrize, single_linkage
from netclust.network import Network, Ultrametric

if TYPE_CHECKING:
    from netclust.representable import RepresenterFamily

KINDS = ("reciprocal", "nonreciprocal", "semi_reciprocal", "grafting", "representable")


def reciprocal(net: Network) -> Ultrametric:
    return single_linkage(max_symmetrize(net))


def nonreciprocal(net: Network) -> Ultrametric:
    d = directed_minimax(net)
    return Ultrametric(net.labels, np.maximum(d, d.T))


def semi_reciprocal(net: Network, t: int) -> Ultrametric:
    c = bounded_hop_minimax(net, t)
    return single_linkage(Network(net.labels, np.maximum(c, c.T)))


def grafting(net: Network, beta: float) -> Ultrametric:
    """Reciprocal tree with every branch below ``beta`` replaced by its
    nonreciprocal counterpart.

    The result is re-validated as an ultrametric on construction.
    """
    if not (beta > 0):
        raise InvalidMethodSpec(f"grafting threshold must be positive, got {beta!r}")
    ur = reciprocal(net).dissim
    unr = nonreciprocal(net).dissim
    return Ultrametric(net.labels, np.where(ur <= beta, unr, ur))


@dataclass(frozen=True)
class MethodSpec:
    kind: str
    t: Optional[int] = None
    beta: Optional[float] = None
    family: Optional["RepresenterFamily"] = None
    source: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidMethodSpec(f"unknown method kind {self.kind!r}")
        if self.kind == "semi_reciprocal":
            if self.t is None or isinstance(self.t, bool) or int(self.t) != self.t or self.t < 2:
                raise InvalidHopBound(f"semi-reciprocal needs integer t >= 2, got {self.t!r}")
        if self.kind == "grafting":
            if self.beta is None or not (self.beta > 0) or not np.isfinite(self.beta):
                raise InvalidMethodSpec(f"grafting needs a positive finite beta, got {self.beta!r}")
        if self.kind == "representable" and self.family is None:
            raise InvalidMethodSpec("representable method needs a representer family")

    @property
    def division_free(self) -> bool:
        """True when outputs are exact min/max compositions of input values."""
        if self.kind == "representable":
            return self.family.unit_weights
        return True

    def __str__(self):
        if self.kind == "semi_reciprocal":
            return f"semi:{self.t}"
        if self.kind == "grafting":
            return f"graft:{self.beta:g}"
        if self.kind == "representable":
            return f"representable:{self.source or '<family>'}"
        return self.kind


RECIPROCAL = MethodSpec("reciprocal")
NONRECIPROCAL = MethodSpec("nonreciprocal")


def semi(t: int) -> MethodSpec:
    return MethodSpec("semi_reciprocal", t=t)


def graft(beta: float) -> MethodSpec:
    return MethodSpec("grafting", beta=float(beta))


def representable_method(family: "RepresenterFamily", source: str | None = None) -> MethodSpec:
    return MethodSpec("representable", family=family, source=source)


def parse_method(text: str) -> MethodSpec:
    text = text.strip()
    head, _, arg = text.partition(":")
    if head in ("reciprocal", "nonreciprocal") and not arg:
        return MethodSpec(head)
    if head == "semi" and arg:
        try:
            return semi(int(arg))
        except ValueError:
            raise InvalidMethodSpec(f"bad hop bound in {text!r}") from None
    if head == "graft" and arg:
        try:
            return graft(float(arg))
        except ValueError:
            raise InvalidMethodSpec(f"bad threshold in {text!r}") from None
    if head == "representable" and arg:
        from netclust.io import read_family

        return representable_method(read_family(Path(arg)), source=arg)
    raise InvalidMethodSpec(
        f"cannot parse method {text!r}; expected reciprocal, nonreciprocal, "
        "semi:<t>, graft:<beta> or representable:<family-file>"
    )


def run_method(spec: MethodSpec, net: Network) -> Ultrametric:
    if spec.kind == "reciprocal":
        return reciprocal(net)
    if spec.kind == "nonreciprocal":
        return nonreciprocal(net)
    if spec.kind == "semi_reciprocal":
        return semi_reciprocal(net, spec.t)
    if spec.kind == "grafting":
        return grafting(net, spec.beta)
    from netclust.representable import cluster_representable

    return cluster_representable(spec.family, net)
