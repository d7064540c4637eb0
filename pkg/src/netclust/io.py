"""Readers and writers for networks, dendrograms and representer families.

Formats
-------
matrix CSV
    Header row of labels (an optional leading corner cell is ignored), then
    one row per node: its label followed by ``n`` numbers.  Cell ``(i, j)`` is
    the dissimilarity from node ``i`` to node ``j``.
edge list
    ``src,dst,weight`` lines.  Every ordered pair of distinct nodes must be
    listed exactly once; there is no default fill.
dendrogram JSON
    ``{"labels": [...], "merges": [{"resolution": r, "partition": [[...], ...]}, ...]}``
Newick
    Merge tree with branch lengths equal to merge-height differences.
representer family
    ``representer <name> <k>`` header followed by ``edge <src> <dst> <weight>``
    lines with 0-based node indices; weights may be written ``p/q``.
    Members are separated by blank lines; ``#`` starts a comment.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import TextIO

import numpy as np

from netclust.errors import NetClustError, ParseError
from netclust.network import Dendrogram, MergeEvent, Network, Partition, Ultrametric
from netclust.representable import Representer, RepresenterFamily


def format_number(x: float) -> str:
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _parse_float(text: str, where: str) -> float:
    try:
        return float(text.strip())
    except ValueError:
        raise ParseError(f"{where}: not a number: {text!r}") from None


# ---------------------------------------------------------------- matrix csv

def read_matrix_rows(handle: TextIO, blank_diagonal: bool = False):
    """Parse a labelled square table into ``(labels, grid)``.

    With ``blank_diagonal`` the diagonal cells may hold anything (they are
    returned as NaN); otherwise every cell must be numeric.
    """
    rows = [r for r in csv.reader(handle) if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty matrix file")
    header = [c.strip() for c in rows[0]]
    body = rows[1:]
    n = len(body)
    if len(header) == n + 1:
        header = header[1:]
    if len(header) != n:
        raise ParseError(f"header has {len(header)} labels but there are {n} data rows")
    grid = np.zeros((n, n))
    for i, row in enumerate(body):
        if len(row) != n + 1:
            raise ParseError(f"row {i + 2}: expected a label and {n} values, got {len(row)} cells")
        if row[0].strip() != header[i]:
            raise ParseError(
                f"row {i + 2}: label {row[0].strip()!r} does not match column {header[i]!r}"
            )
        for j, cell in enumerate(row[1:]):
            if blank_diagonal and i == j:
                grid[i, j] = np.nan
            else:
                grid[i, j] = _parse_float(cell, f"row {i + 2}, column {j + 2}")
    return header, grid


def read_network_csv(path) -> Network:
    with open(path, newline="", encoding="utf-8") as fh:
        labels, grid = read_matrix_rows(fh)
    return Network(tuple(labels), grid)


def network_to_csv(net: Network) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + list(net.labels))
    for lab, row in zip(net.labels, net.dissim):
        w.writerow([lab] + [format_number(v) for v in row])
    return buf.getvalue()


def write_network_csv(net: Network, path) -> None:
    Path(path).write_text(network_to_csv(net), encoding="utf-8")


# ----------------------------------------------------------------- edge list

def read_edge_list(path) -> Network:
    labels: list[str] = []
    pos: dict[str, int] = {}
    weights: dict[tuple[int, int], float] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not any(c.strip() for c in row) or row[0].lstrip().startswith("#"):
                continue
            if len(row) != 3:
                raise ParseError(f"line {lineno}: expected src,dst,weight")
            src, dst, wtxt = (c.strip() for c in row)
            if lineno == 1 and (src, dst, wtxt) == ("src", "dst", "weight"):
                continue
            if src == dst:
                raise ParseError(f"line {lineno}: self pair {src!r} is not allowed")
            for lab in (src, dst):
                if lab not in pos:
                    pos[lab] = len(labels)
                    labels.append(lab)
            key = (pos[src], pos[dst])
            if key in weights:
                raise ParseError(f"line {lineno}: pair ({src}, {dst}) listed twice")
            weights[key] = _parse_float(wtxt, f"line {lineno}")
    n = len(labels)
    if n == 0:
        raise ParseError("empty edge list")
    grid = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if (i, j) not in weights:
                raise ParseError(f"missing pair ({labels[i]}, {labels[j]})")
            grid[i, j] = weights[(i, j)]
    return Network(tuple(labels), grid)


def network_to_edge_list(net: Network) -> str:
    lines = []
    for i, a in enumerate(net.labels):
        for j, b in enumerate(net.labels):
            if i != j:
                lines.append(f"{a},{b},{format_number(net.dissim[i, j])}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------- dendrogram json

def dendrogram_to_dict(dendro: Dendrogram) -> dict:
    return {
        "labels": list(dendro.labels),
        "merges": [
            {"resolution": ev.resolution, "partition": [list(b) for b in ev.partition.blocks]}
            for ev in dendro.merges
        ],
    }


def dendrogram_from_dict(data: dict) -> Dendrogram:
    try:
        labels = tuple(data["labels"])
        merges = tuple(
            MergeEvent(float(m["resolution"]), Partition.canonical(m["partition"], labels))
            for m in data["merges"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed dendrogram JSON: {exc}") from None
    return Dendrogram(labels, merges)


def dendrogram_to_json(dendro: Dendrogram, indent: int | None = 2) -> str:
    return json.dumps(dendrogram_to_dict(dendro), indent=indent)


def dendrogram_from_json(text: str) -> Dendrogram:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return dendrogram_from_dict(data)


# -------------------------------------------------------------------- newick

_NEWICK_SPECIAL = set(" \t\n()[]':;,")


def _newick_label(label: str) -> str:
    if any(c in _NEWICK_SPECIAL for c in label):
        return "'" + label.replace("'", "''") + "'"
    return label


def to_newick(dendro: Dendrogram, digits: int | None = None) -> str:
    """Newick string of the merge tree; ties give multifurcating nodes.

    Branch lengths are written in full precision unless ``digits`` asks for
    that many significant digits.
    """
    def length(x: float) -> str:
        return format_number(x) if digits is None else f"{x:.{digits}g}"

    current = {(lab,): (_newick_label(lab), 0.0) for lab in dendro.labels}
    for ev in dendro.merges:
        for block in ev.partition.blocks:
            if block in current:
                continue
            members = set(block)
            children = [key for key in current if members.issuperset(key)]
            parts = [f"{current[c][0]}:{length(ev.resolution - current[c][1])}"
                     for c in children]
            for c in children:
                del current[c]
            current[block] = ("(" + ",".join(parts) + ")", ev.resolution)
    (root,) = current.values()
    return root[0] + ";"


# ------------------------------------------------------------------- families

def _parse_weight(text: str, where: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{where}: bad weight {text!r}") from None


def parse_family(text: str) -> RepresenterFamily:
    members = []
    current = None

    def close():
        nonlocal current
        if current is not None:
            name, k, edges, lineno = current
            try:
                members.append(Representer(k, tuple(edges), name))
            except NetClustError as exc:
                raise type(exc)(f"representer {name!r} (line {lineno}): {exc}") from None
            current = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            close()
            continue
        parts = line.split()
        if parts[0] == "representer":
            close()
            if len(parts) != 3:
                raise ParseError(f"line {lineno}: expected 'representer <name> <k>'")
            try:
                k = int(parts[2])
            except ValueError:
                raise ParseError(f"line {lineno}: bad node count {parts[2]!r}") from None
            current = (parts[1], k, [], lineno)
        elif parts[0] == "edge":
            if current is None:
                raise ParseError(f"line {lineno}: edge outside a representer block")
            if len(parts) != 4:
                raise ParseError(f"line {lineno}: expected 'edge <src> <dst> <weight>'")
            try:
                s, d = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"line {lineno}: node indices must be integers") from None
            current[2].append((s, d, _parse_weight(parts[3], f"line {lineno}")))
        else:
            raise ParseError(f"line {lineno}: unknown directive {parts[0]!r}")
    close()
    return RepresenterFamily(tuple(members))


def read_family(path) -> RepresenterFamily:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read representer file {path}: {exc.strerror}") from None
    return parse_family(text)


def family_to_text(family: RepresenterFamily) -> str:
    blocks = []
    for i, m in enumerate(family.members):
        lines = [f"representer {m.name or f'r{i}'} {m.k}"]
        lines += [f"edge {s} {d} {format_number(w)}" for s, d, w in m.edges]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def ultrametric_to_csv(u: Ultrametric) -> str:
    return network_to_csv(u)


def labels_and_grid(net: Network) -> dict:
    return {"labels": list(net.labels), "dissim": net.dissim.tolist()}


def network_from_record(record: dict) -> Network:
    return Network(tuple(record["labels"]), record["dissim"])

