"""Serializers that write a :class:`~bibnet.model.NetworkMatrix` as an undirected weighted graph.

Self-loops carry the diagonal of ``B``, which the mass identity needs, so every
writer keeps them unless told otherwise. Turning them off raises a
:class:`DiscardedMassWarning` that reports how much mass was dropped.

Output is byte-deterministic for a given matrix and always uses ``\\n`` newlines.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from collections.abc import Iterator, Sequence
from xml.sax.saxutils import quoteattr

import numpy as np

from bibnet.model import EntityId, NetworkMatrix


class DiscardedMassWarning(UserWarning):
    pass


def format_weight(w: float) -> str:
    """Nine significant digits, trailing zeros kept (``0.25 -> '0.250000000'``).

    From 10 upwards digits are added so that at least eight decimals survive,
    which keeps every printed weight within 1e-8 of the stored one.
    """
    digits = 9
    if math.isfinite(w) and abs(w) >= 10:
        digits = math.floor(math.log10(abs(w))) + 9
    return format(w, f"#.{digits}g")


def _labels(entities: Sequence[EntityId]) -> list[str]:
    ids = [e.id for e in entities]
    if len(set(ids)) == len(ids):
        return ids
    # same id at two levels: qualify every label so they stay distinct
    return [f"{e.level.value}:{e.id}" for e in entities]


def _edges(B: NetworkMatrix, include_self_loops: bool) -> Iterator[tuple[int, int, float]]:
    if not include_self_loops:
        dropped = float(np.sum(B.diagonal()))
        warnings.warn(
            f"self-loops omitted; discarded diagonal mass {format_weight(dropped)}",
            DiscardedMassWarning,
            stacklevel=3,
        )
    for i, j, w in B.upper_entries():
        if i == j and not include_self_loops:
            continue
        yield i, j, w


def export_edgelist(B: NetworkMatrix, include_self_loops: bool = True) -> bytes:
    labels = _labels(B.entities)
    rows = sorted(
        (labels[i], labels[j], w) for i, j, w in _edges(B, include_self_loops)
    )
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("source", "target", "weight"))
    writer.writerows((src, dst, format_weight(w)) for src, dst, w in rows)
    return out.getvalue().encode("utf-8")


def export_pajek(B: NetworkMatrix, include_self_loops: bool = True) -> bytes:
    """Pajek ``.net``: 1-based vertices, then strict-upper edges, then loops.

    Weights use ``%.9g`` here (``1 2 1`` rather than ``1 2 1.00000000``), the
    usual look of Pajek files. Pajek has no quote escaping, so a double quote
    inside an id is written as a single quote.
    """
    labels = _labels(B.entities)
    lines = [f"*Vertices {B.size}"]
    lines += [
        f'{k} "{label.replace(chr(34), chr(39))}"' for k, label in enumerate(labels, start=1)
    ]
    lines.append("*Edges")
    loops = []
    for i, j, w in _edges(B, include_self_loops):
        line = f"{i + 1} {j + 1} {w:.9g}"
        if i == j:
            loops.append(line)
        else:
            lines.append(line)
    lines += loops
    return ("\n".join(lines) + "\n").encode("utf-8")


def export_graphml(B: NetworkMatrix, include_self_loops: bool = True) -> bytes:
    labels = _labels(B.entities)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns"'
        ' xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance"'
        ' xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns'
        ' http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="double"/>',
        '  <graph id="G" edgedefault="undirected">',
    ]
    out += [f"    <node id={quoteattr(label)}/>" for label in labels]
    for i, j, w in _edges(B, include_self_loops):
        out.append(
            f"    <edge source={quoteattr(labels[i])} target={quoteattr(labels[j])}>"
            f'<data key="weight">{format_weight(w)}</data></edge>'
        )
    out += ["  </graph>", "</graphml>"]
    return ("\n".join(out) + "\n").encode("utf-8")


WRITERS = {
    "edgelist": export_edgelist,
    "pajek": export_pajek,
    "graphml": export_graphml,
}
