"""Graph exports: Graphviz dot and a plain TikZ picture.

Z-spiders render as white circles, H-boxes as squares carrying their
label, X-spiders as grey circles, NOTs as grey circles marked with a
negation sign and stars as floating star-shaped nodes. Output is
deterministic for a fixed document.
"""

from __future__ import annotations

from typing import Dict

from . import diagram as dg
from . import ring as rg
from .diagram import Diagram


class RenderError(Exception):
    pass


def _node_names(d: Diagram) -> Dict:
    names = {}
    for vid, _ in d.vertices:
        names[("v", vid)] = f"v{vid}"
    for i, s in enumerate(d.inputs):
        names[("b", s)] = f"in{i}"
    for i, s in enumerate(d.outputs):
        names[("b", s)] = f"out{i}"
    return names


def to_dot(d: Diagram) -> str:
    names = _node_names(d)
    lines = ["graph zh {", "  rankdir=BT;"]
    for vid, kind in sorted(d.vertices):
        name = names[("v", vid)]
        if kind.kind == dg.Z:
            style = 'shape=circle, style=filled, fillcolor=white, label=""'
        elif kind.kind == dg.HBOX:
            style = (
                f'shape=box, style=filled, fillcolor=white, '
                f'label="{rg.render(kind.label)}"'
            )
        elif kind.kind == dg.X:
            style = 'shape=circle, style=filled, fillcolor=gray, label=""'
        elif kind.kind == dg.XNOT:
            style = 'shape=circle, style=filled, fillcolor=gray, label="¬"'
        else:
            style = 'shape=star, label=""'
        lines.append(f"  {name} [{style}];")
    for i in range(d.n_inputs):
        lines.append(f"  in{i} [shape=point, label=\"\"];")
    for i in range(d.n_outputs):
        lines.append(f"  out{i} [shape=point, label=\"\"];")
    for a, b in sorted(d.wires, key=lambda w: (names[w[0]], names[w[1]])):
        lines.append(f"  {names[a]} -- {names[b]};")
    for i in range(d.loops):
        lines.append(f"  loop{i} [shape=plaintext, label=\"O\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_tikz(d: Diagram) -> str:
    names = _node_names(d)
    lines = ["\\begin{tikzpicture}"]
    # simple deterministic grid: boundaries on the outer rows
    for i in range(d.n_inputs):
        lines.append(f"  \\node ({names[('b', d.inputs[i])]}) at ({i}, -1) {{}};")
    for i, (vid, kind) in enumerate(sorted(d.vertices)):
        name = names[("v", vid)]
        if kind.kind == dg.Z:
            style, label = "circle, draw", ""
        elif kind.kind == dg.HBOX:
            style, label = "rectangle, draw", rg.render(kind.label)
        elif kind.kind == dg.X:
            style, label = "circle, draw, fill=gray", ""
        elif kind.kind == dg.XNOT:
            style, label = "circle, draw, fill=gray", "$\\neg$"
        else:
            style, label = "star, draw", ""
        lines.append(f"  \\node[{style}] ({name}) at ({i}, 0) {{{label}}};")
    for i in range(d.n_outputs):
        lines.append(f"  \\node ({names[('b', d.outputs[i])]}) at ({i}, 1) {{}};")
    for a, b in sorted(d.wires, key=lambda w: (names[w[0]], names[w[1]])):
        if a == b:
            lines.append(
                f"  \\draw ({names[a]}) to[out=60, in=120, looseness=8] ({names[b]});"
            )
        else:
            lines.append(f"  \\draw ({names[a]}) -- ({names[b]});")
    lines.append("\\end{tikzpicture}")
    return "\n".join(lines) + "\n"


def render(d: Diagram, fmt: str) -> str:
    if fmt == "dot":
        return to_dot(d)
    if fmt == "tikz":
        return to_tikz(d)
    raise RenderError(f"unknown format {fmt!r} (try dot or tikz)")
