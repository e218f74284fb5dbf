"""Line-oriented text documents for diagrams.

A document declares its ring and lists vertices, wires and the ordered
boundaries::

    ring dyadic
    vertex 0 z
    vertex 1 h -1
    wire v0 in0
    wire v0 v1
    wire v1 out0
    inputs in0
    outputs out0

Vertex kinds are z, h (with a label in the declared ring), x, not and
star. Wire endpoints are ``v<id>``, ``in<k>`` or ``out<k>``; '#' starts a
comment. Serialization is canonical (vertices renumbered in order, wires
sorted), so serialize(parse(text)) is a fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from . import diagram as dg
from . import ring as rg
from .diagram import Diagram, VertexKind
from .ring import RingDescriptor


class DocumentError(Exception):
    pass


@dataclass(frozen=True)
class DiagramDocument:
    ring: RingDescriptor
    diagram: Diagram


_KIND_NAMES = {
    dg.Z: "z",
    dg.HBOX: "h",
    dg.X: "x",
    dg.XNOT: "not",
    dg.STAR: "star",
}
_NAME_KINDS = {v: k for k, v in _KIND_NAMES.items()}


def serialize(doc: DiagramDocument) -> str:
    """Canonical text form of a document."""
    d = doc.diagram
    vid_order = sorted(vid for vid, _ in d.vertices)
    vnum = {vid: i for i, vid in enumerate(vid_order)}
    slot_name: Dict[int, str] = {}
    for i, s in enumerate(d.inputs):
        slot_name[s] = f"in{i}"
    for i, s in enumerate(d.outputs):
        slot_name[s] = f"out{i}"

    def end_name(e) -> str:
        if e[0] == "v":
            return f"v{vnum[e[1]]}"
        return slot_name[e[1]]

    lines = [f"ring {doc.ring}"]
    kinds = d.vertex_map()
    for vid in vid_order:
        kind = kinds[vid]
        if kind.kind == dg.HBOX:
            lines.append(f"vertex {vnum[vid]} h {rg.render(kind.label)}")
        else:
            lines.append(f"vertex {vnum[vid]} {_KIND_NAMES[kind.kind]}")
    for a, b in sorted(d.wires, key=lambda w: (end_name(w[0]), end_name(w[1]))):
        na, nb = sorted((end_name(a), end_name(b)))
        lines.append(f"wire {na} {nb}")
    lines.append("inputs " + " ".join(f"in{i}" for i in range(d.n_inputs)))
    lines.append("outputs " + " ".join(f"out{i}" for i in range(d.n_outputs)))
    if d.loops:
        lines.append(f"loops {d.loops}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def parse(text: str, override_ring: RingDescriptor = None) -> DiagramDocument:
    """Parse a document; all references must resolve and labels must parse
    in the declared ring. ``override_ring`` reinterprets the document's
    labels in a different ring, ignoring its ring line."""
    ring = override_ring if override_ring is not None else rg.DYADIC_RING
    vertices: Dict[int, VertexKind] = {}
    wires: List[Tuple[str, str]] = []
    inputs: List[str] = []
    outputs: List[str] = []
    loops = 0
    saw_ring = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        try:
            if head == "ring":
                if saw_ring:
                    raise DocumentError("duplicate ring line")
                if override_ring is None:
                    ring = rg.parse_ring(" ".join(parts[1:]))
                saw_ring = True
            elif head == "vertex":
                vid = int(parts[1])
                if vid in vertices:
                    raise DocumentError(f"duplicate vertex {vid}")
                kname = parts[2]
                if kname not in _NAME_KINDS:
                    raise DocumentError(f"unknown vertex kind {kname!r}")
                if kname == "h":
                    label = rg.parse(" ".join(parts[3:]), ring)
                    vertices[vid] = dg.hbox(label)
                else:
                    if len(parts) != 3:
                        raise DocumentError(f"kind {kname} takes no label")
                    vertices[vid] = VertexKind(_NAME_KINDS[kname])
            elif head == "wire":
                if len(parts) != 3:
                    raise DocumentError("wire takes two endpoints")
                wires.append((parts[1], parts[2]))
            elif head == "inputs":
                inputs = parts[1:]
            elif head == "outputs":
                outputs = parts[1:]
            elif head == "loops":
                loops = int(parts[1])
            else:
                raise DocumentError(f"unknown directive {head!r}")
        except (IndexError, ValueError) as err:
            raise DocumentError(f"line {lineno}: cannot parse {line!r}") from err
        except rg.RingError as err:
            raise DocumentError(f"line {lineno}: {err}") from err
        except DocumentError as err:
            raise DocumentError(f"line {lineno}: {err}") from err

    # assemble, giving boundary slots ids above the vertex ids
    base = max(vertices, default=-1) + 1
    slot_ids: Dict[str, int] = {}
    for i, name in enumerate(inputs):
        slot_ids[name] = base + i
    for i, name in enumerate(outputs):
        slot_ids[name] = base + len(inputs) + i

    def resolve(name: str):
        if name.startswith("v"):
            try:
                vid = int(name[1:])
            except ValueError:
                raise DocumentError(f"bad endpoint {name!r}")
            if vid not in vertices:
                raise DocumentError(f"wire references unknown vertex {name!r}")
            return ("v", vid)
        if name not in slot_ids:
            raise DocumentError(f"wire references undeclared slot {name!r}")
        return ("b", slot_ids[name])

    wire_pairs = []
    for na, nb in wires:
        ea, eb = resolve(na), resolve(nb)
        wire_pairs.append((ea, eb) if ea <= eb else (eb, ea))

    d = Diagram(
        tuple(sorted(vertices.items())),
        tuple(sorted(wire_pairs)),
        tuple(slot_ids[n] for n in inputs),
        tuple(slot_ids[n] for n in outputs),
        loops,
    )
    try:
        d.validate()
    except dg.DiagramError as err:
        raise DocumentError(str(err)) from err
    return DiagramDocument(ring, d)
