"""ZH-diagrams as open undirected multigraphs.

A diagram has typed vertices (Z-spiders, labelled H-boxes, grey X-spiders,
grey NOT vertices and the scalar star), a multiset of wires, and ordered
input/output boundaries. Only the topology matters: vertices store no port
order, wires are unordered pairs, and self-loops and parallel wires are
allowed (the Hopf rule needs them). Composition splices wires; splicing may
close a wire into a loop, which is recorded in ``loops`` and contributes a
scalar factor of 2 to the interpretation.

Diagrams are immutable; all combinators return fresh values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .ring import RingElement

Z = "z"
HBOX = "h"
X = "x"
XNOT = "not"
STAR = "star"

_KINDS = (Z, HBOX, X, XNOT, STAR)


class DiagramError(Exception):
    pass


class ArityError(DiagramError):
    pass


class CompositionError(DiagramError):
    pass


@dataclass(frozen=True)
class VertexKind:
    """A vertex type tag; H-boxes additionally carry their ring label."""

    kind: str
    label: Optional[RingElement] = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise DiagramError(f"unknown vertex kind {self.kind!r}")
        if (self.kind == HBOX) != (self.label is not None):
            raise DiagramError("exactly the H-box kind carries a label")

    def __str__(self) -> str:
        if self.kind == HBOX:
            return f"h[{self.label}]"
        return self.kind


def zspider() -> VertexKind:
    return VertexKind(Z)


def hbox(label: RingElement) -> VertexKind:
    return VertexKind(HBOX, label)


def xspider() -> VertexKind:
    return VertexKind(X)


def xnot() -> VertexKind:
    return VertexKind(XNOT)


def star() -> VertexKind:
    return VertexKind(STAR)


# An endpoint is ("v", vertex_id) or ("b", boundary_slot_id).
Endpoint = Tuple[str, int]
Wire = Tuple[Endpoint, Endpoint]


def _wire(a: Endpoint, b: Endpoint) -> Wire:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Diagram:
    """An open multigraph with ordered boundaries.

    ``vertices`` maps vertex id to kind; ``wires`` is a sorted tuple of
    endpoint pairs (a multiset); ``inputs``/``outputs`` list boundary slot
    ids in order, each appearing in exactly one wire; ``loops`` counts
    closed loops with no endpoints.
    """

    vertices: Tuple[Tuple[int, VertexKind], ...]
    wires: Tuple[Wire, ...]
    inputs: Tuple[int, ...]
    outputs: Tuple[int, ...]
    loops: int = 0

    def vertex_map(self) -> Dict[int, VertexKind]:
        return dict(self.vertices)

    def degree(self, vid: int) -> int:
        d = 0
        for a, b in self.wires:
            if a == ("v", vid):
                d += 1
            if b == ("v", vid):
                d += 1
        return d

    def legs(self, vid: int) -> List[Tuple[int, int]]:
        """All wire ends attached to a vertex, as (wire index, end index)."""
        out = []
        for i, w in enumerate(self.wires):
            for j in (0, 1):
                if w[j] == ("v", vid):
                    out.append((i, j))
        return out

    def validate(self) -> None:
        vmap = self.vertex_map()
        seen: Dict[int, int] = {}
        for a, b in self.wires:
            for tag, ident in (a, b):
                if tag == "v":
                    if ident not in vmap:
                        raise DiagramError(f"wire references unknown vertex {ident}")
                else:
                    seen[ident] = seen.get(ident, 0) + 1
        boundary = list(self.inputs) + list(self.outputs)
        if len(set(boundary)) != len(boundary):
            raise DiagramError("boundary slot ids must be distinct")
        for bid in boundary:
            if seen.get(bid, 0) != 1:
                raise DiagramError(f"boundary slot {bid} must lie on exactly one wire")
        if set(seen) != set(boundary):
            raise DiagramError("wire references a slot missing from the boundary")
        for vid, kind in self.vertices:
            if kind.kind == STAR and self.degree(vid) != 0:
                raise ArityError("star vertices have no legs")

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    def __str__(self) -> str:
        parts = [str(k) for _, k in self.vertices]
        return (
            f"Diagram({self.n_inputs}->{self.n_outputs}, "
            f"[{', '.join(parts)}], {len(self.wires)} wires, {self.loops} loops)"
        )


class DiagramBuilder:
    """Mutable helper for assembling a diagram, used by constructors."""

    def __init__(self) -> None:
        self._vertices: List[Tuple[int, VertexKind]] = []
        self._wires: List[Wire] = []
        self._inputs: List[int] = []
        self._outputs: List[int] = []
        self._loops = 0
        self._next = 0

    def _fresh(self) -> int:
        self._next += 1
        return self._next - 1

    def vertex(self, kind: VertexKind) -> Endpoint:
        vid = self._fresh()
        self._vertices.append((vid, kind))
        return ("v", vid)

    def input(self) -> Endpoint:
        bid = self._fresh()
        self._inputs.append(bid)
        return ("b", bid)

    def output(self) -> Endpoint:
        bid = self._fresh()
        self._outputs.append(bid)
        return ("b", bid)

    def wire(self, a: Endpoint, b: Endpoint) -> None:
        self._wires.append(_wire(a, b))

    def not_edge(self, a: Endpoint, b: Endpoint) -> None:
        """Wire a to b through a grey NOT vertex."""
        v = self.vertex(VertexKind(XNOT))
        self.wire(a, v)
        self.wire(v, b)

    def h_edge(self, a: Endpoint, b: Endpoint, label: RingElement) -> None:
        """Wire a to b through a 2-legged H-box."""
        v = self.vertex(VertexKind(HBOX, label))
        self.wire(a, v)
        self.wire(v, b)

    def loop(self, n: int = 1) -> None:
        self._loops += n

    def build(self) -> Diagram:
        d = Diagram(
            tuple(self._vertices),
            tuple(sorted(self._wires)),
            tuple(self._inputs),
            tuple(self._outputs),
            self._loops,
        )
        d.validate()
        return d


def make_generator(kind: VertexKind, m: int, n: int) -> Diagram:
    """A single-vertex diagram with m input and n output legs."""
    if m < 0 or n < 0:
        raise ArityError("arities must be nonnegative")
    if kind.kind == STAR and (m != 0 or n != 0):
        raise ArityError("the star generator has zero inputs and outputs")
    b = DiagramBuilder()
    v = b.vertex(kind)
    for _ in range(m):
        b.wire(b.input(), v)
    for _ in range(n):
        b.wire(v, b.output())
    return b.build()


def empty() -> Diagram:
    return Diagram((), (), (), ())


def identity(n: int) -> Diagram:
    if n < 0:
        raise ArityError("arity must be nonnegative")
    b = DiagramBuilder()
    for _ in range(n):
        b.wire(b.input(), b.output())
    return b.build()


def cup() -> Diagram:
    """The 0 -> 2 bent wire; interprets to |00> + |11>."""
    b = DiagramBuilder()
    b.wire(b.output(), b.output())
    return b.build()


def cap() -> Diagram:
    """The 2 -> 0 bent wire; interprets to <00| + <11|."""
    b = DiagramBuilder()
    b.wire(b.input(), b.input())
    return b.build()


def swap() -> Diagram:
    b = DiagramBuilder()
    i0, i1 = b.input(), b.input()
    o0, o1 = b.output(), b.output()
    b.wire(i0, o1)
    b.wire(i1, o0)
    return b.build()


def scalar_two() -> Diagram:
    """A zero-legged Z-spider: the scalar 2."""
    return make_generator(zspider(), 0, 0)


def negate_gate(minus_one: RingElement) -> Diagram:
    """The white negate (Z gate): a Z-spider with a pendant 1-ary H-box."""
    b = DiagramBuilder()
    v = b.vertex(zspider())
    b.wire(b.input(), v)
    b.wire(v, b.output())
    b.wire(v, b.vertex(hbox(minus_one)))
    return b.build()


def _shift(d: Diagram, offset: int) -> Diagram:
    remap = lambda e: (e[0], e[1] + offset)  # noqa: E731
    return Diagram(
        tuple((vid + offset, k) for vid, k in d.vertices),
        tuple(_wire(remap(a), remap(b)) for a, b in d.wires),
        tuple(i + offset for i in d.inputs),
        tuple(o + offset for o in d.outputs),
        d.loops,
    )


def _max_id(d: Diagram) -> int:
    ids = [vid for vid, _ in d.vertices] + list(d.inputs) + list(d.outputs)
    return max(ids, default=-1)


def tensor(d1: Diagram, d2: Diagram) -> Diagram:
    """Disjoint union; d1's boundaries come first."""
    d2s = _shift(d2, _max_id(d1) + 1)
    return Diagram(
        d1.vertices + d2s.vertices,
        tuple(sorted(d1.wires + d2s.wires)),
        d1.inputs + d2s.inputs,
        d1.outputs + d2s.outputs,
        d1.loops + d2s.loops,
    )


def compose(d1: Diagram, d2: Diagram) -> Diagram:
    """Plug d1's outputs into d2's inputs, in order.

    Wire-to-wire fusions splice into single wires; splicing a cycle of
    boundary slots away yields a closed loop.
    """
    if d1.n_outputs != d2.n_inputs:
        raise CompositionError(
            f"cannot compose: {d1.n_outputs} outputs vs {d2.n_inputs} inputs"
        )
    d2s = _shift(d2, _max_id(d1) + 1)

    # Each glued slot becomes an internal connector with exactly two
    # incident edges (its wire plus a glue bridge). The composite's wires
    # are the chains between non-connector endpoints; pure connector
    # cycles close into loops.
    glued = set(d1.outputs) | set(d2s.inputs)
    edges: List[Tuple[Endpoint, Endpoint]] = list(d1.wires) + list(d2s.wires)
    edges += [(("b", o), ("b", i)) for o, i in zip(d1.outputs, d2s.inputs)]

    incident: Dict[int, List[Tuple[int, int]]] = {g: [] for g in glued}
    for idx, (a, b) in enumerate(edges):
        for side, (tag, ident) in enumerate((a, b)):
            if tag == "b" and ident in glued:
                incident[ident].append((idx, side))

    def is_conn(e: Endpoint) -> bool:
        return e[0] == "b" and e[1] in glued

    visited = [False] * len(edges)
    wires: List[Wire] = []

    def walk(idx: int, side: int) -> Endpoint:
        # Enter edge idx at the non-connector end `side`; follow the chain
        # of connectors and return the endpoint where it leaves.
        while True:
            visited[idx] = True
            far = edges[idx][1 - side]
            if not is_conn(far):
                return far
            (e1, s1), (e2, s2) = incident[far[1]]
            idx, side = (e2, s2) if (e1, s1) == (idx, 1 - side) else (e1, s1)

    for idx, (a, b) in enumerate(edges):
        if visited[idx]:
            continue
        if not is_conn(a):
            visited[idx] = True
            wires.append(_wire(a, walk(idx, 0)))
        elif not is_conn(b):
            visited[idx] = True
            wires.append(_wire(b, walk(idx, 1)))

    loops = d1.loops + d2s.loops
    for idx in range(len(edges)):
        if not visited[idx]:
            # part of a pure connector cycle
            loops += 1
            visited[idx] = True
            a = edges[idx][0]
            cur, side = incident[a[1]][0]
            if (cur, side) == (idx, 0):
                cur, side = incident[a[1]][1]
            while cur != idx:
                visited[cur] = True
                far = edges[cur][1 - side]
                (e1, s1), (e2, s2) = incident[far[1]]
                cur, side = (e2, s2) if (e1, s1) == (cur, 1 - side) else (e1, s1)

    out = Diagram(
        d1.vertices + d2s.vertices,
        tuple(sorted(wires)),
        d1.inputs,
        d2s.outputs,
        loops,
    )
    out.validate()
    return out


def transpose(d: Diagram) -> Diagram:
    """Swap the roles of inputs and outputs (map-state duality).

    Because every generator is symmetric, re-listing the boundaries is all
    the bending amounts to; the interpretation becomes the matrix transpose.
    """
    return Diagram(d.vertices, d.wires, d.outputs, d.inputs, d.loops)


def bend_to_state(d: Diagram) -> Diagram:
    """Bend all inputs up: a 0 -> (n+m) diagram whose interpretation is the
    vectorization of the original, with old inputs appended after outputs."""
    return Diagram(d.vertices, d.wires, (), d.outputs + d.inputs, d.loops)


def is_isomorphic(d1: Diagram, d2: Diagram) -> bool:
    """Boundary-order-preserving multigraph isomorphism respecting kinds."""
    if (
        d1.n_inputs != d2.n_inputs
        or d1.n_outputs != d2.n_outputs
        or len(d1.vertices) != len(d2.vertices)
        or len(d1.wires) != len(d2.wires)
        or d1.loops != d2.loops
    ):
        return False

    k1, k2 = d1.vertex_map(), d2.vertex_map()

    def slot_map() -> Dict[int, int]:
        m = {}
        for a, b in zip(d1.inputs + d1.outputs, d2.inputs + d2.outputs):
            m[a] = b
        return m

    smap = slot_map()

    def adjacency(d: Diagram) -> Dict[int, List[Endpoint]]:
        adj: Dict[int, List[Endpoint]] = {vid: [] for vid, _ in d.vertices}
        for a, b in d.wires:
            if a[0] == "v":
                adj[a[1]].append(b)
            if b[0] == "v":
                adj[b[1]].append(a)
        return adj

    adj1, adj2 = adjacency(d1), adjacency(d2)
    sig1 = {v: (k1[v], len(adj1[v])) for v in k1}
    sig2 = {v: (k2[v], len(adj2[v])) for v in k2}

    def wire_multiset(d: Diagram, vmap: Dict[int, int]) -> List[Wire]:
        def m(e: Endpoint) -> Endpoint:
            if e[0] == "v":
                return ("v", vmap[e[1]])
            return ("b", smap[e[1]])

        return sorted(_wire(m(a), m(b)) for a, b in d.wires)

    verts1 = [v for v, _ in d1.vertices]
    cands = {
        v: [u for u in k2 if sig2[u] == sig1[v]] for v in verts1
    }
    if any(not c for c in cands.values()):
        return False
    order = sorted(verts1, key=lambda v: len(cands[v]))

    target = sorted(d2.wires)

    def extend(i: int, vmap: Dict[int, int], used: set) -> bool:
        if i == len(order):
            return wire_multiset(d1, vmap) == target
        v = order[i]
        for u in cands[v]:
            if u in used:
                continue
            vmap[v] = u
            used.add(u)
            if extend(i + 1, vmap, used):
                return True
            del vmap[v]
            used.discard(u)
        return False

    return extend(0, {}, set())


def relabel(d: Diagram, seed: int = 0) -> Diagram:
    """A structurally identical diagram with shuffled vertex ids (for tests)."""
    import random

    rng = random.Random(seed)
    ids = [vid for vid, _ in d.vertices] + list(d.inputs) + list(d.outputs)
    fresh = list(range(len(ids)))
    rng.shuffle(fresh)
    mapping = dict(zip(ids, fresh))

    def m(e: Endpoint) -> Endpoint:
        return (e[0], mapping[e[1]])

    return Diagram(
        tuple(sorted((mapping[vid], k) for vid, k in d.vertices)),
        tuple(sorted(_wire(m(a), m(b)) for a, b in d.wires)),
        tuple(mapping[i] for i in d.inputs),
        tuple(mapping[o] for o in d.outputs),
        d.loops,
    )
