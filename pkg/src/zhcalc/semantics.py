"""The standard interpretation: diagrams to exact matrices.

A diagram with m inputs and n outputs denotes a 2^n x 2^m matrix over the
active ring. Rows are indexed by output bits (first output is the most
significant bit), columns by input bits. Every wire carries a binary
variable; a matrix entry sums, over all assignments to internal wires, the
product of vertex weights, with boundary wires pinned by the entry's
indices and each closed loop contributing a factor of 2.

The star scalar is 1/2 by default; in sqrt(2) mode (available over the
rt2 ring) it is 1/sqrt(2) instead, which makes single Hadamard boxes
unitary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import ring as rg
from .diagram import Diagram, VertexKind, HBOX, STAR, X, XNOT, Z
from .ring import RingDescriptor, RingElement


class SemanticsError(Exception):
    pass


class UnsupportedScalarError(SemanticsError):
    """A star occurs but the active ring has no exact 1/2 (and no sqrt(2))."""


@dataclass(frozen=True)
class Matrix:
    """Dense 2^n x 2^m matrix of ring elements."""

    ring: RingDescriptor
    n_outputs: int
    n_inputs: int
    entries: Tuple[Tuple[RingElement, ...], ...]

    @property
    def rows(self) -> int:
        return 1 << self.n_outputs

    @property
    def cols(self) -> int:
        return 1 << self.n_inputs

    def entry(self, row: int, col: int) -> RingElement:
        return self.entries[row][col]

    def to_lists(self) -> List[List[str]]:
        """Machine-readable dump as nested lists of rendered entries."""
        return [[rg.render(e) for e in row] for row in self.entries]

    def format_grid(self) -> str:
        cells = self.to_lists()
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(r) + "]" for r in self.to_lists()) + "]"


def matrix_from_ints(
    rows: Sequence[Sequence[int]], n_outputs: int, n_inputs: int, ring: RingDescriptor
) -> Matrix:
    ents = tuple(
        tuple(rg.from_integer(v, ring) for v in row) for row in rows
    )
    return Matrix(ring, n_outputs, n_inputs, ents)


def kron(m1: Matrix, m2: Matrix) -> Matrix:
    """Kronecker product (first factor supplies the most significant bits)."""
    ents = []
    for r1 in range(m1.rows):
        for r2 in range(m2.rows):
            row = []
            for c1 in range(m1.cols):
                for c2 in range(m2.cols):
                    row.append(m1.entry(r1, c1) * m2.entry(r2, c2))
            ents.append(tuple(row))
    return Matrix(
        m1.ring, m1.n_outputs + m2.n_outputs, m1.n_inputs + m2.n_inputs, tuple(ents)
    )


def matmul(m2: Matrix, m1: Matrix) -> Matrix:
    """The matrix product m2 * m1."""
    if m1.rows != m2.cols:
        raise SemanticsError("dimension mismatch in matrix product")
    z = rg.zero(m1.ring)
    ents = []
    for r in range(m2.rows):
        row = []
        for c in range(m1.cols):
            acc = z
            for k in range(m1.rows):
                acc = acc + m2.entry(r, k) * m1.entry(k, c)
            row.append(acc)
        ents.append(tuple(row))
    return Matrix(m1.ring, m2.n_outputs, m1.n_inputs, tuple(ents))


def scale(m: Matrix, s: RingElement) -> Matrix:
    ents = tuple(tuple(s * e for e in row) for row in m.entries)
    return Matrix(m.ring, m.n_outputs, m.n_inputs, ents)


def transpose_matrix(m: Matrix) -> Matrix:
    ents = tuple(
        tuple(m.entry(r, c) for r in range(m.rows)) for c in range(m.cols)
    )
    return Matrix(m.ring, m.n_inputs, m.n_outputs, ents)


def star_weight(ring: RingDescriptor, sqrt2_star: bool = False) -> RingElement:
    if sqrt2_star:
        return rg.inv_sqrt_two(ring)
    h = rg.half(ring)
    if h is None:
        raise UnsupportedScalarError(f"the star scalar has no value in {ring}")
    return h


def vertex_weight(
    kind: VertexKind,
    bits: Sequence[int],
    ring: RingDescriptor,
    sqrt2_star: bool = False,
) -> RingElement:
    """The weight a vertex contributes given the bit values on its legs.

    Z-spiders are a delta (all legs equal), H-boxes give their label when
    every leg is 1 and 1 otherwise, grey spiders select even parity, grey
    NOTs odd parity, and the star is the global scalar.
    """
    k = kind.kind
    if k == Z:
        if not bits:
            # the sum over both spider states survives: |0..0> + |1..1>
            # over zero legs is the scalar 2
            return rg.two(ring)
        if all(b == bits[0] for b in bits):
            return rg.one(ring)
        return rg.zero(ring)
    if k == HBOX:
        label = kind.label
        if label.ring != ring:
            raise SemanticsError(
                f"H-box label lives in {label.ring}, interpreting over {ring}"
            )
        if bits and all(b == 1 for b in bits):
            return label
        if not bits:
            return label  # zero legs: the bare scalar
        return rg.one(ring)
    if k == X:
        return rg.one(ring) if sum(bits) % 2 == 0 else rg.zero(ring)
    if k == XNOT:
        return rg.one(ring) if sum(bits) % 2 == 1 else rg.zero(ring)
    if k == STAR:
        return star_weight(ring, sqrt2_star)
    raise SemanticsError(f"unknown vertex kind {kind}")


# A factor is (scope, table): scope is a sorted tuple of wire indices and
# table lists one ring element per assignment of the scope, first scope
# variable most significant.
Factor = Tuple[Tuple[int, ...], List[RingElement]]


def _factor_for_vertex(
    legs: List[int], kind: VertexKind, ring: RingDescriptor, sqrt2_star: bool
) -> Factor:
    scope = tuple(sorted(set(legs)))
    table = []
    for asg in range(1 << len(scope)):
        values = {
            w: (asg >> (len(scope) - 1 - i)) & 1 for i, w in enumerate(scope)
        }
        bits = [values[w] for w in legs]
        table.append(vertex_weight(kind, bits, ring, sqrt2_star))
    return (scope, table)


def _fn_factor(vars_list: List[int], fn, ring: RingDescriptor) -> Factor:
    """A factor whose value is fn(bits), with bits following vars_list
    (repeats allowed for self-loops)."""
    scope = tuple(sorted(set(vars_list)))
    table = []
    for asg in range(1 << len(scope)):
        values = {
            w: (asg >> (len(scope) - 1 - i)) & 1 for i, w in enumerate(scope)
        }
        table.append(fn([values[w] for w in vars_list]))
    return (scope, table)


def _vertex_factors(
    legs: List[int],
    kind: VertexKind,
    ring: RingDescriptor,
    sqrt2_star: bool,
    fresh_var,
) -> List[Factor]:
    """Factorize one vertex, chaining wide spiders and H-boxes through
    auxiliary variables so no factor has more than three variables.

    Deltas, parities and the H-box's leg conjunction are all associative,
    so a degree-k vertex becomes k-2 small factors; this keeps the
    elimination width of fan-out-heavy diagrams bounded.
    """
    k = kind.kind
    if len(legs) <= 3 or k == STAR:
        return [_factor_for_vertex(legs, kind, ring, sqrt2_star)]

    zero, one = rg.zero(ring), rg.one(ring)
    factors: List[Factor] = []
    acc = legs[0]
    rest = legs[1:]
    if k == Z:
        combine = lambda b: one if b[0] == b[1] == b[2] else zero  # noqa: E731
        last = lambda b: one if b[0] == b[1] == b[2] else zero  # noqa: E731
    elif k in (X, XNOT):
        combine = lambda b: one if (b[0] ^ b[1]) == b[2] else zero  # noqa: E731
        want = 1 if k == XNOT else 0
        last = lambda b: one if (b[0] ^ b[1] ^ b[2]) == want else zero  # noqa: E731
    else:  # H-box: conjunction chain, label on the final conjunction
        label = kind.label
        if label.ring != ring:
            raise SemanticsError(
                f"H-box label lives in {label.ring}, interpreting over {ring}"
            )
        combine = lambda b: one if (b[0] & b[1]) == b[2] else zero  # noqa: E731
        last = lambda b: label if b[0] & b[1] & b[2] == 1 else one  # noqa: E731
    while len(rest) > 2:
        aux = fresh_var()
        factors.append(_fn_factor([acc, rest[0], aux], combine, ring))
        acc = aux
        rest = rest[1:]
    factors.append(_fn_factor([acc, rest[0], rest[1]], last, ring))
    return factors


def _multiply_out(
    factors: List[Factor], keep: Tuple[int, ...], var: Optional[int], ring: RingDescriptor
) -> Factor:
    """Multiply the given factors pointwise over the union scope ``keep``
    (plus ``var``), summing ``var`` out when it is not None."""
    m = len(keep)
    pos = {w: i for i, w in enumerate(keep)}
    zero, one = rg.zero(ring), rg.one(ring)
    # precompute, per factor, how a keep-assignment plus var bit maps to
    # an index into its table
    plans = []
    for scope, table in factors:
        strides = []
        var_stride = 0
        for i, w in enumerate(scope):
            shift = len(scope) - 1 - i
            if w == var:
                var_stride = 1 << shift
            else:
                strides.append((pos[w], 1 << shift))
        plans.append((strides, var_stride, table))
    out = []
    for asg in range(1 << m):
        bits = [(asg >> (m - 1 - i)) & 1 for i in range(m)]
        acc = zero
        for v in ((0, 1) if var is not None else (0,)):
            term = one
            for strides, var_stride, table in plans:
                idx = v * var_stride
                for p, stride in strides:
                    if bits[p]:
                        idx += stride
                term = term * table[idx]
                if term.is_zero():
                    break
            acc = acc + term
        out.append(acc)
    return (keep, out)


def _eliminate_all(
    factors: List[Factor], internal: List[int], ring: RingDescriptor
) -> Factor:
    """Sum out every internal variable, returning one factor over the rest."""
    factors = list(factors)
    remaining = set(internal)
    while remaining:
        # greedy min-fill style: pick the variable with the smallest
        # combined neighbourhood
        best = min(
            remaining,
            key=lambda v: len(
                set(w for f in factors if v in f[0] for w in f[0])
            ),
        )
        touching = [f for f in factors if best in f[0]]
        rest = [f for f in factors if best not in f[0]]
        union = tuple(
            sorted(set(w for f in touching for w in f[0]) - {best})
        )
        rest.append(_multiply_out(touching, union, best, ring))
        factors = rest
        remaining.discard(best)
    scope = tuple(sorted(set(w for f in factors for w in f[0])))
    return _multiply_out(factors, scope, None, ring)


def interpret(
    d: Diagram,
    ring: RingDescriptor = rg.DYADIC_RING,
    sqrt2_star: bool = False,
) -> Matrix:
    """Evaluate a diagram to its exact matrix over the given ring."""
    if sqrt2_star and ring.kind != rg.ROOT_TWO:
        raise SemanticsError("sqrt(2)-star mode needs the rt2 ring")
    n_in, n_out = d.n_inputs, d.n_outputs

    # wire variables
    slot_wire: Dict[int, int] = {}
    boundary_wires = set()
    vertex_legs: Dict[int, List[int]] = {vid: [] for vid, _ in d.vertices}
    for widx, (a, b) in enumerate(d.wires):
        for tag, ident in (a, b):
            if tag == "v":
                vertex_legs[ident].append(widx)
            else:
                slot_wire[ident] = widx
                boundary_wires.add(widx)

    next_var = [len(d.wires)]

    def fresh_var() -> int:
        next_var[0] += 1
        return next_var[0] - 1

    factors = []
    for vid, kind in d.vertices:
        factors.extend(
            _vertex_factors(vertex_legs[vid], kind, ring, sqrt2_star, fresh_var)
        )
    internal = [
        w for w in range(len(d.wires)) if w not in boundary_wires
    ] + list(range(len(d.wires), next_var[0]))
    scope, table = _eliminate_all(factors, internal, ring)
    pos = {w: i for i, w in enumerate(scope)}

    loop_scalar = rg.one(ring)
    two = rg.two(ring)
    for _ in range(d.loops):
        loop_scalar = loop_scalar * two

    zero = rg.zero(ring)
    ents: List[Tuple[RingElement, ...]] = []
    for row in range(1 << n_out):
        out_bits = [(row >> (n_out - 1 - i)) & 1 for i in range(n_out)]
        row_entries: List[RingElement] = []
        for col in range(1 << n_in):
            in_bits = [(col >> (n_in - 1 - i)) & 1 for i in range(n_in)]
            pins: Dict[int, int] = {}
            ok = True
            for slot, bit in list(zip(d.inputs, in_bits)) + list(
                zip(d.outputs, out_bits)
            ):
                w = slot_wire[slot]
                if w in pins and pins[w] != bit:
                    ok = False  # a bare wire joining two boundary slots
                    break
                pins[w] = bit
            if not ok:
                row_entries.append(zero)
                continue
            idx = 0
            for w in scope:
                idx = (idx << 1) | pins[w]
            row_entries.append(table[idx] * loop_scalar)
        ents.append(tuple(row_entries))
    return Matrix(ring, n_out, n_in, tuple(ents))


def interpret_sqrt2_mode(d: Diagram) -> Matrix:
    """Interpretation over Z[1/sqrt(2)] with the star meaning 1/sqrt(2)."""
    return interpret(d, rg.ROOT_TWO_RING, sqrt2_star=True)
