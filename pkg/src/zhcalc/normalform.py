"""Canonical forms and the equality decision procedure.

A normal form is a state-shaped object: an output count n, a star count k
and 2^n ring coefficients indexed by bitstrings (first output wire is the
most significant bit). It denotes the vector sum_b coeffs[b] * s^k |b>
where s is the star scalar. A normal form is *reduced* when k = 0 or some
coefficient cannot be halved; reduced normal forms are unique for a given
vector, which is what makes :func:`equal` a decision procedure.

Diagrams are normalized by converting every generator to a little normal
form, tensoring the pieces together and capping each internal wire, with
coefficient arithmetic playing the role of the diagram-level constructions
(wire extension, Schur products, output contraction). The companion
:func:`nf_to_diagram` rebuilds the canonical diagram: n spiders fanning
out to 2^n H-boxes, with a grey NOT on leg i of box b exactly when bit i
of b is 0, and k floating stars.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import ring as rg
from . import diagram as dg
from . import semantics as sm
from .diagram import Diagram, DiagramBuilder, VertexKind
from .ring import RingDescriptor, RingElement


class NormalFormError(Exception):
    pass


class SignatureError(NormalFormError):
    """Two diagrams compared for equality have different boundaries."""


@dataclass(frozen=True)
class NormalForm:
    ring: RingDescriptor
    sqrt2_star: bool
    n: int
    k: int
    coeffs: Tuple[RingElement, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != 1 << self.n:
            raise NormalFormError("coefficient vector length must be 2^n")
        if self.k < 0:
            raise NormalFormError("star count must be nonnegative")

    @property
    def reduced(self) -> bool:
        """k = 0, or some coefficient has no exact half."""
        return self.k == 0 or any(rg.halve(c) is None for c in self.coeffs)

    def same_data(self, other: "NormalForm") -> bool:
        return (
            self.ring == other.ring
            and self.n == other.n
            and self.k == other.k
            and self.coeffs == other.coeffs
        )

    def format_compact(self) -> str:
        return f"k={self.k}; " + " ".join(rg.render(c) for c in self.coeffs)

    def format_lines(self) -> str:
        lines = [f"k={self.k}"]
        for b in range(1 << self.n):
            bits = format(b, f"0{self.n}b") if self.n else ""
            lines.append(f"coeffs[{bits}] = {rg.render(self.coeffs[b])}")
        return "\n".join(lines)

    def dump(self) -> List[str]:
        return [rg.render(c) for c in self.coeffs]

    def __str__(self) -> str:
        return self.format_compact()


def _nf(ring, sqrt2_star, n, k, coeffs) -> NormalForm:
    return NormalForm(ring, sqrt2_star, n, k, tuple(coeffs))


def star_value(nf: NormalForm) -> RingElement:
    return sm.star_weight(nf.ring, nf.sqrt2_star)


def evaluate(nf: NormalForm) -> List[RingElement]:
    """The denoted vector: coeffs[b] * s^k, entry by entry."""
    if nf.k == 0:
        return list(nf.coeffs)
    s = star_value(nf)
    scale = rg.one(nf.ring)
    for _ in range(nf.k):
        scale = scale * s
    return [c * scale for c in nf.coeffs]


def evaluate_matrix(nf: NormalForm) -> sm.Matrix:
    vec = evaluate(nf)
    return sm.Matrix(nf.ring, nf.n, 0, tuple((v,) for v in vec))


def nf_of_hbox(
    label: RingElement, n: int, ring: RingDescriptor, sqrt2_star: bool = False
) -> NormalForm:
    one = rg.one(ring)
    coeffs = [one] * (1 << n)
    coeffs[(1 << n) - 1] = label
    return _nf(ring, sqrt2_star, n, 0, coeffs)


def nf_of_zspider(
    n: int, ring: RingDescriptor, sqrt2_star: bool = False
) -> NormalForm:
    zero, one = rg.zero(ring), rg.one(ring)
    if n == 0:
        return _nf(ring, sqrt2_star, 0, 0, [rg.two(ring)])
    coeffs = [zero] * (1 << n)
    coeffs[0] = one
    coeffs[-1] = one
    return _nf(ring, sqrt2_star, n, 0, coeffs)


def nf_of_xspider(
    n: int, ring: RingDescriptor, odd: bool = False, sqrt2_star: bool = False
) -> NormalForm:
    """Parity selector (grey spider); ``odd`` gives the NOT-marked variant."""
    zero, one = rg.zero(ring), rg.one(ring)
    want = 1 if odd else 0
    coeffs = [
        one if bin(b).count("1") % 2 == want else zero for b in range(1 << n)
    ]
    return _nf(ring, sqrt2_star, n, 0, coeffs)


def nf_of_cup(ring: RingDescriptor, sqrt2_star: bool = False) -> NormalForm:
    zero, one = rg.zero(ring), rg.one(ring)
    return _nf(ring, sqrt2_star, 2, 0, [one, zero, zero, one])


def nf_of_star(ring: RingDescriptor, sqrt2_star: bool = False) -> NormalForm:
    return _nf(ring, sqrt2_star, 0, 1, [rg.one(ring)])


def nf_scalar(
    value: RingElement, ring: RingDescriptor, sqrt2_star: bool = False
) -> NormalForm:
    return _nf(ring, sqrt2_star, 0, 0, [value])


def extend(nf: NormalForm) -> NormalForm:
    """Juxtapose a fresh unconstrained wire, appended as least significant."""
    coeffs = []
    for c in nf.coeffs:
        coeffs.append(c)
        coeffs.append(c)
    return _nf(nf.ring, nf.sqrt2_star, nf.n + 1, nf.k, coeffs)


def schur(nf1: NormalForm, nf2: NormalForm) -> NormalForm:
    """Pointwise product; star counts add."""
    if nf1.n != nf2.n:
        raise NormalFormError("Schur product needs equal output counts")
    if nf1.ring != nf2.ring:
        raise NormalFormError("Schur product needs a single ring")
    coeffs = [a * b for a, b in zip(nf1.coeffs, nf2.coeffs)]
    return _nf(nf1.ring, nf1.sqrt2_star, nf1.n, nf1.k + nf2.k, coeffs)


def _insert_bit(b: int, pos: int, bit: int, n: int) -> int:
    """Insert ``bit`` at position pos (0 = most significant) of an (n-1)-bit
    index b, producing an n-bit index."""
    tail = n - 1 - pos
    high = b >> tail
    low = b & ((1 << tail) - 1)
    return (((high << 1) | bit) << tail) | low


def contract(nf: NormalForm, wire_index: int) -> NormalForm:
    """Plug the bare white effect <0| + <1| into one output: sum it out."""
    if not 0 <= wire_index < nf.n:
        raise NormalFormError(f"no output wire {wire_index}")
    m = nf.n - 1
    coeffs = []
    for b in range(1 << m):
        c0 = nf.coeffs[_insert_bit(b, wire_index, 0, nf.n)]
        c1 = nf.coeffs[_insert_bit(b, wire_index, 1, nf.n)]
        coeffs.append(c0 + c1)
    return _nf(nf.ring, nf.sqrt2_star, m, nf.k, coeffs)


def tensor_nf(nf1: NormalForm, nf2: NormalForm) -> NormalForm:
    """Tensor product; nf1 supplies the most significant bits."""
    if nf1.ring != nf2.ring:
        raise NormalFormError("tensor needs a single ring")
    coeffs = []
    for c1 in nf1.coeffs:
        for c2 in nf2.coeffs:
            coeffs.append(c1 * c2)
    return _nf(nf1.ring, nf1.sqrt2_star, nf1.n + nf2.n, nf1.k + nf2.k, coeffs)


def mult_outputs(nf: NormalForm, i: int, j: int) -> NormalForm:
    """Join outputs i and j through a white multiplication: keep the
    diagonal where the two bits agree, fusing them into the wire at i."""
    if i == j or not (0 <= i < nf.n and 0 <= j < nf.n):
        raise NormalFormError(f"bad output pair ({i}, {j})")
    m = nf.n - 1
    # position of the surviving wire after dropping j
    coeffs = []
    for b in range(1 << m):
        i_pos = i if i < j else i - 1
        bit = (b >> (m - 1 - i_pos)) & 1
        coeffs.append(nf.coeffs[_insert_bit(b, j, bit, nf.n)])
    return _nf(nf.ring, nf.sqrt2_star, m, nf.k, coeffs)


def cap_nf(nf: NormalForm, i: int, j: int) -> NormalForm:
    """Plug a cap into outputs i and j: multiply them, then contract."""
    merged = mult_outputs(nf, i, j)
    return contract(merged, i if i < j else i - 1)


def permute(nf: NormalForm, perm: Sequence[int]) -> NormalForm:
    """Reorder outputs: wire i of the result is wire perm[i] of the input."""
    if sorted(perm) != list(range(nf.n)):
        raise NormalFormError("not a permutation of the outputs")
    n = nf.n
    coeffs = []
    for b in range(1 << n):
        bits = [(b >> (n - 1 - i)) & 1 for i in range(n)]
        old = 0
        for i in range(n):
            old |= bits[i] << (n - 1 - perm[i])
        coeffs.append(nf.coeffs[old])
    return _nf(nf.ring, nf.sqrt2_star, n, nf.k, coeffs)


def reduce(nf: NormalForm) -> NormalForm:
    """Bring a normal form to its unique reduced representative.

    Over a ring with a half the stars fold into the coefficients (k ends
    at 0). Over Z the coefficients are halved while a star remains and all
    of them are even. A vector of zeros drops its stars outright: the zero
    map has a star-free reduced form in every mode.
    """
    if all(c.is_zero() for c in nf.coeffs):
        return _nf(nf.ring, nf.sqrt2_star, nf.n, 0, nf.coeffs)
    if nf.k == 0:
        return nf
    if nf.ring.has_half:
        return _nf(nf.ring, nf.sqrt2_star, nf.n, 0, evaluate(nf))
    coeffs = list(nf.coeffs)
    k = nf.k
    while k > 0:
        halved = [rg.halve(c) for c in coeffs]
        if any(h is None for h in halved):
            break
        coeffs = halved
        k -= 1
    return _nf(nf.ring, nf.sqrt2_star, nf.n, k, coeffs)


@dataclass(frozen=True)
class TraceStep:
    """One proposition-level step of the normalization pipeline.

    ``before`` is computed by an independent formula on the operands,
    ``after`` by evaluating the produced normal form; a sound step records
    identical fingerprints.
    """

    op: str
    detail: str
    before: Tuple[str, ...]
    after: Tuple[str, ...]

    @property
    def sound(self) -> bool:
        return self.before == self.after


Trace = List[TraceStep]


def _fp(vec: Sequence[RingElement]) -> Tuple[str, ...]:
    return tuple(rg.render(v) for v in vec)


def _generator_nf(
    kind: VertexKind, degree: int, ring: RingDescriptor, sqrt2_star: bool
) -> Tuple[str, NormalForm]:
    k = kind.kind
    if k == dg.Z:
        return "zspider-nf", nf_of_zspider(degree, ring, sqrt2_star)
    if k == dg.HBOX:
        if kind.label.ring != ring:
            raise NormalFormError(
                f"H-box label lives in {kind.label.ring}, normalizing over {ring}"
            )
        return "hbox-nf", nf_of_hbox(kind.label, degree, ring, sqrt2_star)
    if k == dg.X:
        return "xspider-nf", nf_of_xspider(degree, ring, False, sqrt2_star)
    if k == dg.XNOT:
        return "xnot-nf", nf_of_xspider(degree, ring, True, sqrt2_star)
    if k == dg.STAR:
        if not ring.has_half and not sqrt2_star:
            raise sm.UnsupportedScalarError(
                f"diagram contains a star but {ring} has no half"
            )
        return "star-nf", nf_of_star(ring, sqrt2_star)
    raise NormalFormError(f"unknown vertex kind {kind}")


def _weight_vector(
    kind: VertexKind, degree: int, ring: RingDescriptor, sqrt2_star: bool
) -> List[RingElement]:
    # independent fingerprint: enumerate the vertex weight table directly
    out = []
    for b in range(1 << degree):
        bits = [(b >> (degree - 1 - i)) & 1 for i in range(degree)]
        out.append(sm.vertex_weight(kind, bits, ring, sqrt2_star))
    return out


def _kron_vec(
    v1: Sequence[RingElement], v2: Sequence[RingElement]
) -> List[RingElement]:
    return [a * b for a in v1 for b in v2]


def _cap_vec(
    vec: Sequence[RingElement], n: int, i: int, j: int, ring: RingDescriptor
) -> List[RingElement]:
    # independent fingerprint for a cap: pair off equal bits at i and j
    m = n - 2
    lo, hi = min(i, j), max(i, j)
    out = []
    for b in range(1 << m):
        acc = rg.zero(ring)
        for x in (0, 1):
            full = _insert_bit(b, lo, x, n - 1)
            full = _insert_bit(full, hi, x, n)
            acc = acc + vec[full]
        out.append(acc)
    return out


def normalize_with_trace(
    d: Diagram,
    ring: RingDescriptor = rg.DYADIC_RING,
    sqrt2_star: bool = False,
    reduce_result: bool = False,
) -> Tuple[NormalForm, Trace]:
    """Normalize a diagram, recording one trace step per pipeline move."""
    state = dg.bend_to_state(d)
    slots = list(state.outputs)
    trace: Trace = []

    # vertex legs as wire ends; bare boundary wires become cups
    vertex_legs: Dict[int, List[Tuple[int, int]]] = {
        vid: [] for vid, _ in state.vertices
    }
    slot_of_end: Dict[Tuple[int, int], int] = {}
    cup_wires: List[int] = []
    for widx, (a, b) in enumerate(state.wires):
        for end, (tag, ident) in enumerate((a, b)):
            if tag == "v":
                vertex_legs[ident].append((widx, end))
            else:
                slot_of_end[(widx, end)] = ident
    for widx, (a, b) in enumerate(state.wires):
        if a[0] == "b" and b[0] == "b":
            cup_wires.append(widx)

    # pending factors: (token list, step name, nf, independent fingerprint)
    pending: List[Tuple[List[Tuple[int, int]], str, NormalForm, List[RingElement]]] = []
    for vid, kind in state.vertices:
        legs = vertex_legs[vid]
        name, nf = _generator_nf(kind, len(legs), ring, sqrt2_star)
        fp = (
            [sm.star_weight(ring, sqrt2_star)]
            if kind.kind == dg.STAR
            else _weight_vector(kind, len(legs), ring, sqrt2_star)
        )
        pending.append((legs, name, nf, fp))
    for widx in cup_wires:
        nf = nf_of_cup(ring, sqrt2_star)
        one, zero = rg.one(ring), rg.zero(ring)
        pending.append(
            ([(widx, 0), (widx, 1)], "cup-nf", nf, [one, zero, zero, one])
        )
    for _ in range(state.loops):
        nf = nf_scalar(rg.two(ring), ring, sqrt2_star)
        pending.append(([], "loop-scalar", nf, [rg.two(ring)]))

    for legs, name, nf, fp in pending:
        trace.append(TraceStep(name, "", _fp(fp), _fp(evaluate(nf))))

    vertex_ends = {
        (widx, end)
        for widx, w in enumerate(state.wires)
        for end in (0, 1)
        if w[end][0] == "v"
    }

    def other_end(token: Tuple[int, int]) -> Tuple[int, int]:
        return (token[0], 1 - token[1])

    def closable(open_tokens: List[Tuple[int, int]], extra: List[Tuple[int, int]]):
        # a wire closes when both of its vertex ends are exposed
        toks = set(open_tokens) | set(extra)
        return [
            t
            for t in sorted(toks)
            if t in vertex_ends
            and other_end(t) in toks
            and other_end(t) in vertex_ends
            and t < other_end(t)
        ]

    work: Optional[NormalForm] = None
    open_tokens: List[Tuple[int, int]] = []

    while pending:
        if work is None:
            best_idx = 0
        else:
            def gain(item):
                legs = item[0]
                joins = len(closable(open_tokens, legs))
                return len(legs) - 2 * joins

            best_idx = min(range(len(pending)), key=lambda i: gain(pending[i]))
        legs, name, nf, _ = pending.pop(best_idx)
        if work is None:
            work, open_tokens = nf, list(legs)
        else:
            before = _kron_vec(evaluate(work), evaluate(nf))
            work = tensor_nf(work, nf)
            open_tokens = open_tokens + list(legs)
            trace.append(
                TraceStep("tensor", name, _fp(before), _fp(evaluate(work)))
            )
        # cap every wire whose two ends are now open
        while True:
            pairs = closable(open_tokens, [])
            if not pairs:
                break
            t = pairs[0]
            i = open_tokens.index(t)
            j = open_tokens.index(other_end(t))
            before = _cap_vec(evaluate(work), work.n, i, j, ring)
            work = cap_nf(work, i, j)
            trace.append(
                TraceStep(
                    "cap", f"wire {t[0]}", _fp(before), _fp(evaluate(work))
                )
            )
            open_tokens = [x for x in open_tokens if x not in (t, other_end(t))]

    if work is None:
        work, open_tokens = nf_scalar(rg.one(ring), ring, sqrt2_star), []

    # route the remaining open tokens to the boundary slots
    token_slot: Dict[Tuple[int, int], int] = {}
    for t in open_tokens:
        if t in slot_of_end:
            token_slot[t] = slot_of_end[t]
        else:
            token_slot[t] = slot_of_end[other_end(t)]
    if sorted(token_slot.values()) != sorted(slots):
        raise NormalFormError("internal error: dangling wires after pipeline")
    perm = [open_tokens.index(next(t for t in open_tokens if token_slot[t] == s)) for s in slots]
    if perm != list(range(len(slots))):
        # independent fingerprint: scatter entries instead of gathering them
        vec = evaluate(work)
        n = work.n
        before: List[RingElement] = [rg.zero(ring)] * len(vec)
        for old in range(len(vec)):
            new = 0
            for i in range(n):
                new |= ((old >> (n - 1 - perm[i])) & 1) << (n - 1 - i)
            before[new] = vec[old]
        work = permute(work, perm)
        trace.append(TraceStep("permute", str(perm), _fp(before), _fp(evaluate(work))))

    if reduce_result:
        before = evaluate(work)
        work = reduce(work)
        trace.append(TraceStep("reduce", "", _fp(before), _fp(evaluate(work))))
    return work, trace


def normalize(
    d: Diagram,
    ring: RingDescriptor = rg.DYADIC_RING,
    sqrt2_star: bool = False,
) -> NormalForm:
    nf, _ = normalize_with_trace(d, ring, sqrt2_star)
    return nf


def nf_to_diagram(nf: NormalForm) -> Diagram:
    """The canonical diagram of a normal form: n spiders fanning out to
    2^n labelled H-boxes, grey NOTs marking the 0-bits, and k stars."""
    b = DiagramBuilder()
    spiders = []
    for _ in range(nf.n):
        v = b.vertex(dg.zspider())
        b.wire(v, b.output())
        spiders.append(v)
    for idx in range(1 << nf.n):
        box = b.vertex(dg.hbox(nf.coeffs[idx]))
        for i in range(nf.n):
            bit = (idx >> (nf.n - 1 - i)) & 1
            if bit:
                b.wire(box, spiders[i])
            else:
                b.not_edge(box, spiders[i])
    for _ in range(nf.k):
        b.vertex(dg.star())
    return b.build()


def equal(
    d1: Diagram,
    d2: Diagram,
    ring: RingDescriptor = rg.DYADIC_RING,
    sqrt2_star: bool = False,
) -> bool:
    """Decide whether two diagrams denote the same matrix, by comparing
    reduced normal forms."""
    if d1.n_inputs != d2.n_inputs or d1.n_outputs != d2.n_outputs:
        raise SignatureError(
            f"boundary mismatch: {d1.n_inputs}->{d1.n_outputs} "
            f"vs {d2.n_inputs}->{d2.n_outputs}"
        )
    nf1 = reduce(normalize(d1, ring, sqrt2_star))
    nf2 = reduce(normalize(d2, ring, sqrt2_star))
    return nf1.same_data(nf2)
