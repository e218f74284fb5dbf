"""The rewrite-rule catalogue: axioms, derived lemmas, matching, rewriting.

Every rule is a named schema: a parameter signature (arities m, n and ring
labels a, b) together with an instantiator producing a concrete
(lhs, rhs) diagram pair with equal boundaries. Soundness is not assumed:
:func:`check_sound` evaluates both sides with the exact interpreter, and
the test suite sweeps every schema over a parameter grid.

Rulesets (selected by tag):

- ``core``: the eight basic rules zs, id, hs, hh, ba1, ba2, m, o.
- ``zh_r``: the ring-generic set, which generalizes hs to arbitrary
  labels and replaces m by the label rules M, A, I, U; the scaled
  grey-spider definition rules twoX and twoNot ride along for rings
  where the star scalar is unavailable.
- ``alt_ortho``: the two small rules that can replace o.
- ``merged``: the single rule subsuming I and A (rings with a half).
- ``sqrt2``: the star-zero rule needed when the star means 1/sqrt(2).
- ``derived``: lemma statements provable from the axioms, shipped as
  soundness-checked schemas (scalar cancellations, commutation and copy
  laws, the Hopf rule, H-box successor/negation/addition gadgets, ...).

In sqrt(2)-star mode every star an instantiator emits is doubled, except
in the star-zero rule itself; this keeps the whole catalogue sound under
the reinterpreted star.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import diagram as dg
from . import ring as rg
from . import semantics as sm
from .diagram import Diagram, DiagramBuilder, Endpoint
from .ring import RingDescriptor, RingElement


class RuleError(Exception):
    pass


class ParamError(RuleError):
    pass


class MatchError(RuleError):
    pass


DEFAULT_ARITY_CAP = 4
DEFAULT_MATCH_VERTEX_CAP = 16


@dataclass(frozen=True)
class RuleParams:
    """Arguments for a rule schema; unused fields stay at their defaults."""

    m: int = 0
    n: int = 0
    a: Optional[RingElement] = None
    b: Optional[RingElement] = None


@dataclass(frozen=True)
class RuleSchema:
    name: str
    description: str
    tags: FrozenSet[str]
    uses: FrozenSet[str]
    build: Callable[[RuleParams, RingDescriptor, bool], Tuple[Diagram, Diagram]]
    needs_half: bool = False
    uses_star: bool = False

    def signature(self) -> str:
        parts = sorted(self.uses)
        return f"{self.name}({', '.join(parts)})" if parts else self.name


class _Ctx:
    """Small helper bundle shared by the instantiators."""

    def __init__(self, ring: RingDescriptor, sqrt2_star: bool):
        self.ring = ring
        self.sqrt2_star = sqrt2_star
        self.minus_one = rg.from_integer(-1, ring)
        self.one = rg.one(ring)

    def stars(self, b: DiagramBuilder, count: int = 1) -> None:
        # one star means the scalar 1/2; in sqrt(2) mode that takes two
        per = 2 if self.sqrt2_star else 1
        for _ in range(count * per):
            b.vertex(dg.star())

    def had(self, b: DiagramBuilder) -> Endpoint:
        return b.vertex(dg.hbox(self.minus_one))


def _build_zs(p: RuleParams, ring: RingDescriptor, s2: bool):
    lhs = DiagramBuilder()
    u = lhs.vertex(dg.zspider())
    v = lhs.vertex(dg.zspider())
    for _ in range(p.m):
        lhs.wire(lhs.input(), u)
    lhs.wire(u, v)
    for _ in range(p.n):
        lhs.wire(v, lhs.output())
    return lhs.build(), dg.make_generator(dg.zspider(), p.m, p.n)


def _build_id(p: RuleParams, ring: RingDescriptor, s2: bool):
    return dg.make_generator(dg.zspider(), 1, 1), dg.identity(1)


def _build_hs(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    a = p.a if p.a is not None else ctx.minus_one
    lhs = DiagramBuilder()
    absorbed = lhs.vertex(dg.hbox(ctx.minus_one))
    for _ in range(p.m):
        lhs.wire(lhs.input(), absorbed)
    had = ctx.had(lhs)
    lhs.wire(absorbed, had)
    keeper = lhs.vertex(dg.hbox(a))
    lhs.wire(had, keeper)
    for _ in range(p.n):
        lhs.wire(keeper, lhs.output())

    rhs = DiagramBuilder()
    box = rhs.vertex(dg.hbox(a))
    for _ in range(p.m):
        rhs.wire(rhs.input(), box)
    for _ in range(p.n):
        rhs.wire(box, rhs.output())
    rhs.vertex(dg.zspider())  # the leftover scalar 2
    return lhs.build(), rhs.build()


def _build_hh(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    h1, h2 = ctx.had(lhs), ctx.had(lhs)
    lhs.wire(lhs.input(), h1)
    lhs.wire(h1, h2)
    lhs.wire(h2, lhs.output())

    rhs = DiagramBuilder()
    rhs.wire(rhs.input(), rhs.output())
    rhs.vertex(dg.zspider())  # scalar 2
    return lhs.build(), rhs.build()


def _build_ba1(p: RuleParams, ring: RingDescriptor, s2: bool):
    lhs = DiagramBuilder()
    x = lhs.vertex(dg.xspider())
    z = lhs.vertex(dg.zspider())
    for _ in range(p.m):
        lhs.wire(lhs.input(), x)
    lhs.wire(x, z)
    for _ in range(p.n):
        lhs.wire(z, lhs.output())

    rhs = DiagramBuilder()
    zs = [rhs.vertex(dg.zspider()) for _ in range(p.m)]
    xs = [rhs.vertex(dg.xspider()) for _ in range(p.n)]
    for z_v in zs:
        rhs.wire(rhs.input(), z_v)
    for x_v in xs:
        rhs.wire(x_v, rhs.output())
    for z_v in zs:
        for x_v in xs:
            rhs.wire(z_v, x_v)
    return lhs.build(), rhs.build()


def _build_ba2(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    h = lhs.vertex(dg.hbox(ctx.minus_one))
    x = lhs.vertex(dg.xspider())
    for _ in range(p.m):
        lhs.wire(lhs.input(), h)
    lhs.wire(h, x)
    for _ in range(p.n):
        lhs.wire(x, lhs.output())

    rhs = DiagramBuilder()
    zs = [rhs.vertex(dg.zspider()) for _ in range(p.m)]
    hs = [rhs.vertex(dg.hbox(ctx.minus_one)) for _ in range(p.n)]
    for z_v in zs:
        rhs.wire(rhs.input(), z_v)
    for h_v in hs:
        rhs.wire(h_v, rhs.output())
    for z_v in zs:
        for h_v in hs:
            rhs.wire(z_v, h_v)
    return lhs.build(), rhs.build()


def _build_m(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    h1 = ctx.had(lhs)
    x = lhs.vertex(dg.xspider())
    h2 = ctx.had(lhs)
    lhs.wire(lhs.input(), h1)
    lhs.wire(h1, x)
    lhs.wire(x, h2)
    lhs.wire(h2, lhs.output())
    ctx.stars(lhs)
    return lhs.build(), dg.identity(1)


def _build_o(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)

    def half_shape(linked: bool) -> Diagram:
        b = DiagramBuilder()
        mid = b.vertex(dg.zspider())
        b.wire(mid, b.output())
        box_a = b.vertex(dg.hbox(ctx.minus_one))
        box_b = b.vertex(dg.hbox(ctx.minus_one))
        b.wire(mid, box_a)
        b.not_edge(mid, box_b)
        for _ in range(p.m):
            b.wire(b.input(), box_a)
        for _ in range(p.n):
            b.wire(b.input(), box_b)
        if linked:
            b.wire(box_a, box_b)
            b.vertex(dg.zspider())  # scalar 2
        else:
            b.wire(box_a, b.vertex(dg.zspider()))
            b.wire(box_b, b.vertex(dg.zspider()))
        return b.build()

    return half_shape(True), half_shape(False)


def _build_mult(p: RuleParams, ring: RingDescriptor, s2: bool):
    lhs = DiagramBuilder()
    join = lhs.vertex(dg.zspider())
    lhs.wire(join, lhs.output())
    lhs.wire(join, lhs.vertex(dg.hbox(p.a)))
    lhs.wire(join, lhs.vertex(dg.hbox(p.b)))
    return lhs.build(), dg.make_generator(dg.hbox(p.a * p.b), 0, 1)


def _build_avg(p: RuleParams, ring: RingDescriptor, s2: bool):
    two = rg.two(ring)
    lhs = DiagramBuilder()
    mid = lhs.vertex(dg.zspider())
    lhs.wire(mid, lhs.output())
    box_a = lhs.vertex(dg.hbox(p.a))
    box_b = lhs.vertex(dg.hbox(p.b))
    lhs.wire(mid, box_a)
    lhs.wire(mid, box_b)
    lhs.not_edge(box_a, box_b)

    rhs = DiagramBuilder()
    mid2 = rhs.vertex(dg.zspider())
    rhs.wire(mid2, rhs.output())
    rhs.wire(mid2, rhs.vertex(dg.hbox(p.a + p.b)))
    rhs.not_edge(mid2, rhs.vertex(dg.hbox(two)))
    return lhs.build(), rhs.build()


def _intro_rhs(b: DiagramBuilder, label: RingElement) -> None:
    w1 = b.vertex(dg.zspider())
    w2 = b.vertex(dg.zspider())
    b.wire(w1, b.output())
    b.wire(w2, b.output())
    box1 = b.vertex(dg.hbox(label))
    box2 = b.vertex(dg.hbox(label))
    b.wire(box1, w1)
    b.wire(box1, w2)
    b.wire(box2, w1)
    b.not_edge(box2, w2)


def _build_intro(p: RuleParams, ring: RingDescriptor, s2: bool):
    lhs = DiagramBuilder()
    lhs.wire(lhs.vertex(dg.hbox(p.a)), lhs.output())
    lhs.wire(lhs.vertex(dg.zspider()), lhs.output())
    rhs = DiagramBuilder()
    _intro_rhs(rhs, p.a)
    return lhs.build(), rhs.build()


def _build_unit(p: RuleParams, ring: RingDescriptor, s2: bool):
    one = rg.one(ring)
    lhs = dg.make_generator(dg.hbox(one), 0, p.n)
    rhs = DiagramBuilder()
    for _ in range(p.n):
        rhs.wire(rhs.vertex(dg.zspider()), rhs.output())
    return lhs, rhs.build()


def _build_two_x(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    z = lhs.vertex(dg.zspider())
    for _ in range(p.m):
        h = ctx.had(lhs)
        lhs.wire(lhs.input(), h)
        lhs.wire(h, z)
    for _ in range(p.n):
        h = ctx.had(lhs)
        lhs.wire(z, h)
        lhs.wire(h, lhs.output())

    rhs = DiagramBuilder()
    x = rhs.vertex(dg.xspider())
    for _ in range(p.m):
        rhs.wire(rhs.input(), x)
    for _ in range(p.n):
        rhs.wire(x, rhs.output())
    rhs.vertex(dg.zspider())  # scalar 2
    return lhs.build(), rhs.build()


def _build_two_not(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    h1 = ctx.had(lhs)
    neg = lhs.vertex(dg.zspider())
    lhs.wire(neg, lhs.vertex(dg.hbox(ctx.minus_one)))
    h2 = ctx.had(lhs)
    lhs.wire(lhs.input(), h1)
    lhs.wire(h1, neg)
    lhs.wire(neg, h2)
    lhs.wire(h2, lhs.output())

    rhs = DiagramBuilder()
    x = rhs.vertex(dg.xnot())
    rhs.wire(rhs.input(), x)
    rhs.wire(x, rhs.output())
    rhs.vertex(dg.zspider())  # scalar 2
    return lhs.build(), rhs.build()


def _build_alt_o1(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    box = lhs.vertex(dg.hbox(ctx.minus_one))
    lhs.wire(box, lhs.vertex(dg.hbox(ctx.minus_one)))
    for _ in range(p.m):
        lhs.wire(box, lhs.output())

    rhs = DiagramBuilder()
    rhs.vertex(dg.zspider())  # scalar 2
    for _ in range(p.m):
        rhs.wire(rhs.vertex(dg.xnot()), rhs.output())
    return lhs.build(), rhs.build()


def _build_alt_o2(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    copy = lhs.vertex(dg.zspider())
    box = lhs.vertex(dg.hbox(ctx.minus_one))
    had = ctx.had(lhs)
    lhs.wire(lhs.input(), copy)
    lhs.wire(copy, box)
    lhs.wire(copy, box)
    lhs.wire(box, had)
    lhs.wire(had, lhs.output())
    ctx.stars(lhs)
    return lhs.build(), dg.identity(1)


def _build_avg_renaud(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    lhs.wire(lhs.vertex(dg.hbox(p.a)), lhs.output())
    hadside = ctx.had(lhs)
    lhs.wire(lhs.vertex(dg.hbox(p.b)), hadside)
    lhs.wire(hadside, lhs.output())

    rhs = DiagramBuilder()
    w1 = rhs.vertex(dg.zspider())
    w2 = rhs.vertex(dg.zspider())
    rhs.wire(w1, rhs.output())
    rhs.wire(w2, rhs.output())
    box1 = rhs.vertex(dg.hbox(p.a))
    box2 = rhs.vertex(dg.hbox(p.a))
    rhs.wire(box1, w1)
    rhs.wire(box1, w2)
    rhs.wire(box2, w1)
    rhs.not_edge(box2, w2)
    pend = ctx.had(rhs)
    rhs.wire(w2, pend)
    rhs.wire(pend, rhs.vertex(dg.hbox(p.b)))
    return lhs.build(), rhs.build()


def _build_star_zero(p: RuleParams, ring: RingDescriptor, s2: bool):
    zero = rg.zero(ring)
    lhs = DiagramBuilder()
    lhs.vertex(dg.star())
    lhs.vertex(dg.hbox(zero))
    rhs = DiagramBuilder()
    rhs.vertex(dg.hbox(zero))
    return lhs.build(), rhs.build()


# ---------------------------------------------------------------------------
# derived lemma builders


def _scalar_pair(
    build_lhs: Callable[[DiagramBuilder, _Ctx], None],
    build_rhs: Callable[[DiagramBuilder, _Ctx], None],
) -> Callable:
    def go(p: RuleParams, ring: RingDescriptor, s2: bool):
        ctx = _Ctx(ring, s2)
        lhs, rhs = DiagramBuilder(), DiagramBuilder()
        build_lhs(lhs, ctx)
        build_rhs(rhs, ctx)
        return lhs.build(), rhs.build()

    return go


def _lhs_star_dot(b: DiagramBuilder, ctx: _Ctx) -> None:
    ctx.stars(b)
    b.vertex(dg.zspider())


def _lhs_z_x(b: DiagramBuilder, ctx: _Ctx) -> None:
    b.wire(b.vertex(dg.zspider()), b.vertex(dg.xspider()))


def _lhs_x_h(b: DiagramBuilder, ctx: _Ctx) -> None:
    b.wire(b.vertex(dg.xspider()), b.vertex(dg.hbox(ctx.minus_one)))


def _lhs_h_h(b: DiagramBuilder, ctx: _Ctx) -> None:
    b.wire(b.vertex(dg.hbox(ctx.minus_one)), b.vertex(dg.hbox(ctx.minus_one)))


def _lhs_z_not(b: DiagramBuilder, ctx: _Ctx) -> None:
    b.wire(b.vertex(dg.zspider()), b.vertex(dg.xnot()))


def _lhs_not_h(b: DiagramBuilder, ctx: _Ctx) -> None:
    b.wire(b.vertex(dg.xnot()), b.vertex(dg.hbox(ctx.minus_one)))


def _rhs_empty(b: DiagramBuilder, ctx: _Ctx) -> None:
    pass


def _rhs_dot(b: DiagramBuilder, ctx: _Ctx) -> None:
    b.vertex(dg.zspider())


def _rhs_minus_one(b: DiagramBuilder, ctx: _Ctx) -> None:
    b.vertex(dg.hbox(ctx.minus_one))


def _build_negate_direct(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    z = lhs.vertex(dg.zspider())
    lhs.wire(z, lhs.output())
    lhs.wire(z, lhs.vertex(dg.hbox(ctx.minus_one)))
    return lhs.build(), dg.make_generator(dg.hbox(ctx.minus_one), 0, 1)


def _build_x_fuse(p: RuleParams, ring: RingDescriptor, s2: bool):
    lhs = DiagramBuilder()
    u = lhs.vertex(dg.xspider())
    v = lhs.vertex(dg.xspider())
    for _ in range(p.m):
        lhs.wire(lhs.input(), u)
    lhs.wire(u, v)
    for _ in range(p.n):
        lhs.wire(v, lhs.output())
    return lhs.build(), dg.make_generator(dg.xspider(), p.m, p.n)


def _build_x_special(p: RuleParams, ring: RingDescriptor, s2: bool):
    return dg.make_generator(dg.xspider(), 1, 1), dg.identity(1)


def _build_xnots_cancel(p: RuleParams, ring: RingDescriptor, s2: bool):
    lhs = DiagramBuilder()
    u, v = lhs.vertex(dg.xnot()), lhs.vertex(dg.xnot())
    lhs.wire(lhs.input(), u)
    lhs.wire(u, v)
    lhs.wire(v, lhs.output())
    return lhs.build(), dg.identity(1)


def _build_x_with_xnot(p: RuleParams, ring: RingDescriptor, s2: bool):
    def side(not_on_first: bool) -> Diagram:
        b = DiagramBuilder()
        x = b.vertex(dg.xspider())
        b.wire(b.input(), x)
        if not_on_first:
            b.not_edge(x, b.output())
            b.wire(x, b.output())
        else:
            b.wire(x, b.output())
            b.not_edge(x, b.output())
        return b.build()

    return side(True), side(False)


def _negate_chain(b: DiagramBuilder, ctx: _Ctx, src: Endpoint) -> Endpoint:
    z = b.vertex(dg.zspider())
    b.wire(src, z)
    b.wire(z, b.vertex(dg.hbox(ctx.minus_one)))
    return z


def _build_znots_cancel(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    z1 = _negate_chain(lhs, ctx, lhs.input())
    z2 = _negate_chain(lhs, ctx, z1)
    lhs.wire(z2, lhs.output())
    return lhs.build(), dg.identity(1)


def _build_h_z_commute(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    z = _negate_chain(lhs, ctx, lhs.input())
    h = ctx.had(lhs)
    lhs.wire(z, h)
    lhs.wire(h, lhs.output())

    rhs = DiagramBuilder()
    h2 = ctx.had(rhs)
    x = rhs.vertex(dg.xnot())
    rhs.wire(rhs.input(), h2)
    rhs.wire(h2, x)
    rhs.wire(x, rhs.output())
    return lhs.build(), rhs.build()


def _build_h_x_commute(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    x = lhs.vertex(dg.xnot())
    h = ctx.had(lhs)
    lhs.wire(lhs.input(), x)
    lhs.wire(x, h)
    lhs.wire(h, lhs.output())

    rhs = DiagramBuilder()
    h2 = ctx.had(rhs)
    rhs.wire(rhs.input(), h2)
    z = _negate_chain(rhs, ctx, h2)
    rhs.wire(z, rhs.output())
    return lhs.build(), rhs.build()


def _build_h_not_commute(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    h1, h2 = ctx.had(lhs), ctx.had(lhs)
    x = lhs.vertex(dg.xnot())
    lhs.wire(lhs.input(), h1)
    lhs.wire(h1, x)
    lhs.wire(x, h2)
    lhs.wire(h2, lhs.output())

    rhs = DiagramBuilder()
    z = _negate_chain(rhs, ctx, rhs.input())
    rhs.wire(z, rhs.output())
    rhs.vertex(dg.zspider())  # scalar 2
    return lhs.build(), rhs.build()


def _cz_fragment(b: DiagramBuilder, ctx: _Ctx, w0: Endpoint, w1: Endpoint):
    z0 = b.vertex(dg.zspider())
    z1 = b.vertex(dg.zspider())
    b.wire(w0, z0)
    b.wire(w1, z1)
    box = b.vertex(dg.hbox(ctx.minus_one))
    b.wire(z0, box)
    b.wire(z1, box)
    return z0, z1


def _build_cz_correct(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    a0, a1 = _cz_fragment(lhs, ctx, lhs.input(), lhs.input())
    b0, b1 = _cz_fragment(lhs, ctx, a0, a1)
    lhs.wire(b0, lhs.output())
    lhs.wire(b1, lhs.output())
    return lhs.build(), dg.identity(2)


def _build_not_commute(p: RuleParams, ring: RingDescriptor, s2: bool):
    lhs = DiagramBuilder()
    x = lhs.vertex(dg.xnot())
    z = lhs.vertex(dg.zspider())
    lhs.wire(lhs.input(), x)
    lhs.wire(x, z)
    for _ in range(p.n):
        lhs.wire(z, lhs.output())

    rhs = DiagramBuilder()
    z2 = rhs.vertex(dg.zspider())
    rhs.wire(rhs.input(), z2)
    for _ in range(p.n):
        rhs.not_edge(z2, rhs.output())
    return lhs.build(), rhs.build()


def _build_z_commute(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    neg = _negate_chain(lhs, ctx, lhs.input())
    z = lhs.vertex(dg.zspider())
    lhs.wire(neg, z)
    for _ in range(p.n):
        lhs.wire(z, lhs.output())

    rhs = DiagramBuilder()
    z2 = rhs.vertex(dg.zspider())
    rhs.wire(rhs.input(), z2)
    if p.n == 0:
        # with no outputs the negate lands on the spider itself
        rhs.wire(z2, rhs.vertex(dg.hbox(ctx.minus_one)))
    else:
        neg2 = _negate_chain(rhs, ctx, z2)
        rhs.wire(neg2, rhs.output())
        for _ in range(p.n - 1):
            rhs.wire(z2, rhs.output())
    return lhs.build(), rhs.build()


def _copy_through(state_kind: str, through: str):
    """A one-legged state copies through a spider onto all n outputs."""

    def make_state(b: DiagramBuilder, ctx: _Ctx) -> Endpoint:
        if state_kind == "x":
            return b.vertex(dg.xspider())
        if state_kind == "xnot":
            return b.vertex(dg.xnot())
        if state_kind == "z":
            return b.vertex(dg.zspider())
        return b.vertex(dg.hbox(ctx.minus_one))

    def go(p: RuleParams, ring: RingDescriptor, s2: bool):
        ctx = _Ctx(ring, s2)
        lhs = DiagramBuilder()
        st = make_state(lhs, ctx)
        spider = lhs.vertex(dg.zspider() if through == "z" else dg.xspider())
        lhs.wire(st, spider)
        for _ in range(p.n):
            lhs.wire(spider, lhs.output())

        rhs = DiagramBuilder()
        for _ in range(p.n):
            rhs.wire(make_state(rhs, ctx), rhs.output())
        return lhs.build(), rhs.build()

    return go


def _build_white_not_cancel(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    z = lhs.vertex(dg.zspider())
    lhs.wire(lhs.input(), z)
    lhs.wire(z, lhs.output())
    lhs.wire(z, lhs.vertex(dg.hbox(ctx.minus_one)))
    lhs.wire(z, lhs.vertex(dg.hbox(ctx.minus_one)))
    return lhs.build(), dg.identity(1)


def _pinned_hbox(pin_kind: str):
    """An H-box with one leg fed by a one-legged state."""

    def go(p: RuleParams, ring: RingDescriptor, s2: bool):
        ctx = _Ctx(ring, s2)
        lhs = DiagramBuilder()
        box = lhs.vertex(dg.hbox(ctx.minus_one))
        if pin_kind == "x":
            lhs.wire(box, lhs.vertex(dg.xspider()))
        elif pin_kind == "xnot":
            lhs.wire(box, lhs.vertex(dg.xnot()))
        else:
            lhs.wire(box, lhs.vertex(dg.hbox(ctx.minus_one)))
        for _ in range(p.m):
            lhs.wire(box, lhs.output())

        rhs = DiagramBuilder()
        if pin_kind == "x":
            # |0> into a leg: the box dissolves into white units
            for _ in range(p.m):
                rhs.wire(rhs.vertex(dg.zspider()), rhs.output())
        elif pin_kind == "xnot":
            # |1> into a leg: the box drops one leg
            box2 = rhs.vertex(dg.hbox(ctx.minus_one))
            for _ in range(p.m):
                rhs.wire(box2, rhs.output())
        else:
            # a minus state: post-selects every other leg to 1
            rhs.vertex(dg.zspider())  # scalar 2
            for _ in range(p.m):
                rhs.wire(rhs.vertex(dg.xnot()), rhs.output())
        return lhs.build(), rhs.build()

    return go


def _build_x_z_commute(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    neg = _negate_chain(lhs, ctx, lhs.input())
    x = lhs.vertex(dg.xspider())
    lhs.wire(neg, x)
    lhs.wire(x, lhs.output())
    lhs.wire(x, lhs.output())

    rhs = DiagramBuilder()
    x2 = rhs.vertex(dg.xspider())
    rhs.wire(rhs.input(), x2)
    for _ in range(2):
        neg2 = _negate_chain(rhs, ctx, x2)
        rhs.wire(neg2, rhs.output())
    return lhs.build(), rhs.build()


def _build_hopf(p: RuleParams, ring: RingDescriptor, s2: bool):
    lhs = DiagramBuilder()
    z = lhs.vertex(dg.zspider())
    x = lhs.vertex(dg.xspider())
    lhs.wire(lhs.input(), z)
    lhs.wire(z, x)
    lhs.wire(z, x)
    lhs.wire(x, lhs.output())

    rhs = DiagramBuilder()
    rhs.wire(rhs.input(), rhs.vertex(dg.zspider()))
    rhs.wire(rhs.vertex(dg.xspider()), rhs.output())
    return lhs.build(), rhs.build()


def _build_scalar_xh_gen(p: RuleParams, ring: RingDescriptor, s2: bool):
    lhs = DiagramBuilder()
    lhs.wire(lhs.vertex(dg.xspider()), lhs.vertex(dg.hbox(p.a)))
    return lhs.build(), dg.empty()


def _build_scalar_two(p: RuleParams, ring: RingDescriptor, s2: bool):
    lhs = DiagramBuilder()
    lhs.vertex(dg.zspider())
    rhs = DiagramBuilder()
    rhs.vertex(dg.hbox(rg.two(ring)))
    return lhs.build(), rhs.build()


def _build_scalar_cancel_two(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    ctx.stars(lhs)
    lhs.vertex(dg.hbox(rg.two(ring)))
    return lhs.build(), dg.empty()


def _build_successor(p: RuleParams, ring: RingDescriptor, s2: bool):
    zero = rg.zero(ring)
    lhs = DiagramBuilder()
    src = lhs.vertex(dg.hbox(p.a))
    gate = lhs.vertex(dg.hbox(zero))
    lhs.wire(src, gate)
    lhs.not_edge(gate, lhs.output())
    rhs = dg.make_generator(dg.hbox(p.a + rg.one(ring)), 0, 1)
    return lhs.build(), rhs


def _build_negation(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    src = lhs.vertex(dg.hbox(p.a))
    neg = _negate_chain(lhs, ctx, src)
    lhs.wire(neg, lhs.output())
    return lhs.build(), dg.make_generator(dg.hbox(-p.a), 0, 1)


def _build_mult_bb(p: RuleParams, ring: RingDescriptor, s2: bool):
    lhs = DiagramBuilder()
    box_a = lhs.vertex(dg.hbox(p.a))
    box_b = lhs.vertex(dg.hbox(p.b))
    for _ in range(p.m):
        w = lhs.vertex(dg.zspider())
        lhs.wire(w, lhs.output())
        lhs.wire(w, box_a)
        lhs.wire(w, box_b)

    rhs = DiagramBuilder()
    box = rhs.vertex(dg.hbox(p.a * p.b))
    for _ in range(p.m):
        w = rhs.vertex(dg.zspider())
        rhs.wire(w, rhs.output())
        rhs.wire(w, box)
    return lhs.build(), rhs.build()


def _build_addition(p: RuleParams, ring: RingDescriptor, s2: bool):
    zero = rg.zero(ring)
    lhs = DiagramBuilder()
    ca = lhs.vertex(dg.zspider())
    cb = lhs.vertex(dg.zspider())
    lhs.wire(lhs.vertex(dg.hbox(p.a)), ca)
    lhs.wire(lhs.vertex(dg.hbox(p.b)), cb)
    x = lhs.vertex(dg.xspider())
    lhs.wire(ca, x)
    lhs.wire(cb, x)
    lhs.wire(x, lhs.output())
    guard = lhs.vertex(dg.hbox(zero))
    lhs.wire(ca, guard)
    lhs.wire(cb, guard)
    return lhs.build(), dg.make_generator(dg.hbox(p.a + p.b), 0, 1)


def _build_average_true_form(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    mid = lhs.vertex(dg.zspider())
    lhs.wire(mid, lhs.output())
    box_a = lhs.vertex(dg.hbox(p.a))
    box_b = lhs.vertex(dg.hbox(p.b))
    lhs.wire(mid, box_a)
    lhs.wire(mid, box_b)
    lhs.not_edge(box_a, box_b)
    ctx.stars(lhs)
    avg = rg.halve(p.a + p.b)
    if avg is None:
        raise ParamError("average form needs a ring with a half")
    return lhs.build(), dg.make_generator(dg.hbox(avg), 0, 1)


def _build_intro_bb(p: RuleParams, ring: RingDescriptor, s2: bool):
    # n fresh wires at once: the H-box fans out into 2^n copies, one per
    # NOT-edge pattern against the new spiders
    lhs = DiagramBuilder()
    lhs.wire(lhs.vertex(dg.hbox(p.a)), lhs.output())
    for _ in range(p.n):
        lhs.wire(lhs.vertex(dg.zspider()), lhs.output())

    rhs = DiagramBuilder()
    w0 = rhs.vertex(dg.zspider())
    rhs.wire(w0, rhs.output())
    fresh = []
    for _ in range(p.n):
        w = rhs.vertex(dg.zspider())
        rhs.wire(w, rhs.output())
        fresh.append(w)
    for pattern in range(1 << p.n):
        box = rhs.vertex(dg.hbox(p.a))
        rhs.wire(box, w0)
        for i, w in enumerate(fresh):
            if (pattern >> (p.n - 1 - i)) & 1:
                rhs.wire(box, w)
            else:
                rhs.not_edge(box, w)
    return lhs.build(), rhs.build()


def _build_star_is_half(p: RuleParams, ring: RingDescriptor, s2: bool):
    ctx = _Ctx(ring, s2)
    lhs = DiagramBuilder()
    ctx.stars(lhs)
    rhs = DiagramBuilder()
    rhs.vertex(dg.hbox(rg.half(ring)))
    return lhs.build(), rhs.build()


def _build_two_cancel(p: RuleParams, ring: RingDescriptor, s2: bool):
    lhs = DiagramBuilder()
    lhs.vertex(dg.hbox(rg.two(ring)))
    lhs.vertex(dg.hbox(rg.half(ring)))
    return lhs.build(), dg.empty()


def _build_zero_is_grey(p: RuleParams, ring: RingDescriptor, s2: bool):
    lhs = dg.make_generator(dg.hbox(rg.zero(ring)), 0, 1)
    rhs = dg.make_generator(dg.xspider(), 0, 1)
    return lhs, rhs


_CATALOG: List[RuleSchema] = []


def _add(
    name: str,
    description: str,
    tags: Sequence[str],
    uses: Sequence[str],
    build: Callable,
    needs_half: bool = False,
    uses_star: bool = False,
) -> None:
    _CATALOG.append(
        RuleSchema(
            name,
            description,
            frozenset(tags),
            frozenset(uses),
            build,
            needs_half,
            uses_star,
        )
    )


_add("zs", "connected Z-spiders fuse", ["core", "zh_r"], ["m", "n"], _build_zs)
_add("id", "a 2-legged Z-spider is a plain wire", ["core", "zh_r"], [], _build_id)
_add(
    "hs",
    "H-boxes fuse through a Hadamard box, shedding a scalar 2",
    ["core", "zh_r"],
    ["m", "n", "a"],
    _build_hs,
)
_add("hh", "two chained Hadamard boxes are a wire times 2", ["core", "zh_r"], [], _build_hh)
_add(
    "ba1",
    "X-then-copy equals the complete bipartite copy-then-XOR",
    ["core", "zh_r"],
    ["m", "n"],
    _build_ba1,
)
_add(
    "ba2",
    "H-box-then-XOR equals the complete bipartite copy-then-H-box",
    ["core", "zh_r"],
    ["m", "n"],
    _build_ba2,
)
_add(
    "m",
    "a Hadamard-conjugated X-spider with a star is a plain wire",
    ["core"],
    [],
    _build_m,
    uses_star=True,
)
_add(
    "o",
    "H-boxes sharing a complementary copied input disconnect",
    ["core", "zh_r"],
    ["m", "n"],
    _build_o,
)
_add("M", "multiply: joined H-box labels multiply", ["zh_r"], ["a", "b"], _build_mult)
_add(
    "A",
    "average: joined complementary H-boxes sum their labels beside a NOT-2 box",
    ["zh_r"],
    ["a", "b"],
    _build_avg,
)
_add(
    "I",
    "intro: an H-box absorbs a fresh wire by doubling into a NOT-twisted pair",
    ["zh_r"],
    ["a"],
    _build_intro,
)
_add("U", "unit: the 1-labelled H-box splits into white units", ["zh_r"], ["n"], _build_unit)
_add(
    "twoX",
    "Hadamards around a Z-spider give the X-spider scaled by 2",
    ["zh_r"],
    ["m", "n"],
    _build_two_x,
)
_add(
    "twoNot",
    "Hadamard-conjugated white negate gives the NOT scaled by 2",
    ["zh_r"],
    [],
    _build_two_not,
)
_add(
    "altO1",
    "a minus state into an H-box post-selects the other legs",
    ["alt_ortho"],
    ["m"],
    _build_alt_o1,
)
_add(
    "altO2",
    "copy then AND then Hadamard is the identity (with a star)",
    ["alt_ortho"],
    [],
    _build_alt_o2,
    uses_star=True,
)
_add(
    "avgRenaud",
    "merged intro/average: a Hadamard-twisted pair of labels",
    ["merged"],
    ["a", "b"],
    _build_avg_renaud,
)
_add(
    "starZero",
    "a star beside the zero scalar cancels",
    ["sqrt2"],
    [],
    _build_star_zero,
    uses_star=True,
)

_add(
    "lemma.scalarcancelstars",
    "star times the scalar 2 cancels",
    ["derived"],
    [],
    _scalar_pair(_lhs_star_dot, _rhs_empty),
    uses_star=True,
)
_add(
    "lemma.scalarcancelzx",
    "white unit against grey effect is 1",
    ["derived"],
    [],
    _scalar_pair(_lhs_z_x, _rhs_empty),
)
_add(
    "lemma.scalarcancelxh",
    "grey unit against an H-box effect is 1",
    ["derived"],
    [],
    _scalar_pair(_lhs_x_h, _rhs_empty),
)
_add(
    "lemma.scalarcancelhh",
    "a closed H-H loop is the scalar 2",
    ["derived"],
    [],
    _scalar_pair(_lhs_h_h, _rhs_dot),
)
_add(
    "lemma.scalarcancelznot",
    "white unit against a NOT effect is 1",
    ["derived"],
    [],
    _scalar_pair(_lhs_z_not, _rhs_empty),
)
_add(
    "lemma.xnothreduce",
    "NOT state against an H-box effect is -1",
    ["derived"],
    [],
    _scalar_pair(_lhs_not_h, _rhs_minus_one),
)
_add(
    "lemma.negatedirect",
    "the white negate state is the minus state",
    ["derived"],
    [],
    _build_negate_direct,
)
_add("lemma.xspider", "connected X-spiders fuse", ["derived"], ["m", "n"], _build_x_fuse)
_add("lemma.xspecial", "a 2-legged X-spider is a wire", ["derived"], [], _build_x_special)
_add("lemma.xnotscancel", "two NOTs cancel", ["derived"], [], _build_xnots_cancel)
_add(
    "lemma.xwithxnot",
    "a NOT slides across an X-spider",
    ["derived"],
    [],
    _build_x_with_xnot,
)
_add("lemma.znotscancel", "two white negates cancel", ["derived"], [], _build_znots_cancel)
_add(
    "lemma.hzcommute",
    "Hadamard exchanges white negate for NOT",
    ["derived"],
    [],
    _build_h_z_commute,
)
_add(
    "lemma.hxcommute",
    "Hadamard exchanges NOT for white negate",
    ["derived"],
    [],
    _build_h_x_commute,
)
_add(
    "lemma.hnotcommute",
    "conjugating a NOT by Hadamards gives the white negate times 2",
    ["derived"],
    [],
    _build_h_not_commute,
)
_add("lemma.czcorrect", "the H-box CZ squares to the identity", ["derived"], [], _build_cz_correct)
_add(
    "lemma.notcommute",
    "a NOT copies through a Z-spider onto every leg",
    ["derived"],
    ["n"],
    _build_not_commute,
)
_add(
    "lemma.zcommute",
    "a white negate slides through a Z-spider onto one leg",
    ["derived"],
    ["n"],
    _build_z_commute,
)
_add(
    "lemma.copyxz",
    "the grey unit copies through Z-spiders",
    ["derived"],
    ["n"],
    _copy_through("x", "z"),
)
_add(
    "lemma.copyxnotz",
    "the NOT state copies through Z-spiders",
    ["derived"],
    ["n"],
    _copy_through("xnot", "z"),
)
_add(
    "lemma.copyzx",
    "the white unit copies through X-spiders",
    ["derived"],
    ["n"],
    _copy_through("z", "x"),
)
_add(
    "lemma.copyznotx",
    "the minus state copies through X-spiders",
    ["derived"],
    ["n"],
    _copy_through("h", "x"),
)
_add(
    "lemma.whitenotcancel",
    "two pendant minus boxes on a Z-spider cancel",
    ["derived"],
    [],
    _build_white_not_cancel,
)
_add(
    "lemma.copyxh",
    "the grey unit dissolves an H-box into white units",
    ["derived"],
    ["m"],
    _pinned_hbox("x"),
)
_add(
    "lemma.copyxnoth",
    "the NOT state strips one H-box leg",
    ["derived"],
    ["m"],
    _pinned_hbox("xnot"),
)
_add(
    "lemma.copyznoth",
    "the minus state post-selects the other H-box legs",
    ["derived"],
    ["m"],
    _pinned_hbox("h"),
)
_add(
    "lemma.xzcommute",
    "a white negate copies through an X-spider onto both legs",
    ["derived"],
    [],
    _build_x_z_commute,
)
_add(
    "lemma.hopf",
    "doubly-connected Z and X spiders disconnect",
    ["derived"],
    [],
    _build_hopf,
)
_add(
    "lemma.scalarcancelxhgen",
    "grey unit against any labelled H-box effect is 1",
    ["derived"],
    ["a"],
    _build_scalar_xh_gen,
)
_add(
    "lemma.scalar2",
    "the scalar white dot is the 2-labelled H-box",
    ["derived"],
    [],
    _build_scalar_two,
)
_add(
    "lemma.scalarcancel2",
    "star times the 2-labelled H-box cancels",
    ["derived"],
    [],
    _build_scalar_cancel_two,
    uses_star=True,
)
_add(
    "lemma.successor",
    "the successor gadget increments an H-box label",
    ["derived"],
    ["a"],
    _build_successor,
)
_add(
    "lemma.negation",
    "the white negate flips an H-box label's sign",
    ["derived"],
    ["a"],
    _build_negation,
)
_add(
    "lemma.multbb",
    "H-boxes on the same spiders fuse with labels multiplying",
    ["derived"],
    ["m", "a", "b"],
    _build_mult_bb,
)
_add(
    "lemma.addition",
    "the addition gadget sums H-box labels",
    ["derived"],
    ["a", "b"],
    _build_addition,
)
_add(
    "lemma.averagetrueform",
    "with a half, the average pair is the half-sum H-box",
    ["derived"],
    ["a", "b"],
    _build_average_true_form,
    needs_half=True,
    uses_star=True,
)
_add(
    "lemma.introbb",
    "an H-box absorbs n fresh wires by fanning into 2^n NOT-edge patterns",
    ["derived"],
    ["n", "a"],
    _build_intro_bb,
)
_add(
    "lemma.starishalf",
    "the star equals the half-labelled scalar H-box",
    ["derived"],
    [],
    _build_star_is_half,
    needs_half=True,
    uses_star=True,
)
_add(
    "lemma.twocancel",
    "the 2- and half-labelled scalar H-boxes cancel",
    ["derived"],
    [],
    _build_two_cancel,
    needs_half=True,
)
_add(
    "lemma.zeroisgrey",
    "the 0-labelled H-box state is the grey unit",
    ["derived"],
    [],
    _build_zero_is_grey,
)


def catalog(ruleset: Optional[str] = None) -> List[RuleSchema]:
    """The rule schemas, optionally filtered by ruleset tag."""
    if ruleset is None:
        return list(_CATALOG)
    known = {t for s in _CATALOG for t in s.tags}
    if ruleset not in known:
        raise RuleError(f"unknown ruleset {ruleset!r} (have {sorted(known)})")
    return [s for s in _CATALOG if ruleset in s.tags]


def schema(name: str) -> RuleSchema:
    for s in _CATALOG:
        if s.name == name:
            return s
    raise RuleError(f"no rule named {name!r}")


def instantiate(
    name: str,
    params: RuleParams,
    ring: RingDescriptor = rg.DYADIC_RING,
    sqrt2_star: bool = False,
    arity_cap: int = DEFAULT_ARITY_CAP,
) -> Tuple[Diagram, Diagram]:
    """Produce the concrete (lhs, rhs) pair of a schema at given parameters."""
    s = schema(name)
    for arity_field in ("m", "n"):
        value = getattr(params, arity_field)
        if arity_field in s.uses:
            if not 0 <= value <= arity_cap:
                raise ParamError(
                    f"{name}: {arity_field}={value} outside [0, {arity_cap}]"
                )
    for label_field in ("a", "b"):
        value = getattr(params, label_field)
        if label_field in s.uses:
            if value is None:
                raise ParamError(f"{name} needs label {label_field}")
            if value.ring != ring:
                raise ParamError(f"{name}: label {label_field} not in ring {ring}")
    if s.needs_half and not ring.has_half:
        raise ParamError(f"{name} needs a ring with a half")
    if s.uses_star and not ring.has_half and not sqrt2_star:
        raise ParamError(f"{name} mentions the star, absent over {ring}")
    lhs, rhs = s.build(params, ring, sqrt2_star)
    if lhs.n_inputs != rhs.n_inputs or lhs.n_outputs != rhs.n_outputs:
        raise RuleError(f"{name}: sides disagree on boundaries")
    return lhs, rhs


def check_sound(
    name: str,
    params: RuleParams,
    ring: RingDescriptor = rg.DYADIC_RING,
    sqrt2_star: bool = False,
) -> bool:
    """Whether both sides of the instantiated rule interpret identically."""
    lhs, rhs = instantiate(name, params, ring, sqrt2_star)
    return sm.interpret(lhs, ring, sqrt2_star).entries == sm.interpret(
        rhs, ring, sqrt2_star
    ).entries


def sweep_params(
    s: RuleSchema,
    ring: RingDescriptor,
    max_arity: int = 3,
    labels: Sequence[int] = (-2, -1, 0, 1, 2),
) -> List[RuleParams]:
    """The grid of parameter tuples a soundness sweep visits."""
    arities = range(max_arity + 1)
    ms = arities if "m" in s.uses else [0]
    ns = arities if "n" in s.uses else [0]
    elems = [rg.from_integer(v, ring) for v in labels]
    as_ = elems if "a" in s.uses else [None]
    bs = elems if "b" in s.uses else [None]
    return [
        RuleParams(m, n, a, b)
        for m, n, a, b in itertools.product(ms, ns, as_, bs)
    ]


@dataclass
class SoundnessReport:
    name: str
    instances: int
    failures: List[RuleParams] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def run_soundness(
    ruleset: str,
    ring: RingDescriptor = rg.DYADIC_RING,
    sqrt2_star: bool = False,
    max_arity: int = 3,
    labels: Sequence[int] = (-2, -1, 0, 1, 2),
    schemas: Optional[List[RuleSchema]] = None,
    max_instances: int = 1024,
    seed: int = 0,
) -> List[SoundnessReport]:
    """Sweep a whole ruleset and report per-rule pass/fail.

    A rule whose parameter grid exceeds ``max_instances`` is subsampled
    with the given seed instead of swept exhaustively."""
    import random as _random

    rng = _random.Random(seed)
    reports = []
    for s in schemas if schemas is not None else catalog(ruleset):
        unavailable = (s.needs_half or s.uses_star) and not ring.has_half
        if unavailable and not sqrt2_star:
            reports.append(SoundnessReport(s.name, 0))
            continue
        rep = SoundnessReport(s.name, 0)
        grid = sweep_params(s, ring, max_arity, labels)
        if len(grid) > max_instances:
            grid = rng.sample(grid, max_instances)
        for params in grid:
            rep.instances += 1
            lhs, rhs = s.build(params, ring, sqrt2_star)
            if (
                sm.interpret(lhs, ring, sqrt2_star).entries
                != sm.interpret(rhs, ring, sqrt2_star).entries
            ):
                rep.failures.append(params)
        reports.append(rep)
    return reports


# ---------------------------------------------------------------------------
# matching and rewriting


@dataclass(frozen=True)
class MatchSite:
    """An embedding of an instantiated lhs into a host diagram.

    ``vertex_map`` sends lhs vertex ids to host vertex ids; ``wire_map``
    sends lhs wire indices to host wire indices; ``cuts`` sends each lhs
    boundary slot id to the host endpoint that survives the rewrite and
    will be glued to the corresponding rhs slot.
    """

    vertex_map: Tuple[Tuple[int, int], ...]
    wire_map: Tuple[Tuple[int, int], ...]
    cuts: Tuple[Tuple[int, Endpoint], ...]

    def canonical_key(self):
        return (
            frozenset(h for _, h in self.vertex_map),
            frozenset(h for _, h in self.wire_map),
        )


def find_matches(
    host: Diagram,
    name: str,
    params: RuleParams,
    ring: RingDescriptor = rg.DYADIC_RING,
    sqrt2_star: bool = False,
    vertex_cap: int = DEFAULT_MATCH_VERTEX_CAP,
    reverse: bool = False,
) -> List[MatchSite]:
    """All boundary-compatible embeddings of the rule's lhs into the host,
    deduplicated modulo automorphisms of the lhs (matches touching the
    same host vertices and wires count once). With ``reverse`` the rhs is
    matched instead, for right-to-left rewriting."""
    lhs, rhs = instantiate(name, params, ring, sqrt2_star)
    if reverse:
        lhs = rhs
    if len(lhs.vertices) > vertex_cap:
        raise MatchError(
            f"lhs of {name} has {len(lhs.vertices)} vertices, cap is {vertex_cap}"
        )
    return _match_lhs(lhs, host)


def _match_lhs(lhs: Diagram, host: Diagram) -> List[MatchSite]:
    host_kinds = host.vertex_map()
    lhs_kinds = lhs.vertex_map()

    host_deg = {vid: host.degree(vid) for vid in host_kinds}
    lhs_deg = {vid: lhs.degree(vid) for vid in lhs_kinds}

    # classify lhs wires relative to vertices/boundary
    internal: Dict[Tuple[int, int], int] = {}  # vertex pair -> count
    self_loops: Dict[int, int] = {}
    half_bound: Dict[int, List[Tuple[int, int]]] = {}  # vertex -> [(wire, slot)]
    bare: List[Tuple[int, int, int]] = []  # (wire idx, slot, slot)
    for widx, (a, b) in enumerate(lhs.wires):
        if a[0] == "v" and b[0] == "v":
            if a[1] == b[1]:
                self_loops[a[1]] = self_loops.get(a[1], 0) + 1
            else:
                key = (min(a[1], b[1]), max(a[1], b[1]))
                internal[key] = internal.get(key, 0) + 1
        elif a[0] == "v":
            half_bound.setdefault(a[1], []).append((widx, b[1]))
        elif b[0] == "v":
            half_bound.setdefault(b[1], []).append((widx, a[1]))
        else:
            bare.append((widx, a[1], b[1]))

    # host adjacency by wire index
    host_pair: Dict[Tuple[int, int], List[int]] = {}
    host_self: Dict[int, List[int]] = {}
    host_incident: Dict[int, List[int]] = {vid: [] for vid in host_kinds}
    for widx, (a, b) in enumerate(host.wires):
        if a[0] == "v" and b[0] == "v":
            if a[1] == b[1]:
                host_self.setdefault(a[1], []).append(widx)
                host_incident[a[1]].append(widx)
            else:
                key = (min(a[1], b[1]), max(a[1], b[1]))
                host_pair.setdefault(key, []).append(widx)
                host_incident[a[1]].append(widx)
                host_incident[b[1]].append(widx)
        else:
            for tag, ident in (a, b):
                if tag == "v":
                    host_incident[ident].append(widx)

    lhs_vids = sorted(lhs_kinds, key=lambda v: -lhs_deg[v])
    candidates = {
        v: [
            h
            for h in host_kinds
            if host_kinds[h] == lhs_kinds[v] and host_deg[h] == lhs_deg[v]
        ]
        for v in lhs_vids
    }

    sites: List[MatchSite] = []
    seen_keys = set()

    def complete(vmap: Dict[int, int]) -> None:
        consumed: Dict[int, bool] = {}
        cuts: Dict[int, Endpoint] = {}

        # internal wires: counts must agree exactly between matched pairs
        matched_imgs = set(vmap.values())
        for (u, v), count in internal.items():
            key = (min(vmap[u], vmap[v]), max(vmap[u], vmap[v]))
            avail = host_pair.get(key, [])
            if len(avail) != count:
                return
        for u, count in self_loops.items():
            if len(host_self.get(vmap[u], [])) != count:
                return
        # also reject extra host parallels between matched images that the
        # lhs does not mention
        for (hu, hv), wires_ in host_pair.items():
            if hu in matched_imgs and hv in matched_imgs:
                lhs_count = 0
                inv = {h: l for l, h in vmap.items()}
                key = (min(inv[hu], inv[hv]), max(inv[hu], inv[hv]))
                lhs_count = internal.get(key, 0)
                if len(wires_) != lhs_count:
                    return
        for hvid, loops_ in host_self.items():
            if hvid in matched_imgs:
                inv = {h: l for l, h in vmap.items()}
                if len(loops_) != self_loops.get(inv[hvid], 0):
                    return

        lhs_wire_to_host: Dict[int, int] = {}
        for widx, (a, b) in enumerate(lhs.wires):
            if a[0] == "v" and b[0] == "v":
                if a[1] == b[1]:
                    pool = host_self[vmap[a[1]]]
                else:
                    key = (
                        min(vmap[a[1]], vmap[b[1]]),
                        max(vmap[a[1]], vmap[b[1]]),
                    )
                    pool = host_pair[key]
                for hw in pool:
                    if not consumed.get(hw):
                        consumed[hw] = True
                        lhs_wire_to_host[widx] = hw
                        break

        # boundary wires: the leftover host wires at each image must line
        # up one-to-one, cutting at unmatched far ends
        for u, legs in half_bound.items():
            hu = vmap[u]
            free = [
                hw
                for hw in host_incident[hu]
                if not consumed.get(hw)
            ]
            if len(free) != len(legs):
                return
            for (lw, slot), hw in zip(legs, sorted(free)):
                wa, wb = host.wires[hw]
                far = wb if wa == ("v", hu) else wa
                if far[0] == "v" and far[1] in matched_imgs:
                    return
                consumed[hw] = True
                lhs_wire_to_host[lw] = hw
                cuts[slot] = far

        # bare lhs wires match any still-unconsumed host wire
        remaining = [
            hw for hw in range(len(host.wires)) if not consumed.get(hw)
        ]
        if len(bare) > len(remaining):
            return

        def place_bare(i: int) -> None:
            if i == len(bare):
                site = MatchSite(
                    tuple(sorted(vmap.items())),
                    tuple(sorted(lhs_wire_to_host.items())),
                    tuple(sorted(cuts.items())),
                )
                key = site.canonical_key()
                if key not in seen_keys:
                    seen_keys.add(key)
                    sites.append(site)
                return
            widx, s1, s2 = bare[i]
            for hw in remaining:
                if consumed.get(hw):
                    continue
                consumed[hw] = True
                lhs_wire_to_host[widx] = hw
                wa, wb = host.wires[hw]
                cuts[s1], cuts[s2] = wa, wb
                place_bare(i + 1)
                del cuts[s1], cuts[s2]
                del lhs_wire_to_host[widx]
                consumed[hw] = False

        place_bare(0)

    def assign(i: int, vmap: Dict[int, int], used: set) -> None:
        if i == len(lhs_vids):
            complete(dict(vmap))
            return
        v = lhs_vids[i]
        for h in candidates[v]:
            if h in used:
                continue
            vmap[v] = h
            used.add(h)
            assign(i + 1, vmap, used)
            used.discard(h)
            del vmap[v]

    assign(0, {}, set())
    return sites


def apply(
    host: Diagram,
    name: str,
    params: RuleParams,
    site: MatchSite,
    ring: RingDescriptor = rg.DYADIC_RING,
    sqrt2_star: bool = False,
    reverse: bool = False,
) -> Diagram:
    """Rewrite the host at the matched site: cut out the lhs image, glue
    in the rhs along the boundary. The interpretation is unchanged for a
    sound rule."""
    lhs, rhs = instantiate(name, params, ring, sqrt2_star)
    if reverse:
        lhs, rhs = rhs, lhs
    vmap = dict(site.vertex_map)
    wmap = dict(site.wire_map)
    cuts = dict(site.cuts)

    host_kinds = host.vertex_map()
    lhs_kinds = lhs.vertex_map()
    for lv, hv in vmap.items():
        if lv not in lhs_kinds or hv not in host_kinds:
            raise MatchError("site references unknown vertices")
        if lhs_kinds[lv] != host_kinds[hv]:
            raise MatchError("site maps a vertex onto a different kind")
    if set(wmap.keys()) != set(range(len(lhs.wires))):
        raise MatchError("site does not cover the lhs wires")

    removed_vertices = set(vmap.values())
    removed_wires = set(wmap.values())

    keep_vertices = [
        (vid, k) for vid, k in host.vertices if vid not in removed_vertices
    ]
    keep_wires = [
        w for i, w in enumerate(host.wires) if i not in removed_wires
    ]

    offset = max(
        [vid for vid, _ in host.vertices]
        + list(host.inputs)
        + list(host.outputs)
        + [0]
    ) + 1
    rhs_shifted = dg._shift(rhs, offset)

    lhs_boundary = list(lhs.inputs) + list(lhs.outputs)
    rhs_boundary = list(rhs_shifted.inputs) + list(rhs_shifted.outputs)
    glue = {rb: cuts[lb] for lb, rb in zip(lhs_boundary, rhs_boundary)}

    new_wires = list(keep_wires)
    for a, b in rhs_shifted.wires:
        ea = glue.get(a[1], a) if a[0] == "b" else a
        eb = glue.get(b[1], b) if b[0] == "b" else b
        new_wires.append((ea, eb) if ea <= eb else (eb, ea))

    out = Diagram(
        tuple(keep_vertices) + rhs_shifted.vertices,
        tuple(sorted(new_wires)),
        host.inputs,
        host.outputs,
        host.loops + rhs_shifted.loops,
    )
    out.validate()
    return out
