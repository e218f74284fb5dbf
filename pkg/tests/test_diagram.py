import random

import pytest

from conftest import interp_vec, random_diagram
from zhcalc import diagram as dg
from zhcalc import ring as rg
from zhcalc import semantics as sm

R = rg.DYADIC_RING
MINUS_ONE = rg.from_integer(-1, R)


def test_make_generator_copy():
    d = dg.make_generator(dg.zspider(), 1, 2)
    m = sm.interpret(d, R)
    # the copy map |00><0| + |11><1|
    assert m.to_lists() == [["1", "0"], ["0", "0"], ["0", "0"], ["0", "1"]]


def test_make_generator_hadamard_box():
    d = dg.make_generator(dg.hbox(MINUS_ONE), 1, 1)
    assert sm.interpret(d, R).to_lists() == [["1", "1"], ["1", "-1"]]


def test_make_generator_star():
    d = dg.make_generator(dg.star(), 0, 0)
    assert sm.interpret(d, R).to_lists() == [["1/2"]]
    with pytest.raises(dg.ArityError):
        dg.make_generator(dg.star(), 1, 0)


def test_identity_zero_is_empty():
    assert dg.identity(0) == dg.empty()
    assert sm.interpret(dg.empty(), R).to_lists() == [["1"]]


def test_cup_interpretation():
    assert sm.interpret(dg.cup(), R).to_lists() == [["1"], ["0"], ["0"], ["1"]]


def test_swap_permutation():
    m = sm.interpret(dg.swap(), R)
    assert m.to_lists() == [
        ["1", "0", "0", "0"],
        ["0", "0", "1", "0"],
        ["0", "1", "0", "0"],
        ["0", "0", "0", "1"],
    ]


def test_compose_identity_is_isomorphic():
    rng = random.Random(0)
    for _ in range(10):
        d = random_diagram(rng, R, max_vertices=4)
        left = dg.compose(dg.identity(d.n_inputs), d)
        assert dg.is_isomorphic(left, d)
        right = dg.compose(d, dg.identity(d.n_outputs))
        assert dg.is_isomorphic(right, d)


def test_compose_hadamards():
    h = dg.make_generator(dg.hbox(MINUS_ONE), 1, 1)
    hh = dg.compose(h, h)
    # multiply [[1,1],[1,-1]] by itself by hand: 2 * identity
    assert sm.interpret(hh, R).to_lists() == [["2", "0"], ["0", "2"]]


def test_compose_cup_then_cap():
    closed = dg.compose(dg.cup(), dg.cap())
    assert sm.interpret(closed, R).to_lists() == [["2"]]


def test_compose_arity_mismatch():
    with pytest.raises(dg.CompositionError):
        dg.compose(dg.cup(), dg.identity(1))


def test_compose_traces_to_loop():
    tr = dg.compose(dg.compose(dg.cup(), dg.identity(2)), dg.cap())
    assert tr.loops == 1
    assert sm.interpret(tr, R).to_lists() == [["2"]]


def test_tensor_empty_unit():
    d = dg.make_generator(dg.xspider(), 1, 2)
    assert dg.is_isomorphic(dg.tensor(dg.empty(), d), d)


def test_tensor_stars():
    s = dg.make_generator(dg.star(), 0, 0)
    assert sm.interpret(dg.tensor(s, s), R).to_lists() == [["1/2^2"]]


def test_tensor_boundary_order():
    # input 0 feeds the first factor
    x = dg.make_generator(dg.xnot(), 1, 1)
    w = dg.identity(1)
    m = sm.interpret(dg.tensor(x, w), R)
    assert m.to_lists() == [
        ["0", "0", "1", "0"],
        ["0", "0", "0", "1"],
        ["1", "0", "0", "0"],
        ["0", "1", "0", "0"],
    ]


def test_transpose_of_wide_hbox():
    d = dg.make_generator(dg.hbox(MINUS_ONE), 2, 1)
    m = sm.interpret(d, R)
    t = sm.interpret(dg.transpose(d), R)
    # oracle: transpose the matrix directly
    for r in range(m.rows):
        for c in range(m.cols):
            assert m.entry(r, c) == t.entry(c, r)


def test_transpose_involution():
    rng = random.Random(1)
    for _ in range(10):
        d = random_diagram(rng, R, max_vertices=5)
        assert dg.transpose(dg.transpose(d)) == d


def test_transpose_matches_matrix_transpose_on_randoms():
    rng = random.Random(2)
    for _ in range(25):
        d = random_diagram(rng, R, max_vertices=5)
        m = sm.interpret(d, R)
        t = sm.interpret(dg.transpose(d), R)
        assert t.entries == sm.transpose_matrix(m).entries


def test_bend_to_state_identity_is_cup():
    bent = dg.bend_to_state(dg.identity(1))
    assert interp_vec(bent, R) == interp_vec(dg.cup(), R)


def test_bend_to_state_vectorizes():
    rng = random.Random(3)
    for _ in range(20):
        d = random_diagram(rng, R, max_vertices=5)
        bent = dg.bend_to_state(d)
        assert bent.n_inputs == 0
        assert interp_vec(bent, R) == interp_vec(d, R)


def test_interchange_law():
    rng = random.Random(4)
    for _ in range(15):
        a = random_diagram(rng, R, max_vertices=3, max_boundary=2)
        b = random_diagram(rng, R, max_vertices=3, max_boundary=2)
        c = random_diagram(rng, R, max_vertices=3, max_boundary=2)
        d = random_diagram(rng, R, max_vertices=3, max_boundary=2)
        # glue c after a and d after b, needing matching arities
        if a.n_outputs != c.n_inputs or b.n_outputs != d.n_inputs:
            continue
        lhs = dg.compose(dg.tensor(a, b), dg.tensor(c, d))
        rhs = dg.tensor(dg.compose(a, c), dg.compose(b, d))
        assert sm.interpret(lhs, R).entries == sm.interpret(rhs, R).entries


def test_compose_matches_matrix_product():
    rng = random.Random(5)
    count = 0
    while count < 15:
        d1 = random_diagram(rng, R, max_vertices=4, max_boundary=3)
        d2 = random_diagram(rng, R, max_vertices=4, max_boundary=3)
        if d1.n_outputs != d2.n_inputs:
            continue
        count += 1
        m = sm.interpret(dg.compose(d1, d2), R)
        prod = sm.matmul(sm.interpret(d2, R), sm.interpret(d1, R))
        assert m.entries == prod.entries


def test_tensor_matches_kronecker():
    rng = random.Random(6)
    for _ in range(15):
        d1 = random_diagram(rng, R, max_vertices=4, max_boundary=2)
        d2 = random_diagram(rng, R, max_vertices=4, max_boundary=2)
        m = sm.interpret(dg.tensor(d1, d2), R)
        k = sm.kron(sm.interpret(d1, R), sm.interpret(d2, R))
        assert m.entries == k.entries


def test_is_isomorphic_relabelled():
    rng = random.Random(7)
    for seed in range(10):
        d = random_diagram(rng, R, max_vertices=6)
        assert dg.is_isomorphic(d, dg.relabel(d, seed))


def test_is_isomorphic_kind_sensitive():
    z = dg.make_generator(dg.zspider(), 1, 2)
    x = dg.make_generator(dg.xspider(), 1, 2)
    assert not dg.is_isomorphic(z, x)


def test_is_isomorphic_label_sensitive():
    h1 = dg.make_generator(dg.hbox(MINUS_ONE), 1, 1)
    h2 = dg.make_generator(dg.hbox(rg.from_integer(2, R)), 1, 1)
    assert not dg.is_isomorphic(h1, h2)


def test_isomorphic_invariance_of_interpretation():
    rng = random.Random(8)
    for seed in range(10):
        d = random_diagram(rng, R, max_vertices=5)
        assert interp_vec(dg.relabel(d, seed), R) == interp_vec(d, R)


def test_isomorphic_two_constructions_of_same_shape():
    # two expansions of the same fan pattern, built in different orders
    def build(order):
        b = dg.DiagramBuilder()
        spider = b.vertex(dg.zspider())
        b.wire(spider, b.output())
        boxes = [b.vertex(dg.hbox(rg.from_integer(v, R))) for v in order]
        for box in boxes:
            b.wire(spider, box)
        return b.build()

    assert dg.is_isomorphic(build([2, 1]), build([2, 1]))
    d1, d2 = build([1, 2]), build([2, 1])
    assert dg.is_isomorphic(d1, d2)


def test_validate_rejects_dangling_slot():
    with pytest.raises(dg.DiagramError):
        dg.Diagram((), (), (0,), ()).validate()


def test_negate_gate_matrix():
    assert sm.interpret(dg.negate_gate(MINUS_ONE), R).to_lists() == [
        ["1", "0"],
        ["0", "-1"],
    ]
