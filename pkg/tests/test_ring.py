import random

import pytest

from zhcalc import ring as rg


RINGS = [rg.DYADIC_RING, rg.INT_RING, rg.ROOT_TWO_RING, rg.mod_ring(5)]


def test_dyadic_add_halves():
    h = rg.dyadic(1, 1)
    assert h + h == rg.one(rg.DYADIC_RING)


def test_int_add():
    R = rg.INT_RING
    assert rg.from_integer(3, R) + rg.from_integer(5, R) == rg.from_integer(8, R)


def test_mod_add_wraps():
    R = rg.mod_ring(5)
    assert rg.from_integer(3, R) + rg.from_integer(4, R) == rg.from_integer(2, R)


def test_dyadic_mul():
    x = rg.dyadic(3, 1)
    y = rg.dyadic(1, 1)
    assert x * y == rg.dyadic(3, 2)


def test_root_two_square():
    # (1 + rt2)^2 = 3 + 2 rt2, expanded by hand
    e = rg.root_two_element(1, 0, 1, 0)
    assert e * e == rg.root_two_element(3, 0, 2, 0)


def test_int_signs():
    R = rg.INT_RING
    m = rg.from_integer(-1, R)
    assert m * m == rg.one(R)


def test_from_integer_and_neg():
    assert rg.from_integer(-3, rg.DYADIC_RING) == rg.dyadic(-3)
    assert -rg.from_integer(2, rg.mod_ring(5)) == rg.from_integer(3, rg.mod_ring(5))
    assert rg.zero(rg.DYADIC_RING).is_zero()


def test_halve():
    assert rg.halve(rg.from_integer(3, rg.DYADIC_RING)) == rg.dyadic(3, 1)
    assert rg.halve(rg.from_integer(3, rg.INT_RING)) is None
    assert rg.halve(rg.from_integer(6, rg.INT_RING)) == rg.from_integer(3, rg.INT_RING)


def test_halve_mod5_exhaustive():
    # oracle: the full multiplication table of Z/5
    R = rg.mod_ring(5)
    for v in range(5):
        halves = [w for w in range(5) if (2 * w) % 5 == v]
        assert len(halves) == 1
        assert rg.halve(rg.from_integer(v, R)) == rg.from_integer(halves[0], R)


def test_mod_needs_odd_prime():
    with pytest.raises(rg.RingError):
        rg.mod_ring(4)
    with pytest.raises(rg.RingError):
        rg.mod_ring(2)
    with pytest.raises(rg.RingError):
        rg.mod_ring(9)


def test_kind_mismatch():
    with pytest.raises(rg.KindMismatchError):
        rg.one(rg.DYADIC_RING) + rg.one(rg.INT_RING)
    with pytest.raises(rg.KindMismatchError):
        rg.one(rg.mod_ring(5)) * rg.one(rg.mod_ring(7))


def test_has_half():
    assert rg.DYADIC_RING.has_half
    assert rg.ROOT_TWO_RING.has_half
    assert rg.mod_ring(7).has_half
    assert not rg.INT_RING.has_half


def _random_element(rng, ring):
    if ring.kind == rg.ROOT_TWO:
        return rg.root_two_element(
            rng.randint(-9, 9), rng.randint(0, 3), rng.randint(-9, 9), rng.randint(0, 3)
        )
    if ring.kind == rg.DYADIC:
        return rg.dyadic(rng.randint(-99, 99), rng.randint(0, 4))
    return rg.from_integer(rng.randint(-99, 99), ring)


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_ring_axioms_randomized(ring):
    rng = random.Random(42)
    one, zero = rg.one(ring), rg.zero(ring)
    for _ in range(100):
        a, b, c = (_random_element(rng, ring) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + zero == a
        assert a * one == a
        assert (a + (-a)).is_zero()
        assert a - b == a + (-b)


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_halve_double_inverse(ring):
    rng = random.Random(7)
    two = rg.two(ring)
    for _ in range(50):
        a = _random_element(rng, ring)
        assert rg.halve(two * a) == a


def test_dyadic_normalization_idempotent():
    rng = random.Random(9)
    for _ in range(100):
        num, exp = rng.randint(-64, 64), rng.randint(0, 6)
        x = rg.dyadic(num, exp)
        n, e = x.data
        assert e == 0 or n % 2 == 1
        if n == 0:
            assert e == 0
        y = rg.dyadic(n, e)
        assert y == x


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_render_parse_roundtrip(ring):
    rng = random.Random(5)
    for _ in range(60):
        x = _random_element(rng, ring)
        assert rg.parse(rg.render(x), ring) == x


def test_render_examples():
    assert rg.render(rg.dyadic(3, 2)) == "3/2^2"
    assert rg.render(rg.dyadic(1, 1)) == "1/2"
    assert rg.render(rg.from_integer(-7, rg.INT_RING)) == "-7"
    assert rg.render(rg.from_integer(3, rg.mod_ring(5))) == "3 mod 5"
    assert rg.render(rg.root_two_element(1, 0, 1, 1)) == "1+1/2*rt2"
    assert rg.render(rg.inv_sqrt_two(rg.ROOT_TWO_RING)) == "1/2*rt2"


def test_parse_ring_names():
    assert rg.parse_ring("dyadic") == rg.DYADIC_RING
    assert rg.parse_ring("mod:7") == rg.mod_ring(7)
    with pytest.raises(rg.RingParseError):
        rg.parse_ring("float")


def test_inv_sqrt_two_squares_to_half():
    s = rg.inv_sqrt_two(rg.ROOT_TWO_RING)
    assert s * s == rg.halve(rg.one(rg.ROOT_TWO_RING))
