"""Exact coefficient arithmetic for the rings the calculus is interpreted over.

Four ring kinds are supported, all commutative, unital, and with 2 not a
zero-divisor:

- ``dyadic``: the dyadic rationals Z[1/2], stored as ``num / 2**exp``,
- ``int``: plain arbitrary-precision integers Z,
- ``rt2``: Z[1/sqrt(2)], stored as ``a + b*sqrt(2)`` with dyadic ``a, b``,
- ``mod``: integers modulo an odd prime p (so 2 is invertible).

Elements are immutable values. Mixing elements of different rings raises
:class:`KindMismatchError`. Division by two is exposed as :func:`halve`,
which returns ``None`` when no exact half exists (only possible over Z);
when a half exists it is unique because 2 is not a zero-divisor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

DYADIC = "dyadic"
INT = "int"
ROOT_TWO = "rt2"
MOD = "mod"

_KINDS = (DYADIC, INT, ROOT_TWO, MOD)


class RingError(Exception):
    pass


class KindMismatchError(RingError):
    """Raised when an operation mixes elements of different rings."""


class RingParseError(RingError):
    pass


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class RingDescriptor:
    """Identifies a coefficient ring: a kind tag plus the modulus for ``mod``."""

    kind: str
    modulus: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind == MOD:
            if self.modulus is None or not _is_odd_prime(self.modulus):
                raise RingError("mod ring needs an odd prime modulus")
        elif self.modulus is not None:
            raise RingError(f"ring kind {self.kind!r} takes no modulus")

    @property
    def has_half(self) -> bool:
        """Whether 1/2 exists in the ring (every kind except plain Z)."""
        return self.kind != INT

    def __str__(self) -> str:
        if self.kind == MOD:
            return f"mod:{self.modulus}"
        return self.kind


DYADIC_RING = RingDescriptor(DYADIC)
INT_RING = RingDescriptor(INT)
ROOT_TWO_RING = RingDescriptor(ROOT_TWO)


def mod_ring(p: int) -> RingDescriptor:
    return RingDescriptor(MOD, p)


def _norm_dyadic(num: int, exp: int) -> Tuple[int, int]:
    # normalized: exp == 0 or num odd; zero is (0, 0)
    if num == 0:
        return (0, 0)
    while exp > 0 and num % 2 == 0:
        num //= 2
        exp -= 1
    return (num, exp)


@dataclass(frozen=True)
class RingElement:
    """An exact scalar, tagged with its ring.

    The payload layout depends on the kind:

    - dyadic: ``(num, exp)`` meaning num / 2**exp, normalized,
    - int: ``(value,)``,
    - rt2: ``(a_num, a_exp, b_num, b_exp)`` meaning a + b*sqrt(2),
    - mod: ``(residue,)`` with residue in [0, p).
    """

    ring: RingDescriptor
    data: Tuple[int, ...]

    def _check(self, other: "RingElement") -> None:
        if self.ring != other.ring:
            raise KindMismatchError(f"cannot mix {self.ring} and {other.ring}")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        k = self.ring.kind
        if k == INT:
            return RingElement(self.ring, (self.data[0] + other.data[0],))
        if k == MOD:
            p = self.ring.modulus
            return RingElement(self.ring, ((self.data[0] + other.data[0]) % p,))
        if k == DYADIC:
            return RingElement(self.ring, _add_dyadic(self.data, other.data))
        a = _add_dyadic(self.data[:2], other.data[:2])
        b = _add_dyadic(self.data[2:], other.data[2:])
        return RingElement(self.ring, a + b)

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        k = self.ring.kind
        if k == INT:
            return RingElement(self.ring, (self.data[0] * other.data[0],))
        if k == MOD:
            p = self.ring.modulus
            return RingElement(self.ring, ((self.data[0] * other.data[0]) % p,))
        if k == DYADIC:
            return RingElement(self.ring, _mul_dyadic(self.data, other.data))
        # (a + b rt2)(c + d rt2) = (ac + 2bd) + (ad + bc) rt2
        a, b = self.data[:2], self.data[2:]
        c, d = other.data[:2], other.data[2:]
        two = (2, 0)
        re = _add_dyadic(_mul_dyadic(a, c), _mul_dyadic(two, _mul_dyadic(b, d)))
        im = _add_dyadic(_mul_dyadic(a, d), _mul_dyadic(b, c))
        return RingElement(self.ring, re + im)

    def __neg__(self) -> "RingElement":
        k = self.ring.kind
        if k == INT:
            return RingElement(self.ring, (-self.data[0],))
        if k == MOD:
            p = self.ring.modulus
            return RingElement(self.ring, ((-self.data[0]) % p,))
        if k == DYADIC:
            return RingElement(self.ring, (-self.data[0], self.data[1]))
        return RingElement(
            self.ring, (-self.data[0], self.data[1], -self.data[2], self.data[3])
        )

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def is_zero(self) -> bool:
        if self.ring.kind == ROOT_TWO:
            return self.data[0] == 0 and self.data[2] == 0
        return self.data[0] == 0

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"RingElement({self.ring}, {render(self)!r})"


def _add_dyadic(x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
    xn, xe = x
    yn, ye = y
    e = max(xe, ye)
    return _norm_dyadic((xn << (e - xe)) + (yn << (e - ye)), e)


def _mul_dyadic(x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
    return _norm_dyadic(x[0] * y[0], x[1] + y[1])


def zero(ring: RingDescriptor) -> RingElement:
    return from_integer(0, ring)


def one(ring: RingDescriptor) -> RingElement:
    return from_integer(1, ring)


def two(ring: RingDescriptor) -> RingElement:
    return from_integer(2, ring)


def from_integer(n: int, ring: RingDescriptor) -> RingElement:
    """Embed the integer n into the ring."""
    k = ring.kind
    if k == INT:
        return RingElement(ring, (n,))
    if k == MOD:
        return RingElement(ring, (n % ring.modulus,))
    if k == DYADIC:
        return RingElement(ring, _norm_dyadic(n, 0))
    return RingElement(ring, _norm_dyadic(n, 0) + (0, 0))


def dyadic(num: int, exp: int = 0, ring: RingDescriptor = DYADIC_RING) -> RingElement:
    """The dyadic rational num / 2**exp, in the dyadic or rt2 ring."""
    if ring.kind == DYADIC:
        return RingElement(ring, _norm_dyadic(num, exp))
    if ring.kind == ROOT_TWO:
        return RingElement(ring, _norm_dyadic(num, exp) + (0, 0))
    raise RingError(f"ring {ring} has no general dyadic elements")


def root_two_element(
    a_num: int, a_exp: int, b_num: int, b_exp: int
) -> RingElement:
    """The element a + b*sqrt(2) with a = a_num/2**a_exp, b = b_num/2**b_exp."""
    return RingElement(
        ROOT_TWO_RING, _norm_dyadic(a_num, a_exp) + _norm_dyadic(b_num, b_exp)
    )


def half(ring: RingDescriptor) -> Optional[RingElement]:
    """The element 1/2 if the ring has one, else None."""
    return halve(one(ring))


def inv_sqrt_two(ring: RingDescriptor) -> RingElement:
    """1/sqrt(2) = (1/2)*sqrt(2); only exists in the rt2 ring."""
    if ring.kind != ROOT_TWO:
        raise RingError(f"1/sqrt(2) does not exist in {ring}")
    return root_two_element(0, 0, 1, 1)


def halve(x: RingElement) -> Optional[RingElement]:
    """Return the unique y with 2*y = x, or None when no such y exists.

    Uniqueness comes from 2 not being a zero-divisor in any supported ring.
    Over Z the half exists exactly for even values; everywhere else it
    always exists.
    """
    k = x.ring.kind
    if k == INT:
        v = x.data[0]
        if v % 2 != 0:
            return None
        return RingElement(x.ring, (v // 2,))
    if k == MOD:
        p = x.ring.modulus
        inv2 = pow(2, -1, p)
        return RingElement(x.ring, ((x.data[0] * inv2) % p,))
    if k == DYADIC:
        return RingElement(x.ring, _norm_dyadic(x.data[0], x.data[1] + 1))
    return RingElement(
        x.ring,
        _norm_dyadic(x.data[0], x.data[1] + 1) + _norm_dyadic(x.data[2], x.data[3] + 1),
    )


def _render_dyadic(num: int, exp: int) -> str:
    if exp == 0:
        return str(num)
    if exp == 1:
        return f"{num}/2"
    return f"{num}/2^{exp}"


def render(x: RingElement) -> str:
    """Canonical text form; :func:`parse` accepts the same grammar."""
    k = x.ring.kind
    if k == INT:
        return str(x.data[0])
    if k == MOD:
        return f"{x.data[0]} mod {x.ring.modulus}"
    if k == DYADIC:
        return _render_dyadic(x.data[0], x.data[1])
    a = _render_dyadic(x.data[0], x.data[1])
    b = _render_dyadic(x.data[2], x.data[3])
    if x.data[2] == 0:
        return a
    if x.data[0] == 0:
        return f"{b}*rt2"
    return f"{a}+{b}*rt2"


def _parse_dyadic(text: str) -> Tuple[int, int]:
    text = text.strip()
    if "/" in text:
        num_s, den_s = text.split("/", 1)
        num = int(num_s)
        den_s = den_s.strip()
        if den_s == "2":
            return _norm_dyadic(num, 1)
        if den_s.startswith("2^"):
            return _norm_dyadic(num, int(den_s[2:]))
        raise RingParseError(f"bad dyadic denominator {den_s!r}")
    return _norm_dyadic(int(text), 0)


def parse(text: str, ring: RingDescriptor) -> RingElement:
    """Parse the textual form of a ring element in the given ring."""
    text = text.strip()
    try:
        k = ring.kind
        if k == INT:
            return RingElement(ring, (int(text),))
        if k == MOD:
            if "mod" in text:
                val_s, mod_s = text.split("mod", 1)
                if int(mod_s) != ring.modulus:
                    raise RingParseError(f"modulus mismatch in {text!r}")
                text = val_s
            return RingElement(ring, (int(text) % ring.modulus,))
        if k == DYADIC:
            return RingElement(ring, _parse_dyadic(text))
        # rt2 grammar: "a", "b*rt2", or "a+b*rt2" (b may be negative)
        if "rt2" not in text:
            return RingElement(ring, _parse_dyadic(text) + (0, 0))
        head, _ = text.rsplit("*rt2", 1)
        plus = head.rfind("+", 1)
        if plus > 0:
            a = _parse_dyadic(head[:plus])
            b = _parse_dyadic(head[plus + 1 :])
        else:
            a = (0, 0)
            b = _parse_dyadic(head)
        return RingElement(ring, a + b)
    except RingParseError:
        raise
    except ValueError as err:
        raise RingParseError(f"cannot parse {text!r} in ring {ring}") from err


def parse_ring(text: str) -> RingDescriptor:
    """Parse a ring name: dyadic | int | rt2 | mod:<p>."""
    text = text.strip()
    if text == DYADIC:
        return DYADIC_RING
    if text == INT:
        return INT_RING
    if text == ROOT_TWO:
        return ROOT_TWO_RING
    if text.startswith("mod:"):
        try:
            return mod_ring(int(text[4:]))
        except ValueError as err:
            raise RingParseError(f"bad modulus in {text!r}") from err
    raise RingParseError(f"unknown ring {text!r}")
