"""Toffoli+Hadamard circuit frontend.

Circuits are parsed from a small line format ("qubits N" then one gate
per line) and encoded as diagrams: X gates become grey NOTs, Z gates
white negates, H gates Hadamard boxes, CNOT a Z-X spider bridge, CZ/CCZ
spiders joined on one H-box, and TOF is H-conjugated CCZ on the target.

In the default sqrt(2)-star mode every H box carries a star, so each gate
encoding is exactly its textbook unitary and equivalence checking sees
the true global scalar. In plain dyadic mode H boxes are left bare and
the diagram denotes sqrt(2)^h times the unitary, with h the Hadamard
count, which the encoder reports so the caller can account for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from . import diagram as dg
from . import normalform as nfm
from . import ring as rg
from . import semantics as sm
from .diagram import Diagram, DiagramBuilder, Endpoint
from .ring import RingDescriptor


class CircuitError(Exception):
    pass


GATE_ARITIES = {
    "x": 1,
    "z": 1,
    "h": 1,
    "cnot": 2,
    "cz": 2,
    "ccz": 3,
    "tof": 3,
}


@dataclass(frozen=True)
class Gate:
    name: str
    wires: Tuple[int, ...]

    def __str__(self) -> str:
        return " ".join([self.name] + [str(w) for w in self.wires])


@dataclass(frozen=True)
class Circuit:
    qubits: int
    gates: Tuple[Gate, ...]

    def __str__(self) -> str:
        return "\n".join([f"qubits {self.qubits}"] + [str(g) for g in self.gates])

    @property
    def hadamard_count(self) -> int:
        return sum(
            1 if g.name == "h" else 2 if g.name == "tof" else 0
            for g in self.gates
        )


def parse_circuit(text: str) -> Circuit:
    """Parse the line format: a "qubits N" header, then one lowercase gate
    mnemonic with space-separated wire indices per line; '#' comments."""
    qubits: Optional[int] = None
    gates: List[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if qubits is None:
            if parts[0] != "qubits" or len(parts) != 2:
                raise CircuitError(f"line {lineno}: expected 'qubits N' header")
            try:
                qubits = int(parts[1])
            except ValueError:
                raise CircuitError(f"line {lineno}: bad qubit count {parts[1]!r}")
            if qubits < 0:
                raise CircuitError(f"line {lineno}: negative qubit count")
            continue
        name = parts[0]
        if name not in GATE_ARITIES:
            raise CircuitError(f"line {lineno}: unknown gate {name!r}")
        try:
            wires = tuple(int(p) for p in parts[1:])
        except ValueError:
            raise CircuitError(f"line {lineno}: bad wire index")
        if len(wires) != GATE_ARITIES[name]:
            raise CircuitError(
                f"line {lineno}: {name} takes {GATE_ARITIES[name]} wires"
            )
        if len(set(wires)) != len(wires):
            raise CircuitError(f"line {lineno}: repeated wire in {line!r}")
        for w in wires:
            if not 0 <= w < qubits:
                raise CircuitError(f"line {lineno}: wire {w} out of range")
        gates.append(Gate(name, wires))
    if qubits is None:
        raise CircuitError("missing 'qubits N' header")
    return Circuit(qubits, tuple(gates))


def circuit_to_diagram(
    c: Circuit, ring: RingDescriptor = rg.ROOT_TWO_RING, sqrt2_star: bool = True
) -> Tuple[Diagram, int]:
    """Encode a circuit as a diagram with one input and output per qubit.

    Returns the diagram together with the Hadamard-box count; in
    sqrt(2)-star mode the interpretation is exactly the circuit unitary,
    otherwise it is sqrt(2)^h times it.
    """
    minus_one = rg.from_integer(-1, ring)
    b = DiagramBuilder()
    ends: List[Endpoint] = [b.input() for _ in range(c.qubits)]
    h_count = 0

    def put_h(t: int) -> None:
        nonlocal h_count
        h_count += 1
        box = b.vertex(dg.hbox(minus_one))
        b.wire(ends[t], box)
        ends[t] = box
        if sqrt2_star:
            b.vertex(dg.star())

    def put_spider(t: int, kind: dg.VertexKind) -> Endpoint:
        v = b.vertex(kind)
        b.wire(ends[t], v)
        ends[t] = v
        return v

    def put_ccz_family(wires: Tuple[int, ...]) -> None:
        box = b.vertex(dg.hbox(minus_one))
        for t in wires:
            z = put_spider(t, dg.zspider())
            b.wire(z, box)

    for g in c.gates:
        if g.name == "x":
            put_spider(g.wires[0], dg.xnot())
        elif g.name == "z":
            z = put_spider(g.wires[0], dg.zspider())
            b.wire(z, b.vertex(dg.hbox(minus_one)))
        elif g.name == "h":
            put_h(g.wires[0])
        elif g.name == "cnot":
            ctrl, tgt = g.wires
            zc = put_spider(ctrl, dg.zspider())
            xt = put_spider(tgt, dg.xspider())
            b.wire(zc, xt)
        elif g.name == "cz":
            put_ccz_family(g.wires)
        elif g.name == "ccz":
            put_ccz_family(g.wires)
        elif g.name == "tof":
            a_, b_, tgt = g.wires
            put_h(tgt)
            put_ccz_family((a_, b_, tgt))
            put_h(tgt)
    for e in ends:
        b.wire(e, b.output())
    return b.build(), h_count


def circuit_matrix(
    c: Circuit, ring: RingDescriptor = rg.ROOT_TWO_RING, sqrt2_star: bool = True
) -> sm.Matrix:
    d, _ = circuit_to_diagram(c, ring, sqrt2_star)
    return sm.interpret(d, ring, sqrt2_star)


def circuits_equivalent(c1: Circuit, c2: Circuit) -> bool:
    """Exact unitary equality, global scalar included, decided through
    reduced normal forms over Z[1/sqrt(2)] with the unitary star."""
    if c1.qubits != c2.qubits:
        raise CircuitError(
            f"qubit count mismatch: {c1.qubits} vs {c2.qubits}"
        )
    ring = rg.ROOT_TWO_RING
    d1, _ = circuit_to_diagram(c1, ring, sqrt2_star=True)
    d2, _ = circuit_to_diagram(c2, ring, sqrt2_star=True)
    return nfm.equal(d1, d2, ring, sqrt2_star=True)
