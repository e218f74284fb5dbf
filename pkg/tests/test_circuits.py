import random

import pytest

from conftest import gate_on_qubits, textbook_gate_matrix
from zhcalc import circuits as cc
from zhcalc import ring as rg
from zhcalc import semantics as sm

RT = rg.ROOT_TWO_RING


def test_parse_simple():
    c = cc.parse_circuit("qubits 2\ncnot 0 1\n")
    assert c.qubits == 2
    assert c.gates == (cc.Gate("cnot", (0, 1)),)


def test_parse_comments_and_blank_lines():
    c = cc.parse_circuit("# toffoli via conjugation\nqubits 3\n\nh 2\nccz 0 1 2\nh 2\n")
    assert [g.name for g in c.gates] == ["h", "ccz", "h"]


def test_parse_errors():
    with pytest.raises(cc.CircuitError):
        cc.parse_circuit("cnot 0 1")  # missing header
    with pytest.raises(cc.CircuitError):
        cc.parse_circuit("qubits 2\ncnot 0 0")  # repeated operand
    with pytest.raises(cc.CircuitError):
        cc.parse_circuit("qubits 2\nx 5")  # out of range
    with pytest.raises(cc.CircuitError):
        cc.parse_circuit("qubits 1\nswap 0")  # unknown gate
    with pytest.raises(cc.CircuitError):
        cc.parse_circuit("qubits 1\nccz 0")  # wrong arity


def test_roundtrip_str():
    text = "qubits 3\nh 0\ntof 0 1 2"
    assert str(cc.parse_circuit(text)) == text


SINGLE_GATES = [
    ("x", (0,), 1),
    ("z", (0,), 1),
    ("cnot", (0, 1), 2),
    ("cnot", (1, 0), 2),
    ("cz", (0, 1), 2),
    ("ccz", (0, 1, 2), 3),
    ("tof", (0, 1, 2), 3),
    ("tof", (2, 0, 1), 3),
]


@pytest.mark.parametrize("name,wires,qubits", SINGLE_GATES)
def test_gate_encodings_exact(name, wires, qubits):
    line = " ".join([name] + [str(w) for w in wires])
    c = cc.parse_circuit(f"qubits {qubits}\n{line}")
    got = cc.circuit_matrix(c)
    want = gate_on_qubits(name, wires, qubits, RT)
    assert got.entries == want.entries


def test_h_gate_unitary_in_sqrt2_mode():
    c = cc.parse_circuit("qubits 1\nh 0")
    got = cc.circuit_matrix(c)
    s = rg.inv_sqrt_two(RT)
    want = sm.scale(textbook_gate_matrix("h", RT), s)
    assert got.entries == want.entries


def test_h_gate_plain_mode_scales():
    c = cc.parse_circuit("qubits 1\nh 0")
    d, h_count = cc.circuit_to_diagram(c, rg.DYADIC_RING, sqrt2_star=False)
    assert h_count == 1
    got = sm.interpret(d, rg.DYADIC_RING)
    # bare H-box: sqrt(2) times the unitary
    assert got.entries == textbook_gate_matrix("h", rg.DYADIC_RING).entries


def test_random_circuits_match_matrix_product():
    rng = random.Random(20)
    gate_choices = ["x", "z", "h", "cnot", "cz", "ccz", "tof"]
    for _ in range(25):
        qubits = rng.randint(1, 3)
        lines = [f"qubits {qubits}"]
        gates = []
        for _ in range(rng.randint(0, 6)):
            name = rng.choice(gate_choices)
            arity = cc.GATE_ARITIES[name]
            if arity > qubits:
                continue
            wires = tuple(rng.sample(range(qubits), arity))
            gates.append((name, wires))
            lines.append(" ".join([name] + [str(w) for w in wires]))
        c = cc.parse_circuit("\n".join(lines))
        got = cc.circuit_matrix(c)

        # oracle: multiply embedded textbook matrices, tracking the
        # sqrt(2) normalization per Hadamard box separately
        dim_id = [[1 if r == c2 else 0 for c2 in range(1 << qubits)] for r in range(1 << qubits)]
        want = sm.matrix_from_ints(dim_id, qubits, qubits, RT)
        h_boxes = 0
        for name, wires in gates:
            if name == "tof":
                h_boxes += 2
                step = gate_on_qubits("tof", wires, qubits, RT)
                step = sm.scale(step, rg.two(RT))  # two bare H boxes
            else:
                if name == "h":
                    h_boxes += 1
                step = gate_on_qubits(name, wires, qubits, RT)
            want = sm.matmul(step, want)
        s = rg.inv_sqrt_two(RT)
        for _ in range(h_boxes):
            want = sm.scale(want, s)
        assert got.entries == want.entries


def test_tof_self_inverse():
    twice = cc.parse_circuit("qubits 3\ntof 0 1 2\ntof 0 1 2")
    nothing = cc.parse_circuit("qubits 3")
    assert cc.circuits_equivalent(twice, nothing)


def test_tof_equals_conjugated_ccz():
    tof = cc.parse_circuit("qubits 3\ntof 0 1 2")
    alt = cc.parse_circuit("qubits 3\nh 2\nccz 0 1 2\nh 2")
    assert cc.circuits_equivalent(tof, alt)


def test_hh_is_identity():
    hh = cc.parse_circuit("qubits 1\nh 0\nh 0")
    assert cc.circuits_equivalent(hh, cc.parse_circuit("qubits 1"))


def test_cz_symmetric():
    assert cc.circuits_equivalent(
        cc.parse_circuit("qubits 2\ncz 0 1"), cc.parse_circuit("qubits 2\ncz 1 0")
    )


def test_x_vs_hzh():
    x = cc.parse_circuit("qubits 1\nx 0")
    hzh = cc.parse_circuit("qubits 1\nh 0\nz 0\nh 0")
    assert cc.circuits_equivalent(x, hzh)


def test_global_scalar_matters():
    # an even number of stray Hadamard pairs is fine, but Z != identity
    z = cc.parse_circuit("qubits 1\nz 0")
    ident = cc.parse_circuit("qubits 1")
    assert not cc.circuits_equivalent(z, ident)


def test_qubit_mismatch():
    with pytest.raises(cc.CircuitError):
        cc.circuits_equivalent(
            cc.parse_circuit("qubits 1"), cc.parse_circuit("qubits 2")
        )


def test_hadamard_count():
    c = cc.parse_circuit("qubits 3\nh 0\ntof 0 1 2\nh 0")
    assert c.hadamard_count == 4
