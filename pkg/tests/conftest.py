"""Shared helpers for the test suite: random diagram generation, the
independent textbook gate matrices, and a rule-walk randomizer."""

from __future__ import annotations

import random
from typing import List, Tuple

from zhcalc import diagram as dg
from zhcalc import ring as rg
from zhcalc import rules
from zhcalc import semantics as sm
from zhcalc.diagram import Diagram
from zhcalc.ring import RingDescriptor


def random_diagram(
    rng: random.Random,
    ring: RingDescriptor,
    max_vertices: int = 8,
    max_boundary: int = 3,
    allow_star: bool = True,
    labels: Tuple[int, ...] = (-2, -1, 0, 1, 2),
) -> Diagram:
    """A random well-formed diagram: vertices get random arities and all
    legs (plus the boundary slots) are paired off uniformly, so self-loops
    and parallel wires occur naturally."""
    kinds = ["z", "h", "x", "not"] + (["star"] if allow_star else [])
    while True:
        b = dg.DiagramBuilder()
        ends = []
        for _ in range(rng.randint(0, max_vertices)):
            kind = rng.choice(kinds)
            if kind == "star":
                b.vertex(dg.star())
                continue
            if kind == "h":
                v = b.vertex(dg.hbox(rg.from_integer(rng.choice(labels), ring)))
            elif kind == "z":
                v = b.vertex(dg.zspider())
            elif kind == "x":
                v = b.vertex(dg.xspider())
            else:
                v = b.vertex(dg.xnot())
            ends.extend([v] * rng.randint(0, 4))
        n_boundary = rng.randint(0, max_boundary)
        if (len(ends) + n_boundary) % 2:
            n_boundary += 1 if n_boundary < max_boundary else -1
        if (len(ends) + n_boundary) % 2:
            continue
        for _ in range(n_boundary):
            ends.append(b.input() if rng.random() < 0.5 else b.output())
        rng.shuffle(ends)
        for i in range(0, len(ends), 2):
            b.wire(ends[i], ends[i + 1])
        return b.build()


def interp_vec(d: Diagram, ring: RingDescriptor, sqrt2_star: bool = False):
    """The vectorized interpretation, row-major: entry (row, col) at index
    row * cols + col, matching the bend-inputs-up coefficient order."""
    m = sm.interpret(d, ring, sqrt2_star)
    return [m.entry(r, c) for r in range(m.rows) for c in range(m.cols)]


def walk_pool(ring: RingDescriptor) -> List[Tuple[str, rules.RuleParams, bool]]:
    """Rule steps to draw from when scrambling a diagram; reversed entries
    grow the diagram, so a walk can always make progress."""
    minus_one = rg.from_integer(-1, ring)
    three = rg.from_integer(3, ring)
    pool = [
        ("id", rules.RuleParams(), False),
        ("id", rules.RuleParams(), True),
        ("zs", rules.RuleParams(m=1, n=1), False),
        ("zs", rules.RuleParams(m=1, n=1), True),
        ("hh", rules.RuleParams(), False),
        ("hs", rules.RuleParams(m=1, n=1, a=minus_one), False),
        ("ba1", rules.RuleParams(m=2, n=1), False),
        ("lemma.xnotscancel", rules.RuleParams(), False),
        ("lemma.xnotscancel", rules.RuleParams(), True),
        ("lemma.xspecial", rules.RuleParams(), False),
        ("lemma.xspecial", rules.RuleParams(), True),
        ("lemma.hopf", rules.RuleParams(), False),
        ("lemma.negatedirect", rules.RuleParams(), True),
        ("lemma.scalar2", rules.RuleParams(), False),
        ("lemma.scalar2", rules.RuleParams(), True),
        ("M", rules.RuleParams(a=three, b=minus_one), True),
        ("lemma.notcommute", rules.RuleParams(n=2), False),
    ]
    if ring.has_half:
        pool.append(("lemma.scalarcancelstars", rules.RuleParams(), True))
        pool.append(("m", rules.RuleParams(), False))
    return pool


def random_rule_walk(
    d: Diagram,
    rng: random.Random,
    ring: RingDescriptor,
    steps: int,
    sqrt2_star: bool = False,
) -> Tuple[Diagram, int]:
    """Apply up to ``steps`` random sound rule steps; returns the rewritten
    diagram and the number of steps actually applied."""
    pool = walk_pool(ring)
    applied = 0
    cur = d
    for _ in range(steps):
        candidates = pool[:]
        rng.shuffle(candidates)
        stepped = False
        for name, params, reverse in candidates:
            try:
                sites = rules.find_matches(
                    cur, name, params, ring, sqrt2_star, reverse=reverse
                )
            except rules.RuleError:
                continue
            if not sites:
                continue
            site = rng.choice(sites)
            cur = rules.apply(
                cur, name, params, site, ring, sqrt2_star, reverse=reverse
            )
            applied += 1
            stepped = True
            break
        if not stepped:
            break
    return cur, applied


def int_matrix(rows, ring: RingDescriptor) -> sm.Matrix:
    n = len(rows)
    bits = n.bit_length() - 1
    cols = len(rows[0])
    cbits = cols.bit_length() - 1
    return sm.matrix_from_ints(rows, bits, cbits, ring)


def textbook_gate_matrix(name: str, ring: RingDescriptor) -> sm.Matrix:
    """Gate unitaries as literal integer tables (H scaled by sqrt(2)),
    independent of the diagram encodings."""
    if name == "x":
        return int_matrix([[0, 1], [1, 0]], ring)
    if name == "z":
        return int_matrix([[1, 0], [0, -1]], ring)
    if name == "h":
        return int_matrix([[1, 1], [1, -1]], ring)  # sqrt(2) * H
    if name == "cnot":
        return int_matrix(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], ring
        )
    if name == "cz":
        return int_matrix(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]], ring
        )
    if name == "ccz":
        rows = [[1 if r == c else 0 for c in range(8)] for r in range(8)]
        rows[7][7] = -1
        return int_matrix(rows, ring)
    if name == "tof":
        rows = [[0] * 8 for _ in range(8)]
        for r in range(6):
            rows[r][r] = 1
        rows[6][7] = 1
        rows[7][6] = 1
        return int_matrix(rows, ring)
    raise ValueError(name)


def gate_on_qubits(
    name: str, wires: Tuple[int, ...], qubits: int, ring: RingDescriptor
) -> sm.Matrix:
    """Embed a textbook gate on given wires of a q-qubit register by direct
    index arithmetic (an oracle independent of the diagram encoding)."""
    g = textbook_gate_matrix(name, ring)
    k = len(wires)
    dim = 1 << qubits
    zero = rg.zero(ring)
    ents = [[zero] * dim for _ in range(dim)]
    for col in range(dim):
        in_bits = [(col >> (qubits - 1 - i)) & 1 for i in range(qubits)]
        sub_col = 0
        for w in wires:
            sub_col = (sub_col << 1) | in_bits[w]
        for sub_row in range(1 << k):
            val = g.entry(sub_row, sub_col)
            if val.is_zero():
                continue
            out_bits = list(in_bits)
            for i, w in enumerate(wires):
                out_bits[w] = (sub_row >> (k - 1 - i)) & 1
            row = 0
            for bit in out_bits:
                row = (row << 1) | bit
            ents[row][col] = ents[row][col] + val
    return sm.Matrix(ring, qubits, qubits, tuple(tuple(r) for r in ents))
