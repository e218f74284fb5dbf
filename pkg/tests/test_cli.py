import pytest

from zhcalc import diagram as dg
from zhcalc import document as doc
from zhcalc import ring as rg
from zhcalc import rules
from zhcalc.cli import main

HBOX = """ring dyadic
vertex 0 h -1
wire in0 v0
wire out0 v0
inputs in0
outputs out0
"""

WIRE = """ring dyadic
wire in0 out0
inputs in0
outputs out0
"""

XNOT = """ring dyadic
vertex 0 not
wire in0 v0
wire out0 v0
inputs in0
outputs out0
"""

CUP = """ring dyadic
wire out0 out1
inputs
outputs out0 out1
"""

STAR = """ring rt2
vertex 0 star
inputs
outputs
"""

TOF = "qubits 3\ntof 0 1 2\n"
HCCZH = "qubits 3\nh 2\nccz 0 1 2\nh 2\n"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_eval_hbox(tmp_path, capsys):
    path = write(tmp_path, "h.zh", HBOX)
    assert main(["eval", path]) == 0
    assert capsys.readouterr().out.strip() == "[[1,1],[1,-1]]"


def test_eval_star_sqrt2(tmp_path, capsys):
    path = write(tmp_path, "s.zh", STAR)
    assert main(["eval", path, "--ring", "rt2", "--sqrt2-star"]) == 0
    assert capsys.readouterr().out.strip() == "[1/2*rt2]"


def test_eval_empty(tmp_path, capsys):
    path = write(tmp_path, "e.zh", "ring dyadic\ninputs\noutputs\n")
    assert main(["eval", path]) == 0
    assert capsys.readouterr().out.strip() == "[1]"


def test_eval_bad_file(tmp_path, capsys):
    path = write(tmp_path, "bad.zh", "vertex 0 h nonsense\ninputs\noutputs\n")
    assert main(["eval", path]) == 2
    assert "error" in capsys.readouterr().err


def test_eval_missing_file(capsys):
    assert main(["eval", "/nonexistent/x.zh"]) == 2


def test_normalize_cup(tmp_path, capsys):
    path = write(tmp_path, "cup.zh", CUP)
    assert main(["normalize", path]) == 0
    assert capsys.readouterr().out.strip() == "k=0; 1 0 0 1"


def test_normalize_star_pair_reduced(tmp_path, capsys):
    text = "ring dyadic\nvertex 0 star\nvertex 1 star\ninputs\noutputs\n"
    path = write(tmp_path, "ss.zh", text)
    assert main(["normalize", path, "--reduced"]) == 0
    assert capsys.readouterr().out.strip() == "k=0; 1/2^2"


def test_normalize_trace_count(tmp_path, capsys):
    path = write(tmp_path, "h.zh", HBOX)
    assert main(["normalize", path, "--trace"]) == 0
    out = capsys.readouterr().out
    assert "trace steps:" in out
    assert "MISMATCH" not in out


def test_equiv_equal(tmp_path, capsys):
    a = write(tmp_path, "a.zh", HBOX)
    b = write(tmp_path, "b.zh", HBOX)
    assert main(["equiv", a, b]) == 0
    assert capsys.readouterr().out.strip() == "EQUAL"


def test_equiv_different(tmp_path, capsys):
    a = write(tmp_path, "a.zh", WIRE)
    b = write(tmp_path, "b.zh", XNOT)
    assert main(["equiv", a, b]) == 1
    assert capsys.readouterr().out.strip() == "DIFFERENT"


def test_equiv_hopf_documents(tmp_path, capsys):
    lhs, rhs = rules.instantiate("lemma.hopf", rules.RuleParams(), rg.DYADIC_RING)
    a = write(tmp_path, "hopf_l.zh", doc.serialize(doc.DiagramDocument(rg.DYADIC_RING, lhs)))
    b = write(tmp_path, "hopf_r.zh", doc.serialize(doc.DiagramDocument(rg.DYADIC_RING, rhs)))
    assert main(["equiv", a, b]) == 0


def test_equiv_signature_mismatch(tmp_path, capsys):
    a = write(tmp_path, "a.zh", WIRE)
    b = write(tmp_path, "b.zh", CUP)
    assert main(["equiv", a, b]) == 2
    assert "error" in capsys.readouterr().err


def test_check_rules_core(capsys):
    assert main(["check-rules", "--ruleset", "core", "--max-arity", "2"]) == 0
    out = capsys.readouterr().out
    assert "pass" in out and "FAIL" not in out


def test_check_rules_zh_r_over_mod(capsys):
    assert (
        main(
            [
                "check-rules",
                "--ruleset",
                "zh_r",
                "--max-arity",
                "2",
                "--ring",
                "mod:5",
                "--labels=-1,0,2",
            ]
        )
        == 0
    )


def test_check_rules_detects_corruption(capsys, monkeypatch):
    broken = rules.RuleSchema(
        "broken",
        "deliberately wrong",
        frozenset(["core"]),
        frozenset(),
        lambda p, ring, s2: (dg.identity(1), dg.make_generator(dg.xnot(), 1, 1)),
    )
    monkeypatch.setattr(rules, "_CATALOG", rules._CATALOG + [broken])
    assert main(["check-rules", "--ruleset", "core"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_circuit_eval(tmp_path, capsys):
    path = write(tmp_path, "tof.qc", TOF)
    assert main(["circuit", "eval", path]) == 0
    out = capsys.readouterr().out.strip()
    rows = out[2:-2].split("],[")
    assert len(rows) == 8
    assert rows[6] == "0,0,0,0,0,0,0,1"
    assert rows[7] == "0,0,0,0,0,0,1,0"


def test_circuit_to_diagram_roundtrips(tmp_path, capsys):
    path = write(tmp_path, "tof.qc", TOF)
    assert main(["circuit", "to-diagram", path]) == 0
    text = capsys.readouterr().out
    parsed = doc.parse(text)
    assert doc.serialize(parsed) == text
    assert parsed.diagram.n_inputs == 3


def test_circuit_equiv(tmp_path, capsys):
    a = write(tmp_path, "tof.qc", TOF)
    b = write(tmp_path, "alt.qc", HCCZH)
    assert main(["circuit", "equiv", a, b]) == 0
    assert capsys.readouterr().out.strip() == "EQUAL"


def test_circuit_equiv_different(tmp_path, capsys):
    a = write(tmp_path, "x.qc", "qubits 1\nx 0\n")
    b = write(tmp_path, "z.qc", "qubits 1\nz 0\n")
    assert main(["circuit", "equiv", a, b]) == 1


def test_circuit_parse_error(tmp_path, capsys):
    path = write(tmp_path, "bad.qc", "qubits 1\ncnot 0 0\n")
    assert main(["circuit", "eval", path]) == 2


def test_circuit_plain_mode_reports_scale(tmp_path, capsys):
    path = write(tmp_path, "h.qc", "qubits 1\nh 0\n")
    assert main(["circuit", "eval", path, "--ring", "dyadic", "--plain"]) == 0
    out = capsys.readouterr().out
    assert "sqrt(2)^1" in out
    assert "[[1,1],[1,-1]]" in out


def test_render_dot(tmp_path, capsys):
    path = write(tmp_path, "h.zh", HBOX)
    assert main(["render", path, "--format", "dot"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("graph zh {")
    assert 'label="-1"' in out
    # deterministic
    main(["render", path, "--format", "dot"])
    assert capsys.readouterr().out == out


def test_render_tikz(tmp_path, capsys):
    path = write(tmp_path, "h.zh", HBOX)
    assert main(["render", path, "--format", "tikz"]) == 0
    assert "tikzpicture" in capsys.readouterr().out


def test_render_unknown_format(tmp_path):
    path = write(tmp_path, "h.zh", HBOX)
    with pytest.raises(SystemExit) as exc:
        main(["render", path, "--format", "svg"])
    assert exc.value.code == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
