import json
import random
import pytest

from dgvc.cli.ast import AmbientDecl, Compute
from dgvc.cli.main import main, run_source
from dgvc.cli.parser import parse
from dgvc.cli.printer import pretty
from dgvc.cli.runner import Runner
from dgvc.config import Limits
from dgvc.syntax import ParseError

from fuzz import SCENARIOS, corpus, mutate


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


# -- parsing

def test_minimal_file():
    sc = parse("ambient P(1) [x0, x1];\ncompute validate X;\n")
    assert len(sc.statements) == 2
    assert isinstance(sc.statements[0], AmbientDecl) and isinstance(sc.statements[1], Compute)


def test_unclosed_twist_reports_position_and_expectation():
    with pytest.raises(ParseError) as info:
        parse("bundle E = O(2;")
    e = info.value
    assert (e.span.line, e.span.col) == (1, 15)
    assert "')'" in e.expected


def test_unknown_verb():
    with pytest.raises(ParseError, match="unknown verb"):
        parse("compute frobnicate X;")


def test_product_ambient_spellings():
    a = parse("ambient P(1)xP(2) [a, b, c, d, e];").statements[0]
    b = parse("ambient P(1) x P(2) [a, b, c, d, e];").statements[0]
    assert a == b and a.dims == (1, 2)


@pytest.mark.parametrize("text", corpus())
def test_round_trip_on_corpus(text):
    sc = parse(text)
    assert parse(pretty(sc)) == sc
    assert pretty(parse(pretty(sc))) == pretty(sc)


def test_round_trip_on_parseable_mutants():
    rng = random.Random(7)
    texts = corpus()
    seen = 0
    for _ in range(2000):
        src = mutate(rng.choice(texts), rng)
        try:
            sc = parse(src)
        except ParseError:
            continue
        seen += 1
        assert parse(pretty(sc)) == sc
    assert seen > 20


def test_parser_fuzz_only_raises_parse_errors():
    rng = random.Random(1234)
    texts = corpus()
    for _ in range(2000):
        try:
            parse(mutate(rng.choice(texts), rng))
        except ParseError as e:
            assert e.span.line >= 1 and e.span.col >= 1


# -- semantic errors

def test_arity_mismatch_cites_both_spans():
    rep = run_source("ambient P(1) [x0, x1];\nbundle E = O(1) + O(1);\nsection s of E = (x0);\n", "t")
    err = rep.statements[2].error
    assert err["type"] == "SemanticError"
    assert err["spans"] == ["3:1", "2:1"]
    assert not rep.ok


def test_unknown_name():
    rep = run_source("compute vclass Q;", "t")
    assert rep.statements[0].error["message"] == "unknown name 'Q'"


def test_duplicate_name():
    rep = run_source("chart A(1) vars [x];\ndgalgebra K = free { e: deg -1 } diff { e -> x };\n"
                     "dgalgebra K = free { e: deg -1 } diff { e -> x^2 };\n", "t")
    assert rep.statements[2].status == "error"


# -- results

def test_plane_cubic_chi_twist_one():
    rep = run_source((SCENARIOS / "plane_cubic.dgvc").read_text(), "plane_cubic.dgvc")
    chi = rep.to_json()["statements"][5]
    assert chi["statement"] == "compute chi C twist O(1);"
    assert chi["result"]["chi"] == 3 and chi["verdicts"]["riemann_roch"] is True


def test_zero_section_vclass_degree():
    rep = run_source((SCENARIOS / "zero_section_p1.dgvc").read_text(), "z")
    vclass = rep.to_json()["statements"][6]
    assert vclass["statement"] == "compute vclass Z;"
    terms = vclass["result"]["chow_class"]["ambient_class"]["terms"]
    assert terms == [{"monomial": "h", "coefficient": "2"}]
    assert vclass["result"]["k_class"]["kclass"] == "-O(-2) + O"
    assert rep.ok


def test_not_zero_one_error():
    rep = run_source((SCENARIOS / "not_zero_one.dgvc").read_text(), "n")
    errs = [s.error["message"] for s in rep.statements if s.status == "error"]
    assert any(m.startswith("not a [0,1]-manifold") for m in errs)


def test_json_is_deterministic():
    text = (SCENARIOS / "invariant_section.dgvc").read_text()
    a = run_source(text, "s").dumps()
    b = run_source(text, "s").dumps()
    assert a == b
    assert json.loads(a)["summary"]["ok"] is True


# -- command line

def test_golden_files(capsys):
    assert main(["check", str(SCENARIOS)]) == 0
    out = capsys.readouterr().out
    assert "10/10 scenarios passed" in out


def test_check_detects_drift(tmp_path, capsys):
    src = (SCENARIOS / "fat_point.dgvc").read_text()
    write(tmp_path, "fat_point.dgvc", src)
    write(tmp_path, "fat_point.golden.json", "{}\n")
    assert main(["check", str(tmp_path)]) == 1
    assert main(["check", str(tmp_path), "--update"]) == 0
    assert main(["check", str(tmp_path)]) == 0


def test_exit_codes(tmp_path, capsys):
    assert main(["run", str(SCENARIOS / "zero_section_p1.dgvc")]) == 0
    assert main(["run", str(SCENARIOS / "not_zero_one.dgvc"), "--output", "json"]) == 1
    assert main(["run", str(SCENARIOS / "errors.dgvc")]) == 1
    assert main(["run", write(tmp_path, "bad.dgvc", "bundle E = O(2;")]) == 2
    assert main(["run", str(tmp_path / "missing.dgvc")]) == 2
    assert main(["frobnicate"]) == 2


def test_parse_error_json(tmp_path, capsys):
    main(["run", write(tmp_path, "bad.dgvc", "bundle E = O(2;"), "--output", "json"])
    data = json.loads(capsys.readouterr().out)
    assert data["error"]["type"] == "ParseError" and data["error"]["span"] == "1:15"


def test_options_reach_the_report(capsys):
    assert main(["run", str(SCENARIOS / "fat_point.dgvc"), "--output", "json", "--truncate", "6",
                 "--alpha-bound", "2", "--seed", "9"]) == 0
    cfg = json.loads(capsys.readouterr().out)["config"]
    assert cfg == {"alpha_bound": 2, "seed": 9, "truncate": 6}


def test_runner_survives_mutants():
    tight = Limits(max_degree=12, max_basis=300, max_matrix=300, truncate=4, alpha_bound=2)
    rng = random.Random(99)
    texts = [(SCENARIOS / n).read_text() for n in ("fat_point.dgvc", "zero_section_p1.dgvc", "errors.dgvc",
                                                   "intersection.dgvc")]
    ran = 0
    for _ in range(300):
        try:
            sc = parse(mutate(rng.choice(texts), rng))
        except ParseError:
            continue
        rep = Runner(tight, None, 0).run(sc, "fuzz")
        ran += 1
        for s in rep.statements:
            if s.status == "error":
                assert s.error["type"] != "InternalError", s.error
                assert "span" in s.error
    assert ran > 10
