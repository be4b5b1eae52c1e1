"""Command line behavior: formats, exit codes, determinism, JSON mode."""

import json

import pytest

import helpers
from arclift import SeriesRing, parse_series
from arclift.cli import load_problem, main

CUSP = str(helpers.PROBLEMS / "cusp.json")
CUSP5 = str(helpers.PROBLEMS / "cusp_f5.json")
NODE = str(helpers.PROBLEMS / "node.json")
OFFJET = str(helpers.PROBLEMS / "cusp_offjet.json")
OFFJET5 = str(helpers.PROBLEMS / "cusp_offjet_f5.json")
SHIFTED = str(helpers.PROBLEMS / "shifted_node.json")
SMOOTH = str(helpers.PROBLEMS / "smooth_point.json")
TCURVE = str(helpers.PROBLEMS / "tcurve.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- problem files -------------------------------------------------------


def test_every_shipped_problem_loads():
    for path in sorted(helpers.PROBLEMS.glob("*.json")):
        prob = load_problem(str(path))
        assert prob.n == len(prob.jet)


def test_load_rejects_unknown_keys(tmp_path):
    bad = tmp_path / "bad.json"
    payload = json.loads((helpers.PROBLEMS / "cusp.json").read_text())
    payload["extra"] = 1
    bad.write_text(json.dumps(payload))
    from arclift import ParseError

    with pytest.raises(ParseError):
        load_problem(str(bad))


# -- validate ------------------------------------------------------------


def test_validate_golden(capsys):
    code, out, err = run(capsys, "validate", CUSP)
    assert code == 0
    assert out.splitlines() == [
        f"problem: {CUSP}",
        "field: Q",
        "n: 2  r: 1  c: 4  mode: dvr",
        "check certificate-cofactors: ok - multiplier identity holds for every generator",
        "check jet-kills-ideal: ok - every generator vanishes at the jet through x^8",
        "check minor-order: ok - e = 3 < c = 4",
        "valid: yes (e = 3)",
    ]


def test_validate_failure_exits_2(capsys, tmp_path):
    payload = json.loads((helpers.PROBLEMS / "cusp.json").read_text())
    payload["jet"] = ["x^3", "x^2 + x^4"]
    bad = tmp_path / "badjet.json"
    bad.write_text(json.dumps(payload))
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 2
    assert "valid: no" in out
    assert "check jet-kills-ideal: FAIL" in out


def test_validate_json(capsys):
    code, out, err = run(capsys, "validate", CUSP, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["valid"] is True
    assert doc["e"] == 3
    assert [c["name"] for c in doc["checks"]] == [
        "certificate-cofactors",
        "jet-kills-ideal",
        "minor-order",
    ]
    assert list(doc) == sorted(doc)


# -- desingularize -------------------------------------------------------


def test_desingularize_golden(capsys):
    code, out, err = run(capsys, "desingularize", CUSP)
    assert code == 0
    lines = out.splitlines()
    assert "e: 3" in lines
    assert "d = 2*x^4 + O(x^40)" in lines
    assert "perm: 1 2" in lines
    assert "param_count: 1" in lines
    assert "free T: T2" in lines
    assert "g_1 = T1 + x^2*T1^2 + 6*x^6*T1*T2 - 3*x^10*T2^2 - 16*x^16*T2^3" in lines
    assert "loc_s = 1 + 2*x^2*T1 + 6*x^6*T2" in lines
    assert "verified: yes" in lines
    assert sum(1 for ln in lines if ln.startswith("verify ")) == 9


def test_desingularize_rejects_a_bad_depth(capsys, tmp_path):
    payload = json.loads((helpers.PROBLEMS / "cusp.json").read_text())
    payload["c"] = 3
    bad = tmp_path / "c3.json"
    bad.write_text(json.dumps(payload))
    code, out, err = run(capsys, "desingularize", str(bad))
    assert code == 2
    assert "minor-order" in err


def test_desingularize_out_file(capsys, tmp_path):
    target = tmp_path / "model.json"
    code, out, err = run(capsys, "desingularize", CUSP, "--out", str(target))
    assert code == 0
    doc = json.loads(target.read_text())
    assert doc["e"] == 3
    assert doc["verified"] is True
    ring = SeriesRing(load_problem(CUSP).ring.field)
    assert parse_series(doc["d"], ring) == ring.parse("2*x^4")


def test_report_series_reparse(capsys):
    """Every series the report prints must be readable back by the parser."""
    code, out, err = run(capsys, "lift", CUSP, "--t-free", "x^9")
    ring = load_problem(CUSP).ring
    for ln in out.splitlines():
        if ln.startswith(("t_", "y2_")):
            text = ln.split(" = ", 1)[1]
            parse_series(text, ring)


# -- lift ----------------------------------------------------------------


def test_lift_golden(capsys):
    code, out, err = run(capsys, "lift", CUSP, "--t-free", "x^9")
    assert code == 0
    assert out.splitlines()[3:] == [
        "mode: t-free",
        "t_1 = 3*x^28 + O(x^32)",
        "t_2 = x^9 + O(x^40)",
        "y2_1 = x^3 + 6*x^18 + 6*x^33 + O(x^37)",
        "y2_2 = x^2 + 4*x^17 + O(x^40)",
        "strict: true",
        "residual_f: 40",
        "residual_i: 40",
        "newton_iterations: 1",
        "k0: 28",
        "eff_prec: 37",
    ]


def test_params_and_t_free_agree(capsys):
    """Offset 1 against the zero reference shifts the free slot by x^(2c+1)."""
    code1, out1, err1 = run(capsys, "lift", CUSP, "--t-free", "x^9")
    code2, out2, err2 = run(capsys, "lift", CUSP, "--params", "1")
    assert code1 == code2 == 0
    pick = lambda text: [
        ln for ln in text.splitlines() if ln.startswith(("t_", "y2_", "strict"))
    ]
    assert pick(out1) == pick(out2)


def test_lift_is_byte_deterministic(capsys):
    runs = [run(capsys, "lift", CUSP, "--random", "3", "2") for _ in range(2)]
    assert runs[0] == runs[1]
    assert "seed: 3  count: 2" in runs[0][1]
    assert runs[0][1].count("-- draw") == 2


def test_lift_reference_mode_exits_3_without_a_reference(capsys):
    code, out, err = run(capsys, "lift", OFFJET, "--search-depth", "2")
    assert code == 3
    assert "no strict lift found within search depth 2" in err


def test_lift_reference_mode_finds_the_shifted_node(capsys):
    code, out, err = run(capsys, "lift", SHIFTED)
    assert code == 0
    assert "mode: reference" in out
    assert "strict: true" in out


def test_lift_json_roundtrips(capsys):
    code, out, err = run(capsys, "lift", CUSP, "--t-free", "x^9", "--json")
    doc = json.loads(out)
    assert doc["mode"] == "t-free"
    assert doc["lift"]["strict"] is True
    assert doc["lift"]["eff_prec"] == 37
    ring = load_problem(CUSP).ring
    assert parse_series(doc["lift"]["y2"][1], ring) == ring.parse("x^2 + 4*x^17")


def test_lift_rejects_wrong_arity(capsys):
    code, out, err = run(capsys, "lift", CUSP, "--t-free", "x, x^2")
    assert code == 1


def test_working_precision_env_override(capsys, monkeypatch):
    monkeypatch.setenv("ARCLIFT_NWORK", "20")
    code, out, err = run(capsys, "lift", CUSP, "--t-free", "x^9")
    assert code == 0
    assert "y2_1 = x^3 + O(x^17)" in out
    assert "eff_prec: 17" in out


def test_bad_env_value_is_a_parse_error(capsys, monkeypatch):
    monkeypatch.setenv("ARCLIFT_NWORK", "soon")
    code, out, err = run(capsys, "validate", CUSP)
    assert code == 4


# -- extract and roundtrip ------------------------------------------------


def test_extract_golden(capsys):
    code, out, err = run(
        capsys, "extract", CUSP, "--arc", "x^3 + 6*x^18 + 6*x^33, x^2 + 4*x^17"
    )
    assert code == 0
    assert "t_1 = 3*x^28 + O(x^35)" in out
    assert "t_2 = x^9 + O(x^32)" in out


def test_extract_non_strict_arc_exits_1(capsys):
    code, out, err = run(capsys, "extract", NODE, "--arc", "x^2 + x^9, x^4 + x^11")
    assert code == 1
    assert "congruence window" in err


def test_extract_with_reference_reports_offsets(capsys):
    code, out, err = run(
        capsys, "extract", CUSP,
        "--arc", "x^3 + 6*x^19 + 6*x^35, x^2 + 4*x^18",
        "--reference", "0",
    )
    assert code == 0
    assert "z_1 = x + O(x^23)" in out


def test_extract_out_of_family_exits_1(capsys):
    ring = SeriesRing(load_problem(CUSP).ring.field)
    s = ring.parse("x + x^8")
    arc = ", ".join(v.render() for v in (s * s * s, s * s))
    code, out, err = run(capsys, "extract", CUSP, "--arc", arc, "--reference", "0")
    assert code == 1
    assert "differs from the reference" in err


def test_roundtrip_golden(capsys):
    code, out, err = run(capsys, "roundtrip", CUSP, "--count", "3")
    assert code == 0
    lines = out.splitlines()
    assert "reference newton_iterations: 0" in lines
    assert lines.count("trial 1: ok (offsets recovered through x^22)") == 1
    assert "roundtrip: 3/3 ok" in lines


# -- oracle ----------------------------------------------------------------


def test_oracle_golden(capsys):
    code, out, err = run(capsys, "oracle", CUSP5, "--prec", "10")
    assert code == 0
    lines = out.splitlines()
    assert "window: x^10" in lines
    assert "candidates: 25" in lines
    assert "members: 25" in lines
    assert "containment: 10/10 random strict lifts are members" in lines
    assert "member 2: y1 = x^3 + O(x^10) ; y2 = x^2 + x^9 + O(x^10)" in lines


def test_oracle_is_deterministic(capsys):
    a = run(capsys, "oracle", CUSP5, "--prec", "11")
    b = run(capsys, "oracle", CUSP5, "--prec", "11")
    assert a == b


def test_oracle_with_no_family_members(capsys):
    code, out, err = run(capsys, "oracle", OFFJET5, "--prec", "10")
    assert code == 0
    assert "members: 0" in out
    assert "containment: skipped" in out


def test_oracle_rejects_rational_fields(capsys):
    code, out, err = run(capsys, "oracle", CUSP, "--prec", "10")
    assert code == 1


def test_oracle_budget_exit(capsys):
    code, out, err = run(capsys, "oracle", CUSP5, "--prec", "30")
    assert code == 1
    assert "budget" in err.lower()


# -- exit codes and parse errors -------------------------------------------


def test_missing_file_is_a_parse_error(capsys):
    code, out, err = run(capsys, "validate", "no_such_file.json")
    assert code == 4


def test_bad_series_text_is_a_parse_error(capsys):
    code, out, err = run(capsys, "lift", CUSP, "--t-free", "2x")
    assert code == 4


def test_usage_error_is_a_parse_error(capsys):
    code, out, err = run(capsys, "lift", CUSP, "--no-such-flag")
    assert code == 4


def test_smooth_point_has_no_parameters(capsys):
    code, out, err = run(capsys, "lift", SMOOTH, "--t-free", "")
    assert code in (0, 4)
    code, out, err = run(capsys, "lift", SMOOTH)
    assert code == 0
    assert "strict: true" in out


def test_space_curve_cli(capsys):
    code, out, err = run(capsys, "desingularize", TCURVE)
    assert code == 0
    assert "perm: 2 3 1" in out
    assert "verified: yes" in out
