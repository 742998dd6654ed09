import csv
import io
import json
from fractions import Fraction as F
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from p3confluence import cli

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def validate(doc):
    schema = json.loads((SCHEMAS / f"{doc['command']}.schema.json").read_text())
    jsonschema.validate(doc, schema)


# -- parsing -----------------------------------------------------------------------

@given(st.fractions(max_denominator=1000))
def test_parse_rational_roundtrip(q):
    assert cli.parse_number(str(q)) == q


def test_parse_complex_and_grid():
    assert cli.parse_number("1+2i") == 1 + 2j
    assert cli.parse_number("-0.5i") == -0.5j
    assert cli.parse_grid("0:1:3") == [0, 0.5, 1]
    assert cli.parse_grid("0:0.1i:2") == [0, 0.1j]
    assert cli.parse_grid("0.25") == [0.25]
    for bad in ("0:1", "0:1:x", "0:1:0", "a:b:2"):
        with pytest.raises(cli.UsageError):
            cli.parse_grid(bad)
    with pytest.raises(cli.UsageError):
        cli.parse_number("nan")


def test_serialization():
    assert cli.jnum(F(3, 4)) == "3/4"
    assert cli.jnum(1 - 2j) == {"re": 1.0, "im": -2.0}
    assert cli.cnum(1 - 2j) == "1.0-2.0i"
    assert cli.cnum(2 + 0j) == "2.0"
    assert cli.cnum(None) == ""


# -- umemura --------------------------------------------------------------------------

def test_umemura_json(capsys):
    code, out, _ = run(["umemura", "--m", "1/4", "--n-max", "8"], capsys)
    assert code == 0
    doc = json.loads(out)
    validate(doc)
    # s_1 = (4x + 2m + 1)/2
    assert doc["polys"][2]["coeffs"] == ["3/4", "2"]
    assert [o["s_n0"] for o in doc["origin"][:3]] == ["1", "3/4", "-21/64"]


def test_umemura_nmax_zero(capsys):
    code, out, _ = run(["umemura", "--m", "1/3", "--n-max", "0"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert [p["coeffs"] for p in doc["polys"]] == [["1"], ["1"]]


def test_umemura_csv(capsys):
    code, out, _ = run(["umemura", "--m", "0", "--n-max", "2", "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["n", "degree", "s_n0", "u_n0", "coeffs"]
    assert rows[3] == ["1", "1", "1/2", "-1", "1/2 2"]


def test_umemura_half_integer_exit_2(capsys):
    code, _, err = run(["umemura", "--m", "1/2", "--n-max", "4"], capsys)
    assert code == 2 and "HalfIntegerM" in err


@pytest.mark.parametrize("argv", [
    ["umemura", "--m", "1+2i"],
    ["umemura", "--m", "1/4", "--n-max", "-1"],
    ["umemura"],
    ["nosuch"],
    ["fredholm", "--m", "1/2"],
])
def test_usage_errors(argv, capsys):
    assert run(argv, capsys)[0] == 1


# -- confluence ----------------------------------------------------------------------------

def test_confluence_csv_and_trend(capsys):
    code, out, _ = run(["confluence", "--m", "1/4", "--z", "0.1", "--j", "2,4,8", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["j", "z_re", "z_im", "gap_even", "gap_odd", "flag"]
    ge = [float(r["gap_even"]) for r in rows]
    assert ge[2] < ge[1] < ge[0]


def test_confluence_origin_json(capsys):
    code, out, _ = run(["confluence", "--m", "1/4", "--z", "0", "--j", "2,4"], capsys)
    doc = json.loads(out)
    validate(doc)
    assert code == 0 and len(doc["rows"]) == 2 and doc["trends"][0]["rate_even"] > 0


def test_confluence_pole_flagged(capsys, monkeypatch):
    import p3confluence.series as series
    from p3confluence.exact import PoleHit

    real = series.confluence_gap

    def fake(j, m, z, K=60, U=None):
        if j == 4:
            raise PoleHit("near a pole")
        return real(j, m, z, K, U)

    monkeypatch.setattr(series, "confluence_gap", fake)
    code, out, _ = run(["confluence", "--m", "1/4", "--z", "0", "--j", "2,4,8"], capsys)
    doc = json.loads(out)
    validate(doc)
    assert code == 0
    assert [r["flag"] for r in doc["rows"]] == ["", "PoleHit", ""]
    assert doc["rows"][1]["gap_even"] is None


# -- fredholm -----------------------------------------------------------------------------

def test_fredholm_lambda_one(capsys):
    code, out, _ = run(["fredholm", "--lam", "1", "--r", "0:2:5"], capsys)
    doc = json.loads(out)
    validate(doc)
    assert code == 0
    first = doc["rows"][0]
    assert first["logDet_nystrom"] == {"re": 0.0, "im": 0.0} and first["sigma_form_residual"] == 0
    for row in doc["rows"]:
        r = row["r"]["re"]
        assert row["logDet_nystrom"]["re"] == pytest.approx(-r / 4, abs=1e-12)
        assert row["logDet_series"]["re"] == pytest.approx(-r / 4, abs=1e-12)


def test_fredholm_csv_residuals(capsys):
    code, out, _ = run(["fredholm", "--m", "1/4", "--r", "0:5:3", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["r", "logDet_series", "logDet_nystrom", "sigma", "sigma_form_residual"]
    assert all(float(r["sigma_form_residual"]) <= 1e-8 for r in rows)
    # beyond the series budget the series column is empty
    assert rows[-1]["logDet_series"] == ""


# -- monodromy ------------------------------------------------------------------------------

def test_monodromy_json(capsys):
    code, out, _ = run(["monodromy", "--draws", "25", "--seed", "7"], capsys)
    doc = json.loads(out)
    validate(doc)
    assert code == 0
    for row in doc["rows"]:
        assert max(row["cubic_d6"], row["cubic_d8"], row["cyclic"], row["eigen"]) <= 1e-10
    assert abs(doc["rational"]["y"][2]["re"]) <= 1e-12
    assert doc["rational"]["closed_form_gap"] <= 1e-12


def test_outputs_are_deterministic(tmp_path, monkeypatch):
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert cli.main(["monodromy", "--draws", "10", "--seed", "3", "--format", "csv", "--out", str(a)]) == 0
    assert cli.main(["monodromy", "--draws", "10", "--seed", "3", "--format", "csv", "--out", str(b)]) == 0
    monkeypatch.setenv("P3C_THREADS", "4")
    assert cli.main(["monodromy", "--draws", "10", "--seed", "3", "--format", "csv", "--out", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()
    d = tmp_path / "d.csv"
    assert cli.main(["monodromy", "--draws", "10", "--seed", "4", "--format", "csv", "--out", str(d)]) == 0
    assert a.read_bytes() != d.read_bytes()


# -- verify ------------------------------------------------------------------------------------

def test_verify_subset_json(capsys):
    code, out, _ = run(["verify", "--only", "umemura", "--format", "json"], capsys)
    doc = json.loads(out)
    validate(doc)
    assert code == 0
    assert {r["group"] for r in doc["results"]} == {"umemura"}
    assert all(r["status"] == "pass" for r in doc["results"])


def test_verify_tightened_tolerance_fails(capsys):
    code, out, _ = run(["verify", "--only", "fredholm", "--tol", "*=1e-16"], capsys)
    assert code == 2
    assert "[FAIL]" in out


@pytest.mark.parametrize("argv", [
    ["verify", "--only", "nosuch"],
    ["verify", "--tol", "nosuch=1"],
    ["verify", "--tol", "novalue"],
])
def test_verify_usage(argv, capsys):
    assert run(argv, capsys)[0] == 1
