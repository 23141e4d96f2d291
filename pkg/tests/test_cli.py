import csv
import json

import numpy as np
import pytest

from wfuncs import diffmatrix as DM
from wfuncs.cli import main


def run(*args):
    return main(list(args))


def test_dmat_writes_csv_and_sidecar(tmp_path, capsys):
    out = tmp_path / "d.csv"
    rc = run("dmat", "--family", "laguerre", "--alpha", "2", "--s", "2",
             "--display", "20", "--internal", "60", "--out", str(out))
    assert rc == 0
    entries = DM.section_read_csv(str(out))
    assert entries.shape == (20, 20)
    meta = json.loads((tmp_path / "d.csv.json").read_text())
    assert meta["family"]["kind"] == "laguerre"
    assert meta["s"] == 2
    assert meta["display"] == 20
    assert meta["internal"] == 60
    assert np.isfinite(meta["max_abs"])


def test_dmat_round_trip_bit_identical(tmp_path):
    out = tmp_path / "d.csv"
    assert run("dmat", "--family", "ultraspherical", "--alpha", "1",
               "--display", "16", "--internal", "40", "--out", str(out)) == 0
    first = DM.section_read_csv(str(out))
    assert run("dmat", "--family", "ultraspherical", "--alpha", "1",
               "--display", "16", "--internal", "40", "--out", str(out)) == 0
    assert np.array_equal(first, DM.section_read_csv(str(out)))
    # skew symmetry of the s=1 section
    assert np.max(np.abs(first + first.T)) < 1e-12


def test_dmat_rejects_s_zero():
    assert run("dmat", "--family", "laguerre", "--alpha", "2", "--s", "0") == 2


def test_missing_parameters_are_config_errors():
    assert run("dmat", "--family", "laguerre") == 2
    assert run("dmat", "--family", "konoplev", "--alpha", "1") == 2
    assert run("dmat") == 2


def test_matvec_trivial_case(tmp_path):
    out = tmp_path / "h.csv"
    rc = run("matvec", "--family", "ultraspherical", "--alpha", "1",
             "--M", "0", "--N", "0", "--out", str(out))
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1
    assert float(rows[0]["h"]) == 0.0


def test_matvec_deterministic_given_seed(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run("matvec", "--family", "laguerre", "--alpha", "2",
                   "--M", "8", "--N", "16", "--seed", "42", "--out", str(path)) == 0
    assert a.read_text() == b.read_text()


def test_expand_grid_output(tmp_path):
    out = tmp_path / "e.csv"
    rc = run("expand", "--family", "ultraspherical", "--alpha", "2",
             "--func", "us1", "--N", "30", "--grid=-0.5:0.5:5", "--out", str(out))
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 5
    for row in rows:
        assert abs(float(row["value"]) - float(row["exact"])) < 1e-10


def test_errplot_monotone_until_double_floor(tmp_path):
    out = tmp_path / "err.csv"
    rc = run("errplot", "--family", "ultraspherical", "--alpha", "2",
             "--func", "us1", "--N", "40", "--out", str(out))
    assert rc == 0
    sup = [float(r["sup_err"]) for r in csv.DictReader(out.open())]
    floor = 1e-13
    above = [s for s in sup if s > floor]
    assert all(b < a for a, b in zip(above, above[1:]))
    assert min(sup) < floor


def test_separability_json(tmp_path):
    out = tmp_path / "sep.json"
    rc = run("separability", "--family", "konoplev", "--alpha", "1",
             "--gamma", "0", "--N", "40", "--format", "json", "--out", str(out))
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["separable"] is False
    assert rep["symmetrically_separable"] is False
    assert rep["iota_check_3_0"] == pytest.approx(5.91608, abs=1e-5)


def test_powers_growth_json(tmp_path):
    out = tmp_path / "g.json"
    rc = run("powers-growth", "--family", "laguerre", "--alpha", "1", "--s", "2",
             "--internal", "150", "--display", "50", "--out", str(out))
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["relative_change"] > 0.02


def test_table45_values(tmp_path):
    out = tmp_path / "t.csv"
    assert run("table45", "--out", str(out)) == 0
    rows = {float(r["alpha"]): r for r in csv.DictReader(out.open())}
    assert len(rows) == 4
    assert float(rows[1.0]["order2"]) >= 1e6
    assert float(rows[2.0]["order0"]) <= 1e-10
    assert float(rows[4.0]["order2"]) <= 1e-1
