import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from pdmosc.cli import RunConfig, main, run
from pdmosc.errors import DomainError

GOLDEN = Path(__file__).parent / "golden" / "wkb_compare_sinh2.csv"


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def _cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_first_kind(capsys):
    code, out, _ = _cli(capsys, "spectrum", "--family", "regular", "--potential", "harmonic", "--levels", "10")
    assert code == 0
    rows = _rows(out)
    assert [int(r["k"]) for r in rows] == list(range(10))
    for r in rows:
        assert float(r["E"]) == pytest.approx(int(r["k"]) + 0.5, abs=1e-8)


def test_wkb_compare_matches_golden(capsys):
    code, out, _ = _cli(capsys, "wkb-compare", "--potential", "sinh2", "--levels", "10")
    assert code == 0
    got = _rows(out)
    ref = _rows(GOLDEN.read_text())
    assert len(got) == len(ref) == 10
    for g, r in zip(got, ref):
        assert g["k"] == r["k"]
        assert abs(float(g["E_wkb"]) - float(r["E_wkb"])) <= 5e-5
        assert abs(float(g["E_schrodinger"]) - float(r["E_schrodinger"])) <= 1e-3


def test_coherent_json_mean(capsys):
    code, out, _ = _cli(capsys, "coherent", "--family", "regular", "--z", "1,0", "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert body["mean"] == pytest.approx(2.0, abs=1e-12)
    assert body["stddev"] == pytest.approx(math.sqrt(2), abs=1e-8)
    assert body["uncertainty_y"] == pytest.approx(0.5, abs=1e-4)
    assert sum(p for _, p in body["poisson"]) == pytest.approx(1.0, abs=1e-8)
    assert len(body["density"]["x"]) == len(body["density"]["rho"])


def test_invalid_pair_exits_with_domain_status(capsys):
    code, out, err = _cli(capsys, "second-kind", "--family", "singular0", "--potential", "harmonic")
    assert code == 2
    assert out == ""
    assert "domain error" in err


def test_bad_solver_config_status(capsys):
    code, _, err = _cli(capsys, "spectrum", "--ymax-margin", "-1")
    assert code == 2
    assert err


def test_second_kind_squeezed(capsys):
    code, out, _ = _cli(capsys, "second-kind", "--family", "singular0", "--potential", "squeezed", "--levels", "3")
    assert code == 0
    rows = _rows(out)
    shift = (1 - math.sqrt(2)) / 4
    assert float(rows[0]["E_numeric"]) - shift == pytest.approx(0.60571, abs=1e-3)


def test_first_kind_table(capsys):
    code, out, _ = _cli(capsys, "first-kind", "--family", "singular_n", "--n", "2", "--levels", "4")
    assert code == 0
    for r in _rows(out):
        assert float(r["E_numeric"]) == pytest.approx(float(r["E_exact"]), abs=1e-8)


def test_eigenfunction_pulled_back(capsys):
    code, out, _ = _cli(capsys, "eigenfunction", "--family", "regular", "--k", "1", "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert body["columns"] == ["x", "psi"]
    assert body["energy"] == pytest.approx(1.5, abs=1e-8)


def test_eigenfunction_skips_mass_pole(capsys):
    code, out, _ = _cli(capsys, "eigenfunction", "--family", "singular_n", "--n", "2", "--k", "2", "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert all(math.isfinite(x) and x != 0.0 for x, _ in body["rows"])
    assert all(math.isfinite(v) for _, v in body["rows"])


def test_ladder_coefficient(capsys):
    code, out, _ = _cli(capsys, "ladder", "--k", "3", "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert body["coefficient"] == pytest.approx(math.sqrt(6), abs=1e-5)
    assert body["expected"] == pytest.approx(math.sqrt(6), rel=1e-8)


def test_byte_identical_runs(capsys):
    argv = ("coherent", "--family", "singular0", "--z", "0.5,-1", "--format", "json")
    _, first, _ = _cli(capsys, *argv)
    _, second, _ = _cli(capsys, *argv)
    assert first == second


def test_config_round_trip():
    cfg = RunConfig("coherent", family="regular", z=(1.0, -2.0), format="json", levels=4)
    again = RunConfig.from_json(cfg.to_json())
    assert again == cfg
    assert RunConfig.from_dict(json.loads(run(cfg))["config"]) == cfg


def test_config_rejects_unknown_keys():
    with pytest.raises(DomainError):
        RunConfig.from_dict({"command": "spectrum", "colour": "red"})


@pytest.mark.parametrize("bad", [dict(levels=0), dict(format="xml"), dict(family="bogus"), dict(k=-1)])
def test_config_validation(bad):
    with pytest.raises((DomainError, ValueError)):
        RunConfig("spectrum", **bad).validate()


def test_config_file_and_flag_override(tmp_path, capsys):
    conf = tmp_path / "run.json"
    conf.write_text(json.dumps({"command": "spectrum", "potential": "harmonic", "levels": 5}))
    code, out, _ = _cli(capsys, "spectrum", "--config", str(conf), "--levels", "2")
    assert code == 0
    assert len(_rows(out)) == 2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "levels.csv"
    code, out, _ = _cli(capsys, "spectrum", "--levels", "3", "--out", str(target))
    assert code == 0
    assert out == ""
    assert [r["E"] for r in _rows(target.read_text())] == ["0.5", "1.5", "2.5"]


def test_catalog_json(capsys):
    code, out, _ = _cli(capsys, "catalog", "--format", "json")
    assert code == 0
    rows = json.loads(out)["catalog"]
    assert {r["kind"] for r in rows} == {"first", "second"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pdmosc", "spectrum", "--levels", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == "k,E\n0,0.5\n"
