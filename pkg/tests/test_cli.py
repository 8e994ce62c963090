import csv
import io
import json
import subprocess
import sys

import pytest

from df_spectra.cli import main
from df_spectra.molecules import HEADER


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_energy_text(capsys):
    code, out, _ = run(capsys, "energy", "--molecule", "CO", "--potential", "df",
                       "--n", "0", "--l", "0", "--dim", "3", "--delta", "1")
    assert code == 0 and out == "0.14236930\n"


def test_energy_shifted(capsys):
    code, out, _ = run(capsys, "energy", "--molecule", "CO", "--potential", "sdf", "--n", "0", "--l", "0")
    assert code == 0
    assert round(float(out), 7) == -10.7027043


def test_energy_general_needs_v0(capsys):
    code, _, err = run(capsys, "energy", "--molecule", "CO", "--potential", "general", "--n", "0", "--l", "0")
    assert code == 64
    code, out, _ = run(capsys, "energy", "--molecule", "CO", "--potential", "general", "--v0", "1.5",
                       "--n", "0", "--l", "0")
    assert code == 0 and float(out) == pytest.approx(1.5 + 0.14236930, abs=1e-8)


def test_energy_json_csv_roundtrip(capsys):
    args = ["energy", "--molecule", "N2", "--n", "2", "--l", "1", "--delta", "0.5", "--gamma", "1.3"]
    _, js, _ = run(capsys, *args, "--format", "json")
    _, cs, _ = run(capsys, *args, "--format", "csv")
    record = json.loads(js)
    row = next(csv.DictReader(io.StringIO(cs)))
    for key in ("e_ev", "epsilon", "sqrt_s", "root"):
        assert float(row[key]) == record[key]
    assert row["molecule"] == record["molecule"] == "N2"


@pytest.mark.parametrize("argv,code", [
    (["energy", "--molecule", "CO", "--n", "0", "--l", "0", "--delta", "0"], 64),
    (["energy", "--molecule", "CO", "--n", "0", "--l", "0", "--delta", "1.5"], 64),
    (["energy", "--molecule", "XeF", "--n", "0", "--l", "0"], 2),
    (["energy", "--molecule", "H2", "--n", "40", "--l", "0"], 3),
    (["energy", "--molecule", "CO", "--n", "x", "--l", "0"], 64),
    (["energy", "--molecule", "CO", "--n", "-1", "--l", "0"], 64),
    (["frobnicate"], 64),
    (["table", "--deltas", ""], 64),
    (["table", "--molecules", "XeF"], 2),
    (["calibrate", "--table", "dfp-co", "--delta", "0.3"], 2),
    (["calibrate", "--table", "nope", "--delta", "0.5"], 2),
    (["calibrate"], 64),
    (["verify", "--tables", "nope"], 2),
])
def test_exit_codes(capsys, argv, code):
    try:
        got = main(argv)
    except SystemExit as exc:
        got = exc.code
    assert got == code


def test_table_shape_and_order(capsys):
    code, out, _ = run(capsys, "table", "--molecules", "CO", "--potential", "df", "--n-max", "3",
                       "--l-max", "3", "--dims", "3", "--deltas", "0.2,0.5,0.8,1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 40
    keys = [(int(r["n"]), int(r["l"]), int(r["dim"]), float(r["delta"])) for r in rows]
    assert keys == sorted(keys)
    first = rows[3]
    assert (first["n"], first["l"], first["delta"]) == ("0", "0", "1")
    assert float(first["e_ev"]) == pytest.approx(0.14236930, abs=1e-8)


def test_table_deterministic_and_lf(capsys, tmp_path):
    argv = ["table", "--molecules", "CO,I2", "--dims", "3,5", "--deltas", "0.5,1"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b and "\r" not in a
    path = tmp_path / "t.csv"
    assert main(argv + ["--output", str(path)]) == 0
    assert path.read_bytes() == a.encode()


def test_table_skip_unbound(capsys):
    code, _, _ = run(capsys, "table", "--molecules", "H2", "--n-max", "20", "--l-max", "0")
    assert code == 3
    code, out, _ = run(capsys, "table", "--molecules", "H2", "--n-max", "20", "--l-max", "0", "--skip-unbound")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[-1]["e_ev"] == "" and rows[14]["e_ev"] != ""


def test_verify_default(capsys):
    code, out, err = run(capsys, "verify")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 14
    assert all(r["status"] == "PASS" for r in rows)
    assert all(r["max_dev_fractional"] == "" for r in rows)
    assert "verify: PASS" in err


def test_verify_all_deltas_and_strict(capsys):
    code, out, _ = run(capsys, "verify", "--tables", "dfp-co", "--all-deltas")
    row = next(csv.DictReader(io.StringIO(out)))
    assert code == 0 and row["rows"] == "70" and float(row["max_dev_fractional"]) < 1e-6
    code, _, _ = run(capsys, "verify", "--tables", "dfp-co", "--strict", "--tol", "1e-12")
    assert code == 1
    code, _, _ = run(capsys, "verify", "--tables", "dfp-co", "--tol", "1e-12")
    assert code == 1


def test_calibrate_single(capsys):
    code, out, _ = run(capsys, "calibrate", "--table", "dfp-co", "--delta", "0.5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 1
    assert float(rows[0]["gamma_star"]) == pytest.approx(1.0, abs=1e-4)
    _, again, _ = run(capsys, "calibrate", "--table", "dfp-co", "--delta", "0.5")
    assert again == out


def test_potential_has_minimum_row(capsys):
    code, out, _ = run(capsys, "potential", "--molecule", "CO", "--samples", "50")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 51
    at_re = [r for r in rows if float(r["r_angstrom"]) == 1.1282]
    assert len(at_re) == 1 and abs(float(at_re[0]["v_ev"])) < 1e-12


def test_potential_bad_range(capsys):
    code, _, _ = run(capsys, "potential", "--molecule", "CO", "--r-min", "2", "--r-max", "1")
    assert code == 64


def test_wavefunction_sign_changes(capsys):
    code, out, err = run(capsys, "wavefunction", "--molecule", "CO", "--n", "2", "--l", "0",
                         "--samples", "2000")
    assert code == 0 and err == ""
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["r_angstrom", "phi", "F", "rho"]
    phi = [float(r["phi"]) for r in rows if float(r["phi"]) != 0.0]
    changes = sum(1 for a, b in zip(phi, phi[1:]) if (a < 0) != (b < 0))
    assert changes == 2


def test_wavefunction_fractional_note(capsys):
    code, _, err = run(capsys, "wavefunction", "--molecule", "CO", "--n", "1", "--l", "0",
                       "--delta", "0.5", "--samples", "10")
    assert code == 0 and "experimental" in err


def test_oracle_report(capsys):
    code, out, _ = run(capsys, "oracle", "--molecule", "CO", "--l", "0", "--n-max", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert all(abs(float(r["delta_pekeris"])) <= 1e-4 for r in rows)


def test_molecules_listing(capsys, tmp_path, monkeypatch):
    code, out, _ = run(capsys, "molecules")
    lines = out.splitlines()
    assert code == 0 and lines[0] == ",".join(HEADER) and len(lines) == 11
    extra = tmp_path / "x.csv"
    extra.write_text(",".join(HEADER) + "\nXY,1.2,2.0,7.0,50000\n")
    monkeypatch.setenv("DF_SPECTRA_MOLECULES", str(extra))
    code, out, _ = run(capsys, "molecules")
    assert len(out.splitlines()) == 12
    code, out, _ = run(capsys, "energy", "--molecule", "XY", "--n", "0", "--l", "0")
    assert code == 0


def test_bad_molecule_file(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text(",".join(HEADER) + "\nXY,1,-2,3,4\n")
    code, _, err = run(capsys, "--molecules-file", str(bad), "molecules")
    assert code == 2 and ":2:" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "df_spectra.cli", "energy", "--molecule", "CO",
                           "--n", "0", "--l", "0"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "0.14236930\n"
