import csv
import io
import json
from functools import partial

import pytest

import casimir_thermal.lifshitz as lif
from casimir_thermal.cli import HEADER, Row, build_parser, emit_table, main
from casimir_thermal.lifshitz import ParallelPlates, force_pp


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_pp_single_record(capsys, gold):
    code, out, _ = run(["pp", "--material", "Au", "--model", "plasma", "--d", "3e-6", "--T", "300",
                        "--area", "0.012"], capsys)
    assert code == 0
    (row,) = parse_csv(out)
    expected = force_pp(gold.with_model("plasma"), ParallelPlates(0.012, 3e-6), 300.0)
    assert float(row["value"]) == pytest.approx(expected.magnitude, rel=1e-8)
    assert row["unit"] == "N" and row["geometry"] == "pp" and row["model"] == "plasma"
    assert int(row["m_terms"]) == expected.m_terms_used
    assert float(row["rel_err"]) >= 0


def test_pp_without_area_reports_pressure(capsys):
    code, out, _ = run(["pp", "--d", "1e-6"], capsys)
    assert code == 0 and parse_csv(out)[0]["unit"] == "Pa"


def test_cp_record(capsys):
    code, out, _ = run(["cp", "--material", "ideal_proxy", "--d", "3e-6", "--T", "1", "--L", "0.02", "--a", "0.01"],
                       capsys)
    assert code == 0
    assert float(parse_csv(out)[0]["value"]) == pytest.approx(7.719e-11, rel=1e-2)


def test_sweep_fig1b_shape(capsys):
    code, out, _ = run(["sweep", "--geometry", "cp", "--L", "0.02", "--a", "0.01", "--d-min", "1e-6",
                        "--d-max", "1e-5", "--points", "50", "--models", "plasma,drude", "--T", "300",
                        "--jobs", "2"], capsys)
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 100
    by_d = {}
    for r in rows:
        by_d.setdefault(r["d_m"], {})[r["model"]] = float(r["value"])
    assert len(by_d) == 50
    assert all(v["plasma"] > v["drude"] for v in by_d.values())


def test_sweep_asymptote_models(capsys):
    code, out, _ = run(["sweep", "--d-min", "1e-6", "--d-max", "2e-6", "--points", "2",
                        "--models", "ideal,thermal,lowT", "--area", "0.012"], capsys)
    assert code == 0
    rows = parse_csv(out)
    assert [r["model"] for r in rows] == ["ideal", "thermal", "lowT"] * 2
    assert all(r["unit"] == "N" for r in rows)


def test_sweep_bad_models(capsys):
    code, _, err = run(["sweep", "--d-min", "1e-6", "--d-max", "2e-6", "--models", "plasma,foo"], capsys)
    assert code == 2 and err.count("\n") == 1 and err.startswith("error: argument:")


def test_sweep_bad_range(capsys):
    code, _, _ = run(["sweep", "--d-min", "3e-6", "--d-max", "2e-6"], capsys)
    assert code == 2


def test_dce(capsys):
    code, out, _ = run(["dce", "--Q", "1e8", "--eps", "1e-8", "--freq-hz", "228e6"], capsys)
    assert code == 0
    vals = {r["quantity"]: float(r["value"]) for r in csv.DictReader(io.StringIO(out))}
    assert vals["photons_saturated"] == pytest.approx(1.38110, abs=1e-5)
    assert vals["tau_sat"] == pytest.approx(0.069805, rel=1e-5)
    assert vals["power"] == pytest.approx(2.989e-24, rel=1e-3)


def test_dce_with_transition_jsonl(capsys):
    code, out, _ = run(["dce", "--Q", "1e8", "--eps", "1e-8", "--dipole", "8.478e-30",
                        "--kind", "magnetic_dipole", "--v-over-c", "1e-3", "--ref-hz", "4.46e14",
                        "--format", "jsonl"], capsys)
    assert code == 0
    vals = {d["quantity"]: d["value"] for d in map(json.loads, out.splitlines())}
    assert 0 < vals["comparison_ratio"] < 1e-20


def test_dce_out_of_model(capsys):
    code, _, err = run(["dce", "--Q", "1e11", "--eps", "1e-8"], capsys)
    assert code == 2 and "exceeds" in err


def test_asymptote(capsys):
    code, out, err = run(["asymptote", "--geometry", "cp", "--d", "3e-6", "--L", "0.02", "--a", "0.01"], capsys)
    assert code == 0 and "T_eff" in err
    assert [r["model"] for r in parse_csv(out)] == ["ideal", "thermal", "lowT"]


def test_materials_listing(capsys):
    code, out, _ = run(["materials"], capsys)
    assert code == 0 and "Au,drude" in out


def test_bad_db_exit_3(tmp_path, capsys):
    db = tmp_path / "bad.db"
    db.write_text("material X\n  model = plasma\n  plasma_frequency_eV = -1\n")
    code, _, err = run(["--db", str(db), "pp", "--material", "X", "--d", "1e-6"], capsys)
    assert code == 3 and "plasma_frequency_eV" in err


def test_missing_db_exit_3(tmp_path, capsys):
    code, _, _ = run(["--db", str(tmp_path / "none.db"), "materials"], capsys)
    assert code == 3


def test_env_db(tmp_path, monkeypatch, capsys):
    db = tmp_path / "db.txt"
    db.write_text("material Cu\n  model = drude\n  plasma_frequency_eV = 8.0\n  relaxation_meV = 20\n")
    monkeypatch.setenv("CASIMIR_MATERIAL_DB", str(db))
    code, out, _ = run(["pp", "--material", "Cu", "--d", "2e-6"], capsys)
    assert code == 0 and parse_csv(out)[0]["model"] == "drude"


def test_tabulated_requires_m0(tmp_path, capsys):
    db = tmp_path / "tab.db"
    db.write_text("material T\n  model = tabulated\n  table:\n    1e13 1e6\n    1e17 1.5\n")
    code, _, err = run(["--db", str(db), "pp", "--material", "T", "--d", "2e-6"], capsys)
    assert code == 2 and "--m0" in err
    code, out, _ = run(["--db", str(db), "pp", "--material", "T", "--d", "2e-6", "--m0", "drude-like"], capsys)
    assert code == 0 and float(parse_csv(out)[0]["value"]) > 0


def test_argument_error_exit_2(capsys):
    code, _, err = run(["pp", "--d", "abc"], capsys)
    assert code == 2 and err.startswith("error: argument:")
    code, _, _ = run(["pp", "--d", "-1e-6"], capsys)
    assert code == 2


def test_convergence_failure_exit_4(monkeypatch, capsys):
    monkeypatch.setattr(lif, "integrate", partial(lif.integrate, max_depth=0))
    code, _, err = run(["pp", "--d", "1e-6", "--rel-tol", "1e-14"], capsys)
    assert code == 4 and err.startswith("error: convergence:") and err.count("\n") == 1


def test_unwritable_output_exit_2(tmp_path, capsys):
    code, _, err = run(["pp", "--d", "1e-6", "--out", str(tmp_path / "missing" / "x.csv")], capsys)
    assert code == 2 and err.startswith("error: io:")


@pytest.mark.parametrize("command", ["pp", "cp", "sweep", "asymptote", "dce", "materials"])
def test_help_lists_flags_with_units(command, capsys):
    with pytest.raises(SystemExit) as exc:
        main([command, "--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    sub = build_parser()._subparsers._group_actions[0].choices[command]
    for action in sub._actions:
        for opt in action.option_strings:
            if action.help != "==SUPPRESS==":
                assert opt in text
    if command in ("pp", "cp", "sweep"):
        for unit in (", m", ", K", "rad/s", "radians"):
            assert unit in text


# -- emit_table ---------------------------------------------------------------

def test_emit_empty():
    buf = io.StringIO()
    n = emit_table([], "csv", buf)
    assert buf.getvalue() == ",".join(HEADER) + "\n"
    assert n == len(buf.getvalue())


def test_emit_one_row():
    buf = io.StringIO()
    emit_table([Row(3e-6, 300.0, "plasma", "pp", 2.085236884e-07, "N", 8, 4.9e-11)], "csv", buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == 2
    assert len(lines[1].split(",")) == 8


def test_emit_round_trip():
    values = [1.0 / 3.0, 2.0852368845e-07, 6.02214076e23, 1e-300]
    buf = io.StringIO()
    emit_table([Row(1e-6, 300.0, "plasma", "pp", v, "Pa") for v in values], "csv", buf)
    for v, row in zip(values, parse_csv(buf.getvalue())):
        back = float(row["value"])
        assert abs(back - v) <= 0.5e-8 * abs(v)
        assert len(row["value"].split("e")[0].replace(".", "").lstrip("-")) == 9


def test_emit_jsonl():
    buf = io.StringIO()
    emit_table([Row(1e-6, 300.0, "drude", "cp", 1.5e-9, "N", 12, 1e-10)], "jsonl", buf)
    obj = json.loads(buf.getvalue())
    assert list(obj) == list(HEADER)
    assert obj["m_terms"] == 12 and obj["value"] == 1.5e-9


def test_sweep_files_byte_identical(tmp_path, capsys):
    args = ["sweep", "--geometry", "pp", "--d-min", "0.5e-6", "--d-max", "30e-6", "--points", "12",
            "--models", "plasma,drude,thermal", "--area", "0.012"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--jobs", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
