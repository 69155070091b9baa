import csv
import io
import json

import pytest

from lgallee import cli
from lgallee.errors import ModelError


def run(argv, tmp_path):
    out = io.StringIO()
    code = cli.main(list(argv) + ["--out-dir", str(tmp_path)], out=out)
    return code, out.getvalue()


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_degenerate_reference(tmp_path):
    code, _ = run(["degenerate", "--m", "0.1", "--lambda", "0.2"], tmp_path)
    doc = json.loads((tmp_path / "degenerate.json").read_text())
    assert code == 0
    assert doc["a1"] == pytest.approx(1.7) and doc["h1"] == pytest.approx(1 / 270)
    assert doc["x1"] == pytest.approx(1 / 9)


def test_classify_rounded_triple_point_is_codim3(tmp_path):
    code, text = run(["classify", "--m", "0.1", "--lambda", "0.2", "--a", "1.7",
                      "--h", "0.0037037037", "--s", "0.0641975309"], tmp_path)
    assert code == 0 and "snapped" in text
    (row,) = rows(tmp_path / "classify.csv")
    assert row["kind"] == "codim3-degenerate" and row["multiplicity"] == "3"
    doc = json.loads((tmp_path / "classify.json").read_text())
    assert doc["eq0_j30"] == pytest.approx(-7.144e-4, abs=1e-7)


def test_equilibria_at_triple_point_single_row(tmp_path):
    code, _ = run(["equilibria", "--m", "0.1", "--lambda", "0.2", "--a", "1.7",
                   "--h", repr(1 / 270), "--s", "0.1"], tmp_path)
    (row,) = rows(tmp_path / "equilibria.csv")
    assert code == 0
    assert float(row["x"]) == pytest.approx(1 / 9) and float(row["y"]) == pytest.approx(1 / 9)
    assert row["multiplicity"] == "3"


def test_simulate_from_params_file_with_override(tmp_path):
    params = tmp_path / "p.json"
    params.write_text(json.dumps({"m": 0.1, "lambda": 0.2, "a": 1.0, "h": 0.01, "s": 9.0}))
    code, _ = run(["simulate", "--params", str(params), "--s", "0.5", "--x0", "0.5",
                   "--y0", "0.2", "--t-end", "100", "--figure"], tmp_path)
    assert code == 0
    data = rows(tmp_path / "trajectory.csv")
    assert list(data[0]) == ["t", "x", "y"]
    assert float(data[-1]["t"]) == pytest.approx(100.0)
    # s = 0.5 from the flag, not 9.0 from the file: the run settles on the focus
    assert float(data[-1]["x"]) == pytest.approx(0.34752527, abs=1e-6)
    assert (tmp_path / "trajectory.svg").stat().st_size > 0


def test_sweep_two_by_two(tmp_path):
    code, _ = run(["sweep", "--m", "0.1", "--lambda", "0.2", "--s", "0.1",
                   "--resolution", "2", "2"], tmp_path)
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert code == 0 and len(lines) == 5
    assert lines[0] == "a,h,n_roots,eta1,eta2,kinds"


def test_folds_and_normal_form(tmp_path):
    assert run(["folds", "--m", "0.1", "--lambda", "0.2", "--resolution", "11"], tmp_path)[0] == 0
    branches = {r["branch"] for r in rows(tmp_path / "folds.csv")}
    assert branches == {"lower", "upper"}
    code, _ = run(["normal-form", "--m", "0.1", "--lambda", "0.2", "--a", "1.7",
                   "--h", repr(1 / 270), "--s", "0.1"], tmp_path)
    doc = json.loads((tmp_path / "normal_form.json").read_text())
    assert code == 0 and doc["case"] == "single-zero" and doc["e30"] > 0


def test_portrait_writes_tables_and_figure(tmp_path):
    code, _ = run(["portrait", "--m", "0.1", "--lambda", "0.2", "--a", "1.0", "--h", "0.01",
                   "--s", "0.5", "--grid", "2", "2", "--t-end", "20", "--figure"], tmp_path)
    assert code == 0
    for name in ("portrait.csv", "portrait_nullclines.csv", "portrait_equilibria.csv", "portrait.svg"):
        assert (tmp_path / name).exists()


def test_repeat_runs_are_byte_identical(tmp_path):
    argv = ["sweep", "--m", "0.1", "--lambda", "0.2", "--s", "0.1", "--resolution", "4", "3",
            "--figure"]
    run(argv, tmp_path / "one")
    run(argv, tmp_path / "two")
    for name in ("sweep.csv", "sweep.svg"):
        assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()


def test_env_sets_default_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("LGALLEE_OUTPUT_DIR", str(tmp_path / "env"))
    assert cli.main(["degenerate", "--m", "0.1", "--lambda", "0.2"], out=io.StringIO()) == 0
    assert (tmp_path / "env" / "degenerate.json").exists()


@pytest.mark.parametrize("argv, code", [
    (["degenerate", "--m", "0.1", "--lambda", "0.9"], 5),
    (["degenerate", "--m", "1.5", "--lambda", "0.1"], 3),
    (["simulate", "--m", "0.1", "--lambda", "0.2", "--a", "1", "--h", "0.01", "--s", "0.5",
      "--x0", "-1", "--y0", "0.2"], 4),
    (["normal-form", "--m", "0.1", "--lambda", "0.2", "--a", "1", "--h", "0.01", "--s", "0.5"], 6),
    (["sweep", "--m", "0.1", "--lambda", "0.2"], 2),
])
def test_error_exit_codes(tmp_path, argv, code):
    assert run(argv, tmp_path)[0] == code
    assert list(tmp_path.iterdir()) == []


def test_unknown_flag_is_usage_error(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["degenerate", "--m", "0.1", "--lambda", "0.2", "--frobnicate", "1"])
    assert info.value.code == 2
    assert "--frobnicate" in capsys.readouterr().err


def test_partial_outputs_removed_on_failure(tmp_path, monkeypatch):
    import lgallee.plotting

    def broken(*args, **kwargs):
        raise ModelError("renderer failed")

    monkeypatch.setattr(lgallee.plotting, "trajectory_figure", broken)
    code, _ = run(["simulate", "--m", "0.1", "--lambda", "0.2", "--a", "1", "--h", "0.01",
                   "--s", "0.5", "--x0", "0.5", "--y0", "0.2", "--figure"], tmp_path)
    assert code == ModelError.exit_code
    assert not (tmp_path / "trajectory.csv").exists()


def test_verify_subset(tmp_path):
    code, text = run(["verify", "--only", "1", "3"], tmp_path)
    assert code == 0
    assert "[PASS] 1" in text and "[PASS] 3" in text
    summary = json.loads((tmp_path / "verify_summary.json").read_text())
    assert summary == {"n_checks": 2, "n_passed": 2, "all_passed": True,
                       "check1_passed": True, "check3_passed": True}
