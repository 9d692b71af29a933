import csv
import filecmp

import pytest

import polyada.harness as harness
from polyada import ExperimentConfig, TrialResult, emit_results, run_sweep
from polyada.cli import main


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.reader(fh))


SWEEP_ARGS = [
    "sweep", "--n", "400", "--k", "1,5", "--trials", "2",
    "--modes", "nada,flat,mid,junc", "--seed", "11", "--grid", "1025",
]


def test_sweep_outputs_and_determinism(tmp_path, capsys):
    out1, out2 = tmp_path / "run1", tmp_path / "run2"
    assert main(SWEEP_ARGS + ["--out", str(out1)]) == 0
    assert main(SWEEP_ARGS + ["--out", str(out2)]) == 0
    capsys.readouterr()

    for name in ("results.csv", "summary.csv", "mse_vs_k.png", "tv_vs_k.png"):
        assert (out1 / name).stat().st_size > 0
    for name in ("results.csv", "summary.csv"):
        assert filecmp.cmp(out1 / name, out2 / name, shallow=False), name

    rows = read_csv(out1 / "results.csv")
    assert rows[0] == list(harness.RESULT_FIELDS)
    assert len(rows) == 1 + 2 * 4 * 2  # header + ks * modes * trials
    assert all(row[6] == "" for row in rows[1:])


def test_curves_outputs(tmp_path, capsys):
    out = tmp_path / "curves"
    code = main(["curves", "--n", "200", "--k", "2,4", "--seed", "3",
                 "--grid", "201", "--out", str(out)])
    capsys.readouterr()
    assert code == 0
    for k in (2, 4):
        rows = read_csv(out / f"curves_k{k}.csv")
        assert rows[0] == ["x", "true", "nada", "flat", "mid", "junc"]
        assert len(rows) == 1 + 201
        assert (out / f"curves_k{k}.png").stat().st_size > 0


def test_curves_default_budgets(tmp_path, capsys):
    out = tmp_path / "curves"
    code = main(["curves", "--n", "300", "--seed", "3", "--grid", "101",
                 "--modes", "nada,junc", "--out", str(out)])
    capsys.readouterr()
    assert code == 0
    for k in (25, 80, 1000):
        assert (out / f"curves_k{k}.csv").exists()
        assert (out / f"curves_k{k}.png").exists()


def test_aggregate_roundtrip(tmp_path, capsys):
    config = ExperimentConfig(n=250, ks=(1, 4), trials=2, modes=("nada", "junc"),
                              master_seed=5, grid_points=513)
    results = run_sweep(config)
    results_path = tmp_path / "results.csv"
    emit_results(results, results_path)

    out = tmp_path / "agg"
    assert main(["aggregate", str(results_path), "--out", str(out)]) == 0
    capsys.readouterr()

    expected = {(k, mode, stat): value for k, mode, stat, value in harness.aggregate(results)}
    rows = read_csv(out / "summary.csv")
    assert rows[0] == list(harness.SUMMARY_FIELDS)
    assert len(rows) == 1 + len(expected)
    for k, mode, stat, value in rows[1:]:
        # Statistics recomputed from 9-significant-digit CSV values agree to
        # roundoff but not bit-for-bit.
        assert float(value) == pytest.approx(expected[(int(k), mode, stat)], rel=1e-7, abs=1e-12)
    assert (out / "mse_vs_k.png").stat().st_size > 0


def test_aggregate_flags_error_rows(tmp_path, capsys):
    rows = [
        TrialResult(1, "nada", 0, 7, 0.5, 0.5),
        TrialResult(1, "nada", 1, 7, float("nan"), float("nan"), error="nada failed: x"),
    ]
    results_path = tmp_path / "results.csv"
    emit_results(rows, results_path)
    with pytest.warns(UserWarning):
        code = main(["aggregate", str(results_path), "--out", str(tmp_path / "agg")])
    err = capsys.readouterr().err
    assert code == 1
    assert "nada failed: x" in err
    assert (tmp_path / "agg" / "summary.csv").exists()


def test_sweep_reports_trial_failures(tmp_path, capsys, monkeypatch):
    real = harness.mode_estimate

    def flaky(mode, k, dataset, leaves):
        if mode == "mid" and k == 2:
            raise RuntimeError("boom")
        return real(mode, k, dataset, leaves)

    monkeypatch.setattr(harness, "mode_estimate", flaky)
    with pytest.warns(UserWarning):
        code = main(["sweep", "--n", "150", "--k", "2", "--trials", "1",
                     "--seed", "1", "--grid", "257", "--out", str(tmp_path / "out")])
    err = capsys.readouterr().err
    assert code == 1
    assert "mid failed: boom" in err
    assert (tmp_path / "out" / "results.csv").exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--n", "abc"],
        ["sweep", "--modes", "bogus"],
        ["sweep", "--k", "0"],
        ["curves", "--estimator", "sample:0"],
        ["aggregate", "does-not-exist.csv"],
    ],
)
def test_invalid_inputs_exit_2(argv, tmp_path, capsys):
    assert main(argv + ["--out", str(tmp_path / "out")]) == 2
    assert "error:" in capsys.readouterr().err


def test_missing_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2
    capsys.readouterr()


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "n = 200\nk = 2\ntrials = 1\nmodes = nada\n"
        f"out = {tmp_path / 'fromfile'}\n",
        encoding="utf-8",
    )
    out = tmp_path / "flagged"
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
    capsys.readouterr()
    assert not (tmp_path / "fromfile").exists()
    rows = read_csv(out / "results.csv")
    assert [row[:2] for row in rows[1:]] == [["2", "nada"]]
