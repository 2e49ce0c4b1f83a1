"""Command-line surface: file outputs, exit codes, determinism across workers."""

import csv
import json
import math

import pytest

from gridfreq import RunConfig, save_config
from gridfreq.cli import main
from gridfreq.config import from_dict


@pytest.fixture()
def small_config(tmp_path):
    """A 2x2x1x1 grid that runs in well under a second."""
    cfg = from_dict({
        "grid": {"res_levels": [0.05, 0.60], "imbalances": [0.025, 0.40],
                 "h_thermal_set": [6.0], "h_hydro_set": [3.25]},
    })
    path = tmp_path / "small.yaml"
    save_config(cfg, path)
    return path


def read_metrics_block(path):
    meta = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                header = line.strip().split(",")
                break
            key, _, value = line[1:].partition("=")
            meta[key.strip()] = value.strip()
    return meta, header


# ---------------------------------------------------------------- simulate

def test_simulate_writes_trace_and_metrics(tmp_path):
    out = tmp_path / "trace.csv"
    rc = main(["simulate", "--res", "0.05", "--imbalance", "0.025",
               "--ht", "10", "--hh", "4.75", "--out", str(out)])
    assert rc == 0
    meta, header = read_metrics_block(out)
    assert header == ["t_s", "delta_f_hz", "p_thermal_pu", "p_hydro_pu"]
    assert float(meta["nadir_hz"]) == pytest.approx(49.88, abs=0.10)
    assert meta["nadir_ok"] == "true"
    n_data = sum(1 for line in open(out) if not line.startswith("#")) - 1
    assert n_data == math.floor(30.0 / 0.005) + 1


def test_simulate_zero_imbalance_flat(tmp_path):
    out = tmp_path / "flat.csv"
    rc = main(["simulate", "--res", "0.05", "--imbalance", "0",
               "--ht", "10", "--hh", "4.75", "--out", str(out)])
    assert rc == 0
    meta, _ = read_metrics_block(out)
    assert float(meta["nadir_hz"]) == 50.0
    with open(out) as fh:
        rows = [l.split(",") for l in fh if not l.startswith(("#", "t_s"))]
    assert all(float(r[1]) == 0.0 for r in rows)


def test_simulate_infeasible_share_exits_one(tmp_path, capsys):
    rc = main(["simulate", "--res", "0.9", "--imbalance", "0.1",
               "--ht", "10", "--hh", "4.75", "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert "share" in capsys.readouterr().err


def test_simulate_stiff_lag_exits_two(tmp_path, capsys):
    cfg = from_dict({"event": {"t_add_lag_s": 1e-4}})
    cfg_path = tmp_path / "stiff.yaml"
    save_config(cfg, cfg_path)
    import numpy as np
    with np.errstate(over="ignore", invalid="ignore"):
        rc = main(["simulate", "--config", str(cfg_path), "--res", "0.05",
                   "--imbalance", "0.1", "--ht", "10", "--hh", "4.75",
                   "--dp-add", "0.05", "--out", str(tmp_path / "x.csv")])
    assert rc == 2
    assert "non-finite" in capsys.readouterr().err


def test_simulate_bad_config_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("grid: {res_levls: [0.1]}\n")
    rc = main(["simulate", "--config", str(bad), "--res", "0.05",
               "--imbalance", "0.1", "--ht", "10", "--hh", "4.75",
               "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert "unknown" in capsys.readouterr().err


# ---------------------------------------------------------------- sweep

def test_sweep_outputs(small_config, tmp_path):
    out_dir = tmp_path / "out"
    rc = main(["sweep", "--config", str(small_config), "--out-dir", str(out_dir)])
    assert rc == 0

    rows_text = (out_dir / "rows.csv").read_text()
    assert rows_text.endswith("\n")
    with open(out_dir / "rows.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4
    assert rows[0]["scenario_id"] == "res0.05_dp0.025_ht6_hh3.25"

    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["complete"] is True
    assert manifest["rows_written"] == 4

    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["row_count"] == 4
    assert set(summary["groups"]) == {"res_level", "imbalance", "imbalance_band"}

    # summary numbers recompute from rows.csv
    feasible = sum(r["h_res_feasible"] == "true" for r in rows)
    assert summary["feasible_count"] == feasible
    max_dp = max(float(r["dp_add_required_pu"]) for r in rows)
    assert summary["max_dp_add_pu"] == pytest.approx(max_dp)

    heatmaps = sorted(p.name for p in out_dir.glob("heatmap_*.csv"))
    assert "heatmap_nadir_hz_ht6_hh3.25.csv" in heatmaps
    assert "heatmap_dp_add_pu_ht6_hh3.25.csv" in heatmaps
    assert "heatmap_rocof_0.5s_ht6_hh3.25.csv" in heatmaps
    grid = (out_dir / "heatmap_nadir_hz_ht6_hh3.25.csv").read_text().splitlines()
    assert grid[0] == "imbalance_pu,0.05,0.6"
    assert len(grid) == 3  # header + 2 imbalance rows


def test_sweep_heatmap_matches_rows(small_config, tmp_path):
    out_dir = tmp_path / "out"
    main(["sweep", "--config", str(small_config), "--out-dir", str(out_dir)])
    with open(out_dir / "rows.csv", newline="") as fh:
        rows = {r["scenario_id"]: r for r in csv.DictReader(fh)}
    grid = (out_dir / "heatmap_nadir_hz_ht6_hh3.25.csv").read_text().splitlines()
    first_data = grid[1].split(",")
    assert first_data[0] == "0.025"
    assert first_data[1] == rows["res0.05_dp0.025_ht6_hh3.25"]["nadir_hz"]


def test_sweep_workers_deterministic(small_config, tmp_path):
    dirs = []
    for i, workers in enumerate(("1", "2")):
        out_dir = tmp_path / f"out{i}"
        rc = main(["sweep", "--config", str(small_config),
                   "--out-dir", str(out_dir), "--workers", workers])
        assert rc == 0
        dirs.append(out_dir)
    assert (dirs[0] / "rows.csv").read_bytes() == (dirs[1] / "rows.csv").read_bytes()
    assert (dirs[0] / "summary.json").read_bytes() == (dirs[1] / "summary.json").read_bytes()


def test_sweep_bad_out_dir(small_config, tmp_path, capsys):
    target = tmp_path / "blocked"
    target.write_text("a file, not a directory")
    rc = main(["sweep", "--config", str(small_config), "--out-dir", str(target)])
    assert rc == 1


def test_sweep_interrupt_marks_manifest_incomplete(small_config, tmp_path,
                                                   monkeypatch, capsys):
    import gridfreq.cli as cli_mod

    def interrupted(*args, **kwargs):
        raise KeyboardInterrupt

    monkeypatch.setattr(cli_mod, "run_sweep", interrupted)
    out_dir = tmp_path / "out"
    rc = main(["sweep", "--config", str(small_config), "--out-dir", str(out_dir)])
    assert rc == 2
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["complete"] is False
    assert (out_dir / "rows.csv").exists()


# ---------------------------------------------------------------- size / verify

def test_size_then_verify_roundtrip(small_config, tmp_path, capsys):
    sized = tmp_path / "sizing.csv"
    rc = main(["size", "--config", str(small_config), "--out", str(sized)])
    assert rc == 0
    with open(sized, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4
    assert {"scenario_id", "h_res_required_s", "dp_add_required_pu"} <= set(rows[0])

    verified = tmp_path / "verified.csv"
    rc = main(["verify", "--config", str(small_config), "--rows", str(sized),
               "--out", str(verified)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "4/4" in out
    with open(verified, newline="") as fh:
        vrows = list(csv.DictReader(fh))
    assert all(r["verified_nadir_ok"] == "true" for r in vrows)
    assert all(r["verified_pass"] == "true" for r in vrows)


def test_verify_empty_rows_exits_one(small_config, tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("scenario_id,h_res_required_s,dp_add_required_pu\n")
    rc = main(["verify", "--config", str(small_config), "--rows", str(empty),
               "--out", str(tmp_path / "v.csv")])
    assert rc == 1
    assert "no data rows" in capsys.readouterr().err


def test_verify_mismatched_id_exits_one(small_config, tmp_path, capsys):
    rows = tmp_path / "rows.csv"
    rows.write_text("scenario_id,h_res_required_s,dp_add_required_pu\n"
                    "res0.99_dp1_ht1_hh1,0,0\n")
    rc = main(["verify", "--config", str(small_config), "--rows", str(rows),
               "--out", str(tmp_path / "v.csv")])
    assert rc == 1
    assert "res0.99_dp1_ht1_hh1" in capsys.readouterr().err


# ---------------------------------------------------------------- write-config

def test_write_config_round_trips(tmp_path):
    out = tmp_path / "default.yaml"
    assert main(["write-config", "--out", str(out)]) == 0
    from gridfreq import load_config
    assert load_config(out) == RunConfig()
