"""Command-line surface: single-scenario runs, the full sweep, sizing, and
post-sizing verification.

All file output is plain data (CSV / JSON) with '.' decimal points and 9
significant digits; plotting is left to external tools.  Exit codes: 0 ok,
1 usage/config error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, load_config, save_config
from .dynamics import GenerationMix, Scenario, SimulationError, simulate
from .metrics import RocofLimits, check_compliance, extract_metrics
from .sizing import verify as verify_sizing
from .sweep import SweepRow, fit_regression, generate_grid, run_sweep, summarize

__all__ = ["main"]

_FMT = "%.9g"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _FMT % value
    return str(value)


def _wlabel(window: float) -> str:
    return f"{window:g}s"


def row_columns(limits: RocofLimits) -> list[str]:
    """Fixed rows.csv column order for a given set of ROCOF windows."""
    cols = ["scenario_id", "res_share", "hydro_share", "thermal_share",
            "dp_imbalance_pu", "h_thermal_s", "h_hydro_s", "h_eq_sync_s",
            "nadir_hz", "t_nadir_s"]
    cols += [f"rocof_{_wlabel(w)}_hz_per_s" for w in limits.windows]
    cols += ["steady_state_dev_hz", "nadir_ok", "blackout_risk"]
    cols += [f"rocof_ok_{_wlabel(w)}" for w in limits.windows]
    cols += ["worst_rocof_window_s", "worst_exceedance_pct", "h_eq_min_s",
             "h_res_required_s", "h_res_capped_s", "h_res_feasible",
             "dp_add_required_pu", "verified_nadir_ok"]
    cols += [f"verified_rocof_ok_{_wlabel(w)}" for w in limits.windows]
    cols += ["status"]
    return cols


def row_values(row: SweepRow, limits: RocofLimits) -> list[str]:
    vals = [row.scenario_id, row.res_share, row.hydro_share, row.thermal_share,
            row.dp_imbalance, row.h_thermal, row.h_hydro, row.h_eq_sync,
            row.nadir_hz, row.t_nadir_s]
    vals += [row.rocof.get(w, float("nan")) for w in limits.windows]
    vals += [row.steady_state_dev_hz, row.nadir_ok, row.blackout_risk]
    vals += [row.rocof_ok.get(w, False) for w in limits.windows]
    vals += [row.worst_rocof_window_s, row.worst_exceedance_pct, row.h_eq_min_s,
             row.h_res_required_s, row.h_res_capped_s, row.h_res_feasible,
             row.dp_add_required_pu, row.verified_nadir_ok]
    vals += [row.verified_rocof_ok.get(w, False) for w in limits.windows]
    vals += [row.status]
    return [_fmt(v) for v in vals]


def rows_to_csv(rows: list[SweepRow], limits: RocofLimits) -> str:
    lines = [",".join(row_columns(limits))]
    lines += [",".join(row_values(r, limits)) for r in rows]
    return "\n".join(lines) + "\n"


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="\n")


def _load_cfg(args) -> RunConfig:
    if getattr(args, "config", None):
        return load_config(args.config)
    return RunConfig()


def _single_scenario(cfg: RunConfig, args) -> Scenario:
    thermal = 1.0 - cfg.hydro_share - args.res
    mix = GenerationMix(
        share_thermal=thermal,
        share_hydro=cfg.hydro_share,
        share_res=args.res,
        h_thermal=args.ht,
        h_hydro=args.hh,
        h_res_virtual=args.h_res,
    )
    return Scenario(
        id=f"res{args.res:g}_dp{args.imbalance:g}_ht{args.ht:g}_hh{args.hh:g}",
        constants=cfg.system,
        mix=mix,
        plants=cfg.plants,
        dp_imbalance=args.imbalance,
        t_event=cfg.t_event_s,
        dp_add=args.dp_add,
        t_add_lag=cfg.t_add_lag_s,
    )


def cmd_simulate(args) -> int:
    try:
        cfg = _load_cfg(args)
        scn = _single_scenario(cfg, args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        trace = simulate(scn)
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    limits = cfg.rocof_limits
    metrics = extract_metrics(trace, limits)
    report = check_compliance(metrics, limits, trace.f0,
                              cfg.nadir_band_hz, cfg.blackout_floor_hz)

    header = [
        f"# scenario_id = {scn.id}",
        f"# f0_hz = {_fmt(trace.f0)}",
        f"# nadir_hz = {_fmt(metrics.nadir)}",
        f"# t_nadir_s = {_fmt(metrics.t_nadir)}",
    ]
    header += [f"# rocof_{_wlabel(w)}_hz_per_s = {_fmt(metrics.rocof[w])}"
               for w in limits.windows]
    header += [
        f"# steady_state_dev_hz = {_fmt(metrics.steady_state_dev)}",
        f"# nadir_ok = {_fmt(report.nadir_ok)}",
        f"# blackout_risk = {_fmt(report.blackout_risk)}",
    ]
    header += [f"# rocof_ok_{_wlabel(w)} = {_fmt(report.rocof_ok[w])}"
               for w in limits.windows]
    lines = header + ["t_s,delta_f_hz,p_thermal_pu,p_hydro_pu"]
    times = trace.times
    for k in range(len(trace)):
        lines.append(",".join((_fmt(float(times[k])), _fmt(float(trace.delta_f[k])),
                               _fmt(float(trace.p_thermal[k])), _fmt(float(trace.p_hydro[k])))))
    try:
        _write(Path(args.out), "\n".join(lines) + "\n")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _heatmap_csv(rows: list[SweepRow], res_levels, imbalances, value) -> str:
    lines = ["imbalance_pu," + ",".join(_FMT % r for r in res_levels)]
    index = {(r.res_share, r.dp_imbalance): r for r in rows}
    for dp in imbalances:
        cells = [_FMT % dp]
        for res in res_levels:
            row = index.get((res, dp))
            cells.append(_fmt(value(row)) if row is not None else "nan")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _emit_heatmaps(out_dir: Path, rows: list[SweepRow], cfg: RunConfig) -> list[str]:
    files = []
    metrics = {"nadir_hz": lambda r: r.nadir_hz,
               "h_res_capped_s": lambda r: r.h_res_capped_s,
               "dp_add_pu": lambda r: r.dp_add_required_pu}
    for w in cfg.rocof_limits.windows:
        metrics[f"rocof_{_wlabel(w)}"] = lambda r, w=w: r.rocof.get(w, float("nan"))
    for ht in cfg.h_thermal_set:
        for hh in cfg.h_hydro_set:
            cell = [r for r in rows if r.h_thermal == ht and r.h_hydro == hh]
            for name, getter in metrics.items():
                fname = f"heatmap_{name}_ht{ht:g}_hh{hh:g}.csv"
                _write(out_dir / fname,
                       _heatmap_csv(cell, cfg.res_levels, cfg.imbalances, getter))
                files.append(fname)
    return files


def _summary_payload(rows: list[SweepRow]) -> dict:
    ok = [r for r in rows if r.status == "ok"]
    payload = {
        "row_count": len(rows),
        "error_count": len(rows) - len(ok),
        "feasible_count": sum(r.h_res_feasible for r in ok),
        "feasible_share": (sum(r.h_res_feasible for r in ok) / len(ok)) if ok else 0.0,
        "max_dp_add_pu": max((r.dp_add_required_pu for r in ok), default=0.0),
        "max_h_res_required_s": max((r.h_res_required_s for r in ok), default=0.0),
        "groups": {g: summarize(rows, g)
                   for g in ("res_level", "imbalance", "imbalance_band")},
    }
    try:
        fit = fit_regression(rows)
        payload["regression"] = {
            "intercept": fit.intercept,
            "coef_res_share": fit.coef_res_share,
            "coef_imbalance": fit.coef_imbalance,
            "r_squared": fit.r_squared,
        }
    except ValueError as exc:
        payload["regression"] = {"error": str(exc)}
    return payload


def cmd_sweep(args) -> int:
    try:
        cfg = _load_cfg(args)
        workers = args.workers if args.workers else cfg.workers
        scenarios = generate_grid(cfg.grid_spec())
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    limits = cfg.rocof_limits
    rows: list[SweepRow] = []
    interrupted = False
    try:
        rows = run_sweep(scenarios, limits, dp_inc=cfg.dp_inc_pu,
                         cap=cfg.h_res_cap_s, workers=workers)
    except KeyboardInterrupt:
        interrupted = True
    files = []
    try:
        _write(out_dir / "rows.csv", rows_to_csv(rows, limits))
        files.append("rows.csv")
        if rows:
            _write(out_dir / "summary.json",
                   json.dumps(_summary_payload(rows), indent=2) + "\n")
            files.append("summary.json")
            files += _emit_heatmaps(out_dir, rows, cfg)
        manifest = {
            "complete": not interrupted and len(rows) == len(scenarios),
            "rows_written": len(rows),
            "rows_expected": len(scenarios),
            "files": files,
        }
        _write(out_dir / "manifest.json", json.dumps(manifest, indent=2) + "\n")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if interrupted:
        print("interrupted: partial results flushed", file=sys.stderr)
        return 2
    return 0


_SIZE_COLUMNS = ["scenario_id", "res_share", "dp_imbalance_pu", "h_thermal_s",
                 "h_hydro_s", "h_eq_sync_s", "h_eq_min_s", "h_res_required_s",
                 "h_res_capped_s", "h_res_feasible", "dp_add_required_pu", "status"]


def cmd_size(args) -> int:
    try:
        cfg = _load_cfg(args)
        workers = args.workers if args.workers else cfg.workers
        scenarios = generate_grid(cfg.grid_spec())
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rows = run_sweep(scenarios, cfg.rocof_limits, dp_inc=cfg.dp_inc_pu,
                     cap=cfg.h_res_cap_s, workers=workers)
    lines = [",".join(_SIZE_COLUMNS)]
    for r in rows:
        lines.append(",".join(_fmt(v) for v in (
            r.scenario_id, r.res_share, r.dp_imbalance, r.h_thermal, r.h_hydro,
            r.h_eq_sync, r.h_eq_min_s, r.h_res_required_s, r.h_res_capped_s,
            r.h_res_feasible, r.dp_add_required_pu, r.status)))
    try:
        _write(Path(args.out), "\n".join(lines) + "\n")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def cmd_verify(args) -> int:
    try:
        cfg = _load_cfg(args)
        scenarios = {s.id: s for s in generate_grid(cfg.grid_spec())}
        with open(args.rows, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            records = list(reader)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not records:
        print(f"error: no data rows in {args.rows}", file=sys.stderr)
        return 1
    needed = {"scenario_id", "h_res_required_s", "dp_add_required_pu"}
    if not needed.issubset(records[0].keys()):
        print(f"error: rows file lacks columns {sorted(needed - set(records[0]))}",
              file=sys.stderr)
        return 1
    limits = cfg.rocof_limits
    out_lines = [",".join(
        ["scenario_id", "h_res_applied_s", "dp_add_applied_pu", "verified_nadir_ok",
         "verified_blackout_risk"]
        + [f"verified_rocof_ok_{_wlabel(w)}" for w in limits.windows]
        + ["verified_pass"])]
    n_pass = 0
    for rec in records:
        sid = rec["scenario_id"]
        scn = scenarios.get(sid)
        if scn is None:
            print(f"error: scenario id {sid!r} not in the configured grid",
                  file=sys.stderr)
            return 1
        try:
            h_res = float(rec["h_res_required_s"])
            dp_add = float(rec["dp_add_required_pu"])
        except ValueError:
            print(f"error: scenario {sid!r}: unparsable sizing values", file=sys.stderr)
            return 1
        try:
            report = verify_sizing(scn, h_res, dp_add, limits)
        except SimulationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        passed = report.nadir_ok and all(report.rocof_ok.values())
        n_pass += passed
        out_lines.append(",".join(
            [sid, _fmt(h_res), _fmt(dp_add), _fmt(report.nadir_ok),
             _fmt(report.blackout_risk)]
            + [_fmt(report.rocof_ok[w]) for w in limits.windows]
            + [_fmt(passed)]))
    try:
        _write(Path(args.out), "\n".join(out_lines) + "\n")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"verified {n_pass}/{len(records)} scenarios pass after sizing")
    return 0


def cmd_write_config(args) -> int:
    try:
        save_config(RunConfig(), args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridfreq",
        description="Frequency-response simulation and reserve sizing "
                    "for low-inertia power systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="simulate one scenario and dump trace + metrics")
    p_sim.add_argument("--config", help="YAML run configuration (defaults if omitted)")
    p_sim.add_argument("--res", type=float, required=True, help="renewable share (pu)")
    p_sim.add_argument("--imbalance", type=float, required=True, help="imbalance step (pu)")
    p_sim.add_argument("--ht", type=float, required=True, help="thermal inertia constant (s)")
    p_sim.add_argument("--hh", type=float, required=True, help="hydro inertia constant (s)")
    p_sim.add_argument("--h-res", type=float, default=0.0, help="virtual inertia (s)")
    p_sim.add_argument("--dp-add", type=float, default=0.0, help="additional fast power (pu)")
    p_sim.add_argument("--out", required=True, help="output CSV path")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="run the full scenario grid")
    p_sweep.add_argument("--config", help="YAML run configuration")
    p_sweep.add_argument("--out-dir", required=True, help="output directory")
    p_sweep.add_argument("--workers", type=int, default=0,
                         help="parallel workers (overrides config)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_size = sub.add_parser("size", help="size H_RES and dP_add for every grid scenario")
    p_size.add_argument("--config", help="YAML run configuration")
    p_size.add_argument("--out", required=True, help="output CSV path")
    p_size.add_argument("--workers", type=int, default=0)
    p_size.set_defaults(func=cmd_size)

    p_ver = sub.add_parser("verify", help="re-simulate scenarios with sized values")
    p_ver.add_argument("--config", help="YAML run configuration")
    p_ver.add_argument("--rows", required=True, help="rows.csv from a prior sweep/size run")
    p_ver.add_argument("--out", required=True, help="output CSV path")
    p_ver.set_defaults(func=cmd_verify)

    p_cfg = sub.add_parser("write-config", help="write the default configuration")
    p_cfg.add_argument("--out", required=True, help="destination YAML path")
    p_cfg.set_defaults(func=cmd_write_config)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
