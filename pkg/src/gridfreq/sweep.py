"""Scenario-grid enumeration, parallel execution, and result aggregation."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import PlantDynamics, GenerationMix, Scenario, SystemConstants
from .metrics import RocofLimits
from .sizing import DEFAULT_DP_INC, DEFAULT_H_RES_CAP, size_scenario

__all__ = [
    "GridSpec",
    "SweepRow",
    "RegressionFit",
    "generate_grid",
    "run_sweep",
    "summarize",
    "fit_regression",
    "IMBALANCE_BAND_SPLIT",
]

log = logging.getLogger(__name__)

IMBALANCE_BAND_SPLIT = 0.20  # pu, boundary between the (0,20] and (20,40] % bands

_DEFAULT_RES = (0.05, 0.15, 0.30, 0.45, 0.60)
_DEFAULT_IMBALANCES = tuple(round(0.025 * k, 3) for k in range(1, 17))
_DEFAULT_HT = (2.0, 6.0, 10.0)
_DEFAULT_HH = (1.75, 3.25, 4.75)


@dataclass(frozen=True)
class GridSpec:
    """Axes of the scenario grid.

    Hydro capacity is fixed; thermal takes up whatever the renewable share
    leaves.  The default axes span 5 x 16 x 3 x 3 = 720 scenarios.
    """

    res_levels: tuple[float, ...] = _DEFAULT_RES
    hydro_share: float = 0.15
    imbalances: tuple[float, ...] = _DEFAULT_IMBALANCES
    h_thermal_set: tuple[float, ...] = _DEFAULT_HT
    h_hydro_set: tuple[float, ...] = _DEFAULT_HH
    constants: SystemConstants = field(default_factory=SystemConstants)
    plants: PlantDynamics = field(default_factory=PlantDynamics)
    t_event: float = 1.0
    t_add_lag: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "res_levels", tuple(self.res_levels))
        object.__setattr__(self, "imbalances", tuple(self.imbalances))
        object.__setattr__(self, "h_thermal_set", tuple(self.h_thermal_set))
        object.__setattr__(self, "h_hydro_set", tuple(self.h_hydro_set))
        for res in self.res_levels:
            if 1.0 - self.hydro_share - res < -1e-12:
                raise ValueError(
                    f"res level {res} leaves a negative thermal share "
                    f"({1.0 - self.hydro_share - res:.3f}) at hydro {self.hydro_share}")

    @property
    def cardinality(self) -> int:
        return (len(self.res_levels) * len(self.imbalances)
                * len(self.h_thermal_set) * len(self.h_hydro_set))


@dataclass
class SweepRow:
    """One scenario's coordinates, base metrics, and sizing, flattened."""

    scenario_id: str
    res_share: float
    hydro_share: float
    thermal_share: float
    dp_imbalance: float
    h_thermal: float
    h_hydro: float
    h_eq_sync: float
    status: str = "ok"
    nadir_hz: float = float("nan")
    t_nadir_s: float = float("nan")
    rocof: dict[float, float] = field(default_factory=dict)
    steady_state_dev_hz: float = float("nan")
    nadir_ok: bool = False
    blackout_risk: bool = False
    rocof_ok: dict[float, bool] = field(default_factory=dict)
    worst_rocof_window_s: float | None = None
    worst_exceedance_pct: float = float("nan")
    h_eq_min_s: float = float("nan")
    h_res_required_s: float = float("nan")
    h_res_capped_s: float = float("nan")
    h_res_feasible: bool = False
    dp_add_required_pu: float = float("nan")
    verified_nadir_ok: bool = False
    verified_rocof_ok: dict[float, bool] = field(default_factory=dict)


@dataclass(frozen=True)
class RegressionFit:
    """OLS of the required fast power on (res share, imbalance)."""

    intercept: float
    coef_res_share: float
    coef_imbalance: float
    r_squared: float

    def __post_init__(self):
        if not 0.0 <= self.r_squared <= 1.0 + 1e-12:
            raise ValueError(f"r_squared out of range: {self.r_squared}")


def scenario_id(res: float, dp: float, ht: float, hh: float) -> str:
    return f"res{res:g}_dp{dp:g}_ht{ht:g}_hh{hh:g}"


def generate_grid(spec: GridSpec) -> list[Scenario]:
    """Materialize the grid in lexicographic (res, imbalance, H_T, H_H) order."""
    scenarios = []
    for res in spec.res_levels:
        thermal = max(0.0, 1.0 - spec.hydro_share - res)
        for dp in spec.imbalances:
            for ht in spec.h_thermal_set:
                for hh in spec.h_hydro_set:
                    scenarios.append(Scenario(
                        id=scenario_id(res, dp, ht, hh),
                        constants=spec.constants,
                        mix=GenerationMix(
                            share_thermal=thermal,
                            share_hydro=spec.hydro_share,
                            share_res=res,
                            h_thermal=ht,
                            h_hydro=hh,
                        ),
                        plants=spec.plants,
                        dp_imbalance=dp,
                        t_event=spec.t_event,
                        t_add_lag=spec.t_add_lag,
                    ))
    return scenarios


def _coordinate_row(scn: Scenario) -> SweepRow:
    return SweepRow(
        scenario_id=scn.id,
        res_share=scn.mix.share_res,
        hydro_share=scn.mix.share_hydro,
        thermal_share=scn.mix.share_thermal,
        dp_imbalance=scn.dp_imbalance,
        h_thermal=scn.mix.h_thermal,
        h_hydro=scn.mix.h_hydro,
        h_eq_sync=scn.mix.h_eq_sync,
    )


def _sweep_one(args: tuple[Scenario, RocofLimits, float, float]) -> SweepRow:
    scn, limits, dp_inc, cap = args
    row = _coordinate_row(scn)
    try:
        result = size_scenario(scn, limits, dp_inc=dp_inc, cap=cap)
    except Exception as exc:  # failures stay in-row, the sweep continues
        row.status = f"error: {exc}"
        return row
    m, rep, v = result.base_metrics, result.base_compliance, result.verified
    row.nadir_hz = m.nadir
    row.t_nadir_s = m.t_nadir
    row.rocof = dict(m.rocof)
    row.steady_state_dev_hz = m.steady_state_dev
    row.nadir_ok = rep.nadir_ok
    row.blackout_risk = rep.blackout_risk
    row.rocof_ok = dict(rep.rocof_ok)
    row.worst_rocof_window_s = rep.worst_rocof_window
    row.worst_exceedance_pct = rep.worst_exceedance_pct
    row.h_eq_min_s = result.h_eq_min
    row.h_res_required_s = result.h_res_required
    row.h_res_capped_s = result.h_res_capped
    row.h_res_feasible = result.h_res_feasible
    row.dp_add_required_pu = result.dp_add_required
    row.verified_nadir_ok = v.nadir_ok
    row.verified_rocof_ok = dict(v.rocof_ok)
    return row


def run_sweep(
    scenarios: list[Scenario],
    limits: RocofLimits | None = None,
    dp_inc: float = DEFAULT_DP_INC,
    cap: float = DEFAULT_H_RES_CAP,
    workers: int = 1,
) -> list[SweepRow]:
    """Simulate, size, and verify every scenario; rows keep input order.

    Scenarios are independent, so results are identical for any worker
    count.  Per-scenario failures are recorded in the row's status.
    """
    if not scenarios:
        raise ValueError("scenarios must be nonempty")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    limits = limits or RocofLimits()
    tasks = [(scn, limits, dp_inc, cap) for scn in scenarios]
    if workers == 1:
        return [_sweep_one(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_one, tasks, chunksize=chunk))


_SIZING_FIELDS = ("h_res_required_s", "h_res_capped_s", "dp_add_required_pu")


def _quartiles(values: np.ndarray) -> dict[str, float]:
    q1, med, q3 = np.percentile(values, [25.0, 50.0, 75.0])  # linear interpolation
    return {
        "min": float(values.min()),
        "q1": float(q1),
        "median": float(med),
        "q3": float(q3),
        "max": float(values.max()),
        "count": int(values.size),
    }


def _group_key(row: SweepRow, group_by: str) -> str:
    if group_by == "res_level":
        return f"{row.res_share:g}"
    if group_by == "imbalance":
        return f"{row.dp_imbalance:g}"
    if group_by == "imbalance_band":
        return "(0,20]" if row.dp_imbalance <= IMBALANCE_BAND_SPLIT else "(20,40]"
    raise ValueError(f"unsupported group_by {group_by!r}")


def summarize(rows: list[SweepRow], group_by: str) -> dict[str, dict[str, dict[str, float]]]:
    """Box-whisker statistics of the sizing quantities per group.

    Whiskers are the group min/max.  Groups with no valid rows are omitted
    (with a warning).
    """
    groups: dict[str, list[SweepRow]] = {}
    for row in rows:
        members = groups.setdefault(_group_key(row, group_by), [])
        if row.status == "ok":
            members.append(row)
    out = {}
    for key, members in groups.items():
        if not members:
            log.warning("group %s=%s has no valid rows; omitted", group_by, key)
            continue
        out[key] = {
            fname: _quartiles(np.array([getattr(r, fname) for r in members]))
            for fname in _SIZING_FIELDS
        }
    return out


def fit_regression(rows: list[SweepRow]) -> RegressionFit:
    """Ordinary least squares of dp_add_required on (res_share, dp_imbalance)."""
    ok = [r for r in rows if r.status == "ok"]
    if len(ok) < 3:
        raise ValueError(f"need at least 3 valid rows, got {len(ok)}")
    X = np.column_stack([
        np.ones(len(ok)),
        [r.res_share for r in ok],
        [r.dp_imbalance for r in ok],
    ])
    y = np.array([r.dp_add_required_pu for r in ok])
    if np.linalg.matrix_rank(X) < 3:
        raise ValueError("rank-deficient predictors: res share and imbalance "
                         "must each take at least two distinct values")
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    ss_res = float(((y - X @ beta) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 0.0 if ss_tot == 0.0 else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return RegressionFit(
        intercept=float(beta[0]),
        coef_res_share=float(beta[1]),
        coef_imbalance=float(beta[2]),
        r_squared=r2,
    )
