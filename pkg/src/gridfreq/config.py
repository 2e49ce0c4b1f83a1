"""Run configuration: one YAML document covering the grid, system constants,
plant dynamics, compliance limits, sizing knobs, and output settings.

Unknown keys are rejected so typos fail loudly, and parse -> serialize ->
parse is the identity.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, asdict

import yaml

from .dynamics import HydroParams, PlantDynamics, SystemConstants, ThermalParams
from .metrics import BLACKOUT_FLOOR_HZ, NADIR_BAND_HZ, RocofLimits
from .sizing import DEFAULT_DP_INC, DEFAULT_H_RES_CAP
from .sweep import GridSpec

__all__ = ["ConfigError", "RunConfig", "load_config", "save_config"]


class ConfigError(ValueError):
    """Malformed or unknown configuration content."""


@dataclass(frozen=True)
class RunConfig:
    system: SystemConstants = field(default_factory=SystemConstants)
    plants: PlantDynamics = field(default_factory=PlantDynamics)
    res_levels: tuple[float, ...] = GridSpec.res_levels
    hydro_share: float = GridSpec.hydro_share
    imbalances: tuple[float, ...] = GridSpec.imbalances
    h_thermal_set: tuple[float, ...] = GridSpec.h_thermal_set
    h_hydro_set: tuple[float, ...] = GridSpec.h_hydro_set
    rocof_limits: RocofLimits = field(default_factory=RocofLimits)
    nadir_band_hz: float = NADIR_BAND_HZ
    blackout_floor_hz: float = BLACKOUT_FLOOR_HZ
    dp_inc_pu: float = DEFAULT_DP_INC
    h_res_cap_s: float = DEFAULT_H_RES_CAP
    t_event_s: float = 1.0
    t_add_lag_s: float = 0.0
    out_dir: str = "results"
    workers: int = 1

    def grid_spec(self) -> GridSpec:
        return GridSpec(
            res_levels=self.res_levels,
            hydro_share=self.hydro_share,
            imbalances=self.imbalances,
            h_thermal_set=self.h_thermal_set,
            h_hydro_set=self.h_hydro_set,
            constants=self.system,
            plants=self.plants,
            t_event=self.t_event_s,
            t_add_lag=self.t_add_lag_s,
        )

    def to_dict(self) -> dict:
        return {
            "system": {
                "f0_hz": self.system.f0,
                "s_base_mw": self.system.s_base,
                "p_load_pu": self.system.p_load,
                "d_eq_pct_per_hz": self.system.d_eq_pct_per_hz,
                "horizon_s": self.system.horizon,
                "dt_s": self.system.dt,
            },
            "plants": {
                "thermal": asdict(self.plants.thermal),
                "hydro": asdict(self.plants.hydro),
            },
            "grid": {
                "res_levels": list(self.res_levels),
                "hydro_share": self.hydro_share,
                "imbalances": list(self.imbalances),
                "h_thermal_set": list(self.h_thermal_set),
                "h_hydro_set": list(self.h_hydro_set),
            },
            "limits": {
                "rocof": [[w, l] for w, l in self.rocof_limits.pairs],
                "nadir_band_hz": self.nadir_band_hz,
                "blackout_floor_hz": self.blackout_floor_hz,
            },
            "sizing": {
                "dp_inc_pu": self.dp_inc_pu,
                "h_res_cap_s": self.h_res_cap_s,
            },
            "event": {
                "t_event_s": self.t_event_s,
                "t_add_lag_s": self.t_add_lag_s,
            },
            "output": {"out_dir": self.out_dir},
            "workers": self.workers,
        }


def _take(section: dict, path: str, known: tuple[str, ...]) -> None:
    unknown = set(section) - set(known)
    if unknown:
        raise ConfigError(f"unknown key(s) under '{path}': {sorted(unknown)}")


def _section(data: dict, name: str) -> dict:
    sec = data.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"'{name}' must be a mapping")
    return sec


def from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config document must be a mapping")
    _take(data, "<top>", ("system", "plants", "grid", "limits", "sizing",
                          "event", "output", "workers"))
    defaults = RunConfig()

    sys_d = _section(data, "system")
    _take(sys_d, "system", ("f0_hz", "s_base_mw", "p_load_pu",
                            "d_eq_pct_per_hz", "horizon_s", "dt_s"))
    try:
        system = SystemConstants(
            f0=float(sys_d.get("f0_hz", defaults.system.f0)),
            s_base=float(sys_d.get("s_base_mw", defaults.system.s_base)),
            p_load=float(sys_d.get("p_load_pu", defaults.system.p_load)),
            d_eq_pct_per_hz=float(sys_d.get("d_eq_pct_per_hz",
                                            defaults.system.d_eq_pct_per_hz)),
            horizon=float(sys_d.get("horizon_s", defaults.system.horizon)),
            dt=float(sys_d.get("dt_s", defaults.system.dt)),
        )

        plants_d = _section(data, "plants")
        _take(plants_d, "plants", ("thermal", "hydro"))
        th_d = plants_d.get("thermal", {}) or {}
        hy_d = plants_d.get("hydro", {}) or {}
        _take(th_d, "plants.thermal", ("droop_r", "t_gov", "t_ch", "t_rh", "f_hp"))
        _take(hy_d, "plants.hydro", ("droop_r", "t_servo", "r_temp", "t_reset", "t_water"))
        plants = PlantDynamics(
            thermal=ThermalParams(**{k: float(v) for k, v in th_d.items()}),
            hydro=HydroParams(**{k: float(v) for k, v in hy_d.items()}),
        )

        grid_d = _section(data, "grid")
        _take(grid_d, "grid", ("res_levels", "hydro_share", "imbalances",
                               "h_thermal_set", "h_hydro_set"))

        limits_d = _section(data, "limits")
        _take(limits_d, "limits", ("rocof", "nadir_band_hz", "blackout_floor_hz"))
        rocof_pairs = limits_d.get("rocof")
        limits = (RocofLimits(tuple((float(w), float(l)) for w, l in rocof_pairs))
                  if rocof_pairs is not None else defaults.rocof_limits)

        sizing_d = _section(data, "sizing")
        _take(sizing_d, "sizing", ("dp_inc_pu", "h_res_cap_s"))
        event_d = _section(data, "event")
        _take(event_d, "event", ("t_event_s", "t_add_lag_s"))
        output_d = _section(data, "output")
        _take(output_d, "output", ("out_dir",))

        cfg = RunConfig(
            system=system,
            plants=plants,
            res_levels=tuple(float(x) for x in grid_d.get("res_levels", defaults.res_levels)),
            hydro_share=float(grid_d.get("hydro_share", defaults.hydro_share)),
            imbalances=tuple(float(x) for x in grid_d.get("imbalances", defaults.imbalances)),
            h_thermal_set=tuple(float(x) for x in grid_d.get("h_thermal_set",
                                                             defaults.h_thermal_set)),
            h_hydro_set=tuple(float(x) for x in grid_d.get("h_hydro_set",
                                                           defaults.h_hydro_set)),
            rocof_limits=limits,
            nadir_band_hz=float(limits_d.get("nadir_band_hz", defaults.nadir_band_hz)),
            blackout_floor_hz=float(limits_d.get("blackout_floor_hz",
                                                 defaults.blackout_floor_hz)),
            dp_inc_pu=float(sizing_d.get("dp_inc_pu", defaults.dp_inc_pu)),
            h_res_cap_s=float(sizing_d.get("h_res_cap_s", defaults.h_res_cap_s)),
            t_event_s=float(event_d.get("t_event_s", defaults.t_event_s)),
            t_add_lag_s=float(event_d.get("t_add_lag_s", defaults.t_add_lag_s)),
            out_dir=str(output_d.get("out_dir", defaults.out_dir)),
            workers=int(data.get("workers", defaults.workers)),
        )
        cfg.grid_spec()  # validate the grid axes eagerly
        return cfg
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | os.PathLike) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return from_dict(data or {})


def save_config(config: RunConfig, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(config.to_dict(), fh, sort_keys=False, default_flow_style=None)
