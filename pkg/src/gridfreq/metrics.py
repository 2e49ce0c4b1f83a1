"""ENTSO-E compliance quantities: windowed ROCOFs, nadir, limit checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import FrequencyTrace

__all__ = [
    "RocofLimits",
    "FrequencyMetrics",
    "ComplianceReport",
    "NADIR_BAND_HZ",
    "BLACKOUT_FLOOR_HZ",
    "rocof_window",
    "extract_metrics",
    "check_compliance",
]

# Dynamic frequency band and the deviation considered unrecoverable (50 Hz grid).
NADIR_BAND_HZ = 0.8
BLACKOUT_FLOOR_HZ = 47.5

_DEFAULT_ROCOF = ((0.5, 2.0), (1.0, 1.5), (2.0, 1.25))


@dataclass(frozen=True)
class RocofLimits:
    """Ordered (window s, limit Hz/s) pairs; windows increase, limits decrease."""

    pairs: tuple[tuple[float, float], ...] = _DEFAULT_ROCOF

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((float(w), float(l)) for w, l in self.pairs))
        if not self.pairs:
            raise ValueError("at least one ROCOF window is required")
        ws = [w for w, _ in self.pairs]
        ls = [l for _, l in self.pairs]
        if any(w <= 0 for w in ws) or any(l <= 0 for l in ls):
            raise ValueError("windows and limits must be positive")
        if any(b <= a for a, b in zip(ws, ws[1:])):
            raise ValueError("windows must be strictly increasing")
        if any(b >= a for a, b in zip(ls, ls[1:])):
            raise ValueError("limits must be strictly decreasing")

    @property
    def windows(self) -> tuple[float, ...]:
        return tuple(w for w, _ in self.pairs)

    def limit(self, window: float) -> float:
        for w, l in self.pairs:
            if w == window:
                return l
        raise KeyError(f"no limit configured for window {window}")


@dataclass(frozen=True)
class FrequencyMetrics:
    nadir: float                    # Hz
    t_nadir: float                  # s
    rocof: dict[float, float]       # window (s) -> Hz/s, sign preserved
    steady_state_dev: float         # Hz, mean of final 5 % of the trace


@dataclass(frozen=True)
class ComplianceReport:
    nadir_ok: bool
    blackout_risk: bool
    rocof_ok: dict[float, bool]
    worst_rocof_window: float | None = None
    worst_exceedance_pct: float = 0.0


def _event_index(trace: FrequencyTrace) -> int:
    return round(trace.t_event / trace.dt)


def rocof_window(trace: FrequencyTrace, window: float) -> float:
    """Two-point difference quotient over exact trace samples (Hz/s).

    The deviation at the event instant is zero by construction, so this is
    the average frequency slope over [t_event, t_event + window].
    """
    steps = window / trace.dt
    if abs(steps - round(steps)) > 1e-6:
        raise ValueError(f"window {window} is not a multiple of dt {trace.dt}")
    if trace.t_event + window > trace.horizon + 1e-9:
        raise ValueError(
            f"window {window} s reaches beyond the {trace.horizon} s horizon")
    k0 = _event_index(trace)
    kw = k0 + round(steps)
    return (trace.delta_f[kw] - trace.delta_f[k0]) / window


def extract_metrics(trace: FrequencyTrace, limits: RocofLimits | None = None) -> FrequencyMetrics:
    """Nadir (earliest minimum), windowed ROCOFs, and the settling deviation."""
    limits = limits or RocofLimits()
    k_min = int(np.argmin(trace.delta_f))  # argmin takes the earliest tie
    n_tail = max(1, int(round(0.05 * len(trace.delta_f))))
    return FrequencyMetrics(
        nadir=trace.f0 + float(trace.delta_f[k_min]),
        t_nadir=k_min * trace.dt,
        rocof={w: float(rocof_window(trace, w)) for w in limits.windows},
        steady_state_dev=float(trace.delta_f[-n_tail:].mean()),
    )


def check_compliance(
    metrics: FrequencyMetrics,
    limits: RocofLimits,
    f0: float,
    nadir_band_hz: float = NADIR_BAND_HZ,
    blackout_floor_hz: float = BLACKOUT_FLOOR_HZ,
) -> ComplianceReport:
    """Judge metrics against the ROCOF limits and the dynamic frequency band.

    Limits apply to ROCOF magnitudes.  When several windows violate, the
    worst is the one with the largest relative exceedance (ties resolve to
    the shortest window).
    """
    if tuple(sorted(metrics.rocof)) != limits.windows:
        raise ValueError(
            f"metrics windows {sorted(metrics.rocof)} do not match "
            f"configured limits {list(limits.windows)}")
    rocof_ok = {w: abs(metrics.rocof[w]) <= limits.limit(w) for w in limits.windows}
    worst_window = None
    worst_pct = 0.0
    for w in limits.windows:
        if rocof_ok[w]:
            continue
        lim = limits.limit(w)
        pct = (abs(metrics.rocof[w]) - lim) / lim * 100.0
        if worst_window is None or pct > worst_pct:
            worst_window, worst_pct = w, pct
    return ComplianceReport(
        nadir_ok=metrics.nadir >= f0 - nadir_band_hz,
        blackout_risk=metrics.nadir < blackout_floor_hz,
        rocof_ok=rocof_ok,
        worst_rocof_window=worst_window,
        worst_exceedance_pct=worst_pct,
    )
