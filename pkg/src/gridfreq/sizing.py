"""Reserve sizing: minimum virtual inertia for ROCOF compliance and minimum
additional fast power for nadir compliance, plus the combined re-simulation.

Both quantities are sized against the unassisted base case (no virtual
inertia, no fast power), mirroring how the estimates are defined; ``verify``
then applies them jointly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .dynamics import GenerationMix, Scenario, simulate
from .metrics import (
    NADIR_BAND_HZ,
    ComplianceReport,
    FrequencyMetrics,
    RocofLimits,
    check_compliance,
    extract_metrics,
)

__all__ = [
    "SizingInfeasibleError",
    "HResSizing",
    "SizingResult",
    "DEFAULT_DP_INC",
    "DEFAULT_H_RES_CAP",
    "h_eq_min",
    "h_res_from_h_min",
    "size_h_res",
    "size_p_add",
    "verify",
    "size_scenario",
]

DEFAULT_DP_INC = 0.01     # pu, fast-power search increment
DEFAULT_H_RES_CAP = 15.0  # s, virtual-inertia ceiling (converter stall margin)


class SizingInfeasibleError(ValueError):
    """Raised when a sizing target cannot be met within the model."""


@dataclass(frozen=True)
class HResSizing:
    required: float            # s, un-capped minimum virtual inertia (0 if compliant)
    capped: float              # s, min(required, cap)
    feasible: bool             # required <= cap
    h_eq_min: float            # s, minimum equivalent inertia (0 if compliant)
    worst_window: float | None  # s, window that drove the sizing


@dataclass(frozen=True)
class SizingResult:
    """Per-scenario compliance metrics and reserve requirements."""

    scenario_id: str
    base_metrics: FrequencyMetrics
    base_compliance: ComplianceReport
    h_eq_sync: float
    h_eq_min: float
    h_res_required: float
    h_res_capped: float
    h_res_feasible: bool
    worst_window: float | None
    dp_add_required: float
    verified: ComplianceReport | None = None


def h_eq_min(dp_imbalance: float, p_load: float, f0: float, rocof_lim: float) -> float:
    """Minimum equivalent inertia (s) keeping the windowed ROCOF at its limit.

    Implemented exactly as the sizing relation is stated, without the 1/2
    factor of the instantaneous-ROCOF inertia relation; the combined
    re-simulation (``verify``) is the ground truth for sufficiency.
    """
    if dp_imbalance <= 0 or p_load <= 0 or f0 <= 0 or rocof_lim <= 0:
        raise ValueError("h_eq_min arguments must all be positive")
    return dp_imbalance / p_load * f0 / rocof_lim


def h_res_from_h_min(h_min: float, mix: GenerationMix) -> float:
    """Virtual inertia constant that lifts the mix to ``h_min``, floored at 0."""
    shortfall = h_min - mix.h_eq_sync
    if mix.share_res == 0:
        if shortfall > 0:
            raise SizingInfeasibleError(
                "no RES capacity to host virtual inertia "
                f"(need {shortfall:.3f} s above the synchronous {mix.h_eq_sync:.3f} s)")
        return 0.0
    return max(0.0, shortfall / mix.share_res)


def _base_scenario(scenario: Scenario) -> Scenario:
    """Strip any assistance: the sizing algorithms start from the bare case."""
    if scenario.mix.h_res_virtual == 0.0 and scenario.dp_add == 0.0:
        return scenario
    return replace(scenario,
                   mix=replace(scenario.mix, h_res_virtual=0.0),
                   dp_add=0.0)


def _size_h_res_from_metrics(
    scenario: Scenario,
    metrics: FrequencyMetrics,
    limits: RocofLimits,
    cap: float,
) -> HResSizing:
    report = check_compliance(metrics, limits, scenario.constants.f0)
    if report.worst_rocof_window is None:
        return HResSizing(0.0, 0.0, True, 0.0, None)
    worst = report.worst_rocof_window
    h_min = h_eq_min(scenario.dp_imbalance, scenario.constants.p_load,
                     scenario.constants.f0, limits.limit(worst))
    required = h_res_from_h_min(h_min, scenario.mix)
    return HResSizing(required, min(required, cap), required <= cap, h_min, worst)


def size_h_res(
    scenario: Scenario,
    limits: RocofLimits | None = None,
    cap: float = DEFAULT_H_RES_CAP,
) -> HResSizing:
    """Minimum virtual inertia for ROCOF compliance.

    Simulates the base case; if no window violates its limit no inertia is
    required.  Otherwise the worst window (largest relative exceedance) sets
    the minimum equivalent inertia, mapped onto the renewable share and
    capped/flagged against ``cap``.
    """
    limits = limits or RocofLimits()
    base = _base_scenario(scenario)
    metrics = extract_metrics(simulate(base), limits)
    return _size_h_res_from_metrics(base, metrics, limits, cap)


def _size_p_add_scan(
    scenario: Scenario,
    base_nadir: float,
    dp_inc: float,
    nadir_floor: float,
) -> float:
    nadir = base_nadir
    k = 0
    while nadir < nadir_floor:
        k += 1
        if k * dp_inc > scenario.dp_imbalance + 1e-12:
            raise SizingInfeasibleError(
                f"scenario {scenario.id!r}: nadir floor {nadir_floor} Hz not reached "
                f"even with fast power equal to the imbalance ({scenario.dp_imbalance} pu)")
        trace = simulate(replace(scenario, dp_add=k * dp_inc))
        nadir = trace.f0 + float(trace.delta_f.min())
    return k * dp_inc


def size_p_add(
    scenario: Scenario,
    dp_inc: float = DEFAULT_DP_INC,
    nadir_floor: float | None = None,
) -> float:
    """Smallest multiple of ``dp_inc`` whose fast power keeps the nadir at or
    above the floor (default: 800 mHz below nominal).

    A forward scan in ``dp_inc`` steps, matching how the estimate is
    quantized; the result is 0 when the base case already complies.
    """
    if dp_inc <= 0:
        raise ValueError("dp_inc must be positive")
    if nadir_floor is None:
        nadir_floor = scenario.constants.f0 - NADIR_BAND_HZ
    base = _base_scenario(scenario)
    trace = simulate(base)
    return _size_p_add_scan(base, trace.f0 + float(trace.delta_f.min()),
                            dp_inc, nadir_floor)


def verify(
    scenario: Scenario,
    h_res: float,
    dp_add: float,
    limits: RocofLimits | None = None,
) -> ComplianceReport:
    """Re-simulate with the sized virtual inertia and fast power applied jointly."""
    if h_res < 0 or dp_add < 0:
        raise ValueError("h_res and dp_add must be nonnegative")
    limits = limits or RocofLimits()
    combined = replace(scenario,
                       mix=replace(scenario.mix, h_res_virtual=h_res),
                       dp_add=dp_add)
    metrics = extract_metrics(simulate(combined), limits)
    return check_compliance(metrics, limits, scenario.constants.f0)


def size_scenario(
    scenario: Scenario,
    limits: RocofLimits | None = None,
    dp_inc: float = DEFAULT_DP_INC,
    cap: float = DEFAULT_H_RES_CAP,
    run_verify: bool = True,
) -> SizingResult:
    """Run both sizing algorithms on one base simulation, then verify.

    The verification re-simulates with the *un-capped* required inertia and
    the sized fast power applied together.
    """
    limits = limits or RocofLimits()
    base = _base_scenario(scenario)
    metrics = extract_metrics(simulate(base), limits)
    report = check_compliance(metrics, limits, base.constants.f0)
    hres = _size_h_res_from_metrics(base, metrics, limits, cap)
    dp_add = _size_p_add_scan(base, metrics.nadir, dp_inc,
                              base.constants.f0 - NADIR_BAND_HZ)
    verified = None
    if run_verify:
        verified = verify(base, hres.required, dp_add, limits)
    return SizingResult(
        scenario_id=scenario.id,
        base_metrics=metrics,
        base_compliance=report,
        h_eq_sync=scenario.mix.h_eq_sync,
        h_eq_min=hres.h_eq_min,
        h_res_required=hres.required,
        h_res_capped=hres.capped,
        h_res_feasible=hres.feasible,
        worst_window=hres.worst_window,
        dp_add_required=dp_add,
        verified=verified,
    )
