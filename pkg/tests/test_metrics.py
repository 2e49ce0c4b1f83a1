"""Metric extraction and compliance checks over synthetic and simulated traces."""

import math

import numpy as np
import pytest

from gridfreq import (
    GenerationMix,
    FrequencyMetrics,
    FrequencyTrace,
    PlantDynamics,
    RocofLimits,
    Scenario,
    SystemConstants,
    check_compliance,
    extract_metrics,
    rocof_window,
    simulate,
)

F0 = 50.0
DT = 0.005
LIMITS = RocofLimits()


def synthetic_trace(delta_f, t_event=1.0):
    delta_f = np.asarray(delta_f, dtype=float)
    zeros = np.zeros_like(delta_f)
    return FrequencyTrace(dt=DT, t_event=t_event, f0=F0, delta_f=delta_f,
                          p_thermal=zeros, p_hydro=zeros)


def trace_from(fn, horizon=30.0, t_event=1.0):
    t = np.arange(0.0, horizon + DT / 2, DT)
    return synthetic_trace(fn(t), t_event)


# ---------------------------------------------------------------- rocof

def test_flat_trace_rocof_zero():
    trace = trace_from(lambda t: np.zeros_like(t))
    for w in LIMITS.windows:
        assert rocof_window(trace, w) == 0.0


def test_linear_ramp_recovers_slope():
    trace = trace_from(lambda t: -0.5 * np.clip(t - 1.0, 0.0, None))
    for w in LIMITS.windows:
        assert rocof_window(trace, w) == pytest.approx(-0.5, abs=1e-12)


def test_pure_damping_rocof_closed_form():
    """ROCOF_1 of the first-order damping response, H=5, D=1, dp=0.2:
    50 * (-0.2/1) * (1 - exp(-0.1)) / 1 Hz/s."""
    mix = GenerationMix(0.0, 0.0, 1.0, 0.0, 0.0, h_res_virtual=5.0)
    scn = Scenario(id="d", constants=SystemConstants(), mix=mix,
                   plants=PlantDynamics(), dp_imbalance=0.2)
    trace = simulate(scn)
    expected = F0 * (-0.2 / 1.0) * (1.0 - math.exp(-1.0 / (2.0 * 5.0)))
    assert rocof_window(trace, 1.0) == pytest.approx(expected, abs=1e-6)


def test_rocof_scales_linearly():
    trace = trace_from(lambda t: -0.3 * (1 - np.exp(-np.clip(t - 1, 0, None))))
    scaled = synthetic_trace(2.5 * trace.delta_f)
    for w in LIMITS.windows:
        assert rocof_window(scaled, w) == pytest.approx(2.5 * rocof_window(trace, w),
                                                        rel=1e-12)


def test_rocof_window_beyond_horizon():
    trace = trace_from(lambda t: np.zeros_like(t), horizon=2.0)
    with pytest.raises(ValueError, match="horizon"):
        rocof_window(trace, 2.0)  # event at 1 s + 2 s window > 2 s trace


def test_rocof_window_must_align_with_dt():
    trace = trace_from(lambda t: np.zeros_like(t))
    with pytest.raises(ValueError, match="multiple"):
        rocof_window(trace, 0.5012)


# ---------------------------------------------------------------- metrics

def test_flat_trace_metrics():
    m = extract_metrics(trace_from(lambda t: np.zeros_like(t)), LIMITS)
    assert m.nadir == F0
    assert m.t_nadir == 0.0
    assert all(v == 0.0 for v in m.rocof.values())
    assert m.steady_state_dev == 0.0


def test_v_shaped_trace_nadir():
    def vee(t):
        ramp = np.clip(t - 1.0, 0.0, None)
        return np.where(t <= 3.0, -0.6 * ramp, np.minimum(-1.2 + 0.2 * (t - 3.0), 0.0))
    m = extract_metrics(trace_from(vee), LIMITS)
    assert m.nadir == pytest.approx(48.8, abs=1e-9)
    assert m.t_nadir == pytest.approx(3.0, abs=DT / 2)


def test_nadir_tie_resolves_earliest():
    flatline = np.concatenate([np.zeros(100), -np.ones(200), np.zeros(500)])
    m = extract_metrics(synthetic_trace(flatline, t_event=0.0), LIMITS)
    assert m.t_nadir == pytest.approx(100 * DT)


def test_steady_state_dev_is_tail_mean():
    n = 6001
    arr = np.zeros(n)
    arr[-300:] = -0.4  # exactly the final 5 %
    m = extract_metrics(synthetic_trace(arr, t_event=0.0), LIMITS)
    assert m.steady_state_dev == pytest.approx(-0.4)


# ---------------------------------------------------------------- compliance

def make_metrics(nadir, rocof):
    return FrequencyMetrics(nadir=nadir, t_nadir=2.0, rocof=rocof,
                            steady_state_dev=nadir - F0)


def test_all_within_limits():
    m = make_metrics(49.5, {0.5: -1.0, 1.0: -0.9, 2.0: -0.8})
    rep = check_compliance(m, LIMITS, F0)
    assert rep.nadir_ok and not rep.blackout_risk
    assert all(rep.rocof_ok.values())
    assert rep.worst_rocof_window is None
    assert rep.worst_exceedance_pct == 0.0


def test_worst_window_by_relative_exceedance():
    # exceedances: 50 %, 20 %, 4 % -> worst is the 0.5 s window
    m = make_metrics(49.5, {0.5: -3.0, 1.0: -1.8, 2.0: -1.3})
    rep = check_compliance(m, LIMITS, F0)
    assert rep.rocof_ok == {0.5: False, 1.0: False, 2.0: False}
    assert rep.worst_rocof_window == 0.5
    assert rep.worst_exceedance_pct == pytest.approx(50.0)


def test_nadir_below_blackout_floor():
    m = make_metrics(47.2, {0.5: -1.0, 1.0: -0.9, 2.0: -0.8})
    rep = check_compliance(m, LIMITS, F0)
    assert not rep.nadir_ok
    assert rep.blackout_risk


def test_band_edge_is_compliant():
    m = make_metrics(F0 - 0.8, {0.5: -2.0, 1.0: -1.5, 2.0: -1.25})
    rep = check_compliance(m, LIMITS, F0)
    assert rep.nadir_ok
    assert all(rep.rocof_ok.values())  # |rocof| == limit passes


def test_window_mismatch_rejected():
    m = make_metrics(49.5, {0.5: -1.0, 1.0: -0.9})
    with pytest.raises(ValueError, match="match"):
        check_compliance(m, LIMITS, F0)


def test_limits_validation():
    with pytest.raises(ValueError):
        RocofLimits(((1.0, 1.5), (0.5, 2.0)))   # windows not increasing
    with pytest.raises(ValueError):
        RocofLimits(((0.5, 1.0), (1.0, 1.5)))   # limits not decreasing
    with pytest.raises(ValueError):
        RocofLimits(())
