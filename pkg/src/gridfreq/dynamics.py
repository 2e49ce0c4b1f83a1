"""Aggregated power-system frequency dynamics.

The model couples the per-unit swing equation of an equivalent rotating mass
with simplified governor/turbine blocks for the thermal and hydro fleets and
a share of converter-interfaced renewables.  Renewables contribute no governor
response; an emulated (virtual) inertia constant enters only through the
equivalent inertia.  All powers are per unit on the system base, frequency
deviation is internally per unit of nominal frequency and converted to Hz at
the trace boundary.

The whole system is linear and time-invariant once the imbalance step is
applied, so the classic fixed-step 4th-order Runge-Kutta update collapses to
an exact affine recurrence ``x[k+1] = M x[k] + c``.  ``simulate`` evaluates
that recurrence in chunks; the result is identical to stepping RK4 sample by
sample, at a fraction of the cost.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

__all__ = [
    "SystemConstants",
    "GenerationMix",
    "ThermalParams",
    "HydroParams",
    "PlantDynamics",
    "Scenario",
    "FrequencyTrace",
    "SimulationError",
    "compute_h_eq",
    "damping_pu",
    "simulate",
]

N_STATES = 8  # swing + 3 thermal + 3 hydro + fast-power lag
_CHUNK = 64   # propagator block size used by simulate


class SimulationError(RuntimeError):
    """Raised when the integration produces a non-finite state."""


@dataclass(frozen=True)
class SystemConstants:
    """Operating-point constants of the aggregated system.

    f0: nominal frequency (Hz)
    s_base: system rated power (MW)
    p_load: pre-event load, pu of s_base
    d_eq_pct_per_hz: load damping, percent load change per Hz deviation
    horizon: simulation length (s)
    dt: integration step (s)
    """

    f0: float = 50.0
    s_base: float = 1000.0
    p_load: float = 1.0
    d_eq_pct_per_hz: float = 2.0
    horizon: float = 30.0
    dt: float = 0.005

    def __post_init__(self):
        if self.f0 <= 0:
            raise ValueError(f"f0 must be positive, got {self.f0}")
        if self.s_base <= 0:
            raise ValueError(f"s_base must be positive, got {self.s_base}")
        if not 0 < self.p_load <= 1.0:
            raise ValueError(f"p_load must be in (0, 1], got {self.p_load}")
        if self.d_eq_pct_per_hz < 0:
            raise ValueError("d_eq_pct_per_hz must be nonnegative")
        if not 0 < self.dt <= 0.01:
            raise ValueError(f"dt must be in (0, 0.01], got {self.dt}")
        if self.horizon < 30 * self.dt:
            raise ValueError("horizon must cover at least 30 steps")

    @property
    def n_samples(self) -> int:
        return int(math.floor(self.horizon / self.dt + 1e-9)) + 1


@dataclass(frozen=True)
class GenerationMix:
    """Supply-side portfolio: rated-power shares and inertia constants.

    Shares are pu of the system base and must total 1.  ``h_res_virtual`` is
    the emulated inertia constant of the renewable share (0 = no synthetic
    inertia).
    """

    share_thermal: float
    share_hydro: float
    share_res: float
    h_thermal: float
    h_hydro: float
    h_res_virtual: float = 0.0

    def __post_init__(self):
        for name in ("share_thermal", "share_hydro", "share_res"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        total = self.share_thermal + self.share_hydro + self.share_res
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"shares must sum to 1, got {total!r}")
        for name in ("h_thermal", "h_hydro", "h_res_virtual"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def h_eq_sync(self) -> float:
        """Synchronous part of the equivalent inertia (s)."""
        return self.h_thermal * self.share_thermal + self.h_hydro * self.share_hydro


# Default plant parameters.  The governor/turbine figures are effective
# fleet-level values calibrated against published nadir examples (see the
# README parameter table); they are not single-machine nameplate constants.
@dataclass(frozen=True)
class ThermalParams:
    """Reheat steam fleet: droop feed, governor lag, two-stage turbine."""

    droop_r: float = 0.134   # effective droop, pu
    t_gov: float = 0.01      # governor lag (s)
    t_ch: float = 0.02       # steam-chest lag (s)
    t_rh: float = 7.0        # reheater time constant (s)
    f_hp: float = 0.94       # high-pressure (fast) power fraction

    def __post_init__(self):
        if not 0 < self.droop_r <= 1:
            raise ValueError(f"thermal droop_r must be in (0, 1], got {self.droop_r}")
        for name in ("t_gov", "t_ch", "t_rh"):
            if getattr(self, name) <= 0:
                raise ValueError(f"thermal {name} must be positive")
        if not 0 <= self.f_hp <= 1:
            raise ValueError(f"f_hp must be in [0, 1], got {self.f_hp}")


@dataclass(frozen=True)
class HydroParams:
    """Hydro fleet: transient-droop governor, servo, water column."""

    droop_r: float = 0.30    # effective permanent droop, pu
    t_servo: float = 0.8     # gate servo lag (s)
    r_temp: float = 2.0      # transient droop, pu
    t_reset: float = 12.5    # dashpot reset time (s)
    t_water: float = 0.55    # water starting time (s)

    def __post_init__(self):
        if not 0 < self.droop_r <= 1:
            raise ValueError(f"hydro droop_r must be in (0, 1], got {self.droop_r}")
        for name in ("t_servo", "t_reset", "t_water"):
            if getattr(self, name) <= 0:
                raise ValueError(f"hydro {name} must be positive")
        if self.r_temp <= self.droop_r:
            raise ValueError("r_temp must exceed droop_r (transient-droop stability)")


@dataclass(frozen=True)
class PlantDynamics:
    thermal: ThermalParams = field(default_factory=ThermalParams)
    hydro: HydroParams = field(default_factory=HydroParams)


@dataclass(frozen=True)
class Scenario:
    """One simulation case.

    ``dp_imbalance`` is a sudden generation deficit (pu of s_base) applied at
    ``t_event``.  ``dp_add`` is additional fast active power delivered from
    ``t_event`` either as an ideal step (``t_add_lag`` = 0) or through a
    first-order lag.
    """

    id: str
    constants: SystemConstants
    mix: GenerationMix
    plants: PlantDynamics
    dp_imbalance: float
    t_event: float = 1.0
    dp_add: float = 0.0
    t_add_lag: float = 0.0

    def __post_init__(self):
        if not 0 <= self.dp_imbalance <= 1:
            raise ValueError(f"dp_imbalance must be in [0, 1], got {self.dp_imbalance}")
        if not 0 <= self.t_event < self.constants.horizon:
            raise ValueError("t_event must lie in [0, horizon)")
        if self.dp_add < 0:
            raise ValueError("dp_add must be nonnegative")
        if self.t_add_lag < 0:
            raise ValueError("t_add_lag must be nonnegative")
        k = round(self.t_event / self.constants.dt)
        if abs(k * self.constants.dt - self.t_event) > 1e-6:
            raise ValueError(
                f"t_event {self.t_event} must fall on the dt={self.constants.dt} grid")


@dataclass(eq=False)
class FrequencyTrace:
    """Uniformly sampled frequency response.

    ``delta_f`` is the deviation from nominal in Hz; ``p_thermal`` and
    ``p_hydro`` are the fleets' power deviations in pu of the system base
    (already share-scaled, i.e. direct components of the supply-side
    deviation).  Arrays are read-only after construction.
    """

    dt: float
    t_event: float
    f0: float
    delta_f: np.ndarray
    p_thermal: np.ndarray
    p_hydro: np.ndarray
    scenario_id: str = ""

    def __post_init__(self):
        for arr in (self.delta_f, self.p_thermal, self.p_hydro):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.delta_f)

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.delta_f)) * self.dt

    @property
    def horizon(self) -> float:
        return (len(self.delta_f) - 1) * self.dt


def compute_h_eq(mix: GenerationMix) -> float:
    """Equivalent inertia constant (s): capacity-weighted sum of all sources.

    The thermal and hydro terms form the synchronous component; the
    renewable share contributes only its emulated constant.
    """
    return (mix.h_thermal * mix.share_thermal
            + mix.h_hydro * mix.share_hydro
            + mix.h_res_virtual * mix.share_res)


def damping_pu(constants: SystemConstants) -> float:
    """Load damping as pu power per pu frequency deviation.

    A deviation of 1 pu of f0 is f0 Hz; the load sheds d_eq percent of the
    operating load per Hz.
    """
    return constants.d_eq_pct_per_hz / 100.0 * constants.f0 * constants.p_load


def _build_system(scn: Scenario) -> tuple[np.ndarray, np.ndarray, float]:
    """Assemble the LTI state matrix A and constant post-event input b.

    State layout:
      0 delta_f (pu of f0)
      1 thermal governor output
      2 steam-chest output
      3 reheater internal state      (thermal power = f_hp*x2 + x3)
      4 hydro compensation state     (compensated signal = k_h*u + x4)
      5 gate servo output
      6 water-column internal state  (hydro power = 3*x6 - 2*x5)
      7 fast-power delivery lag      (used only when t_add_lag > 0)
    """
    th = scn.plants.thermal
    hy = scn.plants.hydro
    mix = scn.mix
    h_eq = compute_h_eq(mix)
    if h_eq <= 0:
        raise ValueError(f"scenario {scn.id!r}: equivalent inertia must be positive")
    d_pu = damping_pu(scn.constants)
    two_h = 2.0 * h_eq

    A = np.zeros((N_STATES, N_STATES))
    b = np.zeros(N_STATES)

    # swing: 2 H dΔf/dt = ΔP_g - ΔP_load - D Δf
    A[0, 0] = -d_pu / two_h
    A[0, 2] = mix.share_thermal * th.f_hp / two_h
    A[0, 3] = mix.share_thermal / two_h
    A[0, 5] = -2.0 * mix.share_hydro / two_h
    A[0, 6] = 3.0 * mix.share_hydro / two_h
    b[0] = -scn.dp_imbalance / two_h
    if scn.t_add_lag > 0 and scn.dp_add > 0:
        A[0, 7] = 1.0 / two_h
        A[7, 7] = -1.0 / scn.t_add_lag
        b[7] = scn.dp_add / scn.t_add_lag
    else:
        b[0] += scn.dp_add / two_h

    # thermal: droop -> 1/(1+t_gov s) -> (1+f_hp t_rh s)/((1+t_ch s)(1+t_rh s))
    A[1, 0] = -1.0 / (th.droop_r * th.t_gov)
    A[1, 1] = -1.0 / th.t_gov
    A[2, 1] = 1.0 / th.t_ch
    A[2, 2] = -1.0 / th.t_ch
    A[3, 2] = (1.0 - th.f_hp) / th.t_rh
    A[3, 3] = -1.0 / th.t_rh

    # hydro: droop -> (1+t_reset s)/(1+(r_temp/R) t_reset s) -> servo
    #        -> (1 - t_water s)/(1 + 0.5 t_water s)
    t2 = hy.r_temp / hy.droop_r * hy.t_reset
    k_h = hy.droop_r / hy.r_temp
    A[4, 0] = -(1.0 - k_h) / (hy.droop_r * t2)
    A[4, 4] = -1.0 / t2
    A[5, 0] = -k_h / (hy.droop_r * hy.t_servo)
    A[5, 4] = 1.0 / hy.t_servo
    A[5, 5] = -1.0 / hy.t_servo
    A[6, 5] = 2.0 / hy.t_water
    A[6, 6] = -2.0 / hy.t_water

    return A, b, h_eq


def _rk4_propagator(A: np.ndarray, b: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """One-step affine map of classic RK4 applied to dx/dt = A x + b."""
    eye = np.eye(A.shape[0])
    dA = dt * A
    M = eye + dA @ (eye + dA @ (eye / 2 + dA @ (eye / 6 + dA / 24)))
    S = dt * (eye + dA @ (eye / 2 + dA @ (eye / 6 + dA / 24)))
    return M, S @ b


def simulate(scenario: Scenario) -> FrequencyTrace:
    """Integrate the coupled swing/governor model and return the trace.

    The state is identically zero before ``t_event`` (pre-event equilibrium);
    from the event sample onward the imbalance and any fast power act as
    constant inputs, integrated with the fixed-step RK4 recurrence.

    Raises SimulationError if the state becomes non-finite (e.g. a delivery
    lag too fast for the step size), naming the scenario and the first bad
    timestep.
    """
    cons = scenario.constants
    A, b, _ = _build_system(scenario)
    M, c = _rk4_propagator(A, b, cons.dt)

    n = cons.n_samples
    k_event = round(scenario.t_event / cons.dt)
    n_post = n - 1 - k_event  # propagation steps after the event sample

    states = np.zeros((n, N_STATES))
    if n_post > 0:
        # chunked evaluation of x[k+1] = M x[k] + c from x[k_event] = 0
        chunk = min(_CHUNK, n_post)
        powers = np.empty((chunk + 1, N_STATES, N_STATES))
        powers[0] = np.eye(N_STATES)
        shifts = np.zeros((chunk + 1, N_STATES))
        for j in range(1, chunk + 1):
            powers[j] = M @ powers[j - 1]
            shifts[j] = M @ shifts[j - 1] + c
        n_chunks, rem = divmod(n_post, chunk)
        starts = np.zeros((n_chunks + 1, N_STATES))
        x = np.zeros(N_STATES)
        for s in range(n_chunks):
            starts[s] = x
            x = powers[chunk] @ x + shifts[chunk]
        starts[n_chunks] = x
        if n_chunks > 0:
            blocks = np.einsum("jab,sb->sja", powers[:chunk], starts[:n_chunks])
            blocks += shifts[:chunk][None, :, :]
            states[k_event:k_event + n_chunks * chunk] = blocks.reshape(-1, N_STATES)
        tail = powers[:rem + 1] @ starts[n_chunks] + shifts[:rem + 1]
        states[k_event + n_chunks * chunk:k_event + n_post + 1] = tail

    if not np.isfinite(states).all():
        bad = int(np.argwhere(~np.isfinite(states).all(axis=1))[0, 0])
        raise SimulationError(
            f"scenario {scenario.id!r}: non-finite state at t={bad * cons.dt:.3f} s "
            f"(step {bad}); the model is likely stiffer than dt={cons.dt} allows")

    th = scenario.plants.thermal
    mix = scenario.mix
    return FrequencyTrace(
        dt=cons.dt,
        t_event=scenario.t_event,
        f0=cons.f0,
        delta_f=states[:, 0] * cons.f0,
        p_thermal=mix.share_thermal * (th.f_hp * states[:, 2] + states[:, 3]),
        p_hydro=mix.share_hydro * (3.0 * states[:, 6] - 2.0 * states[:, 5]),
        scenario_id=scenario.id,
    )
