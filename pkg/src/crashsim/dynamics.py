"""Ground-contact dynamics of a payload riding on a flexible frame.

Model
-----
During contact the payload is a single lumped degree of freedom,

    m*x'' + c*x' + k*x = m*g,

where x is the downward compression of the frame measured from the instant of
first frame-ground contact (positive x compresses the spring). The forcing is
the payload weight: gravity keeps acting on the free body while the spring and
damper push back. The contact starts at x(0) = 0 with x'(0) equal to the
free-fall impact velocity sqrt(2*g*h).

The linear model is only trusted up to a compression stroke (``clearance``,
nominally 16 mm); beyond it the payload hits the ground rigidly and the
simulation stops with a Collision event. If the frame extends back through
x = 0 the payload lifts off. The simulation covers a single compression
event; bounce chains are out of scope.

Integration
-----------
Classic fixed-step RK4 at the scenario sampling period, with substeps capped
at 1e-4 s so coarse sample rates do not degrade accuracy. The accumulated
damper energy (integral of c*x'^2) is carried as an extra state so energy
accounting uses the exact same quadrature as the motion. Termination events
are located by linear interpolation of x across the bracketing step and the
final sample is evaluated there with a partial RK4 step.

Sign conventions for acceleration follow x: positive a points downward. An
ideal accelerometer measures specific force |a - g|: zero in free fall, 1 g
at rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import DomainError, NumericalError, UnsupportedRegimeError

STANDARD_GRAVITY = 9.81

# hard cap on the RK4 substep; 1/sample_rate is divided until it fits
MAX_SUBSTEP_S = 1e-4


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ImpactParams:
    """Lumped model constants: mass [kg], damping [N·s/m], stiffness [N/m],
    gravity [m/s²]."""

    mass: float
    damping: float
    stiffness: float
    gravity: float = STANDARD_GRAVITY

    def __post_init__(self):
        for name in ("mass", "damping", "stiffness", "gravity"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if not self.mass > 0.0:
            raise DomainError(f"mass must be > 0, got {self.mass}")
        if not self.stiffness > 0.0:
            raise DomainError(f"stiffness must be > 0, got {self.stiffness}")
        if self.damping < 0.0:
            raise DomainError(f"damping must be >= 0, got {self.damping}")
        if self.gravity < 0.0:
            raise DomainError(f"gravity must be >= 0, got {self.gravity}")

    @property
    def natural_frequency(self) -> float:
        """Undamped angular frequency sqrt(k/m) [rad/s]."""
        return math.sqrt(self.stiffness / self.mass)

    @property
    def critical_damping(self) -> float:
        """2*sqrt(k*m) [N·s/m]."""
        return 2.0 * math.sqrt(self.stiffness * self.mass)

    @property
    def damping_ratio(self) -> float:
        return self.damping / self.critical_damping


@dataclass(frozen=True)
class DropScenario:
    """One free-fall drop: altitude [m], available compression stroke [m],
    sensor bandwidth [Hz] and trajectory sample rate [Hz]."""

    drop_altitude: float
    clearance: float = 0.016
    sensor_cutoff: float = 500.0
    sample_rate: float = 20000.0

    def __post_init__(self):
        for name in ("drop_altitude", "clearance", "sensor_cutoff", "sample_rate"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.drop_altitude < 0.0:
            raise DomainError(f"drop_altitude must be >= 0, got {self.drop_altitude}")
        if not self.clearance > 0.0:
            raise DomainError(f"clearance must be > 0, got {self.clearance}")
        if not self.sensor_cutoff > 0.0:
            raise DomainError(f"sensor_cutoff must be > 0, got {self.sensor_cutoff}")
        if not self.sample_rate > 2.0 * self.sensor_cutoff:
            raise DomainError(
                f"sample_rate must exceed twice the sensor cutoff "
                f"({2.0 * self.sensor_cutoff} Hz), got {self.sample_rate}"
            )


class Termination(Enum):
    REBOUND = "rebound"
    COLLISION = "collision"
    MAX_TIME = "max_time_reached"


_TERM_FROM_CODE = {
    _kernels.TERM_REBOUND: Termination.REBOUND,
    _kernels.TERM_COLLISION: Termination.COLLISION,
    _kernels.TERM_MAX_TIME: Termination.MAX_TIME,
}


@dataclass(frozen=True)
class Trajectory:
    """Time-sampled contact state.

    Arrays share one length: time [s] (strictly increasing from 0),
    compression [m], velocity [m/s], acceleration [m/s²] and the cumulative
    damper energy [J] integrated alongside the motion. When the run ended in
    an event, the final sample sits at the interpolated event time and is
    spaced closer than 1/sample_rate from its predecessor.
    """

    time: np.ndarray
    compression: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    damper_energy: np.ndarray
    termination: Termination
    impact_velocity: float
    sample_rate: float

    def __len__(self) -> int:
        return self.time.shape[0]

    @property
    def samples(self) -> np.ndarray:
        """(n, 4) array of (t, x, v, a) rows."""
        return np.column_stack(
            (self.time, self.compression, self.velocity, self.acceleration)
        )

    @property
    def max_compression(self) -> float:
        return float(np.max(self.compression))


class PeakAcceleration(NamedTuple):
    raw: float
    proper: float


def impact_velocity(drop_altitude: float, gravity: float = STANDARD_GRAVITY) -> float:
    """Free-fall speed sqrt(2*g*h) at first ground contact [m/s]."""
    if _require_finite("drop_altitude", drop_altitude) < 0.0:
        raise DomainError(f"drop_altitude must be >= 0, got {drop_altitude}")
    if _require_finite("gravity", gravity) < 0.0:
        raise DomainError(f"gravity must be >= 0, got {gravity}")
    return math.sqrt(2.0 * gravity * drop_altitude)


def simulate_impact(params: ImpactParams, v0: float, clearance: float,
                    sample_rate: float, max_time: float = 1.0) -> Trajectory:
    """Integrate a contact that starts at compression 0 with velocity v0.

    Lower-level entry point used by simulate_contact; taking v0 directly
    decouples the initial speed from the gravity that forces the contact.
    A zero v0 is a zero-length contact: the trajectory holds the single
    initial sample and terminates as a rebound.
    """
    v0 = _require_finite("impact velocity", v0)
    if v0 < 0.0:
        raise DomainError(f"impact velocity must be >= 0, got {v0}")
    if not _require_finite("clearance", clearance) > 0.0:
        raise DomainError(f"clearance must be > 0, got {clearance}")
    if not _require_finite("sample_rate", sample_rate) > 0.0:
        raise DomainError(f"sample_rate must be > 0, got {sample_rate}")
    if not _require_finite("max_time", max_time) > 0.0:
        raise DomainError(f"max_time must be > 0, got {max_time}")

    if v0 == 0.0:
        return Trajectory(
            time=np.zeros(1),
            compression=np.zeros(1),
            velocity=np.zeros(1),
            acceleration=np.array([params.gravity]),
            damper_energy=np.zeros(1),
            termination=Termination.REBOUND,
            impact_velocity=0.0,
            sample_rate=float(sample_rate),
        )

    period = 1.0 / float(sample_rate)
    substeps = max(1, math.ceil(period / MAX_SUBSTEP_S))
    dt = period / substeps
    max_records = math.ceil(float(max_time) * float(sample_rate))

    t, x, v, a, e, n, term, fail_time = _kernels.integrate_contact(
        params.mass, params.damping, params.stiffness, params.gravity,
        v0, float(clearance), dt, substeps, max_records,
    )
    if term == _kernels.TERM_NON_FINITE:
        raise NumericalError(
            f"integration produced a non-finite state at t={fail_time:.6g} s",
            time=fail_time,
        )
    return Trajectory(
        time=t[:n].copy(),
        compression=x[:n].copy(),
        velocity=v[:n].copy(),
        acceleration=a[:n].copy(),
        damper_energy=e[:n].copy(),
        termination=_TERM_FROM_CODE[term],
        impact_velocity=v0,
        sample_rate=float(sample_rate),
    )


def simulate_contact(params: ImpactParams, scenario: DropScenario,
                     max_time: float = 1.0) -> Trajectory:
    """Simulate the ground contact of a drop described by `scenario`."""
    v0 = impact_velocity(scenario.drop_altitude, params.gravity)
    return simulate_impact(params, v0, scenario.clearance,
                           scenario.sample_rate, max_time)


def analytic_solution(params: ImpactParams, v0: float, t):
    """Closed-form underdamped solution of the contact ODE at times t.

    Returns (x, v, a) evaluated at t (scalar or array). Serves as the
    independent oracle for the RK4 integrator; only the underdamped branch
    (c < 2*sqrt(k*m)) is implemented.
    """
    zeta = params.damping_ratio
    if zeta >= 1.0:
        raise UnsupportedRegimeError(
            f"analytic solution implemented for the underdamped branch only "
            f"(damping ratio {zeta:.4g} >= 1)"
        )
    v0 = _require_finite("impact velocity", v0)

    t_arr = np.asarray(t, dtype=np.float64)
    if np.any(t_arr < 0.0):
        raise DomainError("time must be >= 0")

    m, c, k, g = params.mass, params.damping, params.stiffness, params.gravity
    wn = params.natural_frequency
    wd = wn * math.sqrt(1.0 - zeta * zeta)
    x_eq = m * g / k

    # x = x_eq + exp(-zeta*wn*t) * (A cos(wd t) + B sin(wd t)),
    # with x(0) = 0 and x'(0) = v0
    A = -x_eq
    B = (v0 + zeta * wn * A) / wd

    decay = np.exp(-zeta * wn * t_arr)
    cos_t = np.cos(wd * t_arr)
    sin_t = np.sin(wd * t_arr)

    x = x_eq + decay * (A * cos_t + B * sin_t)
    v = decay * ((B * wd - zeta * wn * A) * cos_t - (A * wd + zeta * wn * B) * sin_t)
    a = g - (c * v + k * x) / m

    if np.isscalar(t) or t_arr.ndim == 0:
        return float(x), float(v), float(a)
    return x, v, a


def peak_acceleration(traj: Trajectory, gravity: float = STANDARD_GRAVITY) -> PeakAcceleration:
    """Peak |a| and peak |a - g| (what an accelerometer registers) over a
    trajectory [m/s²]."""
    if len(traj) == 0:
        raise DomainError("trajectory is empty")
    raw = float(np.max(np.abs(traj.acceleration)))
    proper = float(np.max(np.abs(traj.acceleration - gravity)))
    return PeakAcceleration(raw=raw, proper=proper)
