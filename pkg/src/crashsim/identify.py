"""Parameter identification from drop-test and static-test data.

Stiffness comes from a static load-deflection test as the least-squares slope
through the origin. Damping comes from matching model-predicted peak
accelerations to measured ones: the loss is the mean squared error over all
drop observations, minimized in one dimension by a coarse log-spaced grid
scan followed by golden-section refinement of the best cell. The peaks
entering the loss are the sensor-filtered specific-force peaks by default
(that is what the accelerometer records); raw |a| peaks are available behind
a switch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ._parallel import parallel_map
from .dynamics import (
    STANDARD_GRAVITY,
    DropScenario,
    ImpactParams,
    peak_acceleration,
    simulate_contact,
)
from .errors import ConfigurationError, DegenerateDataError, DomainError
from .sensor import FilterSpec, filtered_peak

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PeakObservation:
    """One drop experiment reduced to (altitude [m], peak acceleration [m/s²])."""

    drop_altitude: float
    measured_peak: float
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "drop_altitude", float(self.drop_altitude))
        object.__setattr__(self, "measured_peak", float(self.measured_peak))
        if not (math.isfinite(self.drop_altitude) and self.drop_altitude > 0.0):
            raise DomainError(f"drop_altitude must be > 0, got {self.drop_altitude}")
        if not (math.isfinite(self.measured_peak) and self.measured_peak > 0.0):
            raise DomainError(f"measured_peak must be > 0 and finite, got {self.measured_peak}")


@dataclass(frozen=True)
class StaticDeflectionSample:
    """One point of the static deformation test: force [N] at deflection [m]."""

    force: float
    deflection: float

    def __post_init__(self):
        object.__setattr__(self, "force", float(self.force))
        object.__setattr__(self, "deflection", float(self.deflection))
        if not (math.isfinite(self.force) and self.force >= 0.0):
            raise DomainError(f"force must be >= 0, got {self.force}")
        if not (math.isfinite(self.deflection) and self.deflection >= 0.0):
            raise DomainError(f"deflection must be >= 0, got {self.deflection}")


@dataclass(frozen=True)
class FitSetup:
    """Everything held fixed while fitting the damping coefficient."""

    mass: float
    stiffness: float
    gravity: float = STANDARD_GRAVITY
    scenario: DropScenario = field(default_factory=lambda: DropScenario(drop_altitude=0.0))
    use_raw_peak: bool = False

    def params_with(self, damping: float) -> ImpactParams:
        return ImpactParams(mass=self.mass, damping=damping,
                            stiffness=self.stiffness, gravity=self.gravity)

    @property
    def critical_damping(self) -> float:
        return 2.0 * math.sqrt(self.stiffness * self.mass)


@dataclass(frozen=True)
class FitResult:
    """Fitted damping [N·s/m], its MSE loss [(m/s²)²], and search metadata."""

    damping: float
    loss: float
    evaluations: int
    bracket: tuple[float, float]
    at_boundary: bool


def estimate_stiffness(samples: list[StaticDeflectionSample]) -> float:
    """Least-squares slope of force vs. deflection constrained through the
    origin: k = sum(F*x) / sum(x^2) [N/m]."""
    if len(samples) < 2:
        raise DomainError(f"need at least 2 static samples, got {len(samples)}")
    deflections = np.array([s.deflection for s in samples])
    forces = np.array([s.force for s in samples])
    if np.unique(deflections).size < 2:
        raise DegenerateDataError("static samples need at least 2 distinct deflections")
    return float(np.dot(forces, deflections) / np.dot(deflections, deflections))


def model_peak(params: ImpactParams, scenario: DropScenario,
               use_raw_peak: bool = False) -> float:
    """Model-predicted peak acceleration [m/s²] for one drop: contact
    simulation followed by the sensor filter (or raw |a| when requested)."""
    traj = simulate_contact(params, scenario)
    if use_raw_peak:
        return peak_acceleration(traj, params.gravity).raw
    return filtered_peak(traj, FilterSpec.from_scenario(scenario), params.gravity)


def _peaks_by_altitude(damping: float, setup: FitSetup,
                       altitudes: set[float]) -> dict[float, float]:
    params = setup.params_with(damping)
    unique = sorted(altitudes)
    peaks = parallel_map(
        lambda h: model_peak(params, replace(setup.scenario, drop_altitude=h),
                             setup.use_raw_peak),
        unique,
    )
    return dict(zip(unique, peaks))


def mse_loss(damping: float, setup: FitSetup,
             observations: list[PeakObservation]) -> float:
    """Mean squared error [(m/s²)²] between model peaks and measured peaks.

    Model peaks for repeated altitudes are computed once per call.
    """
    if not observations:
        raise DomainError("observation list is empty")
    if not (math.isfinite(damping) and damping >= 0.0):
        raise DomainError(f"damping must be >= 0, got {damping}")
    peaks = _peaks_by_altitude(damping, setup, {o.drop_altitude for o in observations})
    residuals = [peaks[o.drop_altitude] - o.measured_peak for o in observations]
    return float(np.mean(np.square(residuals)))


def fit_damping(setup: FitSetup, observations: list[PeakObservation],
                bracket: tuple[float, float] | None = None,
                tolerance: float = 0.01) -> FitResult:
    """Minimize the peak-matching MSE over the damping coefficient.

    A 64-point log-spaced grid over the bracket locates the best cell, then
    golden-section search refines it to `tolerance` [N·s/m]. The bracket
    endpoints are also evaluated so the returned loss never exceeds either.
    Deterministic for fixed inputs. The default bracket is (0, 5*c_crit].
    """
    if not observations:
        raise DomainError("observation list is empty")
    if bracket is None:
        bracket = (0.0, 5.0 * setup.critical_damping)
    c_low, c_high = float(bracket[0]), float(bracket[1])
    if not (math.isfinite(c_low) and math.isfinite(c_high)
            and 0.0 <= c_low < c_high):
        raise ConfigurationError(f"invalid damping bracket {bracket!r}")
    if not (math.isfinite(tolerance) and tolerance > 0.0):
        raise ConfigurationError(f"tolerance must be > 0, got {tolerance}")

    evaluations = 0

    def loss(c: float) -> float:
        return mse_loss(c, setup, observations)

    # coarse scan: log-spaced grid above c_low (log spacing needs a positive start)
    eps = max(1e-3, 1e-6 * (c_high - c_low))
    grid = np.geomspace(c_low + eps, c_high, 64)
    grid_losses = parallel_map(loss, grid)
    evaluations += len(grid)

    best_c = float(grid[int(np.argmin(grid_losses))])
    best_f = float(min(grid_losses))

    # endpoints, so the result provably beats both
    for c_end in (c_low, c_high):
        f_end = loss(c_end)
        evaluations += 1
        if f_end < best_f:
            best_c, best_f = c_end, f_end

    # golden-section refinement inside the bracketing grid cell
    i = int(np.argmin(grid_losses))
    a = float(grid[max(i - 1, 0)])
    b = float(grid[min(i + 1, len(grid) - 1)])
    if i == 0:
        a = c_low
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1 = loss(x1)
    f2 = loss(x2)
    evaluations += 2
    if f1 < best_f:
        best_c, best_f = x1, f1
    if f2 < best_f:
        best_c, best_f = x2, f2
    while b - a > tolerance:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = loss(x1)
            evaluations += 1
            if f1 < best_f:
                best_c, best_f = x1, f1
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = loss(x2)
            evaluations += 1
            if f2 < best_f:
                best_c, best_f = x2, f2

    margin = 2.0 * max(tolerance, eps)
    at_boundary = (best_c - c_low) <= margin or (c_high - best_c) <= margin
    return FitResult(damping=best_c, loss=best_f, evaluations=evaluations,
                     bracket=(c_low, c_high), at_boundary=at_boundary)
