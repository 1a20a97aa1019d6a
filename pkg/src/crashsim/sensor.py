"""Accelerometer bandwidth model: first-order Butterworth low-pass.

The sensor sees the specific-force magnitude |a - g| of the payload; its
limited bandwidth is modeled as H(s) = w_c / (s + w_c) with w_c = 2*pi*fc,
discretized by the bilinear transform with frequency pre-warping so the
-3 dB point lands exactly on fc. The filter state is warm-started at the
first input value: the physical sensor is already tracking the signal when
contact begins, so a constant input passes through unchanged from sample 0.

Filtering is applied to the magnitude signal |a - g| rather than the signed
acceleration; for the unimodal contact pulse the difference is negligible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dynamics import DropScenario, Trajectory
from .errors import ConfigurationError, DomainError


@dataclass(frozen=True)
class FilterSpec:
    """Cutoff [Hz] and sample rate [Hz] of the discretized filter."""

    cutoff: float
    sample_rate: float

    def __post_init__(self):
        if not (math.isfinite(self.cutoff) and self.cutoff > 0.0):
            raise ConfigurationError(f"cutoff must be > 0, got {self.cutoff}")
        if not (math.isfinite(self.sample_rate) and self.sample_rate > 2.0 * self.cutoff):
            raise ConfigurationError(
                f"sample_rate must exceed twice the cutoff "
                f"({2.0 * self.cutoff} Hz), got {self.sample_rate}"
            )

    @classmethod
    def from_scenario(cls, scenario: DropScenario) -> "FilterSpec":
        return cls(cutoff=scenario.sensor_cutoff, sample_rate=scenario.sample_rate)


@dataclass(frozen=True)
class SignalTrace:
    """Uniformly sampled acceleration signal [m/s²]."""

    sample_rate: float
    values: np.ndarray

    def __post_init__(self):
        if not (math.isfinite(self.sample_rate) and self.sample_rate > 0.0):
            raise DomainError(f"sample_rate must be > 0, got {self.sample_rate}")
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise DomainError(f"values must be one-dimensional, got shape {values.shape}")
        if values.size and not np.all(np.isfinite(values)):
            raise DomainError("signal values must all be finite")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]


def prewarped_gain(cutoff: float, dt: float) -> float:
    """Bilinear-transform coefficient tan(pi * fc * dt) for one step of dt."""
    return math.tan(math.pi * cutoff * dt)


def lowpass_filter(trace: SignalTrace, spec: FilterSpec) -> SignalTrace:
    """Apply the discretized low-pass to a trace; output length equals input."""
    if trace.sample_rate != spec.sample_rate:
        raise ConfigurationError(
            f"trace sample rate {trace.sample_rate} Hz does not match "
            f"filter sample rate {spec.sample_rate} Hz"
        )
    if len(trace) == 0:
        raise ConfigurationError("cannot filter an empty trace")
    k = prewarped_gain(spec.cutoff, 1.0 / spec.sample_rate)
    return SignalTrace(trace.sample_rate, _kernels.lowpass(trace.values, k, k))


def filtered_series(traj: Trajectory, spec: FilterSpec,
                    gravity: float) -> np.ndarray:
    """Low-pass-filtered specific-force magnitude |a - g| along a trajectory.

    The final sample of an event-terminated trajectory sits on a partial
    step; the filter advances over it with a coefficient matched to the
    actual step length.
    """
    if traj.sample_rate != spec.sample_rate:
        raise ConfigurationError(
            f"trajectory sample rate {traj.sample_rate} Hz does not match "
            f"filter sample rate {spec.sample_rate} Hz"
        )
    if len(traj) == 0:
        raise ConfigurationError("cannot filter an empty trajectory")
    proper = np.abs(traj.acceleration - gravity)
    k_mid = prewarped_gain(spec.cutoff, 1.0 / spec.sample_rate)
    if len(traj) >= 2:
        k_last = prewarped_gain(spec.cutoff, float(traj.time[-1] - traj.time[-2]))
    else:
        k_last = k_mid
    return _kernels.lowpass(proper, k_mid, k_last)


def filtered_peak(traj: Trajectory, spec: FilterSpec, gravity: float) -> float:
    """Peak of the filtered specific-force signal [m/s²] - the sensor-side
    counterpart of peak_acceleration().proper."""
    return float(np.max(np.abs(filtered_series(traj, spec, gravity))))
