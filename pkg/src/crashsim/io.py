"""CSV and JSON readers/writers for the batch front end.

All files are headered CSV with unit-suffixed column names; values are
written with 12 significant digits so write-then-read is an identity at that
precision. Writes are atomic (temp file in the target directory, then
rename). Peaks files store m/s² in a ``peak_ms2`` column; a ``peak_g``
column (1 g = 9.80665 m/s²) is accepted on read and written when requested.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .dynamics import Trajectory
from .energy import EnergyBreakdown
from .errors import ConfigurationError, DomainError
from .identify import PeakObservation, StaticDeflectionSample

G_UNIT = 9.80665  # conversion for the optional peak_g column

PEAKS_COLUMNS = ("altitude_cm", "peak_ms2", "label")
PEAKS_COLUMNS_G = ("altitude_cm", "peak_g", "label")
STATICS_COLUMNS = ("force_n", "deflection_m")
TRAJECTORY_COLUMNS = ("t_s", "x_m", "v_ms", "a_ms2", "a_filtered_ms2")
ENERGY_COLUMNS = ("altitude_m", "e_spring_j", "e_damper_j", "e_collision_j",
                  "frac_spring", "frac_damper", "frac_collision")


def fmt(value: float) -> str:
    return format(float(value), ".12g")


def atomic_write_text(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def write_json(path: Path, payload: dict) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2) + "\n")


def _render_csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def write_peaks_csv(path: Path, observations: list[PeakObservation],
                    unit: str = "ms2") -> None:
    if unit == "ms2":
        header = PEAKS_COLUMNS
        scale = 1.0
    elif unit == "g":
        header = PEAKS_COLUMNS_G
        scale = 1.0 / G_UNIT
    else:
        raise ConfigurationError(f"unknown peak unit {unit!r} (expected 'ms2' or 'g')")
    rows = ((fmt(o.drop_altitude * 100.0), fmt(o.measured_peak * scale), o.label)
            for o in observations)
    atomic_write_text(path, _render_csv(header, rows))


def _read_rows(path: Path, expected_any: list[tuple[str, ...]]):
    """Return (header, [(line_number, row), ...]) after validating the header
    against the accepted column sets."""
    path = Path(path)
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise ConfigurationError(f"{path}: file is empty (missing header)") from None
        if header not in expected_any:
            wanted = " or ".join(",".join(cols) for cols in expected_any)
            raise ConfigurationError(
                f"{path}: unexpected header {','.join(header)!r} (expected {wanted})"
            )
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            rows.append((line_no, row))
    return header, rows


def _parse_float(path: Path, line_no: int, name: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ConfigurationError(f"{path}:{line_no}: bad {name} value {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigurationError(f"{path}:{line_no}: non-finite {name} value {raw!r}")
    return value


def read_peaks_csv(path: Path) -> list[PeakObservation]:
    """Parse drop observations; altitude_cm converts to meters, peak_g
    converts to m/s². Malformed rows report the file line number."""
    header, rows = _read_rows(path, [PEAKS_COLUMNS, PEAKS_COLUMNS_G])
    scale = G_UNIT if header == PEAKS_COLUMNS_G else 1.0
    observations = []
    for line_no, row in rows:
        if len(row) != 3:
            raise ConfigurationError(
                f"{path}:{line_no}: expected 3 fields, got {len(row)}"
            )
        altitude_cm = _parse_float(path, line_no, "altitude", row[0])
        peak = _parse_float(path, line_no, "peak", row[1]) * scale
        try:
            observations.append(
                PeakObservation(drop_altitude=altitude_cm / 100.0,
                                measured_peak=peak, label=row[2])
            )
        except DomainError as exc:
            raise ConfigurationError(f"{path}:{line_no}: {exc}") from None
    if not observations:
        raise DomainError(f"{path}: no data rows")
    return observations


def write_statics_csv(path: Path, samples: list[StaticDeflectionSample]) -> None:
    rows = ((fmt(s.force), fmt(s.deflection)) for s in samples)
    atomic_write_text(path, _render_csv(STATICS_COLUMNS, rows))


def read_statics_csv(path: Path) -> list[StaticDeflectionSample]:
    _, rows = _read_rows(path, [STATICS_COLUMNS])
    samples = []
    for line_no, row in rows:
        if len(row) != 2:
            raise ConfigurationError(
                f"{path}:{line_no}: expected 2 fields, got {len(row)}"
            )
        force = _parse_float(path, line_no, "force", row[0])
        deflection = _parse_float(path, line_no, "deflection", row[1])
        try:
            samples.append(StaticDeflectionSample(force=force, deflection=deflection))
        except DomainError as exc:
            raise ConfigurationError(f"{path}:{line_no}: {exc}") from None
    if not samples:
        raise DomainError(f"{path}: no data rows")
    return samples


def write_trajectory_csv(path: Path, traj: Trajectory,
                         filtered: np.ndarray) -> None:
    rows = (
        (fmt(t), fmt(x), fmt(v), fmt(a), fmt(af))
        for t, x, v, a, af in zip(traj.time, traj.compression, traj.velocity,
                                  traj.acceleration, filtered)
    )
    atomic_write_text(path, _render_csv(TRAJECTORY_COLUMNS, rows))


def write_energy_csv(path: Path,
                     curve: list[tuple[float, EnergyBreakdown]]) -> None:
    rows = (
        (fmt(h), fmt(eb.spring), fmt(eb.damper), fmt(eb.collision),
         fmt(eb.frac_spring), fmt(eb.frac_damper), fmt(eb.frac_collision))
        for h, eb in curve
    )
    atomic_write_text(path, _render_csv(ENERGY_COLUMNS, rows))
