"""Round-trip accuracy and timing sweep over a geodetic grid.

Grid points are ``(phi_i, lam_j, h_k) = (i*step, j*step, k*a_z)`` in the
first octant with ``step = pi/720``. Each point is mapped to Cartesian
coordinates and back, and the maximum absolute errors are collected.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .bodies import BodyRecord
from .ellipsoid import GeodeticCoord, geodetic_to_cartesian
from .rootfinding import RootFindingError
from .transform import _algorithm_id, invert

ANGLE_STEP = math.pi / 720
HEIGHT_FACTORS = tuple(
    Fraction(n, d) for n, d in ((0, 1), (1, 50), (-1, 50), (1, 25), (-1, 25),
                                (1, 15), (-1, 15), (1, 10), (-1, 10))
)

CSV_FIELDS = (
    "body",
    "algorithm",
    "log10_err_lambda",
    "log10_err_phi",
    "log10_err_h",
    "time_s",
    "points",
)


class BenchmarkError(RuntimeError):
    pass


@dataclass(frozen=True)
class GridSpec:
    lat_indices: tuple[int, ...]
    lon_indices: tuple[int, ...]
    height_factors: tuple[Fraction, ...] = HEIGHT_FACTORS
    angle_step: float = ANGLE_STEP

    def __post_init__(self):
        for label, idx in (("lat", self.lat_indices), ("lon", self.lon_indices)):
            if any(not 1 <= i <= 359 for i in idx):
                raise ValueError(f"{label} indices must lie in 1..359 (axes and poles excluded)")

    @property
    def point_count(self) -> int:
        return len(self.lat_indices) * len(self.lon_indices) * len(self.height_factors)

    def points(self, a_z: float):
        """Flattened ``(phi, lam, h, i, j, k)`` arrays in (i, j, k) row-major order."""
        i, j, k = np.meshgrid(
            np.asarray(self.lat_indices),
            np.asarray(self.lon_indices),
            np.arange(len(self.height_factors)),
            indexing="ij",
        )
        i, j, k = i.ravel(), j.ravel(), k.ravel()
        factors = np.array([float(f) for f in self.height_factors])
        return i * self.angle_step, j * self.angle_step, factors[k] * a_z, i, j, k


def full_grid() -> GridSpec:
    full = tuple(range(1, 360))
    return GridSpec(full, full)


def desk_grid(stride: int = 10) -> GridSpec:
    idx = tuple(range(stride, 360, stride))
    return GridSpec(idx, idx)


@dataclass(frozen=True)
class ErrorReport:
    body: str
    algorithm: str
    max_abs_err_lambda: float
    max_abs_err_phi: float
    max_abs_err_h: float
    mean_cpu_time: float  # best sweep wall time over the repeats, seconds
    point_count: int

    @property
    def log10_err_lambda(self) -> float:
        return _log10(self.max_abs_err_lambda)

    @property
    def log10_err_phi(self) -> float:
        return _log10(self.max_abs_err_phi)

    @property
    def log10_err_h(self) -> float:
        return _log10(self.max_abs_err_h)


def _log10(v):
    return math.log10(v) if v > 0 else -math.inf


def _algo_name(algo) -> str:
    return "I" if _algorithm_id(algo) == 1 else "II"


def _sweep(body: BodyRecord, grid: GridSpec, algo):
    e = body.ellipsoid
    phi, lam, h, i, j, k = grid.points(e.a_z)
    x, y, z = geodetic_to_cartesian(e, GeodeticCoord(phi, lam, h))
    try:
        s = invert(e, x, y, z, algo)
    except (RootFindingError, ValueError) as exc:
        _raise_with_index(body, algo, x, y, z, i, j, k, exc)
    # grid excludes the poles, so longitude is always defined
    assert np.all(s.lon_defined)
    return (
        float(np.max(np.abs(s.lam - lam), initial=0.0)),
        float(np.max(np.abs(s.phi - phi), initial=0.0)),
        float(np.max(np.abs(s.h - h), initial=0.0)),
    )


def _raise_with_index(body, algo, x, y, z, i, j, k, exc):
    for n in range(x.size):
        try:
            invert(body.ellipsoid, x[n], y[n], z[n], algo)
        except (RootFindingError, ValueError) as point_exc:
            raise BenchmarkError(
                f"{body.name}, algorithm {_algo_name(algo)}: failure at (i={i[n]}, j={j[n]}, "
                f"k={k[n]}): {point_exc}"
            ) from point_exc
    raise BenchmarkError(f"{body.name}, algorithm {_algo_name(algo)}: {exc}") from exc


def sweep_errors(body: BodyRecord, grid: GridSpec, algo=2, workers: int = 1):
    """Max |dlam|, |dphi|, |dh| over the grid, optionally split by latitude across threads."""
    if workers <= 1 or len(grid.lat_indices) < 2:
        return _sweep(body, grid, algo)
    chunks = np.array_split(np.asarray(grid.lat_indices), workers)
    parts = [
        GridSpec(tuple(int(i) for i in c), grid.lon_indices, grid.height_factors, grid.angle_step)
        for c in chunks
        if c.size
    ]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda g: _sweep(body, g, algo), parts))
    return tuple(max(r[n] for r in results) for n in range(3))


def run_benchmark(body: BodyRecord, grid: GridSpec, algo=2, repeat: int = 3) -> ErrorReport:
    """Timed serial sweeps; the reported time is the fastest of ``repeat`` runs.

    Each timed run covers the forward transform, the inversion and the
    max-error reduction.
    """
    if repeat < 1:
        raise ValueError("repeat must be at least 1")
    best = math.inf
    errors = None
    for _ in range(repeat):
        start = time.perf_counter()
        errors = _sweep(body, grid, algo)
        best = min(best, time.perf_counter() - start)
    return ErrorReport(body.name, _algo_name(algo), *errors, best, grid.point_count)


def _row(r: ErrorReport):
    return [
        r.body,
        r.algorithm,
        repr(r.log10_err_lambda),
        repr(r.log10_err_phi),
        repr(r.log10_err_h),
        repr(r.mean_cpu_time),
        str(r.point_count),
    ]


def report_csv(reports: Iterable[ErrorReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in reports:
        writer.writerow(_row(r))
    return buf.getvalue()


def report_table(reports: Sequence[ErrorReport]) -> str:
    header = ("Body", "Algo", "log10 err lambda", "log10 err phi", "log10 err h", "Time (s)", "Points")
    rows = [
        (
            r.body,
            r.algorithm,
            f"{r.log10_err_lambda:.3f}",
            f"{r.log10_err_phi:.3f}",
            f"{r.log10_err_h:.3f}",
            f"{r.mean_cpu_time:.6f}",
            str(r.point_count),
        )
        for r in reports
    ]
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    lines = ["  ".join(c.ljust(w) if n < 2 else c.rjust(w) for n, (c, w) in enumerate(zip(row, widths)))
             for row in (header, *rows)]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def emit_report(reports: Sequence[ErrorReport], format: str = "csv", out=None) -> str:
    """Render reports as ``"csv"`` or an aligned ``"table"``; write to ``out`` (path or stream) if given."""
    if format == "csv":
        text = report_csv(reports)
    elif format == "table":
        text = report_table(reports)
    else:
        raise ValueError(f"unknown report format {format!r}")
    if out is not None:
        if hasattr(out, "write"):
            out.write(text)
        else:
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    return text


def read_report_csv(text: str) -> list[dict]:
    """Parse a report CSV back into dicts with numeric fields converted."""
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(
            {
                "body": rec["body"],
                "algorithm": rec["algorithm"],
                "log10_err_lambda": float(rec["log10_err_lambda"]),
                "log10_err_phi": float(rec["log10_err_phi"]),
                "log10_err_h": float(rec["log10_err_h"]),
                "time_s": float(rec["time_s"]),
                "points": int(rec["points"]),
            }
        )
    return rows
