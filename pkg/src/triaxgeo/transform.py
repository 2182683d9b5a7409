"""Cartesian to geodetic conversion on a triaxial ellipsoid.

Two direct methods, both reducing the footpoint problem to the unique
positive root of a polynomial:

* algorithm 1 solves for the normal-line parameter t (``A(t)`` outside,
  ``Abar(k)`` inside, ``DeltaBar(k)`` in the equatorial plane);
* algorithm 2 solves for the footpoint z-coordinate (``B(z)``), or its
  y-coordinate (``G1(y)``) in the equatorial plane.

Points are reflected into the first octant, solved there and reflected
back. :func:`invert` is the vectorised entry point; the ``cartesian_to_*``
functions handle one point and return richer results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .ellipsoid import (
    SURFACE_TOL,
    CartesianPoint,
    GeodeticCoord,
    TriaxialEllipsoid,
    ellipsoid_residual,
    normal_angles,
)
from .polynomials import (
    BarShell,
    PolyKind,
    Shell,
    build_A,
    build_Abar,
    build_B,
    build_DeltaBar,
    build_G1,
    classify_region,
)
from .rootfinding import default_bracket, unique_positive_root

# |coord| <= ZERO_REL * max(a_x, |p|) selects the coordinate-is-zero branches
ZERO_REL = 1e-14


class OriginError(ValueError):
    """The centre of the ellipsoid has no geodetic coordinates."""


@dataclass(frozen=True)
class FootpointResult:
    """Footpoint of a point together with how it was obtained.

    ``parameter`` is the normal-line parameter t for algorithm 1 and the
    solved footpoint coordinate (z, or y in the equatorial plane) for
    algorithm 2.
    """

    footpoint: CartesianPoint
    parameter: float
    region: Union[Shell, BarShell]
    h: float


class Solution(NamedTuple):
    """Array results of :func:`invert`; ``lam`` is 0 where ``lon_defined`` is False."""

    phi: np.ndarray
    lam: np.ndarray
    h: np.ndarray
    lon_defined: np.ndarray
    xe: np.ndarray
    ye: np.ndarray
    ze: np.ndarray
    parameter: np.ndarray


def octant_reduce(p: CartesianPoint):
    """``(|x|, |y|, |z|)`` and the sign triple (+1.0 / -1.0) that restores ``p``."""
    x, y, z = (float(v) for v in p)
    if x == 0 and y == 0 and z == 0:
        raise OriginError("the origin has no geodetic coordinates")
    signs = tuple(-1.0 if v < 0 else 1.0 for v in (x, y, z))
    return CartesianPoint(abs(x), abs(y), abs(z)), signs


def restore_octant(p: CartesianPoint, signs) -> CartesianPoint:
    return CartesianPoint(*(v * s for v, s in zip(p, signs)))


def _subset(X, Y, Z, mask):
    return CartesianPoint(X[mask], Y[mask], Z[mask])


def _root(kind, builder, e, pt):
    return unique_positive_root(builder(e, pt), default_bracket(kind, e, pt))


def _footpoint_I(e, X, Y, Z, f, thr):
    n = X.size
    xe, ye, ze = np.empty(n), np.empty(n), np.zeros(n)
    t = np.zeros(n)

    on = np.abs(f) <= SURFACE_TOL
    xe[on], ye[on], ze[on] = X[on], Y[on], Z[on]

    out = f > SURFACE_TOL
    if out.any():
        pt = _subset(X, Y, Z, out)
        tt = _root(PolyKind.A_T, build_A, e, pt)
        xe[out] = e.ax2 * pt.x / (tt + e.ax2)
        ye[out] = e.ay2 * pt.y / (tt + e.ay2)
        ze[out] = e.az2 * pt.z / (tt + e.az2)
        t[out] = tt

    inside = f < -SURFACE_TOL
    upper = inside & (Z > thr)
    if upper.any():
        pt = _subset(X, Y, Z, upper)
        k = _root(PolyKind.ABAR_K, build_Abar, e, pt)
        # t + a_x² = k + P etc.; avoids cancellation in k - a_z² + a_x²
        xe[upper] = e.ax2 * pt.x / (k + e.P)
        ye[upper] = e.ay2 * pt.y / (k + e.Q)
        ze[upper] = e.az2 * pt.z / k
        t[upper] = k - e.az2

    plane = inside & (Z <= thr)
    # X enters the plane quartic only through its k² coefficient, so any
    # X > 0 is safe; snapping small X to the axis would move the footpoint
    both = plane & (X > 0) & (Y > thr)
    if both.any():
        pt = _subset(X, Y, Z, both)
        k = _root(PolyKind.DELTABAR_K, build_DeltaBar, e, pt)
        xe[both] = e.ax2 * pt.x / (k + e.R)
        ye[both] = e.ay2 * pt.y / k
        t[both] = k - e.ay2

    on_y = plane & (X == 0)
    xe[on_y], ye[on_y] = 0.0, e.a_y
    t[on_y] = e.a_y * (Y[on_y] - e.a_y)

    on_x = plane & (X > 0) & (Y <= thr)
    xe[on_x], ye[on_x] = e.a_x, 0.0
    t[on_x] = e.a_x * (X[on_x] - e.a_x)
    return xe, ye, ze, t


def _footpoint_II(e, X, Y, Z, f, thr):
    n = X.size
    xe, ye, ze = np.empty(n), np.empty(n), np.zeros(n)
    param = np.zeros(n)

    upper = Z > thr
    if upper.any():
        pt = _subset(X, Y, Z, upper)
        z = _root(PolyKind.B_Z, build_B, e, pt)
        xe[upper] = e.ax2 * pt.x * z / (e.P * z + e.az2 * pt.z)
        ye[upper] = e.ay2 * pt.y * z / (e.Q * z + e.az2 * pt.z)
        ze[upper] = z
        param[upper] = z

    plane = ~upper & (Y > thr)
    if plane.any():
        pt = _subset(X, Y, Z, plane)
        y = _root(PolyKind.G1_Y, build_G1, e, pt)
        xe[plane] = e.ax2 * pt.x * y / (e.R * y + e.ay2 * pt.y)
        ye[plane] = y
        param[plane] = y

    on_x = ~upper & (Y <= thr)
    xe[on_x], ye[on_x] = e.a_x, 0.0
    return xe, ye, ze, param


_SOLVERS = {1: _footpoint_I, 2: _footpoint_II}


def _algorithm_id(algorithm) -> int:
    key = {1: 1, 2: 2, "1": 1, "2": 2, "I": 1, "II": 2}.get(algorithm)
    if key is None:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected 1 or 2")
    return key


def invert(e: TriaxialEllipsoid, x, y, z, algorithm=2) -> Solution:
    """Geodetic coordinates and footpoints for arrays of Cartesian points.

    Raises:
        OriginError: if any point is exactly the origin.
    """
    solver = _SOLVERS[_algorithm_id(algorithm)]
    x, y, z = np.broadcast_arrays(
        *(np.atleast_1d(np.asarray(v, dtype=float)) for v in (x, y, z))
    )
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y)) and np.all(np.isfinite(z))):
        raise ValueError("coordinates must be finite")
    if np.any((x == 0) & (y == 0) & (z == 0)):
        raise OriginError("the origin has no geodetic coordinates")
    shape = x.shape
    x, y, z = x.ravel(), y.ravel(), z.ravel()

    X, Y, Z = np.abs(x), np.abs(y), np.abs(z)
    f = ellipsoid_residual(e, (X, Y, Z))
    thr = ZERO_REL * np.maximum(e.a_x, np.sqrt(X * X + Y * Y + Z * Z))
    xe, ye, ze, param = solver(e, X, Y, Z, f, thr)

    h = np.sqrt((X - xe) ** 2 + (Y - ye) ** 2 + (Z - ze) ** 2)
    h = np.where(f > SURFACE_TOL, h, np.where(f < -SURFACE_TOL, -h, 0.0))

    xe = np.copysign(xe, np.where(x < 0, -1.0, 1.0))
    ye = np.copysign(ye, np.where(y < 0, -1.0, 1.0))
    ze = np.copysign(ze, np.where(z < 0, -1.0, 1.0))
    phi, lam, defined = normal_angles(e, xe, ye, ze)
    return Solution(
        *(np.reshape(a, shape) for a in (phi, lam, h, defined, xe, ye, ze, param))
    )


def _single(e, p, algorithm):
    x, y, z = (float(v) for v in p)
    if x == 0 and y == 0 and z == 0:
        raise OriginError("the origin has no geodetic coordinates")
    s = invert(e, x, y, z, algorithm)
    h = float(s.h[0])
    lam = float(s.lam[0]) if s.lon_defined[0] else None
    fp = CartesianPoint(float(s.xe[0]), float(s.ye[0]), float(s.ze[0]))
    result = FootpointResult(fp, float(s.parameter[0]), classify_region(e, (x, y, z)), h)
    return GeodeticCoord(float(s.phi[0]), lam, h), result


def cartesian_to_geodetic_I(e: TriaxialEllipsoid, p: CartesianPoint):
    """Geodetic coordinates of ``p`` via the normal-line parameter (algorithm 1).

    Returns ``(GeodeticCoord, FootpointResult)``.
    """
    return _single(e, p, 1)


def cartesian_to_geodetic_II(e: TriaxialEllipsoid, p: CartesianPoint):
    """Geodetic coordinates of ``p`` via the footpoint z-coordinate (algorithm 2).

    Returns ``(GeodeticCoord, FootpointResult)``.
    """
    return _single(e, p, 2)


def cartesian_to_geodetic(e: TriaxialEllipsoid, p: CartesianPoint, algorithm=2) -> GeodeticCoord:
    return _single(e, p, _algorithm_id(algorithm))[0]
