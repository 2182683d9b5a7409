"""Triaxial reference ellipsoid, forward transform and footpoint angles.

Lengths are kilometres and angles radians throughout. Functions accept
plain floats or numpy arrays in the coordinate fields; arrays broadcast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

# |f(p)| at or below this counts as "on the ellipsoid"
SURFACE_TOL = 1e-12

_HALF_PI = math.pi / 2


class NotOnSurfaceError(ValueError):
    """Raised when a supposed footpoint does not satisfy the ellipsoid equation."""


class CartesianPoint(NamedTuple):
    x: float
    y: float
    z: float


class GeodeticCoord(NamedTuple):
    """Latitude, longitude and signed ellipsoidal height.

    ``lam`` is ``None`` when the longitude is undefined (point on the polar
    axis). Heights are negative inside the ellipsoid.
    """

    phi: float
    lam: Optional[float]
    h: float


@dataclass(frozen=True)
class TriaxialEllipsoid:
    """Ellipsoid x²/a_x² + y²/a_y² + z²/a_z² = 1 with a_x > a_y > a_z > 0."""

    a_x: float
    a_y: float
    a_z: float
    ax2: float = field(init=False, repr=False)
    ay2: float = field(init=False, repr=False)
    az2: float = field(init=False, repr=False)
    P: float = field(init=False, repr=False)
    Q: float = field(init=False, repr=False)
    R: float = field(init=False, repr=False)

    def __post_init__(self):
        a_x, a_y, a_z = float(self.a_x), float(self.a_y), float(self.a_z)
        if not all(math.isfinite(v) for v in (a_x, a_y, a_z)):
            raise ValueError("semiaxes must be finite")
        if not a_x > a_y > a_z > 0:
            raise ValueError(
                f"semiaxes must satisfy a_x > a_y > a_z > 0, got ({a_x}, {a_y}, {a_z})"
            )
        setattr_ = object.__setattr__
        setattr_(self, "a_x", a_x)
        setattr_(self, "a_y", a_y)
        setattr_(self, "a_z", a_z)
        setattr_(self, "ax2", a_x * a_x)
        setattr_(self, "ay2", a_y * a_y)
        setattr_(self, "az2", a_z * a_z)
        # factored differences of squares: a_x and a_y nearly coincide for some bodies
        setattr_(self, "P", (a_x - a_z) * (a_x + a_z))
        setattr_(self, "Q", (a_y - a_z) * (a_y + a_z))
        setattr_(self, "R", (a_x - a_y) * (a_x + a_y))

    @property
    def e_x2(self) -> float:
        return self.P / self.ax2

    @property
    def e_y2(self) -> float:
        # not used by any transform; kept for completeness
        return self.Q / self.ay2

    @property
    def e_e2(self) -> float:
        return self.R / self.ax2

    @property
    def semiaxes(self) -> tuple[float, float, float]:
        return (self.a_x, self.a_y, self.a_z)


def _cos_sin(angle):
    """cos and sin that are exact at the float images of 0, ±π/2 and π."""
    c = np.cos(angle)
    s = np.sin(angle)
    a = np.abs(angle)
    c = np.where(a == _HALF_PI, 0.0, c)
    s = np.where(a == math.pi, 0.0, s)
    return c, s


def _scalarize(v):
    return float(v) if np.ndim(v) == 0 else v


def geodetic_to_cartesian(e: TriaxialEllipsoid, g: GeodeticCoord) -> CartesianPoint:
    """Cartesian coordinates of the point at geodetic ``(phi, lam, h)``.

    The prime-vertical radius is evaluated as ``a_x² / sqrt(W)`` with
    ``W = a_x² cos²φ cos²λ + a_y² cos²φ sin²λ + a_z² sin²φ``, which equals
    ``a_x / sqrt(1 - e_x² sin²φ - e_e² cos²φ sin²λ)`` but is a sum of
    positive terms.
    """
    phi = np.asarray(g.phi, dtype=float)
    lam = np.asarray(0.0 if g.lam is None else g.lam, dtype=float)
    h = np.asarray(g.h, dtype=float)
    if np.any(~np.isfinite(phi)) or np.any(np.abs(phi) > _HALF_PI):
        raise ValueError("latitude must lie in [-pi/2, pi/2]")
    if np.any(~np.isfinite(lam)) or np.any(lam <= -math.pi) or np.any(lam > math.pi):
        raise ValueError("longitude must lie in (-pi, pi]")
    if np.any(~np.isfinite(h)):
        raise ValueError("height must be finite")

    cphi, sphi = _cos_sin(phi)
    clam, slam = _cos_sin(lam)
    w = np.sqrt(e.ax2 * (cphi * clam) ** 2 + e.ay2 * (cphi * slam) ** 2 + e.az2 * sphi**2)
    x = (e.ax2 / w + h) * cphi * clam
    y = (e.ay2 / w + h) * cphi * slam
    z = (e.az2 / w + h) * sphi
    return CartesianPoint(_scalarize(x), _scalarize(y), _scalarize(z))


def ellipsoid_residual(e: TriaxialEllipsoid, p: CartesianPoint):
    """f(p) = x²/a_x² + y²/a_y² + z²/a_z² - 1; negative inside, positive outside."""
    x, y, z = p
    return (x / e.a_x) ** 2 + (y / e.a_y) ** 2 + (z / e.a_z) ** 2 - 1.0


def normal_angles(e: TriaxialEllipsoid, xe, ye, ze):
    """Latitude and longitude of the surface normal at footpoint(s).

    Vectorised core of :func:`footpoint_to_geodetic_angles`; no surface
    check. Returns ``(phi, lam, defined)`` where ``defined`` is False where
    the longitude is undefined (footpoint on the polar axis); ``lam`` is 0
    there.
    """
    nx = np.asarray(xe, dtype=float) / e.ax2
    ny = np.asarray(ye, dtype=float) / e.ay2
    nz = np.asarray(ze, dtype=float) / e.az2
    defined = (nx != 0) | (ny != 0)
    # atan2 covers every quadrant branch, giving lam in (-pi, pi]
    lam = np.where(defined, np.arctan2(ny, nx), 0.0)
    # a signed zero y with x < 0 gives -pi
    lam = np.where(lam == -math.pi, math.pi, lam)
    phi = np.arctan2(nz, np.hypot(nx, ny))
    return phi, lam, defined


def footpoint_to_geodetic_angles(e: TriaxialEllipsoid, fp: CartesianPoint):
    """``(phi, lam)`` of a point on the surface; ``lam`` is None on the polar axis.

    Raises:
        NotOnSurfaceError: if ``|f(fp)|`` exceeds :data:`SURFACE_TOL`.
    """
    xe, ye, ze = (float(v) for v in fp)
    r = ellipsoid_residual(e, CartesianPoint(xe, ye, ze))
    if not abs(r) <= SURFACE_TOL:
        raise NotOnSurfaceError(f"point {fp} is not on the ellipsoid (f = {r:.3e})")
    phi, lam, defined = normal_angles(e, xe, ye, ze)
    return float(phi), (float(lam) if defined else None)
