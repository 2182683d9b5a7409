"""Coefficient builders for the footpoint polynomials and sign-pattern tools.

Every builder evaluates the coefficients in factored form from the squared
semiaxes, the axis-gap products P, Q, R and the squared coordinates. The
coordinate fields of the point may be numpy arrays, in which case the
returned coefficient array has shape ``(..., degree + 1)``.

Polynomial variables:

* ``A(t)``   sextic in the normal-line parameter t (point outside)
* ``Abar(k)`` ``A(k - a_z²)``, used for points inside with z > 0
* ``Delta(t)``, ``DeltaBar(k) = Delta(k - a_y²)`` quartics for z = 0
* ``B(z)``   sextic whose positive root is the footpoint z-coordinate
* ``G1(y)``  quartic whose positive root is the footpoint y-coordinate (z = 0)
* ``alpha(t)`` quartic for a biaxial ellipsoid (a_x = a_y)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .ellipsoid import CartesianPoint, TriaxialEllipsoid


class PolyKind(enum.Enum):
    A_T = "A_t"
    ABAR_K = "Abar_k"
    DELTA_T = "Delta_t"
    DELTABAR_K = "DeltaBar_k"
    B_Z = "B_z"
    G1_Y = "G1_y"
    ALPHA_T = "AlphaBiaxial_t"


_DEGREE = {
    PolyKind.A_T: 6,
    PolyKind.ABAR_K: 6,
    PolyKind.B_Z: 6,
    PolyKind.DELTA_T: 4,
    PolyKind.DELTABAR_K: 4,
    PolyKind.G1_Y: 4,
    PolyKind.ALPHA_T: 4,
}


@dataclass(frozen=True)
class PolyCoeffs:
    """Dense real coefficients, degree-descending along the last axis."""

    kind: PolyKind
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape[-1] != _DEGREE[self.kind] + 1:
            raise ValueError(
                f"{self.kind.value} needs {_DEGREE[self.kind] + 1} coefficients, got {c.shape[-1]}"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        if np.any(c[..., 0] <= 0):
            raise ValueError("leading coefficient must be positive")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return _DEGREE[self.kind]

    def __call__(self, x):
        return horner(self.coeffs, x)


def horner(coeffs, x):
    """Evaluate degree-descending ``coeffs`` at ``x`` (broadcast over leading axes)."""
    c = np.asarray(coeffs, dtype=float)
    p = c[..., 0] * np.ones_like(x, dtype=float)
    for i in range(1, c.shape[-1]):
        p = p * x + c[..., i]
    return p


def horner_with_derivative(coeffs, x):
    """Value and first derivative by the two-row Horner scheme."""
    c = np.asarray(coeffs, dtype=float)
    p = c[..., 0] * np.ones_like(x, dtype=float)
    dp = np.zeros_like(p)
    for i in range(1, c.shape[-1]):
        dp = dp * x + p
        p = p * x + c[..., i]
    return p, dp


def _pack(kind, terms):
    arrays = np.broadcast_arrays(*[np.asarray(t, dtype=float) for t in terms])
    return PolyCoeffs(kind, np.stack(arrays, axis=-1))


def _squares(p):
    x, y, z = (np.asarray(v, dtype=float) for v in p)
    return x * x, y * y, z * z


def build_A(e: TriaxialEllipsoid, p: CartesianPoint) -> PolyCoeffs:
    """Monic sextic ``A(t)`` whose unique positive root locates the footpoint of an outside point."""
    ax2, ay2, az2 = e.ax2, e.ay2, e.az2
    X2, Y2, Z2 = _squares(p)
    s1 = ax2 + ay2 + az2
    s2 = ax2 * ay2 + ax2 * az2 + ay2 * az2
    s3 = ax2 * ay2 * az2

    a5 = 2.0 * s1
    a4 = -ax2 * X2 - ay2 * Y2 - az2 * Z2 + s1 * s1 + 2.0 * s2
    a3 = -2.0 * (
        ax2 * (ay2 + az2) * X2
        + ay2 * (ax2 + az2) * Y2
        + az2 * (ax2 + ay2) * Z2
        - s1 * s2
        - s3
    )
    a2 = (
        -ax2 * (ay2 * ay2 + 4.0 * ay2 * az2 + az2 * az2) * X2
        - ay2 * (ax2 * ax2 + 4.0 * ax2 * az2 + az2 * az2) * Y2
        - az2 * (ax2 * ax2 + 4.0 * ax2 * ay2 + ay2 * ay2) * Z2
        + s2 * s2
        + 2.0 * s3 * s1
    )
    a1 = -2.0 * s3 * ((ay2 + az2) * X2 + (ax2 + az2) * Y2 + (ax2 + ay2) * Z2 - s2)
    a0 = -s3 * (ax2 * ay2 * Z2 + ax2 * az2 * Y2 + ay2 * az2 * X2 - s3)
    return _pack(PolyKind.A_T, [1.0, a5, a4, a3, a2, a1, a0])


def build_Abar(e: TriaxialEllipsoid, p: CartesianPoint) -> PolyCoeffs:
    """``Abar(k) = A(k - a_z²)`` written in P and Q; one positive root when z > 0."""
    P, Q = e.P, e.Q
    X2, Y2, Z2 = _squares(p)
    ax2, ay2, az2 = e.ax2, e.ay2, e.az2
    pq4 = P * P + Q * Q + 4.0 * P * Q

    b5 = 2.0 * (P + Q)
    b4 = -ax2 * X2 - ay2 * Y2 - az2 * Z2 + pq4
    b3 = 2.0 * (-ax2 * Q * X2 - ay2 * P * Y2 - az2 * (P + Q) * Z2 + P * Q * (P + Q))
    b2 = -ax2 * Q * Q * X2 - ay2 * P * P * Y2 - az2 * pq4 * Z2 + P * P * Q * Q
    b1 = -2.0 * az2 * P * Q * (P + Q) * Z2
    b0 = -az2 * P * P * Q * Q * Z2
    return _pack(PolyKind.ABAR_K, [1.0, b5, b4, b3, b2, b1, b0])


def build_Delta(e: TriaxialEllipsoid, p: CartesianPoint) -> PolyCoeffs:
    """Quartic ``Delta(t)`` for the ellipse z = 0; the z-coordinate of ``p`` is ignored."""
    ax2, ay2 = e.ax2, e.ay2
    X2, Y2, _ = _squares(p)
    d3 = 2.0 * (ax2 + ay2)
    d2 = ax2 * ax2 + 4.0 * ax2 * ay2 + ay2 * ay2 - ax2 * X2 - ay2 * Y2
    d1 = 2.0 * ax2 * ay2 * (ax2 + ay2 - X2 - Y2)
    d0 = ax2 * ay2 * (ax2 * ay2 - ax2 * Y2 - ay2 * X2)
    return _pack(PolyKind.DELTA_T, [1.0, d3, d2, d1, d0])


def build_DeltaBar(e: TriaxialEllipsoid, p: CartesianPoint) -> PolyCoeffs:
    """``DeltaBar(k) = Delta(k - a_y²)``; one positive root for interior points of the ellipse z = 0."""
    R, ay2 = e.R, e.ay2
    X2, Y2, _ = _squares(p)
    return _pack(
        PolyKind.DELTABAR_K,
        [
            1.0,
            2.0 * R,
            R * R - e.ax2 * X2 - ay2 * Y2,
            -2.0 * ay2 * Y2 * R,
            -ay2 * Y2 * R * R,
        ],
    )


def build_B(e: TriaxialEllipsoid, p: CartesianPoint) -> PolyCoeffs:
    """Sextic ``B(z)`` whose unique positive root is the footpoint z-coordinate (z > 0)."""
    P, Q = e.P, e.Q
    ax2, ay2, az2 = e.ax2, e.ay2, e.az2
    Z = np.asarray(p[2], dtype=float)
    X2, Y2, Z2 = _squares(p)
    pq4 = P * P + Q * Q + 4.0 * P * Q
    az4 = az2 * az2
    az6 = az4 * az2
    az8 = az4 * az4

    b6 = P * P * Q * Q
    b5 = 2.0 * az2 * Z * P * Q * (P + Q)
    b4 = az2 * (ax2 * Q * Q * X2 + ay2 * P * P * Y2 + az2 * pq4 * Z2 - P * P * Q * Q)
    b3 = 2.0 * az4 * Z * (ax2 * Q * X2 + ay2 * P * Y2 + az2 * (P + Q) * Z2 - P * Q * (P + Q))
    b2 = az6 * Z2 * (ax2 * X2 + ay2 * Y2 + az2 * Z2 - pq4)
    b1 = -2.0 * az8 * Z2 * Z * (P + Q)
    b0 = -az8 * az2 * Z2 * Z2
    return _pack(PolyKind.B_Z, [b6, b5, b4, b3, b2, b1, b0])


def build_G1(e: TriaxialEllipsoid, p: CartesianPoint) -> PolyCoeffs:
    """Quartic ``G1(y)`` whose unique positive root is the footpoint y-coordinate when z = 0."""
    R, ax2, ay2 = e.R, e.ax2, e.ay2
    Y = np.asarray(p[1], dtype=float)
    X2, Y2, _ = _squares(p)
    return _pack(
        PolyKind.G1_Y,
        [
            R * R,
            2.0 * ay2 * R * Y,
            -ay2 * (R * R - ax2 * X2 - ay2 * Y2),
            -2.0 * ay2 * ay2 * R * Y,
            -ay2 * ay2 * ay2 * Y2,
        ],
    )


def build_alpha_biaxial(a_x: float, a_z: float, p: CartesianPoint) -> PolyCoeffs:
    """Monic quartic ``alpha(t)`` replacing ``A(t)`` when a_x = a_y."""
    ax2 = float(a_x) ** 2
    az2 = float(a_z) ** 2
    X2, Y2, Z2 = _squares(p)
    r2 = X2 + Y2
    return _pack(
        PolyKind.ALPHA_T,
        [
            1.0,
            2.0 * (ax2 + az2),
            -ax2 * r2 - az2 * Z2 + (ax2 + az2) ** 2 + 2.0 * ax2 * az2,
            -2.0 * ax2 * az2 * (r2 + Z2 - ax2 - az2),
            -ax2 * az2 * (az2 * r2 + ax2 * Z2 - ax2 * az2),
        ],
    )


# -- sign patterns ---------------------------------------------------------


class SignPattern(NamedTuple):
    signs: tuple[str, ...]
    changes: int

    def __str__(self):
        return "[" + ",".join(self.signs) + "]"


def sign_pattern(c: PolyCoeffs | Sequence[float]) -> SignPattern:
    """Signs of a single coefficient vector and its number of sign changes.

    A coefficient is ``"0"`` only when it is exactly zero; zeros are skipped
    when counting changes, as in Descartes' rule.
    """
    values = np.asarray(c.coeffs if isinstance(c, PolyCoeffs) else c, dtype=float)
    if values.ndim != 1:
        raise ValueError("sign_pattern takes a single coefficient vector")
    signs = tuple("+" if v > 0 else "-" if v < 0 else "0" for v in values)
    nonzero = [s for s in signs if s != "0"]
    changes = sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)
    return SignPattern(signs, changes)


# -- nested shells -----------------------------------------------------------


class Shell(enum.Enum):
    """Position of a point among the reference ellipsoid and e1 ⊂ e2 ⊂ e3 ⊂ e4."""

    INSIDE_REF = "inside_ref"
    ON_REF = "on_ref"
    BETWEEN_REF_E1 = "between_ref_e1"
    ON_E1 = "on_e1"
    BETWEEN_E1_E2 = "between_e1_e2"
    ON_E2 = "on_e2"
    BETWEEN_E2_E3 = "between_e2_e3"
    ON_E3 = "on_e3"
    BETWEEN_E3_E4 = "between_e3_e4"
    ON_E4 = "on_e4"
    OUTSIDE_E4 = "outside_e4"


class BarShell(enum.Enum):
    """Position of a point among ebar2 ⊂ ebar3 ⊂ ebar4."""

    INSIDE_E2BAR = "inside_e2bar"
    ON_E2BAR = "on_e2bar"
    BETWEEN_E2BAR_E3BAR = "between_e2bar_e3bar"
    ON_E3BAR = "on_e3bar"
    BETWEEN_E3BAR_E4BAR = "between_e3bar_e4bar"
    ON_E4BAR = "on_e4bar"
    OUTSIDE_E4BAR = "outside_e4bar"


# Expected signs of [A5, ..., A0] per shell (leading 1 omitted).
A_PATTERNS = {
    Shell.INSIDE_REF: tuple("++++++"),
    Shell.ON_REF: tuple("+++++0"),
    Shell.BETWEEN_REF_E1: tuple("+++++-"),
    Shell.ON_E1: tuple("++++0-"),
    Shell.BETWEEN_E1_E2: tuple("++++--"),
    Shell.ON_E2: tuple("+++0--"),
    Shell.BETWEEN_E2_E3: tuple("+++---"),
    Shell.ON_E3: tuple("++0---"),
    Shell.BETWEEN_E3_E4: tuple("++----"),
    Shell.ON_E4: tuple("+0----"),
    Shell.OUTSIDE_E4: tuple("+-----"),
}

# Expected signs of [Abar5, ..., Abar0] for z > 0.
ABAR_PATTERNS = {
    BarShell.INSIDE_E2BAR: tuple("++++--"),
    BarShell.ON_E2BAR: tuple("+++0--"),
    BarShell.BETWEEN_E2BAR_E3BAR: tuple("+++---"),
    BarShell.ON_E3BAR: tuple("++0---"),
    BarShell.BETWEEN_E3BAR_E4BAR: tuple("++----"),
    BarShell.ON_E4BAR: tuple("+0----"),
    BarShell.OUTSIDE_E4BAR: tuple("+-----"),
}

# Expected signs of [B6, ..., B0] for z > 0.
B_PATTERNS = {
    BarShell.INSIDE_E2BAR: tuple("++-----"),
    BarShell.ON_E2BAR: tuple("++0----"),
    BarShell.BETWEEN_E2BAR_E3BAR: tuple("+++----"),
    BarShell.ON_E3BAR: tuple("+++0---"),
    BarShell.BETWEEN_E3BAR_E4BAR: tuple("++++---"),
    BarShell.ON_E4BAR: tuple("++++0--"),
    BarShell.OUTSIDE_E4BAR: tuple("+++++--"),
}


def shell_weights(e: TriaxialEllipsoid) -> dict[str, tuple[float, float, float]]:
    """Weights (wx, wy, wz) with ``wx X² + wy Y² + wz Z² = 1`` for each auxiliary ellipsoid.

    Keys: ``ref``, ``e1`` .. ``e4``, ``e2bar`` .. ``e4bar``. The semiaxes are
    ``1/sqrt(w)``.
    """
    ax2, ay2, az2 = e.ax2, e.ay2, e.az2
    P, Q = e.P, e.Q
    s1 = ax2 + ay2 + az2
    s2 = ax2 * ay2 + ax2 * az2 + ay2 * az2
    s3 = ax2 * ay2 * az2
    d2 = s2 * s2 + 2.0 * s3 * s1
    d3 = s1 * s2 + s3
    d4 = s1 * s1 + 2.0 * s2
    pq4 = P * P + Q * Q + 4.0 * P * Q
    return {
        "ref": (1.0 / ax2, 1.0 / ay2, 1.0 / az2),
        "e1": ((ay2 + az2) / s2, (ax2 + az2) / s2, (ax2 + ay2) / s2),
        "e2": (
            ax2 * (ay2 * ay2 + 4.0 * ay2 * az2 + az2 * az2) / d2,
            ay2 * (ax2 * ax2 + 4.0 * ax2 * az2 + az2 * az2) / d2,
            az2 * (ax2 * ax2 + 4.0 * ax2 * ay2 + ay2 * ay2) / d2,
        ),
        "e3": (ax2 * (ay2 + az2) / d3, ay2 * (ax2 + az2) / d3, az2 * (ax2 + ay2) / d3),
        "e4": (ax2 / d4, ay2 / d4, az2 / d4),
        "e2bar": (ax2 / (P * P), ay2 / (Q * Q), az2 * pq4 / (P * P * Q * Q)),
        "e3bar": (ax2 / (P * (P + Q)), ay2 / (Q * (P + Q)), az2 / (P * Q)),
        "e4bar": (ax2 / pq4, ay2 / pq4, az2 / pq4),
    }


_A_FAMILY = ("ref", "e1", "e2", "e3", "e4")
_ABAR_FAMILY = ("e2bar", "e3bar", "e4bar")


def _locate(values, tol):
    # values[i] is the quadratic form of the i-th nested ellipsoid, innermost first
    for i, q in enumerate(values):
        if abs(q) <= tol:
            return 2 * i + 1
        if q < 0:
            return 2 * i
    return 2 * len(values)


def classify_region(
    e: TriaxialEllipsoid, p: CartesianPoint, family: str = "A", tol: float = 0.0
) -> Shell | BarShell:
    """Shell of the nested-ellipsoid family that contains ``p``.

    ``family`` is ``"A"`` (reference ellipsoid and e1..e4) or ``"Abar"``
    (ebar2..ebar4). Each ellipsoid's quadratic form ``wx X² + wy Y² + wz Z² - 1``
    is evaluated directly; ``|form| <= tol`` counts as on the boundary.
    """
    weights = shell_weights(e)
    if family == "A":
        members, classes = _A_FAMILY, list(Shell)
    elif family == "Abar":
        members, classes = _ABAR_FAMILY, list(BarShell)
    else:
        raise ValueError(f"unknown family {family!r}")
    x, y, z = (float(v) for v in p)
    values = []
    for name in members:
        wx, wy, wz = weights[name]
        values.append(wx * x * x + wy * y * y + wz * z * z - 1.0)
    return classes[_locate(values, tol)]
