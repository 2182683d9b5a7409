"""Unique positive root of the footpoint polynomials.

Safeguarded Newton iteration on a sign-change bracket: a Newton step is
taken when it stays strictly inside the current bracket and shrinks fast
enough, otherwise the bracket is bisected. Works on a single coefficient
vector or on a batch of shape ``(n, degree + 1)`` with per-row brackets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ellipsoid import CartesianPoint, TriaxialEllipsoid
from .polynomials import PolyCoeffs, PolyKind, horner, horner_with_derivative

MAX_ITER = 200
_EPS = np.finfo(float).eps


class RootFindingError(ArithmeticError):
    pass


class NoSignChangeError(RootFindingError):
    """The bracket endpoints have the same strict sign."""


class ConvergenceError(RootFindingError):
    """The iteration cap was reached before the stopping criterion."""


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("bracket endpoints must be finite")
        if not np.all(lo < hi):
            raise ValueError("bracket requires lo < hi")


def default_bracket(kind: PolyKind, e: TriaxialEllipsoid, p: CartesianPoint) -> Bracket:
    """Interval known to contain the positive root for ``kind`` at point ``p``.

    The upper end for ``A_T`` follows from the normal-line equation: at the
    root, ``(t + a_z²)² <= (a_x X)² + (a_y Y)² + (a_z Z)²``.
    """
    x, y, z = (np.asarray(v, dtype=float) for v in p)
    if kind is PolyKind.A_T:
        hi = _padded(np.sqrt((e.a_x * x) ** 2 + (e.a_y * y) ** 2 + (e.a_z * z) ** 2), e.az2)
        return Bracket(np.zeros_like(hi), hi)
    if kind is PolyKind.DELTA_T:
        hi = _padded(np.sqrt((e.a_x * x) ** 2 + (e.a_y * y) ** 2), e.ay2)
        return Bracket(np.zeros_like(hi), hi)
    if kind is PolyKind.ABAR_K:
        return _fixed(e.az2, x)
    if kind is PolyKind.DELTABAR_K:
        return _fixed(e.ay2, x)
    if kind is PolyKind.B_Z:
        return _fixed(e.a_z, x)
    if kind is PolyKind.G1_Y:
        return _fixed(e.a_y, x)
    raise ValueError(f"no default bracket for {kind}; use alpha_bracket for the biaxial quartic")


def alpha_bracket(a_x: float, a_z: float, p: CartesianPoint) -> Bracket:
    """Bracket for the biaxial quartic at an outside point."""
    x, y, z = (np.asarray(v, dtype=float) for v in p)
    hi = _padded(np.sqrt(a_x**2 * (x * x + y * y) + (a_z * z) ** 2), a_z**2)
    return Bracket(np.zeros_like(hi), hi)


def _padded(s, a2):
    # s - a2 loses digits when the root sits on the bound (points near an
    # axis); widen by the rounding error so the sign at hi stays reliable.
    # Harmless since there is exactly one positive root.
    return (s - a2) + 8.0 * _EPS * (s + a2)


def _fixed(hi, like):
    shape = np.shape(like)
    return Bracket(np.zeros(shape), np.full(shape, float(hi)))


def _horner_noise(coeffs, x):
    """A-priori bound on the rounding error of Horner evaluation at ``x``."""
    n = coeffs.shape[-1] - 1
    return 2.0 * n * _EPS * horner(np.abs(coeffs), np.abs(x))


def unique_positive_root(c: PolyCoeffs, b: Bracket, x0=None, max_iter: int = MAX_ITER):
    """Root of ``c`` inside ``b`` by safeguarded Newton.

    Stops when the Newton correction is below ``2 eps |x|`` or the bracket
    has shrunk to 4 ULP. ``x0`` optionally seeds the iteration; it is
    ignored where it falls outside the bracket.

    Returns a float for a single polynomial, an array for a batch.

    Raises:
        NoSignChangeError: if the polynomial has the same strict sign at both ends.
        ConvergenceError: if ``max_iter`` iterations do not suffice.
    """
    coeffs = np.atleast_2d(c.coeffs)
    scalar = c.coeffs.ndim == 1
    n = coeffs.shape[0]
    lo = np.broadcast_to(np.asarray(b.lo, dtype=float), (n,)).copy()
    hi = np.broadcast_to(np.asarray(b.hi, dtype=float), (n,)).copy()

    f_lo = horner(coeffs, lo)
    f_hi = horner(coeffs, hi)
    # an endpoint root (e.g. the pole for B on the polar axis) may evaluate to
    # a rounding-sized value of the wrong sign; snap it to zero
    f_lo = np.where(np.abs(f_lo) <= _horner_noise(coeffs, lo), 0.0, f_lo)
    f_hi = np.where(np.abs(f_hi) <= _horner_noise(coeffs, hi), 0.0, f_hi)
    bad = (f_lo * f_hi > 0) | np.isnan(f_lo) | np.isnan(f_hi)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise NoSignChangeError(
            f"{c.kind.value}: no sign change on [{float(lo[i])!r}, {float(hi[i])!r}] "
            f"(f(lo)={f_lo[i]:.3e}, f(hi)={f_hi[i]:.3e})"
        )

    root = np.full(n, np.nan)
    root[f_lo == 0] = lo[f_lo == 0]
    root[f_hi == 0] = hi[f_hi == 0]
    # orient every bracket so that f(lo) < 0 < f(hi)
    flip = f_lo > 0
    lo[flip], hi[flip] = hi[flip], lo[flip].copy()

    active = np.flatnonzero(np.isnan(root))
    if x0 is None:
        x = 0.5 * (lo + hi)
    else:
        guess = np.broadcast_to(np.asarray(x0, dtype=float), (n,))
        inside = (guess > np.minimum(lo, hi)) & (guess < np.maximum(lo, hi))
        x = np.where(inside, guess, 0.5 * (lo + hi))
    dx_old = np.abs(hi - lo)
    dx = dx_old.copy()

    lo, hi, x, dx, dx_old = lo[active], hi[active], x[active], dx[active], dx_old[active]
    cf = coeffs[active]
    for _ in range(max_iter):
        if active.size == 0:
            break
        f, df = horner_with_derivative(cf, x)
        neg = f < 0
        lo = np.where(neg, x, lo)
        hi = np.where(neg, hi, x)

        with np.errstate(divide="ignore", invalid="ignore"):
            step = f / df
        x_new = x - step
        inside = (x_new - lo) * (x_new - hi) < 0
        slow = np.abs(step) > 0.5 * np.abs(dx_old)
        use_bisect = ~inside | slow | ~np.isfinite(x_new)
        x_mid = 0.5 * (lo + hi)
        dx_old = dx
        x_next = np.where(use_bisect, x_mid, x_new)
        dx = np.where(use_bisect, 0.5 * (hi - lo), step)

        width = np.abs(hi - lo)
        ulp = np.spacing(np.maximum(np.abs(lo), np.abs(hi)))
        done = (
            (f == 0)
            | (width <= 4.0 * ulp)
            | (~use_bisect & (np.abs(step) <= 2.0 * _EPS * np.abs(x_new)))
        )
        final = np.where(f == 0, x, x_next)
        root[active[done]] = final[done]

        keep = ~done
        active = active[keep]
        lo, hi, x, dx, dx_old, cf = lo[keep], hi[keep], x_next[keep], dx[keep], dx_old[keep], cf[keep]
    if active.size:
        raise ConvergenceError(
            f"{c.kind.value}: {active.size} root(s) not converged after {max_iter} iterations"
        )
    return float(root[0]) if scalar else root

