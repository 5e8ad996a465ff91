"""Numerical kernels: shape-preserving interpolation and trig-series fits.

Two tools live here because the table engine needs exactly two things it
cannot get from raw counts:

* densifying a sparse score-ranking table without inventing wiggles, done
  with monotone piecewise-cubic Hermite interpolation (Fritsch-Carlson
  slope limiting), and
* smoothing an amended table into a projection curve, done with a
  truncated trigonometric series a0 + sum_k (a_k cos k.w.x + b_k sin k.w.x)
  whose fundamental frequency w is itself fitted by damped Gauss-Newton.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def monotone_cubic_slopes(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Fritsch-Carlson tangents for a shape-preserving cubic Hermite spline.

    Interior slopes start as the mean of adjacent secants, get zeroed at
    local extrema, and are scaled back into the alpha^2 + beta^2 <= 9
    region that guarantees the interpolant is monotone on every interval.
    Reproduces straight-line data exactly.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError("need at least two knots")
    if np.any(np.diff(x) <= 0):
        raise ValueError("knot abscissae must be strictly increasing")

    secants = np.diff(y) / np.diff(x)
    m = np.empty(n)
    m[0] = secants[0]
    m[-1] = secants[-1]
    m[1:-1] = (secants[:-1] + secants[1:]) / 2.0
    # Flat spots and local extrema force zero tangents.
    for i in range(1, n - 1):
        if secants[i - 1] * secants[i] <= 0:
            m[i] = 0.0
    for i in range(n - 1):
        if secants[i] == 0.0:
            m[i] = 0.0
            m[i + 1] = 0.0
            continue
        alpha = m[i] / secants[i]
        beta = m[i + 1] / secants[i]
        norm2 = alpha * alpha + beta * beta
        if norm2 > 9.0:
            tau = 3.0 / np.sqrt(norm2)
            m[i] = tau * alpha * secants[i]
            m[i + 1] = tau * beta * secants[i]
    return m


def monotone_cubic_eval(x, y, xq) -> np.ndarray:
    """Evaluate the Fritsch-Carlson interpolant at query points in [x0, xn]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xq = np.atleast_1d(np.asarray(xq, dtype=float))
    m = monotone_cubic_slopes(x, y)

    idx = np.clip(np.searchsorted(x, xq, side="right") - 1, 0, x.size - 2)
    h = x[idx + 1] - x[idx]
    t = (xq - x[idx]) / h
    t2 = t * t
    t3 = t2 * t
    h00 = 2 * t3 - 3 * t2 + 1
    h10 = t3 - 2 * t2 + t
    h01 = -2 * t3 + 3 * t2
    h11 = t3 - t2
    return h00 * y[idx] + h10 * h * m[idx] + h01 * y[idx + 1] + h11 * h * m[idx + 1]


@dataclass(frozen=True)
class TrigSeries:
    """A fitted truncated trigonometric series on a centered abscissa."""

    order: int
    omega: float
    center: float
    coeffs: tuple[float, ...]  # a0, a1, b1, a2, b2, ...
    rms_residual: float
    npoints: int

    def __call__(self, xq) -> np.ndarray:
        xq = np.atleast_1d(np.asarray(xq, dtype=float))
        u = xq - self.center
        out = np.full(u.shape, self.coeffs[0])
        for k in range(1, self.order + 1):
            out = out + self.coeffs[2 * k - 1] * np.cos(k * self.omega * u)
            out = out + self.coeffs[2 * k] * np.sin(k * self.omega * u)
        return out


def _design_matrix(u: np.ndarray, omega: float, order: int) -> np.ndarray:
    cols = [np.ones_like(u)]
    for k in range(1, order + 1):
        cols.append(np.cos(k * omega * u))
        cols.append(np.sin(k * omega * u))
    return np.column_stack(cols)


def _solve_coeffs(u, y, omega, order):
    design = _design_matrix(u, omega, order)
    coeffs, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - design @ coeffs
    return coeffs, residual


def fit_trig_series(
    x,
    y,
    order: int = 3,
    rel_tol: float = 1e-8,
    max_iter: int = 200,
) -> TrigSeries:
    """Least-squares trig-series fit with a free fundamental frequency.

    For a fixed frequency the problem is linear, so the coefficients come
    from a normal lstsq solve and only the scalar frequency is iterated:
    a damped Gauss-Newton step on the projected residual, with the damping
    grown whenever a step fails to reduce the residual. The frequency
    starts at pi / span (half a period across the data) and stays within
    a sane bracket around that. Iteration stops when the relative residual
    change drops below ``rel_tol`` or after ``max_iter`` rounds.

    Orders larger than the data supports are reduced by the caller; this
    function requires len(x) >= 2*order + 2 unless order is 0.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size == 0:
        raise ValueError("cannot fit an empty segment")
    if order < 0:
        raise ValueError("order must be >= 0")
    if order > 0 and x.size < 2 * order + 2:
        raise ValueError(f"order {order} needs >= {2 * order + 2} points, got {x.size}")

    center = float(x.mean())
    u = x - center

    if order == 0:
        a0 = float(y.mean())
        rms = float(np.sqrt(np.mean((y - a0) ** 2))) if y.size else 0.0
        return TrigSeries(0, 0.0, center, (a0,), rms, int(x.size))

    span = float(x.max() - x.min())
    if span <= 0:
        # All abscissae identical: only the mean is identifiable.
        a0 = float(y.mean())
        rms = float(np.sqrt(np.mean((y - a0) ** 2)))
        return TrigSeries(0, 0.0, center, (a0,), rms, int(x.size))

    omega0 = np.pi / span
    omega_lo, omega_hi = omega0 / 16.0, omega0 * 16.0

    omega = omega0
    coeffs, residual = _solve_coeffs(u, y, omega, order)
    cost = float(residual @ residual)
    damping = 1e-3

    for _ in range(max_iter):
        step_h = max(1e-8, 1e-6 * omega)
        _, residual_h = _solve_coeffs(u, y, omega + step_h, order)
        jac = (residual_h - residual) / step_h
        denom = float(jac @ jac)
        if denom <= 0:
            break
        accepted = False
        for _ in range(12):
            delta = -float(jac @ residual) / (denom * (1.0 + damping))
            candidate = float(np.clip(omega + delta, omega_lo, omega_hi))
            cand_coeffs, cand_residual = _solve_coeffs(u, y, candidate, order)
            cand_cost = float(cand_residual @ cand_residual)
            if cand_cost < cost:
                improvement = (cost - cand_cost) / max(cost, 1e-300)
                omega, coeffs, residual, cost = candidate, cand_coeffs, cand_residual, cand_cost
                damping = max(damping / 4.0, 1e-9)
                accepted = True
                break
            damping *= 4.0
        if not accepted:
            break
        if improvement <= rel_tol:
            break

    rms = float(np.sqrt(cost / x.size))
    return TrigSeries(order, float(omega), center, tuple(float(c) for c in coeffs), rms, int(x.size))
