"""The dilation semigroup C_t f(x) = e^{-t/2} f(e^{-t} x) and its generator.

In the log coordinate C_t is a right translation by t with weight e^{-t/2};
after T it becomes the plain unitary shift g -> g(. - t).  Its Laplace
transform at 1/2 reconstructs H_inf:

    int_0^inf e^{-t/2} (C_t f)(x) dt = (H_inf f)(x).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import DomainMismatch, NegativeTime, StepMisaligned
from .grid import HALF_LINE, LogGrid, SampledFunction, Side, norm
from .hardy_ops import HardyKind, apply_hardy


def _steps(t: float, delta: float):
    """Integer number of grid steps in t, or None when t is not aligned."""
    k = t / delta
    r = round(k)
    return r if abs(k - r) < 1e-9 * max(1.0, abs(k)) else None


def _shift_values(v: np.ndarray, x: np.ndarray, t: float, delta: float) -> np.ndarray:
    k = _steps(t, delta)
    out = np.zeros_like(v)
    if k is not None:
        if k < v.size:
            out[k:] = v[: v.size - k]
        return out
    xs = x - t
    out = np.interp(xs, x, v.real, left=0.0, right=0.0) \
        + 1j * np.interp(xs, x, v.imag, left=0.0, right=0.0)
    return out


def apply_Ct(f: SampledFunction, t: float) -> SampledFunction:
    """C_t f on the same grid; values that come from below t_min are zero."""
    if t < 0:
        raise NegativeTime(f"t must be >= 0, got {t}")
    if f.side is not Side.TIME or f.grid.tag != HALF_LINE:
        raise DomainMismatch("C_t acts on time samples on a half-line grid")
    g = f.grid
    return f.with_values(np.exp(-t / 2) * _shift_values(f.values, g.x, t, g.delta))


def shift_line(g: SampledFunction, t: float) -> SampledFunction:
    """g(x) -> g(x - t) on the line side (the image of C_t under T)."""
    if g.side is not Side.LINE:
        raise DomainMismatch("shift_line acts on line samples")
    return g.with_values(_shift_values(g.values, g.grid.x, t, g.grid.delta))


def hardy_via_semigroup(f: SampledFunction, t_max: float = 40.0, dt: float | None = None) -> SampledFunction:
    """Trapezoid rule in t for int_0^{t_max} e^{-t/2} C_t f dt.

    ``dt`` must be a whole number of grid steps (default: one step), so every
    C_t is an exact index shift.
    """
    if t_max < 20:
        raise ValueError("t_max must be at least 20")
    g = f.grid
    dt = g.delta if dt is None else dt
    m = _steps(dt, g.delta)
    if m is None or m < 1:
        raise StepMisaligned(f"dt={dt} is not a positive multiple of delta={g.delta}")
    K = int(round(t_max / dt))
    acc = np.zeros(g.n, dtype=complex)
    for k in range(K + 1):
        tk = k * dt
        c = 0.5 if k in (0, K) else 1.0
        shifted = np.zeros(g.n, dtype=complex)
        s = k * m
        if s < g.n:
            shifted[s:] = f.values[: g.n - s]
        acc += c * np.exp(-tk) * shifted
    return f.with_values(dt * acc)


def generator_apply(f: Callable, fprime: Callable, grid: LogGrid) -> SampledFunction:
    """A f(t) = -t f'(t) - f(t)/2 from analytic expressions for f and f'."""
    t = grid.t
    vals = -t * np.asarray(fprime(t), dtype=complex) - 0.5 * np.asarray(f(t), dtype=complex)
    return SampledFunction(grid, Side.TIME, np.broadcast_to(vals, t.shape))


def cogenerator_residual(f: Callable, grid: LogGrid) -> float:
    """||(A - I/2)(-H_inf f) - f|| / ||f|| with the derivative taken analytically.

    u = -H_inf f = -I(t)/t with I the quadrature antiderivative of f, so by
    the product rule u'(t) = I/t^2 - f(t)/t; no sample differencing is used.
    """
    fs = SampledFunction(grid, Side.TIME, np.broadcast_to(np.asarray(f(grid.t), dtype=complex), grid.t.shape))
    t = grid.t
    u = -apply_hardy(HardyKind.HINF, fs).values
    integral = -u * t
    du = integral / t**2 - fs.values / t
    res = -t * du - u  # (A - I/2) u
    return norm(fs.with_values(res - fs.values)) / norm(fs)
