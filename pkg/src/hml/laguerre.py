"""Laguerre polynomials, Laguerre functions and the model bases u_n, v_n.

The orbit of chi = 1_(0,1) under V = I - H_inf^* is L_n(-log t) chi, and its
Mellin image is the orthonormal basis u_n of H^2_+.  On the other side of
t = 1 the orbit of chi under V^* gives

    V^{*(n+1)} chi = -L_n(log t)/t * 1_(t>1),

whose Mellin image is -v_n.  Both facts are checked by the test-suite.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainMismatch, NegativeDegree
from .grid import UNIT_INTERVAL, LogGrid, SampledFunction, Side, decaying_cumsum, norm
from .transforms import (SQRT2PI, HalfPlaneSymbol, alias_phase, lattice_pole_sum,
                         phi_axis)

MAX_DEGREE = 64


def _check_degree(n: int):
    if n < 0:
        raise NegativeDegree(f"degree must be nonnegative, got {n}")


def laguerre_poly(n: int, x):
    """L_n(x) by the three-term recurrence.

    (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}, with L_0 = 1 and L_1 = 1 - x.
    Works elementwise on arrays.
    """
    _check_degree(n)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur


def laguerre_table(nmax: int, x) -> np.ndarray:
    """Rows L_0(x) .. L_nmax(x)."""
    _check_degree(nmax)
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 1.0 - x
    for k in range(1, nmax):
        out[k + 1] = ((2 * k + 1 - x) * out[k] - k * out[k - 1]) / (k + 1)
    return out


def laguerre_orbit_fn(n: int, side: str, grid: LogGrid) -> SampledFunction:
    """Closed-form orbit functions on a log grid (time side).

    ``unit``: L_n(-log t) on t <= 1, zero beyond.
    ``tail``: -L_n(log t)/t on t > 1, zero below; this is V^{*(n+1)} chi.
    """
    _check_degree(n)
    x = grid.x
    if side == "unit":
        vals = np.where(x <= 0.0, laguerre_poly(n, -x), 0.0)
    elif side == "tail":
        if grid.tag == UNIT_INTERVAL:
            raise DomainMismatch("tail functions live on t > 1")
        xs = np.where(x > 0.0, x, 0.0)
        vals = np.where(x > 0.0, -laguerre_poly(n, xs) * np.exp(-xs), 0.0)
    else:
        raise ValueError("side must be 'unit' or 'tail'")
    return SampledFunction(grid, Side.TIME, vals)


def u_symbol(n: int, beta):
    beta = np.asarray(beta, dtype=float)
    return phi_axis(beta) ** n / (SQRT2PI * (1j * beta + 0.5))


def v_symbol(n: int, beta):
    beta = np.asarray(beta, dtype=float)
    r = (2 * beta - 1j) / (2 * beta + 1j)
    return 1j * np.sqrt(2 / np.pi) * r**n / (2 * beta + 1j)


def _basis_ratio(sign: str):
    if sign == "plus":
        return lambda b: phi_axis(b)
    return lambda b: (2 * b - 1j) / (2 * b + 1j)


def model_basis_table(nmax: int, sign: str, grid: LogGrid, aliased: bool = True,
                      terms: int = 64) -> np.ndarray:
    """Rows 0..nmax of :func:`model_basis` in one pass over the alias lattice.

    u_n = phi^n u_0 and v_n = r^n v_0, so each lattice shift needs one ratio
    evaluation and nmax multiplications.
    """
    _check_degree(nmax)
    beta = grid.beta
    if sign == "plus":
        fn, pole, c = u_symbol, -0.5j, -1j / SQRT2PI
    elif sign == "minus":
        fn, pole, c = v_symbol, 0.5j, 1j / SQRT2PI
    else:
        raise ValueError("sign must be 'plus' or 'minus'")
    ratio = _basis_ratio(sign)
    rows = np.empty((nmax + 1, grid.n), dtype=complex)
    if not aliased:
        cur = fn(0, beta)
        r = ratio(beta)
        for n in range(nmax + 1):
            rows[n] = cur
            cur = cur * r
        return rows
    omega, theta = alias_phase(grid)
    # the n = 0 symbol is c/(beta + pole): summed in closed form
    rows[:] = c * lattice_pole_sum(beta + pole, theta, omega)
    for m in range(-terms, terms + 1):
        b = beta - m * omega
        f0 = fn(0, b)
        r = ratio(b)
        ph = np.exp(1j * m * theta)
        cur = f0
        for n in range(1, nmax + 1):
            cur = cur * r
            rows[n] += ph * (cur - f0)
    return rows


def model_basis(n: int, sign: str, grid: LogGrid, aliased: bool = True,
                terms: int = 64) -> HalfPlaneSymbol:
    """u_n (``plus``) or v_n (``minus``) on the frequency grid of ``grid``.

    With ``aliased`` the symbol is replaced by its periodisation
    sum_m e^{i m theta} G(beta - m Omega), which is exactly what the FFT of
    the line samples of Q^{-1} G produces.  Without it the plain samples are
    returned; the difference is O(delta) and dominates Gram tests on
    default grids.
    """
    _check_degree(n)
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be 'plus' or 'minus'")
    kind = "H2plus" if sign == "plus" else "H2minus"
    if not aliased:
        fn = u_symbol if sign == "plus" else v_symbol
        return HalfPlaneSymbol(grid, Side.FREQUENCY, fn(n, grid.beta), kind)
    vals = model_basis_table(n, sign, grid, True, terms)[n]
    return HalfPlaneSymbol(grid, Side.FREQUENCY, vals, kind)


def laguerre_function(n: int, x):
    """Bilateral Laguerre functions Phi_n(x), n any integer.

    Phi_n for n >= 0 lives on [0, inf) and takes its right limit at x = 0;
    Phi_n for n < 0 lives on (-inf, 0).
    """
    x = np.asarray(x, dtype=float)
    if n >= 0:
        xs = np.where(x >= 0, x, 0.0)
        return np.where(x >= 0, np.exp(-xs / 2) * laguerre_poly(n, xs), 0.0)
    xs = np.where(x < 0, x, 0.0)
    return np.where(x < 0, -np.exp(xs / 2) * laguerre_poly(-n - 1, -xs), 0.0)


def sample_laguerre_function(n: int, grid: LogGrid) -> SampledFunction:
    return SampledFunction(grid, Side.LINE, laguerre_function(n, grid.x))


def laguerre_shift(f: SampledFunction, bilateral: bool = False) -> SampledFunction:
    """(L f)(x) = f(x) - int_a^x e^{(s-x)/2} f(s) ds, a = 0 or -inf.

    ``f`` is a line-side function.  The integral is propagated panel by panel,
    J_j = e^{-delta/2} J_{j-1} + trapezoid of the last panel, which never
    forms large exponentials.  In the unilateral case samples at x < 0 are
    ignored.
    """
    if f.side is not Side.LINE:
        raise DomainMismatch("laguerre_shift acts on line samples")
    g = f.values.copy()
    if not bilateral:
        g[f.grid.x < 0] = 0.0
    d = f.grid.delta
    decay = np.exp(-d / 2)
    panel = 0.5 * d * (decay * g[:-1] + g[1:])
    acc = np.zeros(f.grid.n, dtype=complex)
    acc[1:] = decaying_cumsum(panel, decay)
    return f.with_values(g - acc)


def random_laguerre_combination(grid: LogGrid, rng: np.random.Generator,
                                dim: int = 8) -> SampledFunction:
    """Random unit vector in the span of the first Laguerre orbit functions.

    Unit-interval grids use L_k(-log t) chi, k < dim; half-line grids mix
    dim/2 unit functions with dim/2 tail functions.  The vectors decay at
    both window ends but jump at t = 1, so their spectra decay slowly; use
    :func:`hml.grid.random_smooth` where quadrature accuracy matters.
    """
    coef = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    if grid.tag == UNIT_INTERVAL:
        parts = [laguerre_orbit_fn(k, "unit", grid) for k in range(dim)]
    else:
        h = max(dim // 2, 1)
        parts = ([laguerre_orbit_fn(k, "unit", grid) for k in range(h)]
                 + [laguerre_orbit_fn(k, "tail", grid) for k in range(dim - h)])
    vals = sum(c * p.values for c, p in zip(coef, parts))
    f = SampledFunction(grid, Side.TIME, vals)
    return f / norm(f)

