"""Operators commuting with H_inf and with H_1^*.

An operator commutes with H_inf exactly when it is Q^{-1} M_g Q for a bounded
g on the imaginary axis.  For H_1^* on L^2(0,1) the symbol must in addition
be the boundary trace of a bounded analytic function on the right half-plane,
and the operator is Q^{-1} P_+ M_g Q after extending by zero to (0, inf).
"""

from __future__ import annotations

import enum
from typing import Callable, Union

import numpy as np

from .errors import DomainMismatch, GridMismatch, NotAnalytic, UnboundedSymbol
from .grid import (HALF_LINE, UNIT_INTERVAL, LogGrid, SampledFunction, Side, half_line_grid,
                   norm, random_smooth, restrict, unit_interval_grid, zero_extend)
from .hardy_ops import SEED, HardyKind, apply_hardy
from .laguerre import model_basis
from .transforms import Direction, mellin, riesz_projection

SYMBOL_CAP = 1e6
ANALYTIC_TOL = 1e-3

Symbol = Union[SampledFunction, Callable]


class Side_(str, enum.Enum):
    HINF = "Hinf"
    H1STAR = "H1star"


def _symbol_values(g: Symbol, grid: LogGrid) -> np.ndarray:
    if callable(g) and not isinstance(g, SampledFunction):
        with np.errstate(all="ignore"):
            return np.broadcast_to(np.asarray(g(grid.beta), dtype=complex), (grid.n,))
    if g.side is not Side.FREQUENCY:
        raise DomainMismatch("a commutant symbol lives on the frequency side")
    if not g.grid.same_as(grid):
        raise GridMismatch("symbol is sampled on a different grid")
    return g.values


def analyticity_defect(g: Symbol, grid: LogGrid) -> float:
    """||P_-(g u_0)|| / ||g u_0||: zero when g is a bounded analytic multiplier of H^2_+."""
    vals = _symbol_values(g, grid)
    u0 = model_basis(0, "plus", grid)
    gu = u0.with_values(vals * u0.values)
    return norm(riesz_projection(gu, "minus")) / max(norm(gu), 1e-300)


def commutant_apply(which: str, g: Symbol, f: SampledFunction, cap: float = SYMBOL_CAP,
                    analytic_tol: float = ANALYTIC_TOL) -> SampledFunction:
    """A f with A = Q^{-1} M_g Q (``Hinf``) or Q^{-1} P_+ M_g Q (``H1star``).

    ``g`` is a frequency-side function on the working grid or a callable of
    beta.  For ``H1star`` the working grid is the zero extension of the
    unit-interval grid of ``f`` (twice as many nodes, same spacing).
    """
    which = Side_(which)
    if f.side is not Side.TIME:
        raise DomainMismatch("commutant_apply acts on time samples")
    if which is Side_.HINF:
        if f.grid.tag != HALF_LINE:
            raise DomainMismatch("the Hinf commutant acts on half-line functions")
        work = f
    else:
        if f.grid.tag != UNIT_INTERVAL:
            raise DomainMismatch("the H1star commutant acts on unit-interval functions")
        work = zero_extend(f)
    vals = _symbol_values(g, work.grid)
    top = float(np.max(np.abs(vals)))
    if not np.isfinite(top) or top > cap:
        raise UnboundedSymbol(f"max |g| = {top:.3g} exceeds the cap {cap:.3g}")
    G = mellin(work)
    H = G.with_values(vals * G.values)
    if which is Side_.HINF:
        return mellin(H, Direction.INVERSE)
    defect = analyticity_defect(vals_as_symbol(vals, work.grid), work.grid)
    if defect > analytic_tol:
        raise NotAnalytic(f"symbol leaves H^2_+ (relative defect {defect:.3g})")
    out = mellin(riesz_projection(H, "plus"), Direction.INVERSE)
    return restrict(out, f.grid)


def vals_as_symbol(vals: np.ndarray, grid: LogGrid) -> SampledFunction:
    return SampledFunction(grid, Side.FREQUENCY, vals)


def commutation_defect(which: str, g: Symbol, trials: int = 8, grid: LogGrid | None = None,
                       seed: int = SEED) -> float:
    """max over random smooth unit f of ||A H f - H A f||, H = H_inf or H_1^*."""
    if trials < 8:
        raise ValueError("trials must be at least 8")
    which = Side_(which)
    if which is Side_.HINF:
        grid = grid or half_line_grid()
        kind = HardyKind.HINF
    else:
        grid = grid or unit_interval_grid()
        kind = HardyKind.H1STAR
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        f = random_smooth(grid, rng)
        a = commutant_apply(which, g, apply_hardy(kind, f))
        b = apply_hardy(kind, commutant_apply(which, g, f))
        worst = max(worst, norm(a - b))
    return worst
