"""Matrix-free finite and infinite Hardy operators.

In the log coordinate x = log t the Hardy operator is

    (H f)(e^x) = e^{-x} int_{-inf}^x f(e^s) e^s ds,

evaluated with a cumulative trapezoid rule started at x_min (mass below t_min
is dropped).  The starred operator is the exact adjoint of that matrix with
respect to the time-side quadrature weights; at interior nodes it coincides
with the tail trapezoid of int_x^{x_max} f(e^s) ds.  The same formulas serve
H_1 (unit-interval grid, upper limit t = 1) and H_inf (half-line grid).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainMismatch, NoConvergence
from .grid import (HALF_LINE, UNIT_INTERVAL, LogGrid, SampledFunction, Side, decaying_cumsum,
                   inner_product, norm, unit_interval_grid, half_line_grid)
from .laguerre import random_laguerre_combination

SEED = 0x9E3779B9


class HardyKind(str, enum.Enum):
    H1 = "H1"
    H1STAR = "H1star"
    HINF = "Hinf"
    HINFSTAR = "Hinfstar"


_DOMAIN = {
    HardyKind.H1: UNIT_INTERVAL, HardyKind.H1STAR: UNIT_INTERVAL,
    HardyKind.HINF: HALF_LINE, HardyKind.HINFSTAR: HALF_LINE,
}
_ADJOINT = {
    HardyKind.H1: HardyKind.H1STAR, HardyKind.H1STAR: HardyKind.H1,
    HardyKind.HINF: HardyKind.HINFSTAR, HardyKind.HINFSTAR: HardyKind.HINF,
}


@dataclass(frozen=True)
class OperatorHandle:
    """A named linear map with its adjoint, both acting on time samples."""

    name: str
    domain: str
    grid: LogGrid
    forward: Callable[[SampledFunction], SampledFunction]
    backward: Callable[[SampledFunction], SampledFunction]

    def _check(self, f: SampledFunction):
        if f.side is not Side.TIME:
            raise DomainMismatch(f"{self.name} acts on time samples")
        if f.grid.tag != self.domain:
            raise DomainMismatch(f"{self.name} acts on {self.domain} functions, got {f.grid.tag}")

    def apply(self, f: SampledFunction) -> SampledFunction:
        self._check(f)
        return self.forward(f)

    def apply_adjoint(self, f: SampledFunction) -> SampledFunction:
        self._check(f)
        return self.backward(f)

    def __call__(self, f):
        return self.apply(f)

    @property
    def adjoint(self) -> "OperatorHandle":
        name = self.name[:-4] if self.name.endswith("star") else self.name + "star"
        return OperatorHandle(name, self.domain, self.grid, self.backward, self.forward)


def _cumulative(f: SampledFunction) -> np.ndarray:
    g = f.grid
    ft = f.values * g.t
    acc = np.zeros(g.n, dtype=complex)
    acc[1:] = np.cumsum(0.5 * g.delta * (ft[:-1] + ft[1:]))
    return acc / g.t


def _cumulative_adjoint(f: SampledFunction) -> np.ndarray:
    g = f.grid
    w = g.trapezoid
    wf = w * f.values
    # S_k = sum_{j > k} w_j f_j
    tail = np.concatenate([np.cumsum(wf[::-1])[::-1][1:], [0.0]])
    out = g.delta * (0.5 * f.values + tail / w)
    out[0] = g.delta * tail[0]
    return out


def _cumulative_line(f: SampledFunction) -> np.ndarray:
    # T H T^{-1} g(x) = int_{x_min}^x e^{-(x-y)/2} g(y) dy, same trapezoid as the time side
    g = f.grid
    r = np.exp(-0.5 * g.delta)
    v = f.values
    acc = np.zeros(g.n, dtype=complex)
    acc[1:] = decaying_cumsum(0.5 * g.delta * (r * v[:-1] + v[1:]), r)
    return acc


def _cumulative_adjoint_line(f: SampledFunction) -> np.ndarray:
    g = f.grid
    r = np.exp(-0.5 * g.delta)
    w = g.trapezoid
    wv = w * f.values
    # R_k = sum_{j > k} w_j g_j r^{j-k}
    tail = np.zeros(g.n, dtype=complex)
    tail[:-1] = r * decaying_cumsum(wv[::-1], r)[::-1][1:]
    out = g.delta * (0.5 * f.values + tail / w)
    out[0] = g.delta * tail[0]
    return out


def apply_hardy(kind, f: SampledFunction) -> SampledFunction:
    """Apply H1, H1star, Hinf or Hinfstar to time samples or, conjugated by T, to line samples.

    Both sides use the same discrete operator; the line form avoids exp(x)
    and so works on windows wider than |x| <= 700.
    """
    kind = HardyKind(kind)
    if f.side is Side.FREQUENCY:
        raise DomainMismatch("Hardy operators act on time or line samples")
    if f.grid.tag != _DOMAIN[kind]:
        raise DomainMismatch(f"{kind.value} needs a {_DOMAIN[kind]} grid, got {f.grid.tag}")
    forward = kind in (HardyKind.H1, HardyKind.HINF)
    if f.side is Side.LINE:
        return f.with_values(_cumulative_line(f) if forward else _cumulative_adjoint_line(f))
    return f.with_values(_cumulative(f) if forward else _cumulative_adjoint(f))


def hardy_operator(kind, grid: LogGrid) -> OperatorHandle:
    kind = HardyKind(kind)
    adj = _ADJOINT[kind]
    return OperatorHandle(kind.value, _DOMAIN[kind], grid,
                          lambda f: apply_hardy(kind, f), lambda f: apply_hardy(adj, f))


def apply_V(f: SampledFunction) -> SampledFunction:
    """V = I - H_inf^*, unitary on L^2(0, inf)."""
    return f - apply_hardy(HardyKind.HINFSTAR, f)


def apply_V_adjoint(f: SampledFunction) -> SampledFunction:
    return f - apply_hardy(HardyKind.HINF, f)


def v_operator(grid: LogGrid) -> OperatorHandle:
    return OperatorHandle("V", HALF_LINE, grid, apply_V, apply_V_adjoint)


def shift_operator(grid: LogGrid) -> OperatorHandle:
    """I - H_1^* on L^2(0,1) and its adjoint I - H_1."""
    return OperatorHandle(
        "I-H1star", UNIT_INTERVAL, grid,
        lambda f: f - apply_hardy(HardyKind.H1STAR, f),
        lambda f: f - apply_hardy(HardyKind.H1, f))


def identity_operator(grid: LogGrid) -> OperatorHandle:
    same = lambda f: f  # noqa: E731
    return OperatorHandle("identity", grid.tag, grid, same, same)


@dataclass(frozen=True)
class PowerIterationResult:
    value: float
    iterations: int
    history: tuple


def power_iteration(op: OperatorHandle, iters: int = 500, tol: float = 1e-6,
                    seed: int = SEED) -> PowerIterationResult:
    """Largest singular value of ``op`` via power iteration on op op^*.

    The eigenvalue estimate is the Rayleigh quotient; iteration stops when two
    successive estimates agree to ``tol`` (relative).
    """
    if iters < 50:
        raise ValueError("iters must be at least 50")
    rng = np.random.default_rng(seed)
    g = op.grid
    x = SampledFunction(g, Side.TIME, rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n))
    x = x / norm(x)
    lam_old = None
    change = np.inf
    hist = []
    for k in range(1, iters + 1):
        y = op.apply(op.apply_adjoint(x))
        lam = inner_product(y, x).real
        hist.append(lam)
        x = y / norm(y)
        if lam_old is not None:
            change = abs(lam - lam_old) / max(abs(lam), 1e-300)
            if change <= tol:
                return PowerIterationResult(float(np.sqrt(lam)), k, tuple(hist))
        lam_old = lam
    raise NoConvergence(f"power iteration did not settle in {iters} steps "
                        f"(last relative change {change:.3g})")


def operator_norm_estimate(op: OperatorHandle, iters: int = 500, seed: int = SEED) -> float:
    return power_iteration(op, iters=iters, seed=seed).value


def normality_defect(op: OperatorHandle, trials: int = 8, seed: int = SEED) -> float:
    """max over random unit f of ||(A A^* - A^* A) f||.

    The random vectors are combinations of Laguerre orbit functions, which are
    well resolved on the grid and overlap the direction of chi.
    """
    if trials < 8:
        raise ValueError("trials must be at least 8")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        f = random_laguerre_combination(op.grid, rng)
        d = op.apply(op.apply_adjoint(f)) - op.apply_adjoint(op.apply(f))
        worst = max(worst, norm(d))
    return worst


def spectrum_probe(kind, s: complex, grid: LogGrid | None = None, width: float = 6.0) -> complex:
    """Rayleigh quotient <A f, f>/<f, f> for a test function attached to ``s``.

    ``H1``: f = t^s with Re s > -1/2; the value tends to 1/(s + 1).  The
    default grid is fine (delta ~ 8e-4) so the trapezoid error stays below
    1e-6 for |s| of order one.

    ``Hinf``: ``s`` is the frequency tau of the packet
    t^{i tau - 1/2} exp(-(log t)^2/(2 width^2)); the value lies close to the
    circle |z - 1| = 1.
    """
    kind = HardyKind(kind)
    if kind is HardyKind.H1:
        if np.real(s) <= -0.5:
            raise DomainMismatch("t^s lies in L^2(0,1) only for Re s > -1/2")
        grid = grid or unit_interval_grid(n=1 << 15)
        f = SampledFunction(grid, Side.TIME, np.exp(complex(s) * grid.x))
    elif kind is HardyKind.HINF:
        grid = grid or half_line_grid()
        x = grid.x
        tau = float(np.real(s))
        f = SampledFunction(grid, Side.TIME,
                            np.exp((1j * tau - 0.5) * x - x**2 / (2 * width**2)))
    else:
        raise DomainMismatch("spectrum_probe takes H1 or Hinf")
    hf = apply_hardy(kind, f)
    return inner_product(hf, f) / inner_product(f, f)
