"""Reducing and non-reducing subspaces of H_inf and cyclicity diagnostics.

Under the Mellin transform H_inf becomes multiplication by 1/(1/2 - i beta),
so its reducing subspaces are frequency bands Q^{-1}(1_E L^2) and the
invariant subspaces for H_inf^* that do not reduce come from unimodular
multipliers, Q^{-1}(q H^2_+).

Cyclicity is an a.e./asymptotic property; the diagnostics below look at the
sampled symbol on the frequency band that the grid actually resolves and
report the evidence next to the verdict.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainMismatch, GridMismatch, NotUnimodular
from .grid import LogGrid, SampledFunction, Side
from .transforms import (SQRT2PI, UNIMODULAR_TOL, Direction, HalfPlaneSymbol, fourier,
                         mellin, riesz_projection)


@dataclass(frozen=True)
class FrequencySet:
    """Indicator of a set E of frequencies on the dual grid of ``grid``."""

    grid: LogGrid
    indicator: np.ndarray = field(repr=False)

    def __post_init__(self):
        ind = np.array(self.indicator, dtype=bool)
        if ind.shape != (self.grid.n,):
            raise GridMismatch("indicator length must match the frequency grid")
        ind.setflags(write=False)
        object.__setattr__(self, "indicator", ind)

    @classmethod
    def everything(cls, grid):
        return cls(grid, np.ones(grid.n, bool))

    @classmethod
    def nothing(cls, grid):
        return cls(grid, np.zeros(grid.n, bool))

    @classmethod
    def band(cls, grid, lo=-np.inf, hi=np.inf):
        b = grid.beta
        return cls(grid, (b >= lo) & (b <= hi))

    @classmethod
    def bands(cls, grid, intervals):
        b = grid.beta
        ind = np.zeros(grid.n, bool)
        for lo, hi in intervals:
            ind |= (b >= lo) & (b <= hi)
        return cls(grid, ind)

    def complement(self) -> "FrequencySet":
        return FrequencySet(self.grid, ~self.indicator)


def _time_or_line(f: SampledFunction):
    if f.side not in (Side.TIME, Side.LINE):
        raise DomainMismatch("expected time or line samples")


def _back(f: SampledFunction, G: np.ndarray) -> SampledFunction:
    spec = SampledFunction(f.grid, Side.FREQUENCY, G)
    if f.side is Side.LINE:
        return fourier(spec, Direction.FORWARD)
    return mellin(spec, Direction.INVERSE)


def reducing_projection(E: FrequencySet, f: SampledFunction) -> SampledFunction:
    """P_E f = Q^{-1}(1_E Q f)."""
    _time_or_line(f)
    if not E.grid.same_as(f.grid):
        raise GridMismatch("frequency set and function use different grids")
    G = mellin(f).values
    return _back(f, np.where(E.indicator, G, 0.0))


def nonreducing_projection(q: SampledFunction, f: SampledFunction,
                           kind: str = "plus") -> SampledFunction:
    """Orthogonal projection onto Q^{-1}(q H^2_+) (``plus``) or Q^{-1}(q H^2_-).

    The ``plus`` range is invariant for H_inf^*, the ``minus`` range for
    H_inf; neither reduces unless q is trivial.
    """
    _time_or_line(f)
    if q.side is not Side.FREQUENCY:
        raise DomainMismatch("q must be a frequency-side symbol")
    if not q.grid.same_as(f.grid):
        raise GridMismatch("symbol and function use different grids")
    dev = float(np.max(np.abs(np.abs(q.values) - 1.0)))
    if dev > UNIMODULAR_TOL:
        raise NotUnimodular(f"| |q| - 1 | reaches {dev:.3g}")
    G = mellin(f)
    inner = G.with_values(np.conj(q.values) * G.values)
    P = riesz_projection(inner, kind).values
    return _back(f, q.values * P)


def flip_symbol(g: SampledFunction) -> SampledFunction:
    """g(i beta) -> g(-i beta) on the FFT-ordered frequency grid."""
    if g.side is not Side.FREQUENCY:
        raise DomainMismatch("flip_symbol expects frequency samples")
    n = g.grid.n
    return g.with_values(g.values[(n - np.arange(n)) % n])


class Verdict(str, enum.Enum):
    STAR_CYCLIC = "star_cyclic_consistent"
    NOT_STAR_CYCLIC = "not_star_cyclic"
    CYCLIC = "cyclic_consistent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CyclicityVerdict:
    min_abs_symbol: float
    vanishing_fraction: float
    log_integral_estimates: tuple
    verdict: Verdict
    threshold: float = 0.0
    resolved_band: tuple = (0.0, 0.0)
    longest_gap_fraction: float = 0.0
    windows: tuple = ()
    increment_ratios: tuple = ()
    notes: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict.value
        return d


def _symbol_and_line(f: SampledFunction):
    if f.side is Side.FREQUENCY:
        return f.values, fourier(f, Direction.FORWARD).values
    line = f.values * np.exp(0.5 * f.grid.x) if f.side is Side.TIME else f.values
    G = fourier(SampledFunction(f.grid, Side.LINE, line), Direction.INVERSE).values
    return G, line


def _longest_run(mask: np.ndarray) -> int:
    best = cur = 0
    for m in mask:
        cur = cur + 1 if m else 0
        best = max(best, cur)
    return best


def resolved_band(G: np.ndarray, line: np.ndarray, grid: LogGrid, factor: float = 10.0):
    """Index range where |G| exceeds ``factor`` times an estimated error floor.

    The floor is the size of the window-truncation error, about
    (|g(x_min)| + |g(x_max)|)/(sqrt(2 pi) |beta|), plus a rounding term.
    """
    beta = grid.beta
    edge = abs(line[0]) + abs(line[-1])
    scale = np.max(np.abs(G))
    floor = edge / (SQRT2PI * np.maximum(np.abs(beta), grid.dbeta)) + 1e-14 * scale
    ok = np.abs(G) >= factor * floor
    if not ok.any():
        return None
    idx = np.flatnonzero(ok)
    return int(idx[0]), int(idx[-1])


def star_cyclic_diagnostic(f: SampledFunction, threshold: float | None = None,
                           rel_threshold: float = 1e-8, band_fraction: float = 0.01,
                           resolve_factor: float = 10.0) -> CyclicityVerdict:
    """Grid-level test that the Mellin symbol of ``f`` vanishes on no band.

    Only the resolved part of the frequency grid is inspected.  A contiguous
    run of below-threshold nodes covering ``band_fraction`` of that part gives
    ``not_star_cyclic``; no such node at all gives ``star_cyclic_consistent``;
    isolated small values give ``inconclusive``.  Decay below the threshold
    towards the edges of the resolved band is not counted as vanishing.
    """
    G, line = _symbol_and_line(f)
    grid = f.grid
    scale = float(np.max(np.abs(G)))
    if scale == 0.0:
        return CyclicityVerdict(0.0, 1.0, (), Verdict.NOT_STAR_CYCLIC, notes="zero symbol")
    thr = rel_threshold * scale if threshold is None else float(threshold)
    span = resolved_band(G, line, grid, resolve_factor)
    if span is None:
        return CyclicityVerdict(0.0, 0.0, (), Verdict.INCONCLUSIVE, threshold=thr,
                                notes="no resolved frequencies")
    lo, hi = span
    a = np.abs(G[lo:hi + 1])
    # decay below the threshold towards the band edges is not vanishing:
    # only gaps with above-threshold nodes on both sides count
    above = np.flatnonzero(a >= thr)
    below = np.zeros(a.size, bool)
    below[above[0]:above[-1] + 1] = a[above[0]:above[-1] + 1] < thr
    frac = float(below.mean())
    gap = _longest_run(below)
    band = (float(grid.beta[lo]), float(grid.beta[hi]))
    common = dict(threshold=thr, resolved_band=band, longest_gap_fraction=gap / a.size)
    if gap >= band_fraction * a.size:
        v = Verdict.NOT_STAR_CYCLIC
    elif gap == 0:
        v = Verdict.STAR_CYCLIC
    else:
        v = Verdict.INCONCLUSIVE
    return CyclicityVerdict(float(a.min()), frac, (), v, **common)


def truncated_log_integrals(G: np.ndarray, grid: LogGrid, windows) -> np.ndarray:
    """int_{|w| <= W} log(|G|/max|G|)/(1 + w^2) dw for each W (rectangle rule)."""
    beta = grid.beta
    a = np.abs(G)
    with np.errstate(divide="ignore"):
        logs = np.log(a / a.max())
    dens = logs / (1.0 + beta**2) * grid.dbeta
    return np.array([dens[np.abs(beta) <= W].sum() for W in windows])


def cyclic_diagnostic(f: SampledFunction, levels: int = 6, ratio_min: float = 0.9,
                      min_window: float = 6.0, **star_kw) -> CyclicityVerdict:
    """Symbol nonvanishing plus a divergence test for the log-integral.

    The windows are W_k = W_res 2^{k - levels}, k = 0..levels, where W_res is
    the half-width of the largest symmetric band the grid resolves.  The
    increments D_k = I_{k-1} - I_k measure how much each doubling adds.  For
    a symbol decaying like exp(-c|w|) (or faster) they stay constant or grow,
    while a power-law decay makes them shrink by about one half.  The verdict
    is ``cyclic_consistent`` when each of the last three doublings adds at
    least ``ratio_min`` times the previous one and W_res >= ``min_window``;
    otherwise the test is inconclusive.  This is a heuristic: no finite
    window decides the divergence of an integral.
    """
    base = star_cyclic_diagnostic(f, **star_kw)
    if base.verdict is not Verdict.STAR_CYCLIC:
        return base
    G, _ = _symbol_and_line(f)
    lo, hi = base.resolved_band
    w_res = min(-lo, hi)
    if w_res <= 0:
        return _replace(base, Verdict.INCONCLUSIVE, notes="resolved band misses beta = 0")
    windows = w_res * 2.0 ** (np.arange(levels + 1) - levels)
    est = truncated_log_integrals(G, f.grid, windows)
    inc = -np.diff(est)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = inc[1:] / inc[:-1]
    last = ratios[-3:]
    fields = dict(log_integral_estimates=tuple(float(v) for v in est),
                  windows=tuple(float(w) for w in windows),
                  increment_ratios=tuple(float(r) for r in ratios))
    if w_res < min_window:
        return _replace(base, Verdict.INCONCLUSIVE,
                        notes=f"resolved half-width {w_res:.3g} below {min_window}", **fields)
    if np.all(np.isfinite(last)) and np.all(last >= ratio_min):
        return _replace(base, Verdict.CYCLIC, notes="log-integral increments do not decay", **fields)
    return _replace(base, Verdict.INCONCLUSIVE,
                    notes="log-integral increments decay (integral looks convergent)", **fields)


def _replace(v: CyclicityVerdict, verdict: Verdict, **kw) -> CyclicityVerdict:
    d = {k: getattr(v, k) for k in v.__dataclass_fields__}
    d.update(kw)
    d["verdict"] = verdict
    return CyclicityVerdict(**d)
