"""Log-coordinate grids and sampled functions.

A function on (0, inf) or (0, 1) is stored through its samples at
t_j = exp(x_j) on a uniform grid x_j = x_min + j*delta.  The same grid can be
read as a plain grid on the real line (after the change of variables
Tf(x) = f(e^x) e^{x/2}) and it carries a dual frequency grid used by the FFT.

Three sides are distinguished, each with its own quadrature weights:

``time``       samples f(t_j); weights w_j * t_j * delta
``line``       samples g(x_j) of a function on R; weights w_j * delta
``frequency``  samples G(beta_k) on the dual grid; weights dbeta

where w_j are trapezoid factors (1/2 at both ends, 1 elsewhere).
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import DomainMismatch, GridMismatch, InvalidRange, InvalidSize, NonFiniteSample

HALF_LINE = "half-line"
UNIT_INTERVAL = "unit-interval"
_TAGS = (HALF_LINE, UNIT_INTERVAL)

DEFAULT_HALF_LINE = (-26.0, 26.0, 4096)
DEFAULT_UNIT_INTERVAL = (-26.0, 0.0, 2048)


class Side(str, enum.Enum):
    TIME = "time"
    LINE = "line"
    FREQUENCY = "frequency"


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class FrequencyGrid:
    """Dual grid beta_k = 2*pi*k'/(n*delta), k' = -n/2 .. n/2-1 (sorted)."""

    beta: np.ndarray = field(repr=False)
    dbeta: float

    @classmethod
    def from_log_grid(cls, grid: "LogGrid") -> "FrequencyGrid":
        n, d = grid.n, grid.delta
        beta = 2.0 * np.pi * np.arange(-n // 2, n // 2) / (n * d)
        beta.setflags(write=False)
        return cls(beta=beta, dbeta=2.0 * np.pi / (n * d))


@dataclass(frozen=True)
class LogGrid:
    """Uniform grid in x = log t.

    Parameters
    ----------
    x_min, x_max : float
        Window in the log coordinate.
    n : int
        Number of nodes, a power of two, at least 16.
    tag : str
        ``"half-line"`` for (0, inf) or ``"unit-interval"`` for (0, 1).
    """

    x_min: float
    x_max: float
    n: int
    tag: str = HALF_LINE

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)) or self.x_min >= self.x_max:
            raise InvalidRange(f"need x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if int(self.n) != self.n or not _is_power_of_two(int(self.n)) or self.n < 16:
            raise InvalidSize(f"n must be a power of two >= 16, got {self.n}")
        if self.tag not in _TAGS:
            raise DomainMismatch(f"unknown domain tag {self.tag!r}")
        if self.tag == UNIT_INTERVAL and self.x_max > 0:
            raise DomainMismatch("a unit-interval grid needs x_max <= 0")
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))
        object.__setattr__(self, "n", int(self.n))

    @property
    def delta(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @cached_property
    def x(self) -> np.ndarray:
        x = self.x_min + self.delta * np.arange(self.n)
        x[-1] = self.x_max
        x.setflags(write=False)
        return x

    @cached_property
    def t(self) -> np.ndarray:
        t = np.exp(self.x)
        t.setflags(write=False)
        return t

    @cached_property
    def trapezoid(self) -> np.ndarray:
        w = np.ones(self.n)
        w[0] = w[-1] = 0.5
        w.setflags(write=False)
        return w

    @cached_property
    def frequency(self) -> FrequencyGrid:
        return FrequencyGrid.from_log_grid(self)

    @property
    def beta(self) -> np.ndarray:
        return self.frequency.beta

    @property
    def dbeta(self) -> float:
        return self.frequency.dbeta

    def weights(self, side: Side) -> np.ndarray:
        side = Side(side)
        if side is Side.TIME:
            return self.trapezoid * self.t * self.delta
        if side is Side.LINE:
            return self.trapezoid * self.delta
        return np.full(self.n, self.dbeta)

    def same_as(self, other: "LogGrid") -> bool:
        return (self.n == other.n and self.tag == other.tag
                and self.x_min == other.x_min and self.x_max == other.x_max)


def build_log_grid(x_min: float, x_max: float, n: int, tag: str = HALF_LINE) -> LogGrid:
    return LogGrid(x_min, x_max, n, tag)


def half_line_grid(n: int | None = None, x_min: float | None = None,
                   x_max: float | None = None) -> LogGrid:
    a, b, m = DEFAULT_HALF_LINE
    return LogGrid(a if x_min is None else x_min, b if x_max is None else x_max,
                   m if n is None else n, HALF_LINE)


def unit_interval_grid(n: int | None = None, x_min: float | None = None,
                       x_max: float | None = None) -> LogGrid:
    a, b, m = DEFAULT_UNIT_INTERVAL
    return LogGrid(a if x_min is None else x_min, b if x_max is None else x_max,
                   m if n is None else n, UNIT_INTERVAL)


@dataclass(frozen=True)
class SampledFunction:
    """Complex samples of a function on one side of a :class:`LogGrid`."""

    grid: LogGrid
    side: Side
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "side", Side(self.side))
        v = np.array(self.values, dtype=complex)
        if v.shape != (self.grid.n,):
            raise InvalidSize(f"expected {self.grid.n} values, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def with_values(self, values) -> "SampledFunction":
        return SampledFunction(self.grid, self.side, values)

    def _check(self, other: "SampledFunction"):
        check_compatible(self, other)

    def __add__(self, other):
        self._check(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return self.with_values(self.values - other.values)

    def __neg__(self):
        return self.with_values(-self.values)

    def __mul__(self, c):
        if isinstance(c, SampledFunction):
            return NotImplemented
        return self.with_values(c * self.values)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.with_values(self.values / c)

    @property
    def nodes(self) -> np.ndarray:
        if self.side is Side.TIME:
            return self.grid.t
        if self.side is Side.LINE:
            return self.grid.x
        return self.grid.beta

    def norm(self) -> float:
        return norm(self)


def check_compatible(f: SampledFunction, g: SampledFunction) -> None:
    if not f.grid.same_as(g.grid):
        raise GridMismatch("functions live on different grids")
    if f.side != g.side:
        raise GridMismatch(f"functions live on different sides ({f.side.value}, {g.side.value})")


def _evaluate(expr: Callable, nodes: np.ndarray, where: str) -> np.ndarray:
    with np.errstate(all="ignore"):
        try:
            vals = np.asarray(expr(nodes), dtype=complex)
        except (ZeroDivisionError, OverflowError, ValueError) as exc:
            raise NonFiniteSample(f"expression failed on the {where} nodes: {exc}") from exc
    vals = np.broadcast_to(vals, nodes.shape).copy()
    bad = ~np.isfinite(vals)
    if bad.any():
        j = int(np.argmax(bad))
        raise NonFiniteSample(f"non-finite sample at {where} node {j} ({nodes[j]!r})")
    return vals


def sample(expr: Callable, grid: LogGrid) -> SampledFunction:
    """Sample ``expr(t)`` at t_j = exp(x_j); ``expr`` must accept an array."""
    return SampledFunction(grid, Side.TIME, _evaluate(expr, grid.t, "time"))


def sample_line(expr: Callable, grid: LogGrid) -> SampledFunction:
    """Sample a function of the real variable x at the nodes x_j."""
    return SampledFunction(grid, Side.LINE, _evaluate(expr, grid.x, "line"))


def sample_frequency(expr: Callable, grid: LogGrid) -> SampledFunction:
    """Sample a function of beta (a point i*beta of the imaginary axis)."""
    return SampledFunction(grid, Side.FREQUENCY, _evaluate(expr, grid.beta, "frequency"))


def zeros_like(f: SampledFunction) -> SampledFunction:
    return f.with_values(np.zeros(f.grid.n))


def inner_product(f: SampledFunction, g: SampledFunction) -> complex:
    """Quadrature form of <f, g> = integral of f * conj(g)."""
    check_compatible(f, g)
    w = f.grid.weights(f.side)
    return complex(np.sum(w * f.values * np.conj(g.values)))


def norm(f: SampledFunction) -> float:
    w = f.grid.weights(f.side)
    return float(np.sqrt(np.sum(w * np.abs(f.values) ** 2)))


def normalized(f: SampledFunction) -> SampledFunction:
    return f / norm(f)


def zero_extend(f: SampledFunction) -> SampledFunction:
    """Extend a unit-interval function by zero to t > 1.

    The result lives on a half-line grid with the same x_min and delta and
    twice as many nodes, so the first ``n`` nodes coincide with the input grid.
    """
    g = f.grid
    if g.tag != UNIT_INTERVAL:
        raise DomainMismatch("zero_extend expects a unit-interval function")
    n2 = 2 * g.n
    big = LogGrid(g.x_min, g.x_min + (n2 - 1) * g.delta, n2, HALF_LINE)
    v = np.zeros(n2, dtype=complex)
    v[: g.n] = f.values
    return SampledFunction(big, f.side, v)


def restrict(f: SampledFunction, grid: LogGrid) -> SampledFunction:
    """Keep the first ``grid.n`` nodes of ``f`` (inverse of :func:`zero_extend`)."""
    if abs(f.grid.delta - grid.delta) > 1e-12 * grid.delta or f.grid.x_min != grid.x_min:
        raise GridMismatch("grid is not a prefix of the function's grid")
    return SampledFunction(grid, f.side, f.values[: grid.n])


_CSV_HEADER = {Side.TIME: "t", Side.LINE: "x", Side.FREQUENCY: "beta"}


def to_csv(f: SampledFunction, path) -> None:
    """Write ``node,re,im`` rows with round-trip float formatting."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([_CSV_HEADER[f.side], "re", "im"])
        for node, v in zip(f.nodes, f.values):
            w.writerow([repr(float(node)), repr(float(v.real)), repr(float(v.imag))])


def from_csv(path, grid: LogGrid) -> SampledFunction:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    head = rows[0][0]
    side = {v: k for k, v in _CSV_HEADER.items()}.get(head)
    if side is None:
        raise DomainMismatch(f"unrecognised CSV header {rows[0]!r}")
    data = np.array([[float(c) for c in r] for r in rows[1:]])
    if data.shape[0] != grid.n:
        raise GridMismatch(f"CSV has {data.shape[0]} rows, grid has {grid.n} nodes")
    nodes = {Side.TIME: grid.t, Side.LINE: grid.x, Side.FREQUENCY: grid.beta}[side]
    if not np.allclose(data[:, 0], nodes, rtol=1e-12, atol=1e-300):
        raise GridMismatch("CSV nodes do not match the grid")
    return SampledFunction(grid, side, data[:, 1] + 1j * data[:, 2])


def decaying_cumsum(c: np.ndarray, r: float, block: int | None = None) -> np.ndarray:
    """J_k = r J_{k-1} + c_k with J_{-1} = 0, for 0 < r <= 1, without a Python loop.

    Within a block J_k = r^k sum_{j<=k} r^{-j} c_j is a plain cumulative
    sum; the block length keeps r^{-j} below 1e100 and the running value is
    carried across blocks.
    """
    c = np.asarray(c, dtype=complex)
    if not 0.0 < r <= 1.0:
        raise ValueError("decay factor must lie in (0, 1]")
    if block is None:
        block = c.size if r == 1.0 else max(1, int(230.0 / -np.log(r)))
    out = np.empty_like(c)
    carry = 0.0j
    for s0 in range(0, c.size, block):
        seg = c[s0:s0 + block]
        k = np.arange(1, seg.size + 1)
        up = r ** -(k - 1.0)
        down = r ** k
        out[s0:s0 + seg.size] = down / r * np.cumsum(up * seg) + down * carry
        carry = out[s0 + seg.size - 1]
    return out


def random_smooth(grid: LogGrid, rng: np.random.Generator, packets: int = 3,
                  side: Side = Side.TIME) -> SampledFunction:
    """Random unit-norm time function whose image under T is a sum of Gaussian packets.

    On a half-line grid the packets sit in the middle fifth of the window, so
    kernels with exp(-|x|/2) tails are negligible at the edges; on
    a unit-interval grid they sit well to the left of t = 1 so that the
    function is negligible at both ends.  Spectra are concentrated at
    |beta| of order one, where the quadrature is accurate.  ``side='line'``
    returns the packets themselves, which avoids exp(x) on very wide windows.
    """
    x = grid.x
    lo, hi = grid.x_min, grid.x_max
    if grid.tag == UNIT_INTERVAL:
        a, b = lo + 0.45 * (hi - lo), hi - 0.25 * (hi - lo)
        sig_lo, sig_hi = 0.6, 1.2
    else:
        a, b = lo + 0.4 * (hi - lo), hi - 0.4 * (hi - lo)
        sig_lo, sig_hi = 0.8, 2.0
    line = np.zeros(grid.n, dtype=complex)
    for _ in range(packets):
        c = rng.uniform(a, b)
        s = rng.uniform(sig_lo, sig_hi)
        k = rng.uniform(-1.0, 1.0)
        amp = rng.standard_normal() + 1j * rng.standard_normal()
        line += amp * np.exp(-((x - c) ** 2) / (2 * s * s) + 1j * k * x)
    if Side(side) is Side.LINE:
        f = SampledFunction(grid, Side.LINE, line)
    else:
        f = SampledFunction(grid, Side.TIME, line * np.exp(-0.5 * x))
    return f / norm(f)
