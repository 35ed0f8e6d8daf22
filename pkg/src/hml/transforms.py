"""Fourier, change-of-variable, Mellin and Cayley transforms.

Conventions
-----------
Forward Fourier: (F h)(a) = (2 pi)^{-1/2} int e^{-i a x} h(x) dx; the inverse
uses e^{+i a x}.  T f(x) = f(e^x) e^{x/2} takes L^2(0, inf) onto L^2(R), and
the Mellin transform is Q = F^{-1} T, so that

    (Q f)(i beta) = (2 pi)^{-1/2} int_0^inf f(t) t^{i beta - 1/2} dt.

Under T the unit interval goes to x < 0, hence Q L^2(0,1) = H^2_+ is the set
of symbols whose forward Fourier transform lives on x <= 0.

On a grid the Fourier pair is an FFT with the phase e^{+-i beta_k x_min} and
scale delta/sqrt(2 pi) (resp. dbeta/sqrt(2 pi)).  The discrete pair is an
exact inverse pair, so Q^{-1} Q is the identity to rounding.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainMismatch, NotUnimodular, SingularNode
from .grid import HALF_LINE, UNIT_INTERVAL, LogGrid, SampledFunction, Side

SQRT2PI = float(np.sqrt(2.0 * np.pi))

SYMBOL_KINDS = ("generic", "H2plus", "H2minus", "unimodular")
UNIMODULAR_TOL = 1e-8


class Direction(str, enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


def phi(s):
    """The Cayley-type map (s - 1/2)/(s + 1/2), unimodular on the imaginary axis."""
    s = np.asarray(s, dtype=complex)
    return (s - 0.5) / (s + 0.5)


def phi_axis(beta):
    """phi(i beta)."""
    return phi(1j * np.asarray(beta, dtype=float))


@dataclass(frozen=True)
class HalfPlaneSymbol(SampledFunction):
    """Frequency-side samples with a class tag.

    ``kind`` is one of ``generic``, ``H2plus``, ``H2minus``, ``unimodular``.
    A unimodular tag is checked on construction.
    """

    kind: str = "generic"

    def __post_init__(self):
        super().__post_init__()
        if self.side is not Side.FREQUENCY:
            raise DomainMismatch("a half-plane symbol lives on the frequency side")
        if self.kind not in SYMBOL_KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.kind == "unimodular":
            dev = np.max(np.abs(np.abs(self.values) - 1.0))
            if dev > UNIMODULAR_TOL:
                raise NotUnimodular(f"| |q| - 1 | reaches {dev:.3g}")

    def with_values(self, values) -> SampledFunction:
        # arithmetic drops the tag: the result need not stay in the class
        return SampledFunction(self.grid, self.side, values)


def as_symbol(f: SampledFunction, kind: str = "generic") -> HalfPlaneSymbol:
    if f.side is not Side.FREQUENCY:
        raise DomainMismatch("expected a frequency-side function")
    return HalfPlaneSymbol(f.grid, Side.FREQUENCY, f.values, kind)


def symbol(expr: Callable, grid: LogGrid, kind: str = "generic") -> HalfPlaneSymbol:
    """Sample ``expr(beta)`` on the frequency grid of ``grid``."""
    with np.errstate(all="ignore"):
        vals = np.broadcast_to(np.asarray(expr(grid.beta), dtype=complex), (grid.n,))
    return HalfPlaneSymbol(grid, Side.FREQUENCY, vals, kind)


# -- discrete Fourier pair -------------------------------------------------

def _line_to_freq(g: np.ndarray, grid: LogGrid, sign: int) -> np.ndarray:
    # G(beta_k) = delta/sqrt(2pi) * sum_j g_j exp(sign*i*beta_k*x_j)
    n = grid.n
    raw = n * np.fft.ifft(g) if sign > 0 else np.fft.fft(g)
    G = np.fft.fftshift(raw)
    return (grid.delta / SQRT2PI) * np.exp(sign * 1j * grid.beta * grid.x_min) * G


def _freq_to_line(G: np.ndarray, grid: LogGrid, sign: int) -> np.ndarray:
    # g(x_j) = dbeta/sqrt(2pi) * sum_k G_k exp(sign*i*beta_k*x_j)
    n = grid.n
    H = np.fft.ifftshift(G * np.exp(sign * 1j * grid.beta * grid.x_min))
    raw = n * np.fft.ifft(H) if sign > 0 else np.fft.fft(H)
    return (grid.dbeta / SQRT2PI) * raw


def _sign(direction: Direction) -> int:
    return -1 if Direction(direction) is Direction.FORWARD else 1


def fourier(f: SampledFunction, direction: Direction = Direction.FORWARD) -> SampledFunction:
    """Fourier transform between the line side and the frequency side.

    A line-side input returns frequency samples; a frequency-side input
    returns line samples.  ``forward`` uses the kernel e^{-i a x}.
    """
    sgn = _sign(direction)
    if f.side is Side.LINE:
        return SampledFunction(f.grid, Side.FREQUENCY, _line_to_freq(f.values, f.grid, sgn))
    if f.side is Side.FREQUENCY:
        return SampledFunction(f.grid, Side.LINE, _freq_to_line(f.values, f.grid, sgn))
    raise DomainMismatch("fourier acts on line or frequency samples; apply cov_T first")


def cov_T(f: SampledFunction, direction: Direction = Direction.FORWARD) -> SampledFunction:
    """T f(x) = f(e^x) e^{x/2} (forward, time -> line) and its inverse."""
    root_t = np.exp(0.5 * f.grid.x)
    if Direction(direction) is Direction.FORWARD:
        if f.side is not Side.TIME:
            raise DomainMismatch("cov_T forward expects time samples")
        return SampledFunction(f.grid, Side.LINE, f.values * root_t)
    if f.side is not Side.LINE:
        raise DomainMismatch("cov_T inverse expects line samples")
    return SampledFunction(f.grid, Side.TIME, f.values / root_t)


def cov_W(f: SampledFunction, direction: Direction = Direction.FORWARD) -> SampledFunction:
    """W f(u) = f(e^{-u}) e^{-u/2}: L^2(0,1) onto L^2(0, inf) in the variable u.

    Forward takes time samples on a unit-interval grid to line samples on the
    reflected grid u in [-x_max, -x_min]; inverse undoes it.
    """
    g = f.grid
    if Direction(direction) is Direction.FORWARD:
        if f.side is not Side.TIME or g.tag != UNIT_INTERVAL:
            raise DomainMismatch("cov_W forward expects time samples on a unit-interval grid")
        out = LogGrid(-g.x_max, -g.x_min, g.n, HALF_LINE)
        vals = (f.values * np.exp(0.5 * g.x))[::-1]
        return SampledFunction(out, Side.LINE, vals)
    if f.side is not Side.LINE or g.x_min < 0:
        raise DomainMismatch("cov_W inverse expects line samples on u >= 0")
    out = LogGrid(-g.x_max, -g.x_min, g.n, UNIT_INTERVAL)
    vals = f.values[::-1] / np.exp(0.5 * out.x)
    return SampledFunction(out, Side.TIME, vals)


def mellin(f: SampledFunction, direction: Direction = Direction.FORWARD) -> SampledFunction:
    """Mellin transform Q = F^{-1} T and its inverse T^{-1} F.

    Forward accepts time samples, or line samples that already equal T f.
    """
    if Direction(direction) is Direction.FORWARD:
        g = cov_T(f) if f.side is Side.TIME else f
        if g.side is not Side.LINE:
            raise DomainMismatch("mellin forward expects time or line samples")
        return fourier(g, Direction.INVERSE)
    if f.side is not Side.FREQUENCY:
        raise DomainMismatch("mellin inverse expects frequency samples")
    return cov_T(fourier(f, Direction.FORWARD), Direction.INVERSE)


def riesz_projection(g: SampledFunction, sign: str = "plus") -> HalfPlaneSymbol:
    """Orthogonal projection of L^2(iR) onto H^2_+ (``plus``) or H^2_- (``minus``).

    The symbol is taken back to the line with the forward transform, the
    exact inverse of the Mellin FFT, where H^2_+ corresponds to x <= 0.
    """
    if g.side is not Side.FREQUENCY:
        raise DomainMismatch("riesz_projection expects frequency samples")
    line = _freq_to_line(g.values, g.grid, -1)
    keep = g.grid.x <= 0.0
    if sign == "minus":
        keep = ~keep
    elif sign != "plus":
        raise ValueError("sign must be 'plus' or 'minus'")
    out = _line_to_freq(np.where(keep, line, 0.0), g.grid, +1)
    return HalfPlaneSymbol(g.grid, Side.FREQUENCY, out, "H2plus" if sign == "plus" else "H2minus")


# -- transforms at arbitrary frequencies ------------------------------------

def _filon_moments(a: np.ndarray):
    """int_0^1 e^{a s} ds and int_0^1 s e^{a s} ds, with series for small |a|."""
    a = np.asarray(a, dtype=complex)
    small = np.abs(a) < 1e-2
    safe = np.where(small, 1.0, a)
    ea = np.exp(safe)
    e0 = (ea - 1.0) / safe
    e1 = (ea * (safe - 1.0) + 1.0) / safe**2
    s = a[small]
    e0[small] = 1 + s / 2 + s**2 / 6 + s**3 / 24 + s**4 / 120 + s**5 / 720
    e1[small] = 0.5 + s / 3 + s**2 / 8 + s**3 / 30 + s**4 / 144 + s**5 / 840
    return e0, e1


def fourier_at(g: SampledFunction, beta, sign: int = +1, chunk: int = 256) -> np.ndarray:
    """(2 pi)^{-1/2} int exp(sign i beta x) g(x) dx at arbitrary ``beta``.

    ``g`` is a line-side function, read as piecewise linear between nodes;
    each panel is integrated exactly (Filon-type), so large beta is fine.
    """
    if g.side is not Side.LINE:
        raise DomainMismatch("fourier_at expects line samples")
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    grid = g.grid
    x0 = grid.x[:-1]
    v0 = g.values[:-1]
    dv = np.diff(g.values)
    out = np.empty(beta.shape, dtype=complex)
    flat = beta.ravel()
    res = out.reshape(-1)
    for lo in range(0, flat.size, chunk):
        b = flat[lo:lo + chunk]
        ph = np.exp(sign * 1j * np.outer(b, x0))
        e0, e1 = _filon_moments(sign * 1j * b * grid.delta)
        res[lo:lo + chunk] = (ph @ v0) * e0 + (ph @ dv) * e1
    return out * (grid.delta / SQRT2PI)


def mellin_at(f: SampledFunction, beta) -> np.ndarray:
    """(Q f)(i beta) at arbitrary real ``beta`` by panel-exact quadrature."""
    g = cov_T(f) if f.side is Side.TIME else f
    return fourier_at(g, beta, +1)


# -- aliasing-aware sampling ------------------------------------------------

def alias_phase(grid: LogGrid) -> tuple[float, float]:
    """Period Omega = 2 pi/delta and phase theta = Omega x_min mod 2 pi.

    Samples of a line function have discrete transform
    sum_m e^{i m theta} G(beta - m Omega); these two numbers describe it.
    """
    omega = 2.0 * np.pi / grid.delta
    r = (grid.x_min / grid.delta) % 1.0
    if min(r, 1.0 - r) < 1e-9:
        r = 0.0
    return omega, 2.0 * np.pi * r


def lattice_pole_sum(w, theta: float, omega: float):
    """sum over integers m of e^{i m theta}/(w - m omega), symmetric summation."""
    w = np.asarray(w, dtype=complex)
    z = w / omega
    if theta == 0.0:
        return (np.pi / omega) / np.tan(np.pi * z)
    return (np.pi / omega) * np.exp(1j * (theta - np.pi) * z) / np.sin(np.pi * z)


def alias_sum(func: Callable, grid: LogGrid, terms: int = 64) -> np.ndarray:
    """Brute-force periodisation sum_{|m| <= terms} e^{i m theta} func(beta - m Omega)."""
    omega, theta = alias_phase(grid)
    out = np.zeros(grid.n, dtype=complex)
    for m in range(-terms, terms + 1):
        out += np.exp(1j * m * theta) * func(grid.beta - m * omega)
    return out


# -- Cayley map between disk and half-plane ---------------------------------

@dataclass(frozen=True)
class CircleSamples:
    """Values on the offset angle grid theta_k = 2 pi (k + 1/2)/n.

    ``domain`` is ``disk`` (values at z_k = e^{i theta_k}) or ``axis``
    (values at the image points i beta_k, beta_k = cot(theta_k/2)/2).
    """

    theta: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    domain: str

    @property
    def z(self) -> np.ndarray:
        return np.exp(1j * self.theta)

    @property
    def beta(self) -> np.ndarray:
        return 0.5 / np.tan(0.5 * self.theta)


def angle_grid(n: int) -> np.ndarray:
    return 2.0 * np.pi * (np.arange(n) + 0.5) / n


def _check_angles(theta):
    theta = np.asarray(theta, dtype=float)
    if np.any(np.abs(np.remainder(theta + np.pi, 2 * np.pi) - np.pi) < 1e-14):
        raise SingularNode("the angle grid contains z = 1")
    return theta


def cayley_J(F, direction: Direction = Direction.FORWARD, n: int = 1024, theta=None) -> CircleSamples:
    """J f(s) = (2 pi)^{-1/2} f(phi(s))/(s + 1/2) and its inverse.

    Forward: ``F`` is a disk function (callable of z, or an array on the angle
    grid, or :class:`CircleSamples` with domain ``disk``) and the result holds
    J f at i beta_k.  Inverse: ``F`` is a callable of beta (or axis samples)
    and the result holds (J^{-1} F)(z_k) = sqrt(2 pi) F(i beta_k)/(1 - z_k).
    """
    if isinstance(F, CircleSamples):
        theta, vals_in = F.theta, F.values
    else:
        theta = angle_grid(n) if theta is None else theta
        vals_in = None
    theta = _check_angles(theta)
    z = np.exp(1j * theta)
    s = 0.5 * (1 + z) / (1 - z)
    if Direction(direction) is Direction.FORWARD:
        if vals_in is None:
            vals_in = np.asarray(F(z) if callable(F) else F, dtype=complex)
        vals = np.broadcast_to(vals_in, theta.shape) / (SQRT2PI * (s + 0.5))
        return CircleSamples(theta, vals, "axis")
    if vals_in is None:
        b = s.imag
        vals_in = np.asarray(F(b) if callable(F) else F, dtype=complex)
    vals = SQRT2PI * np.broadcast_to(vals_in, theta.shape) / (1 - z)
    return CircleSamples(theta, vals, "disk")
