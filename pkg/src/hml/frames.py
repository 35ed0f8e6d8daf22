"""Frame bounds for operator orbits.

A vector v is a frame vector for T when
c1 ||x||^2 <= sum_n |<x, T^n v>|^2 <= c2 ||x||^2 for all x.  For
I - H_1^* (unitarily the shift M_phi on H^2_+) this happens exactly when the
disk symbol u = J^{-1} Q v and 1/u are bounded analytic functions; then
c1 = min |u|^2 and c2 = max |u|^2 on the circle.

Two estimators are provided: a Gram method that compresses the truncated
frame operator onto a few Laguerre basis functions, and a symbol method that
evaluates u on the circle.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainMismatch, GridMismatch, InsufficientOrbit
from .grid import SampledFunction, Side, inner_product
from .hardy_ops import OperatorHandle
from .laguerre import laguerre_orbit_fn, model_basis_table
from .transforms import Direction, angle_grid, cayley_J, mellin_at, phi_axis, riesz_projection

FRAME_MIN_ABS = 1e-3
ANALYTIC_TOL = 1e-3


@dataclass(frozen=True)
class FrameReport:
    c1: float
    c2: float
    truncation_M: int
    probe_dim: int
    method: str
    verdict: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def orbit(op, v: SampledFunction, M: int) -> list:
    """[v, op v, ..., op^{M-1} v]; ``op`` is an OperatorHandle or a callable."""
    if M < 1:
        raise ValueError("M must be at least 1")
    step = op.apply if isinstance(op, OperatorHandle) else op
    out = [v]
    for _ in range(M - 1):
        out.append(step(out[-1]))
    return out


def jacobi_eigvalsh(A, tol: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by the cyclic Jacobi method (ascending).

    Each rotation zeroes one off-diagonal pair a_pq with a unitary plane
    rotation that carries the phase of a_pq.
    """
    a = np.array(A, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    a = 0.5 * (a + a.conj().T)
    scale = max(np.linalg.norm(a), 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2), 0.0))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                e = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # columns: a <- a J with J[p,p]=c, J[q,q]=c, J[p,q]=s e, J[q,p]=-s conj(e)
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * np.conj(e) * cq
                a[:, q] = s * e * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * e * rq
                a[q, :] = s * np.conj(e) * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.diag(a).real)


def frame_bounds_gram(vectors: Sequence[SampledFunction], probe_dim: int = 8,
                      probes: Sequence[SampledFunction] | None = None) -> FrameReport:
    """Extreme eigenvalues of the truncated frame operator on a probe space.

    B_ij = sum_n conj(<e_i, v_n>) <e_j, v_n>, with e_i the orthonormal
    functions L_i(-log t) chi unless ``probes`` is given.
    """
    M = len(vectors)
    if probe_dim > M / 2:
        raise InsufficientOrbit(f"probe_dim={probe_dim} needs at least {2 * probe_dim} orbit vectors, got {M}")
    grid = vectors[0].grid
    for v in vectors:
        if not v.grid.same_as(grid) or v.side != vectors[0].side:
            raise GridMismatch("orbit vectors must share a grid and side")
    if probes is None:
        probes = [laguerre_orbit_fn(i, "unit", grid) for i in range(probe_dim)]
    C = np.array([[inner_product(e, v) for e in probes] for v in vectors])
    B = C.conj().T @ C
    ev = jacobi_eigvalsh(B)
    G = np.array([[inner_product(a, b) for b in probes] for a in probes])
    return FrameReport(float(max(ev[0], 0.0)), float(ev[-1]), M, len(probes), "gram_eigen",
                       details={"probe_gram_defect": float(np.max(np.abs(G - np.eye(len(probes)))))})


def disk_symbol(f: SampledFunction, circle_n: int = 4096):
    """u = J^{-1} Q f on the offset angle grid; ``f`` is a time or line function."""
    theta = angle_grid(circle_n)
    return cayley_J(lambda b: mellin_at(f, b), Direction.INVERSE, theta=theta)


def fourier_coefficients(theta: np.ndarray, u: np.ndarray) -> np.ndarray:
    """c_m, m = 0..N-1 (negative m at the top), of u sampled on the offset grid."""
    n = u.size
    m = np.fft.fftfreq(n, 1.0 / n)
    return np.fft.fft(u) / n * np.exp(-1j * m * theta[0])


def frame_symbol_check(f: SampledFunction, circle_n: int = 4096,
                       min_abs: float = FRAME_MIN_ABS, analytic_tol: float = ANALYTIC_TOL) -> FrameReport:
    """Symbol extrema c1 = min|u|^2, c2 = max|u|^2 and a frame verdict.

    The verdict is ``frame vector`` when min|u| > ``min_abs`` and the
    negative Fourier coefficients of u are at most ``analytic_tol`` relative
    to the largest coefficient; otherwise ``not-frame``.
    """
    if circle_n < 256:
        raise ValueError("circle_n must be at least 256")
    samples = disk_symbol(f, circle_n)
    u = samples.values
    a = np.abs(u)
    coef = fourier_coefficients(samples.theta, u)
    m = np.fft.fftfreq(circle_n, 1.0 / circle_n)
    neg = float(np.max(np.abs(coef[m < 0])) / np.max(np.abs(coef)))
    ok = a.min() > min_abs and neg <= analytic_tol
    return FrameReport(float(a.min() ** 2), float(a.max() ** 2), 0, circle_n, "symbol_extrema",
                       "frame vector" if ok else "not-frame",
                       details={"min_abs_u": float(a.min()), "negative_coefficient_ratio": neg})


def negative_frame_probe(kind: str, v: SampledFunction, M: int = 64, K: int = 16) -> np.ndarray:
    """k -> sum_{n<M} |<p_k, A^n v>|^2 for k = 0..K.

    ``backward_shift``: A = P_+ M_conj(phi) on H^2_+ with probes u_k.
    ``bilateral_shift``: A = M_phi on L^2(iR) with probes v_k, the images of
    z^{-k-1}.  In both cases the sums tend to zero as k grows, so no lower
    frame bound can hold.
    """
    if K > M:
        raise ValueError("K must not exceed M")
    if v.side is not Side.FREQUENCY:
        raise DomainMismatch("v must be a frequency-side symbol")
    grid = v.grid
    ph = phi_axis(grid.beta)
    if kind == "backward_shift":
        sign = "plus"
        step = lambda g: riesz_projection(g.with_values(np.conj(ph) * g.values), "plus")  # noqa: E731
    elif kind == "bilateral_shift":
        sign = "minus"
        step = lambda g: g.with_values(ph * g.values)  # noqa: E731
    else:
        raise ValueError("kind must be 'backward_shift' or 'bilateral_shift'")
    probes = model_basis_table(K, sign, grid)
    out = np.zeros(K + 1)
    g = v
    for _ in range(M):
        c = probes.conj() @ g.values * grid.dbeta
        out += np.abs(c) ** 2
        g = step(g)
    return out
