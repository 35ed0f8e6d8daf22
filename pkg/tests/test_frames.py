import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hml.errors import DomainMismatch, GridMismatch, InsufficientOrbit
from hml.frames import (frame_bounds_gram, frame_symbol_check, jacobi_eigvalsh,
                        negative_frame_probe, orbit)
from hml.grid import LogGrid, SampledFunction, Side, inner_product, sample, unit_interval_grid
from hml.hardy_ops import apply_hardy, identity_operator, shift_operator
from hml.laguerre import laguerre_orbit_fn, model_basis
from hml.transforms import HalfPlaneSymbol

U = unit_interval_grid()
WIDE = LogGrid(-64.0, 0.0, 8192, "unit-interval")


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2 ** 32 - 1))
def test_jacobi_matches_numpy(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    A = A + A.conj().T
    assert np.allclose(jacobi_eigvalsh(A), np.linalg.eigvalsh(A), atol=1e-10 * (1 + np.abs(A).max()))


def test_jacobi_diagonal_and_shape():
    assert np.array_equal(jacobi_eigvalsh(np.diag([3.0, -1.0, 2.0])), [-1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        jacobi_eigvalsh(np.zeros((2, 3)))


def test_orbit_of_shift_on_chi_gives_laguerre():
    # the exact adjoint leaves delta/2 at t = 1, so take a fine step
    g = unit_interval_grid(n=1 << 14)
    chi = sample(lambda t: np.ones_like(t), g)
    out = orbit(shift_operator(g), chi, 4)
    for n, v in enumerate(out):
        want = laguerre_orbit_fn(n, "unit", g)
        assert np.sqrt(inner_product(v - want, v - want).real) < 1e-4


def test_orbit_trivial_cases():
    chi = sample(lambda t: np.ones_like(t), U)
    assert orbit(shift_operator(U), chi, 1) == [chi]
    same = orbit(identity_operator(U), chi, 5)
    assert len(same) == 5 and all(v is chi for v in same)
    with pytest.raises(ValueError):
        orbit(identity_operator(U), chi, 0)


def test_orthonormal_orbit_has_unit_bounds():
    chi = sample(lambda t: np.ones_like(t), WIDE)
    r = frame_bounds_gram(orbit(shift_operator(WIDE), chi, 32), probe_dim=8)
    assert 0.95 <= r.c1 <= r.c2 <= 1.05
    assert r.method == "gram_eigen" and r.truncation_M == 32


def test_repeated_vector_has_zero_lower_bound():
    chi = sample(lambda t: np.ones_like(t), U)
    r = frame_bounds_gram([chi] * 16, probe_dim=4)
    assert r.c1 == pytest.approx(0.0, abs=1e-10)
    assert r.c2 == pytest.approx(16.0, rel=1e-3)


def test_insufficient_orbit_and_mixed_grids():
    chi = sample(lambda t: np.ones_like(t), U)
    with pytest.raises(InsufficientOrbit):
        frame_bounds_gram([chi] * 10, probe_dim=8)
    other = sample(lambda t: np.ones_like(t), unit_interval_grid(n=256))
    with pytest.raises(GridMismatch):
        frame_bounds_gram([chi] * 3 + [other] * 3, probe_dim=2)


def test_scaling_covariance():
    mono = sample(lambda t: t, WIDE)
    op = shift_operator(WIDE)
    a = frame_bounds_gram(orbit(op, mono, 16), probe_dim=4)
    b = frame_bounds_gram(orbit(op, (1 - 2j) * mono, 16), probe_dim=4)
    assert b.c1 == pytest.approx(5 * a.c1, rel=1e-9)
    assert b.c2 == pytest.approx(5 * a.c2, rel=1e-9)


def test_symbol_of_chi_is_one():
    r = frame_symbol_check(sample(lambda t: np.ones_like(t), U))
    assert r.c1 == pytest.approx(1.0, abs=0.02) and r.c2 == pytest.approx(1.0, abs=0.02)
    assert r.verdict == "frame vector" and r.method == "symbol_extrema"


def test_symbol_of_t_is_one_over_two_minus_z():
    r = frame_symbol_check(sample(lambda t: t, U))
    assert r.c1 == pytest.approx(1 / 9, rel=0.15)
    assert r.c2 == pytest.approx(1.0, rel=0.05)
    assert r.verdict == "frame vector"


@pytest.mark.parametrize("a", [0.0, 0.5, 1.0])
def test_gram_and_symbol_methods_agree(a):
    f = sample(lambda t: t ** a, WIDE)
    sym = frame_symbol_check(sample(lambda t: t ** a, U))
    gram = frame_bounds_gram(orbit(shift_operator(WIDE), f, 64), probe_dim=8)
    assert abs(gram.c1 - sym.c1) / sym.c1 <= 0.2
    assert abs(gram.c2 - sym.c2) / sym.c2 <= 0.2


def test_two_minus_shift_applied_to_chi():
    chi = sample(lambda t: np.ones_like(t), U)
    f = 2 * chi - (chi - apply_hardy("H1star", chi))
    r = frame_symbol_check(f)
    assert r.verdict == "frame vector"
    assert r.c1 == pytest.approx(1.0, rel=0.05)
    assert r.c2 == pytest.approx(9.0, rel=0.05)


def test_minus_log_is_not_a_frame_vector():
    # u = 1 - z vanishes at z = 1
    r = frame_symbol_check(sample(lambda t: -np.log(t), U))
    assert r.verdict == "not-frame"
    assert r.c1 < 1e-4


def test_symbol_check_guards():
    with pytest.raises(ValueError):
        frame_symbol_check(sample(lambda t: t, U), circle_n=64)


def test_negative_probes_decay():
    g = LogGrid(-512.0, 512.0, 1 << 16)
    back = negative_frame_probe("backward_shift", model_basis(0, "plus", g), M=64, K=16)
    assert back[16] < 1e-2 * back[0]
    b = g.beta
    w = np.exp(-b * b / 2) * (1 + 0.5j * b)
    v = HalfPlaneSymbol(g, Side.FREQUENCY, w / np.sqrt(np.sum(np.abs(w) ** 2) * g.dbeta))
    bil = negative_frame_probe("bilateral_shift", v, M=64, K=16)
    assert bil[16] < 1e-2 * bil[0]


def test_negative_probe_of_zero_and_guards():
    g = LogGrid(-26.0, 26.0, 1024)
    z = SampledFunction(g, Side.FREQUENCY, np.zeros(g.n))
    assert np.all(negative_frame_probe("backward_shift", z, M=8, K=4) == 0)
    with pytest.raises(ValueError):
        negative_frame_probe("backward_shift", z, M=4, K=8)
    with pytest.raises(ValueError):
        negative_frame_probe("sideways", z, M=8, K=4)
    with pytest.raises(DomainMismatch):
        negative_frame_probe("backward_shift", SampledFunction(g, Side.TIME, np.zeros(g.n)), M=8, K=4)
