import numpy as np
import pytest

from hml.commutant import analyticity_defect, commutant_apply, commutation_defect
from hml.errors import DomainMismatch, GridMismatch, NotAnalytic, UnboundedSymbol
from hml.frames import frame_symbol_check
from hml.grid import (LogGrid, half_line_grid, norm, random_smooth, sample,
                      unit_interval_grid)
from hml.hardy_ops import apply_hardy
from hml.transforms import phi_axis, symbol

G = LogGrid(-40.0, 40.0, 8192)
U = unit_interval_grid()


def _phi_bar(b):
    return np.conj(phi_axis(b))


def test_unit_symbol_is_identity():
    f = random_smooth(G, np.random.default_rng(0))
    assert norm(commutant_apply("Hinf", lambda b: np.ones_like(b), f) - f) < 1e-12
    h = random_smooth(U, np.random.default_rng(1))
    assert norm(commutant_apply("H1star", lambda b: np.ones_like(b), h) - h) < 1e-5
    assert commutation_defect("Hinf", lambda b: np.ones_like(b), grid=G) < 1e-12


def test_phi_bar_is_I_minus_hinf():
    f = random_smooth(G, np.random.default_rng(2))
    assert norm(commutant_apply("Hinf", _phi_bar, f) - (f - apply_hardy("Hinf", f))) < 1e-4


def test_phi_is_I_minus_h1star():
    unit = LogGrid(-26.0, 0.0, 8192, "unit-interval")
    h = random_smooth(unit, np.random.default_rng(3))
    assert norm(commutant_apply("H1star", phi_axis, h) - (h - apply_hardy("H1star", h))) < 1e-4


@pytest.mark.parametrize("which, g, grid", [
    ("Hinf", np.tanh, G), ("Hinf", _phi_bar, G),
    ("Hinf", lambda b: phi_axis(b) ** 2, G), ("H1star", lambda b: phi_axis(b) ** 2, None),
])
def test_commutation_defects_are_small(which, g, grid):
    assert commutation_defect(which, g, grid=grid) < 1e-3


def test_multiplicativity():
    f = random_smooth(G, np.random.default_rng(4))
    g1, g2 = np.tanh, _phi_bar
    lhs = commutant_apply("Hinf", g1, commutant_apply("Hinf", g2, f))
    rhs = commutant_apply("Hinf", lambda b: g1(b) * g2(b), f)
    assert norm(lhs - rhs) < 1e-5
    h = random_smooth(U, np.random.default_rng(5))
    lhs = commutant_apply("H1star", phi_axis, commutant_apply("H1star", phi_axis, h))
    rhs = commutant_apply("H1star", lambda b: phi_axis(b) ** 2, h)
    assert norm(lhs - rhs) < 1e-5


def test_norm_bound():
    rng = np.random.default_rng(6)
    for g, top in [(np.tanh, 1.0), (lambda b: 3 * np.exp(-b * b), 3.0)]:
        f = random_smooth(G, rng)
        assert norm(commutant_apply("Hinf", g, f)) <= top * norm(f) + 1e-6


def test_sampled_symbol_input():
    f = random_smooth(G, np.random.default_rng(7))
    s = symbol(np.tanh, G)
    assert norm(commutant_apply("Hinf", s, f) - commutant_apply("Hinf", np.tanh, f)) == 0.0
    with pytest.raises(GridMismatch):
        commutant_apply("Hinf", symbol(np.tanh, half_line_grid()), f)
    with pytest.raises(DomainMismatch):
        commutant_apply("Hinf", f, f)


def test_unbounded_symbol_rejected():
    f = random_smooth(G, np.random.default_rng(8))
    with pytest.raises(UnboundedSymbol):
        commutant_apply("Hinf", lambda b: np.exp(b * b), f)
    with pytest.raises(UnboundedSymbol):
        commutant_apply("Hinf", lambda b: 1 / b, f)


def test_non_analytic_symbol_rejected_on_unit_interval():
    h = random_smooth(U, np.random.default_rng(9))
    with pytest.raises(NotAnalytic):
        commutant_apply("H1star", _phi_bar, h)
    grid = LogGrid(-26.0, 26.0, 4096)
    assert analyticity_defect(phi_axis, grid) < 1e-3
    assert analyticity_defect(_phi_bar, grid) > 0.5


def test_domains():
    h = random_smooth(U, np.random.default_rng(10))
    f = random_smooth(G, np.random.default_rng(11))
    with pytest.raises(DomainMismatch):
        commutant_apply("Hinf", np.tanh, h)
    with pytest.raises(DomainMismatch):
        commutant_apply("H1star", phi_axis, f)
    with pytest.raises(ValueError):
        commutation_defect("Hinf", np.tanh, trials=2)


def test_invertible_analytic_symbol_gives_frame_vector():
    # psi(z) = 2 - z composed with phi; 1/psi is bounded on the disk
    chi = sample(lambda t: np.ones_like(t), U)
    v = commutant_apply("H1star", lambda b: 2 - phi_axis(b), chi)
    r = frame_symbol_check(v)
    assert r.verdict == "frame vector"
    assert r.c1 == pytest.approx(1.0, rel=0.05) and r.c2 == pytest.approx(9.0, rel=0.05)
