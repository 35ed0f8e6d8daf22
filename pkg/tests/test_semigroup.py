import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hml.errors import DomainMismatch, NegativeTime, StepMisaligned
from hml.grid import SampledFunction, Side, half_line_grid, norm, sample, unit_interval_grid
from hml.hardy_ops import apply_hardy
from hml.semigroup import (apply_Ct, cogenerator_residual, generator_apply, hardy_via_semigroup,
                           shift_line)
from hml.transforms import cov_T

G = half_line_grid()


def _f():
    return sample(lambda t: 1 / (1 + t), G)


def test_zero_time_is_identity():
    f = _f()
    assert np.array_equal(apply_Ct(f, 0.0).values, f.values)


def test_indicator_is_dilated():
    chi = sample(lambda t: (t < 1).astype(float), G)
    t = 100 * G.delta
    out = apply_Ct(chi, t).values
    want = np.exp(-t / 2) * (G.t < np.exp(t) * (1 - 1e-12))
    # the first 100 nodes would come from below t_min and are zero
    assert np.all(out[:100] == 0)
    assert np.max(np.abs(out - want)[100:]) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 400), st.integers(0, 400))
def test_semigroup_law(i, j):
    f = _f()
    s, t = i * G.delta, j * G.delta
    assert norm(apply_Ct(apply_Ct(f, s), t) - apply_Ct(f, s + t)) < 1e-6


def test_isometry_away_from_right_edge():
    f = sample(lambda t: np.exp(-t), G)
    assert norm(apply_Ct(f, 64 * G.delta)) == pytest.approx(norm(f), rel=1e-4)


def test_conjugation_is_a_plain_translation():
    f = _f()
    for k in (7, 64, 300):
        t = k * G.delta
        assert norm(cov_T(apply_Ct(f, t)) - shift_line(cov_T(f), t)) < 1e-12


def test_unaligned_time_interpolates():
    f = sample(lambda t: np.exp(-t), G)
    t = 10.5 * G.delta
    out = apply_Ct(f, t).values
    want = np.exp(-t / 2) * np.exp(-G.t * np.exp(-t))
    assert np.max(np.abs(out - want)[20:]) < 1e-4


def test_errors():
    f = _f()
    with pytest.raises(NegativeTime):
        apply_Ct(f, -1.0)
    with pytest.raises(DomainMismatch):
        apply_Ct(sample(lambda t: t, unit_interval_grid(n=64)), 0.1)
    with pytest.raises(DomainMismatch):
        shift_line(f, 0.1)
    with pytest.raises(StepMisaligned):
        hardy_via_semigroup(f, 40.0, dt=0.5 * G.delta)
    with pytest.raises(ValueError):
        hardy_via_semigroup(f, 10.0)


@pytest.mark.parametrize("expr", [lambda t: (t < 1).astype(float), lambda t: np.exp(-t),
                                  lambda t: 1 / (1 + t)])
def test_laplace_transform_of_semigroup_is_hinf(expr):
    f = sample(expr, G)
    via = hardy_via_semigroup(f, 40.0)
    assert norm(via - apply_hardy("Hinf", f)) / norm(f) < 1e-3


def test_semigroup_of_zero():
    z = SampledFunction(G, Side.TIME, np.zeros(G.n))
    assert norm(hardy_via_semigroup(z, 20.0)) == 0.0


def test_generator_examples():
    out = generator_apply(lambda t: np.exp(-t), lambda t: -np.exp(-t), G)
    assert np.allclose(out.values, (G.t - 0.5) * np.exp(-G.t))
    c = generator_apply(lambda t: 3.0 + 0 * t, lambda t: 0 * t, G)
    assert np.allclose(c.values, -1.5)


def test_cogenerator_inverts_a_shifted_generator():
    assert cogenerator_residual(lambda t: np.exp(-t), G) < 1e-3
    assert cogenerator_residual(lambda t: t * np.exp(-t * t), G) < 1e-3


def test_constant_on_unit_interval_stays_constant():
    # fine steps keep the trapezoid error (delta^2/12 per unit) below 1e-6
    g = half_line_grid(n=1 << 15)
    f = sample(lambda t: np.where(t < 1, 2.0, np.exp(-t) * np.sin(t)), g)
    t = 50 * g.delta
    ct = apply_Ct(f, t).values
    inside = (g.t < np.exp(t) * (1 - 1e-9)) & (np.arange(g.n) >= 50)
    assert np.max(np.abs(ct[inside] - 2 * np.exp(-t / 2))) <= 1e-6
    # H_inf f = 2 on (0,1) once the mass below t_min is added back
    h = apply_hardy("Hinf", f).values + 2 * g.t[0] / g.t
    assert np.max(np.abs(h[g.t < 1] - 2)) <= 1e-6


def test_monomial_restriction():
    a, A = 0.7, 3.0
    f = sample(lambda t: np.where(t < A, t ** a, np.exp(-t) * np.cos(3 * t)), G)
    h = apply_hardy("Hinf", f).values
    inside = (G.t < A) & (G.x > -20)
    ratio = h[inside] / G.t[inside] ** a
    # trapezoid error in the log variable is about (a + 1)^2 delta^2 / 12
    assert np.max(np.abs(ratio - 1 / (a + 1))) < 1e-4
