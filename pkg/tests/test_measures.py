import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special, stats

from meixner import DomainError, make_params, measures, poly1d
from meixner.measures import LevyMeasure, Measure1D

T_VALUES = (0.5, 1.0, 2.0)


def meixner_pdf_oracle(lam, t, s):
    # direct evaluation with scipy's complex gamma
    a = math.sqrt(4 - lam * lam)
    g = special.gamma(t / 2 + 1j * s / a)
    return (a * a) ** ((t - 1) / 2) / (2 * math.pi * special.gamma(t)) * abs(g) ** 2 \
        * math.exp(2 * s * math.atan(lam / a) / a)


def test_gamma_density_at_one():
    assert measures.density(Measure1D(make_params(2.0), 1.0), 1.0) == pytest.approx(math.exp(-1), rel=1e-15)


def test_pascal_density_at_zero_lam3():
    # (1 - p)^t with p = c^2
    d = measures.density(Measure1D(make_params(3.0), 1.0), 0.0)
    assert d == pytest.approx(0.8541019662496846, rel=1e-14)


@pytest.mark.parametrize("t", T_VALUES)
def test_gamma_density_matches_scipy(t):
    s = np.linspace(0.05, 15, 40)
    assert np.allclose(measures.density(Measure1D(make_params(2.0), t), s), stats.gamma(t).pdf(s), rtol=1e-12)


@pytest.mark.parametrize("t", T_VALUES)
def test_pascal_pmf_matches_negative_binomial(t):
    p = make_params(3.0)
    k = np.arange(0, 30)
    got = measures.density(Measure1D(p, t), p.lattice_step * k)
    assert np.allclose(got, stats.nbinom(t, 1 - p.p).pmf(k), rtol=1e-11)
    # off-lattice points carry nothing
    assert measures.density(Measure1D(p, t), 0.5 * p.lattice_step) == 0.0


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, 1.9])
@pytest.mark.parametrize("t", T_VALUES)
def test_meixner_density_matches_complex_gamma(lam, t):
    m = Measure1D(make_params(lam), t)
    for s in (-4.0, -1.0, 0.0, 0.3, 2.0, 5.0):
        assert measures.density(m, s) == pytest.approx(meixner_pdf_oracle(lam, t, s), rel=1e-11)


def test_hyperbolic_secant_density():
    s = np.linspace(-6, 6, 13)
    got = measures.density(Measure1D(make_params(0.0), 1.0), s)
    assert np.allclose(got, 1 / (2 * np.cosh(np.pi * s / 2)), rtol=1e-12)


@pytest.mark.parametrize("lam", [0.0, 1.0, 1.5])
@pytest.mark.parametrize("t", T_VALUES)
def test_meixner_mass_and_mean(lam, t):
    m = Measure1D(make_params(lam), t)
    assert abs(measures.total_mass(m) - 1) < 1e-6
    lo, hi = measures.meixner_support(m)
    mean = integrate.quad(lambda s: s * meixner_pdf_oracle(lam, t, s), lo, hi, limit=400)[0]
    assert mean == pytest.approx(m.mean, abs=1e-7)


@pytest.mark.parametrize("t", T_VALUES)
def test_numeric_moments_match_jacobi(params, t):
    m = Measure1D(params, t)
    exact = poly1d.moments(params, t, 6)
    for k in range(7):
        assert abs(measures.numeric_moment(m, k) - exact[k]) < 1e-6 * max(1.0, abs(exact[k]))


def test_char_fun_oracles():
    u = np.linspace(-0.8, 0.8, 9)
    # gamma: (1 - iu)^-t ; hyperbolic secant: sech(u)^t ; pascal: ((1-p)/(1-p e^{iuh}))^t
    assert np.allclose(measures.char_fun(Measure1D(make_params(2.0), 1.5), u), (1 - 1j * u) ** -1.5)
    assert np.allclose(measures.char_fun(Measure1D(make_params(0.0), 2.0), u), np.cosh(u) ** -2.0)
    p = make_params(3.0)
    h = p.lattice_step
    want = ((1 - p.p) / (1 - p.p * np.exp(1j * u * h))) ** 0.5
    assert np.allclose(measures.char_fun(Measure1D(p, 0.5), u), want, rtol=1e-13)


def test_laplace_agrees_with_char_fun(params):
    m = Measure1D(params, 1.0)
    for u in (-0.4, 0.1, 0.5):
        assert abs(measures.laplace(m, 1j * u) - measures.char_fun(m, u)) < 1e-14


def test_char_fun_guard():
    p = make_params(1.0)
    with pytest.raises(DomainError):
        measures.char_fun(Measure1D(p, 1.0), measures.safe_u_bound(p))


def test_levy_atoms_lam3():
    p = make_params(3.0)
    pts, w = measures.levy_atoms(LevyMeasure(p))
    assert pts[0] == pytest.approx(math.sqrt(5))
    assert w[0] == pytest.approx(p.p, rel=1e-14)
    assert w[1] == pytest.approx(p.p ** 2 / 2, rel=1e-14)


def test_gamma_levy_density():
    L = LevyMeasure(make_params(2.0))
    assert measures.levy_density(L, 1.0) == pytest.approx(math.exp(-1))
    assert measures.levy_density(L, -1.0) == 0.0
    with pytest.raises(DomainError):
        measures.levy_density(L, 0.0)


@pytest.mark.parametrize("lam", [0.0, 1.0, 2.0, 3.0, 4.5])
def test_s2_levy_is_probability_with_mean_lam(lam):
    L = LevyMeasure(make_params(lam))
    one = measures.integrate_s2_levy(L, lambda s: np.ones_like(np.asarray(s, dtype=float)))
    mean = measures.integrate_s2_levy(L, lambda s: np.asarray(s, dtype=float))
    var = measures.integrate_s2_levy(L, lambda s: np.asarray(s, dtype=float) ** 2)
    assert abs(one - 1) < 1e-9
    assert abs(mean - lam) < 1e-8
    # second moment of s^2 nu is lam^2 + 2
    assert abs(var - (lam * lam + 2)) < 1e-7


def test_s2_levy_moments_match_q_moments(params):
    L = LevyMeasure(params)
    want = poly1d.q_moments(params, 5)
    for k in range(6):
        got = measures.integrate_s2_levy(L, lambda s: np.asarray(s, dtype=float) ** k).real
        assert abs(got - want[k]) < 1e-6 * max(1.0, abs(want[k]))


def test_levy_exponent_rebuilds_log_char_fun(params):
    m = Measure1D(params, 1.0)
    comp = params.regime is measures.Regime.MEIXNER
    U = 0.9 * min(measures.safe_u_bound(params), 5.0)
    for u in np.linspace(-U, U, 7):
        num = measures.levy_exponent_numeric(params, u, compensated=comp)
        if comp:
            num += 1j * params.c * u
        assert abs(num - measures.log_char_fun(m, u)) < 1e-6


@pytest.mark.parametrize("theta", [-0.3, -0.1, 0.05, 0.3, 0.2j, -0.3j])
def test_cumulant_closed_vs_quadrature(params, theta):
    assert abs(measures.cumulant(params, theta) - measures.cumulant_numeric(params, theta)) < 1e-6


def test_cumulant_is_log_laplace_minus_mean(params):
    # log E e^{theta X_1} = c theta + cumulant(theta)
    m = Measure1D(params, 1.0)
    for th in (-0.2, 0.15):
        lhs = np.log(measures.laplace(m, th))
        assert abs(lhs - params.c * th - measures.cumulant(params, th)) < 1e-13


def test_sampler_seeded_and_deterministic(params):
    m = Measure1D(params, 1.0)
    a = measures.sample(m, 1000, 5)
    b = measures.sample(m, 1000, 5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, measures.sample(m, 1000, 6))


def test_pascal_sampler_zero_frequency():
    p = make_params(3.0)
    s = measures.sample(Measure1D(p, 1.0), 100000, 11)
    frac = np.mean(s == 0.0)
    # binomial sd is about 0.0011
    assert abs(frac - (1 - p.p)) < 0.006


@pytest.mark.parametrize("t", [0.5, 2.0])
def test_sampler_moments(params, t):
    m = Measure1D(params, t)
    s = measures.sample(m, 100000, 3)
    ex = poly1d.moments(params, t, 2)
    var = ex[2] - ex[1] ** 2
    assert abs(s.mean() - ex[1]) < 5 * math.sqrt(var / s.size)
    assert abs(s.var() / var - 1) < 0.05


def test_empirical_char_fun_band(params):
    m = Measure1D(params, 1.0)
    n = 100000
    s = measures.sample(m, n, 2)
    U = 0.9 * min(measures.safe_u_bound(params), 5.0)
    u = np.linspace(-U, U, 21)
    assert np.max(np.abs(measures.empirical_char_fun(s, u) - measures.char_fun(m, u))) < 4 / math.sqrt(n)


@given(st.floats(0.0, 1.95), st.floats(0.3, 3.0), st.floats(-8, 8))
@settings(max_examples=40, deadline=None)
def test_meixner_density_positive(lam, t, s):
    assert measures.density(Measure1D(make_params(lam), t), s) > 0


def test_rejects_nonpositive_t():
    with pytest.raises(DomainError):
        Measure1D(make_params(1.0), 0.0)
