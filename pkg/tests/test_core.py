import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meixner import DomainError, MeixnerParams, Regime, make_params, psi, psi_inv, psi_inv_radius


def test_regimes():
    assert make_params(0.0).regime is Regime.MEIXNER
    assert make_params(1.9).regime is Regime.MEIXNER
    assert make_params(2.0).regime is Regime.GAMMA
    assert make_params(2.5).regime is Regime.PASCAL


def test_pascal_constants_at_5_over_2():
    p = make_params(2.5)
    assert math.isclose(p.c, 0.5, rel_tol=1e-15)
    assert math.isclose(p.p, 0.25, rel_tol=1e-15)
    assert math.isclose(p.lattice_step, 1.5, rel_tol=1e-15)


def test_pascal_constants_at_3():
    # c = 2/(3 + sqrt 5) and p = c^2
    p = make_params(3.0)
    assert math.isclose(p.c, (3 - math.sqrt(5)) / 2, rel_tol=1e-14)
    assert math.isclose(p.p, 0.14589803375031543, rel_tol=1e-14)


def test_gamma_and_meixner_constants():
    g = make_params(2.0)
    assert g.c == 1.0 and g.alpha == -1 and g.beta == -1 and g.p is None
    m = make_params(1.0)
    assert math.isclose(m.c, 0.5)
    assert abs(m.alpha - complex(-0.5, math.sqrt(3) / 2)) < 1e-15


@pytest.mark.parametrize("bad", [-0.1, float("nan"), float("inf")])
def test_rejects_bad_lambda(bad):
    with pytest.raises(DomainError):
        make_params(bad)


@given(st.floats(0.0, 6.0))
def test_roots_factor_the_quadratic(lam):
    # oracle: numpy.roots of z^2 + lam z + 1
    p = make_params(lam)
    assert abs(p.alpha * p.beta - 1) < 1e-12
    assert abs(p.alpha + p.beta + lam) < 1e-12
    roots = sorted(np.roots([1.0, lam, 1.0]), key=lambda z: (z.real, z.imag))
    mine = sorted([p.alpha, p.beta], key=lambda z: (z.real, z.imag))
    assert np.allclose(roots, mine, atol=1e-7)


@given(st.floats(2.0001, 8.0))
def test_pascal_p_is_c_squared(lam):
    p = make_params(lam)
    assert math.isclose(p.p, p.c ** 2, rel_tol=1e-12)


@given(st.floats(0.0, 5.0))
def test_round_trip_dict(lam):
    p = make_params(lam)
    assert MeixnerParams.from_dict(p.to_dict()) == p


def test_psi_known_value_gamma():
    assert abs(psi(make_params(2.0), 0.5) - 1 / 3) < 1e-15
    assert abs(psi_inv(make_params(2.0), 1 / 3) - 0.5) < 1e-15


def test_psi_series_start():
    # Psi(z) = z - lam z^2 / 2 + O(z^3)
    for lam in (0.0, 1.0, 3.0):
        p = make_params(lam)
        z = 1e-4
        assert abs(psi(p, z) - (z - lam * z * z / 2)) < 1e-11


@settings(max_examples=60)
@given(st.sampled_from([0.0, 0.5, 1.0, 2.0, 3.0, 4.0]), st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
def test_psi_inv_inverts_psi(lam, a, b):
    p = make_params(lam)
    r = 0.45 * min(p.radius, psi_inv_radius(p))
    z = r * complex(a, b) / max(1.0, abs(complex(a, b)))
    assert abs(psi_inv(p, psi(p, z)) - z) < 1e-12


def test_psi_radius_enforced():
    p = make_params(3.0)
    with pytest.raises(DomainError):
        psi(p, p.radius)
