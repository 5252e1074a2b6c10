import os
import subprocess
import sys

import numpy as np
import pytest
from scipy import special

from meixner import _kernels, make_params, poly1d
from meixner.fock import _orbit_index

needs_numba = pytest.mark.skipif(_kernels.NUMBA_KERNELS is None, reason="numba not installed")


def test_log_abs_gamma_against_scipy():
    rng = np.random.default_rng(0)
    z = rng.uniform(-30, 30, 500) + 1j * rng.uniform(-40, 40, 500)
    z = np.concatenate([z, [0.5, 1.0, 2.5 + 0.0j, -0.5 + 1e-3j, 0.25 + 100j]])
    want = special.loggamma(z).real
    for kern in filter(None, [_kernels.NUMPY_KERNELS, _kernels.NUMBA_KERNELS]):
        assert np.allclose(kern["log_abs_gamma"](z), want, rtol=1e-12, atol=1e-12)


@needs_numba
def test_three_term_parity():
    a, b = poly1d.recurrence_coefficients(make_params(1.0), 1.0, 30)
    x = np.linspace(-5, 5, 101)
    np.testing.assert_allclose(_kernels.NUMBA_KERNELS["three_term"](x, a, b, 20),
                               _kernels.NUMPY_KERNELS["three_term"](x, a, b, 20), rtol=1e-14)


@needs_numba
def test_basis_moments_parity():
    a, b = poly1d.recurrence_coefficients(make_params(3.0), 0.5, 20)
    np.testing.assert_allclose(_kernels.NUMBA_KERNELS["basis_moments"](a, b, 19),
                               _kernels.NUMPY_KERNELS["basis_moments"](a, b, 19), rtol=1e-14)


@needs_numba
@pytest.mark.parametrize("m,n", [(1, 3), (3, 2), (3, 4), (4, 3)])
def test_orbit_mean_parity(m, n):
    inv, counts = _orbit_index(m, n)
    flat = np.random.default_rng(1).standard_normal((5, m ** n))
    np.testing.assert_allclose(_kernels.NUMBA_KERNELS["orbit_mean"](flat, inv, counts),
                               _kernels.NUMPY_KERNELS["orbit_mean"](flat, inv, counts), atol=1e-15)


@needs_numba
def test_orbit_mean_complex_parity():
    inv, counts = _orbit_index(3, 3)
    rng = np.random.default_rng(2)
    flat = rng.standard_normal((2, 27)) + 1j * rng.standard_normal((2, 27))
    np.testing.assert_allclose(_kernels.NUMBA_KERNELS["orbit_mean"](flat, inv, counts),
                               _kernels.NUMPY_KERNELS["orbit_mean"](flat, inv, counts), atol=1e-15)


def test_env_flag_selects_numpy():
    code = "from meixner import _kernels; print(_kernels.USE_NUMBA, _kernels.KERNELS is _kernels.NUMPY_KERNELS)"
    env = dict(os.environ, MEIXNER_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True"]


def test_numpy_path_gives_same_moments():
    code = ("from meixner import make_params, poly1d; import json;"
            "print(json.dumps(list(poly1d.moments(make_params(1.0), 1.0, 8))))")
    env = dict(os.environ, MEIXNER_NUMBA="off")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    got = np.array(eval(out.stdout))
    assert np.allclose(got, poly1d.moments(make_params(1.0), 1.0, 8), rtol=1e-14)


@pytest.mark.parametrize("z", [-0.3 + 0.2j, 2.5 + 0j, -7.5 + 40j])
def test_log_abs_gamma_scalar(z):
    for kern in filter(None, [_kernels.NUMPY_KERNELS, _kernels.NUMBA_KERNELS]):
        out = kern["log_abs_gamma"](np.complex128(z))
        assert out.shape == ()
        assert out == pytest.approx(special.loggamma(z).real, rel=1e-12)
