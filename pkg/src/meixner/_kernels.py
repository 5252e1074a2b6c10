"""Hot numeric kernels with a numba path and a pure-numpy path.

The numba path is used when numba imports and ``MEIXNER_NUMBA`` is not set
to ``0``/``off``/``false``.  Both implementations are always importable as
``NUMPY_KERNELS`` and ``NUMBA_KERNELS`` (the latter is ``None`` without
numba) so that tests and the benchmark can compare them directly.
"""
import math
import os

import numpy as np

LANCZOS_G = 7.0
LANCZOS_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)


# ---------------------------------------------------------------------------
# pure numpy implementations
# ---------------------------------------------------------------------------

def _three_term_np(x, a, b, nmax):
    x = np.asarray(x)
    out = np.empty((nmax + 1,) + x.shape, dtype=np.result_type(x, a, np.float64))
    out[0] = 1.0
    if nmax >= 1:
        out[1] = x - a[0]
    for n in range(1, nmax):
        out[n + 1] = (x - a[n]) * out[n] - b[n] * out[n - 1]
    return out


def _basis_moments_np(a, b, kmax):
    # coefficients of x^k in the monic basis P_0..P_k; multiplication by x
    # is P_n -> P_{n+1} + a_n P_n + b_n P_{n-1}
    coef = np.zeros(kmax + 2, dtype=np.result_type(a, b, np.float64))
    coef[0] = 1.0
    moments = np.empty(kmax + 1, dtype=coef.dtype)
    moments[0] = 1.0
    for k in range(1, kmax + 1):
        new = np.zeros_like(coef)
        new[1:k + 1] += coef[0:k]
        new[0:k] += a[0:k] * coef[0:k]
        new[0:k - 1] += b[1:k] * coef[1:k]
        coef = new
        moments[k] = coef[0]
    return moments


def _log_abs_gamma_np(z):
    z = np.asarray(z, dtype=np.complex128)
    shape = z.shape
    z = z.reshape(-1)
    out = np.empty(z.shape, dtype=np.float64)
    refl = z.real < 0.5
    zz = np.where(refl, 1.0 - z, z) - 1.0
    acc = np.full(z.shape, LANCZOS_COEF[0], dtype=np.complex128)
    for i in range(1, LANCZOS_COEF.size):
        acc = acc + LANCZOS_COEF[i] / (zz + i)
    t = zz + LANCZOS_G + 0.5
    lg = (_HALF_LOG_2PI + (zz + 0.5) * np.log(t) - t + np.log(acc)).real
    out[:] = lg
    if np.any(refl):
        zr = z[refl]
        pa = math.pi * zr.real
        pb = math.pi * np.abs(zr.imag)
        big = pb > 30.0
        with np.errstate(over="ignore"):
            small_val = 0.5 * np.log(np.sin(pa) ** 2 + np.sinh(np.where(big, 0.0, pb)) ** 2)
        logsin = np.where(big, pb - math.log(2.0), small_val)
        out[refl] = _LOG_PI - logsin - lg[refl]
    return out.reshape(shape)


def _orbit_mean_np(flat, inv, counts):
    order = np.argsort(inv, kind="stable")
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    sums = np.add.reduceat(flat[:, order], starts, axis=1)
    return (sums / counts)[:, inv]


NUMPY_KERNELS = {
    "three_term": _three_term_np,
    "basis_moments": _basis_moments_np,
    "log_abs_gamma": _log_abs_gamma_np,
    "orbit_mean": _orbit_mean_np,
}


# ---------------------------------------------------------------------------
# numba implementations (explicit loops)
# ---------------------------------------------------------------------------

def _build_numba():
    try:
        import numba
    except ImportError:
        return None

    njit = numba.njit(cache=True)

    @njit
    def three_term_loop(x, a, b, nmax, out):
        for j in range(x.shape[0]):
            out[0, j] = 1.0
            if nmax >= 1:
                out[1, j] = x[j] - a[0]
            for n in range(1, nmax):
                out[n + 1, j] = (x[j] - a[n]) * out[n, j] - b[n] * out[n - 1, j]
        return out

    def three_term(x, a, b, nmax):
        x = np.asarray(x)
        flat = np.ascontiguousarray(x.reshape(-1))
        dtype = np.result_type(flat, a, np.float64)
        out = np.empty((nmax + 1, flat.size), dtype=dtype)
        three_term_loop(flat.astype(dtype), np.asarray(a, dtype=dtype),
                        np.asarray(b, dtype=dtype), nmax, out)
        return out.reshape((nmax + 1,) + x.shape)

    @njit
    def basis_moments_loop(a, b, kmax):
        coef = np.zeros(kmax + 2)
        new = np.zeros(kmax + 2)
        coef[0] = 1.0
        moments = np.empty(kmax + 1)
        moments[0] = 1.0
        for k in range(1, kmax + 1):
            for n in range(kmax + 2):
                new[n] = 0.0
            for n in range(k):
                new[n + 1] += coef[n]
                new[n] += a[n] * coef[n]
                if n >= 1:
                    new[n - 1] += b[n] * coef[n]
            for n in range(kmax + 2):
                coef[n] = new[n]
            moments[k] = coef[0]
        return moments

    def basis_moments(a, b, kmax):
        return basis_moments_loop(np.asarray(a, dtype=np.float64),
                                  np.asarray(b, dtype=np.float64), kmax)

    coef = LANCZOS_COEF.copy()
    g = LANCZOS_G
    half_log_2pi = _HALF_LOG_2PI
    log_pi = _LOG_PI
    log2 = math.log(2.0)

    @njit
    def _lag_scalar(z):
        refl = z.real < 0.5
        w = 1.0 - z if refl else z
        zz = w - 1.0
        acc = coef[0] + 0j
        for i in range(1, coef.shape[0]):
            acc += coef[i] / (zz + i)
        t = zz + g + 0.5
        val = (half_log_2pi + (zz + 0.5) * np.log(t) - t + np.log(acc)).real
        if refl:
            pa = math.pi * z.real
            pb = math.pi * abs(z.imag)
            if pb > 30.0:
                logsin = pb - log2
            else:
                logsin = 0.5 * math.log(math.sin(pa) ** 2 + math.sinh(pb) ** 2)
            val = log_pi - logsin - val
        return val

    @njit
    def log_abs_gamma_loop(z, out):
        for j in range(z.shape[0]):
            out[j] = _lag_scalar(z[j])
        return out

    def log_abs_gamma(z):
        z = np.asarray(z, dtype=np.complex128)
        flat = np.ascontiguousarray(z.reshape(-1))
        out = np.empty(flat.size)
        log_abs_gamma_loop(flat, out)
        return out.reshape(z.shape)

    @njit
    def orbit_mean_loop(flat, inv, counts, out):
        nb = flat.shape[0]
        nk = counts.shape[0]
        acc = np.zeros((nb, nk), dtype=flat.dtype)
        for r in range(nb):
            for j in range(flat.shape[1]):
                acc[r, inv[j]] += flat[r, j]
            for k in range(nk):
                acc[r, k] /= counts[k]
            for j in range(flat.shape[1]):
                out[r, j] = acc[r, inv[j]]
        return out

    def orbit_mean(flat, inv, counts):
        flat = np.ascontiguousarray(flat)
        out = np.empty_like(flat)
        orbit_mean_loop(flat, inv, counts.astype(np.float64), out)
        return out

    return {
        "three_term": three_term,
        "basis_moments": basis_moments,
        "log_abs_gamma": log_abs_gamma,
        "orbit_mean": orbit_mean,
    }


NUMBA_KERNELS = _build_numba()


def numba_requested():
    flag = os.environ.get("MEIXNER_NUMBA", "1").strip().lower()
    return flag not in ("0", "off", "false", "no")


USE_NUMBA = NUMBA_KERNELS is not None and numba_requested()
KERNELS = NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS

three_term = KERNELS["three_term"]
basis_moments = KERNELS["basis_moments"]
log_abs_gamma = KERNELS["log_abs_gamma"]
orbit_mean = KERNELS["orbit_mean"]
