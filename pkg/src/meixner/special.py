"""|Gamma(a + ib)|^2 through a Lanczos (g=7, n=9) log-gamma."""
import numpy as np

from . import _kernels


def log_abs_gamma(z):
    out = _kernels.log_abs_gamma(np.asarray(z, dtype=np.complex128))
    return out[()] if out.ndim == 0 else out


def abs_gamma_sq(a, b):
    """|Gamma(a + i b)|^2 for real a > 0 and real b (broadcast)."""
    z = np.asarray(a, dtype=np.float64) + 1j * np.asarray(b, dtype=np.float64)
    return np.exp(2.0 * log_abs_gamma(z))
