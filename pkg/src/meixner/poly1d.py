"""One-dimensional Meixner-class polynomials P^(n)_{lam,t}.

Monic polynomials orthogonal w.r.t. mu_{lam,t}, defined by

    x P_n = P_{n+1} + (lam n + c t) P_n + n (n - 1 + t) P_{n-1}.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import _kernels
from .core import MeixnerParams
from .errors import BudgetError, DomainError

MAX_DEGREE = 64


def _check_t(t):
    if not t > 0:
        raise DomainError(f"t (the mass sigma(Delta)) must be > 0, got {t!r}")


def _check_degree(n):
    if n < 0:
        raise DomainError("degree must be >= 0")
    if n > MAX_DEGREE:
        raise BudgetError(f"degree {n} exceeds cap {MAX_DEGREE}")


@dataclass(frozen=True)
class JacobiMatrix:
    diag: np.ndarray     # a_n = lam n + c t
    offdiag: np.ndarray  # sqrt(b_n), n = 1..size-1
    t: float

    @property
    def size(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def recurrence_coefficients(params: MeixnerParams, t: float, size: int):
    """(a_n, b_n) for n = 0..size-1; b_0 = 0 by convention."""
    _check_t(t)
    n = np.arange(size, dtype=np.float64)
    a = params.lam * n + params.c * t
    b = n * (n - 1.0 + t)
    return a, b


def jacobi_matrix(params: MeixnerParams, t: float, size: int) -> JacobiMatrix:
    a, b = recurrence_coefficients(params, t, size)
    return JacobiMatrix(diag=a, offdiag=np.sqrt(b[1:]), t=float(t))


def eval_all(params: MeixnerParams, t: float, nmax: int, x):
    """Array of shape (nmax+1,) + shape(x) holding P_0(x)..P_nmax(x)."""
    _check_t(t)
    _check_degree(nmax)
    a, b = recurrence_coefficients(params, t, max(nmax, 1))
    return _kernels.three_term(np.asarray(x), a, b, nmax)


def eval_poly(params: MeixnerParams, t: float, n: int, x):
    out = eval_all(params, t, n, x)[n]
    return out[()] if np.ndim(out) == 0 else out


def norm_sq(params: MeixnerParams, t: float, n: int) -> float:
    """||P_n||^2 in L^2(mu_{lam,t}) = b_1 b_2 ... b_n."""
    _, b = recurrence_coefficients(params, t, n + 1)
    return float(np.prod(b[1:n + 1]))


def gen_fun(params: MeixnerParams, t: float, x, u, N: int):
    """(sum_{n<=N} u^n/n! P_n(x), closed form) of the generating function."""
    _check_t(t)
    u = complex(u)
    if abs(u) >= params.radius:
        raise DomainError(f"|u| must be < {params.radius:.6g}")
    vals = eval_all(params, t, N, x)
    coef = 1.0 + 0j
    total = 0j
    for n in range(N + 1):
        total += coef * vals[n]
        coef *= u / (n + 1)
    if params.is_gamma:
        closed = np.exp(-t * np.log1p(u) + u * x / (u + 1.0))
    else:
        al, be = params.alpha, params.beta
        lb, la = np.log1p(-be * u), np.log1p(-al * u)
        closed = np.exp(-t / (al - be) * (lb / be - la / al)
                        + (x - params.c * t) / (al - be) * (lb - la))
    return complex(total), complex(closed)


def moments(params: MeixnerParams, t: float, kmax: int) -> np.ndarray:
    """Exact moments m_0..m_kmax of mu_{lam,t}, read off the Jacobi recurrence.

    m_k is the (0,0) entry of J^k; only the first k+1 recurrence
    coefficients enter, so truncation at size kmax+1 is exact.
    """
    _check_t(t)
    if kmax < 0:
        raise DomainError("k must be >= 0")
    a, b = recurrence_coefficients(params, t, kmax + 1)
    return _kernels.basis_moments(a, b, kmax)


def moment(params: MeixnerParams, t: float, k: int) -> float:
    return float(moments(params, t, k)[k])


def quadrature(params: MeixnerParams, t: float, N: int):
    """N-point Gauss rule for mu_{lam,t} from the truncated Jacobi matrix."""
    _check_t(t)
    if N < 1:
        raise DomainError("quadrature needs N >= 1")
    J = jacobi_matrix(params, t, N)
    if N == 1:
        return J.diag.copy(), np.ones(1)
    try:
        nodes, vecs = eigh_tridiagonal(J.diag, J.offdiag)
    except np.linalg.LinAlgError as exc:
        raise DomainError(f"tridiagonal eigensolver failed: {exc}") from exc
    weights = vecs[0, :] ** 2
    return nodes, weights / weights.sum()


def q_poly(params: MeixnerParams, n: int, s):
    """Monic orthogonal polynomials of s^2 nu_lam(ds):
    s Q_n = Q_{n+1} + lam (n+1) Q_n + n (n+1) Q_{n-1}."""
    _check_degree(n)
    k = np.arange(max(n, 1), dtype=np.float64)
    a = params.lam * (k + 1.0)
    b = k * (k + 1.0)
    out = _kernels.three_term(np.asarray(s), a, b, n)[n]
    return out[()] if np.ndim(out) == 0 else out


def q_moments(params: MeixnerParams, kmax: int) -> np.ndarray:
    """Moments of the probability measure s^2 nu_lam(ds)."""
    k = np.arange(kmax + 1, dtype=np.float64)
    return _kernels.basis_moments(params.lam * (k + 1.0), k * (k + 1.0), kmax)
