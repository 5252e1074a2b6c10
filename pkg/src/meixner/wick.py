"""Wick kernels :omega^{(x)n}:_lam on a discrete space.

omega is a vector of atom masses.  Kernels are stored as sigma-densities,
so that pairing with a test tensor is

    <K, f> = sum K[i1..in] f[i1..in] sigma_i1 ... sigma_in,

and a Dirac contraction delta(x - y) becomes 1[i = j] / sigma_i.  Every
routine accepts a leading batch axis on omega, which lets one kernel stack
evaluate many configurations at once.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, poly1d
from .core import MeixnerParams
from .errors import BudgetError, DomainError
from .fock import DiscreteSpace, FockVector, check_budget, symmetrize, tensor_power

MAX_WICK_DEGREE = 12
MAX_PRODUCT_DEGREE = 12  # per atom, in expect_product


@dataclass(frozen=True)
class PointConfiguration:
    omega: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omega)
        if not np.all(np.isfinite(w)):
            raise DomainError("omega must be finite")
        object.__setattr__(self, "omega", w)


@dataclass(frozen=True)
class WickKernelStack:
    kernels: tuple          # kernels[n] has shape batch + (m,) * n
    batch_shape: tuple
    params: MeixnerParams
    space: DiscreteSpace

    @property
    def depth(self) -> int:
        return len(self.kernels) - 1


def _diag_factors(space: DiscreteSpace):
    inv = 1.0 / space.weights
    m = space.m
    d2 = np.diag(inv)
    d3 = np.zeros((m, m, m))
    d3[np.arange(m), np.arange(m), np.arange(m)] = inv * inv
    return d2, d3


def _recurrence(space, params, N, k0, k1, times_omega):
    """Run the five-term recurrence; ``times_omega(K)`` returns K (x) (omega / sigma)."""
    check_budget(space.m, N)
    d2, d3 = _diag_factors(space)
    ones = np.ones(space.m)
    lam, c = params.lam, params.c
    ks = [k0, k1]
    for n in range(1, N):
        kn, km = ks[n], ks[n - 1]
        new = times_omega(kn) - c * np.multiply.outer(kn, ones)
        new = new - n * np.multiply.outer(km, d2)
        if lam:
            new = new - lam * n * (kn[..., None] * d2)
        if n >= 2:
            new = new - n * (n - 1) * (km[..., None, None] * d3)
        ks.append(symmetrize(new, n + 1))
    return tuple(ks[:N + 1])


def wick_kernels(space: DiscreteSpace, params: MeixnerParams, omega, N: int) -> WickKernelStack:
    """Kernels of degree 0..N for omega of shape (m,) or batch + (m,)."""
    if N < 0:
        raise DomainError("N must be >= 0")
    if N > MAX_WICK_DEGREE:
        raise BudgetError(f"Wick degree {N} exceeds cap {MAX_WICK_DEGREE}")
    if isinstance(omega, PointConfiguration):
        omega = omega.omega
    omega = np.asarray(omega)
    if omega.shape[-1] != space.m:
        raise DomainError(f"omega has {omega.shape[-1]} entries for {space.m} atoms")
    batch = omega.shape[:-1]
    dtype = np.result_type(omega, np.float64)
    r = omega / space.weights
    k1 = r - params.c

    def times_omega(k):
        r_b = r.reshape(batch + (1,) * (k.ndim - len(batch)) + (space.m,))
        return k[..., None] * r_b

    k0 = np.ones(batch, dtype=dtype)
    return WickKernelStack(_recurrence(space, params, N, k0, k1, times_omega),
                           batch, params, space)


def polynomial_kernels(space: DiscreteSpace, params: MeixnerParams, N: int):
    """Kernels as polynomials in the masses: axes (N+1,)*m of coefficients lead.

    Entry [a_1..a_m, i1..in] is the coefficient of w_1^a_1 ... w_m^a_m.
    """
    m = space.m
    D = max(N, 1)
    check_budget(D + 1, m)
    batch = (D + 1,) * m

    def times_omega(k):
        out = np.zeros(k.shape + (m,), dtype=k.dtype)
        for j in range(m):
            src = [slice(None)] * k.ndim
            dst = [slice(None)] * (k.ndim + 1)
            src[j] = slice(0, D)
            dst[j] = slice(1, D + 1)
            dst[-1] = j
            out[tuple(dst)] = k[tuple(src)] / space.weights[j]
        return out

    k1 = np.zeros(batch + (m,))
    for j in range(m):
        idx = [0] * m + [j]
        k1[tuple(idx)] = -params.c
        idx[j] = 1
        k1[tuple(idx)] += 1.0 / space.weights[j]
    k0 = np.zeros(batch)
    k0[(0,) * m] = 1.0
    return WickKernelStack(_recurrence(space, params, N, k0, k1, times_omega), batch, params, space)


def _weights_power(space: DiscreteSpace, n: int):
    return tensor_power(space.weights, n)


def pair(space: DiscreteSpace, stack: WickKernelStack, f, n: int | None = None):
    """<:omega^{(x)n}:, f>, batched over the stack's configurations."""
    f = np.asarray(getattr(f, "data", f))
    n = f.ndim if n is None else n
    if n > stack.depth:
        raise DomainError(f"degree {n} exceeds stack depth {stack.depth}")
    k = stack.kernels[n]
    if n == 0:
        return k * f
    axes = tuple(range(k.ndim - n, k.ndim))
    return np.sum(k * (f * _weights_power(space, n)), axis=axes)


def evaluate(space: DiscreteSpace, stack: WickKernelStack, F: FockVector):
    """(I_lam F)(omega) = sum_n <:omega^n:, F_n>."""
    total = 0
    for n, f in enumerate(F.components):
        total = total + pair(space, stack, f, n)
    return total


def measure_pairing(space: DiscreteSpace, omega, f):
    """<omega^{(x)n}, f> for a mass vector omega."""
    f = np.asarray(f)
    out = f
    for _ in range(f.ndim):
        out = np.tensordot(out, omega, axes=(0, 0))
    return out


def verify_zuaF(space: DiscreteSpace, params: MeixnerParams, omega, xi, n: int,
                stack: WickKernelStack | None = None) -> float:
    """|LHS - RHS| of the three-level identity behind the Wick recurrence."""
    omega, xi = np.asarray(omega, dtype=np.float64), np.asarray(xi, dtype=np.float64)
    if stack is None:
        stack = wick_kernels(space, params, omega, n + 1)
    if stack.depth < n + 1:
        raise DomainError("stack too shallow for the identity")
    lam, c = params.lam, params.c
    sig = space.weights
    lhs = (omega @ xi) * pair(space, stack, tensor_power(xi, n), n)
    rhs = pair(space, stack, tensor_power(xi, n + 1), n + 1)
    deg_n = c * (sig @ xi) * tensor_power(xi, n)
    if n >= 1:
        deg_n = deg_n + lam * n * np.multiply.outer(xi ** 2, tensor_power(xi, n - 1))
    rhs = rhs + pair(space, stack, deg_n, n)
    if n >= 1:
        low = n * (sig @ xi ** 2) * tensor_power(xi, n - 1)
        if n >= 2:
            low = low + n * (n - 1) * np.multiply.outer(xi ** 3, tensor_power(xi, n - 2))
        rhs = rhs + pair(space, stack, low, n - 1)
    return float(np.max(np.abs(lhs - rhs)))


def gen_fun_field_closed(space: DiscreteSpace, params: MeixnerParams, omega, phi) -> complex:
    omega = np.asarray(omega, dtype=np.complex128)
    phi = np.asarray(phi, dtype=np.complex128)
    sig = space.weights
    if params.is_gamma:
        expo = -np.sum(sig * np.log1p(phi)) + np.sum(omega * phi / (phi + 1.0))
    else:
        a, b = params.alpha, params.beta
        lb, la = np.log1p(-b * phi), np.log1p(-a * phi)
        expo = (-np.sum(sig * (lb / b - la / a)) / (a - b)
                + np.sum((omega - params.c * sig) * (lb - la)) / (a - b))
    return complex(np.exp(expo))


def gen_fun_field(space: DiscreteSpace, params: MeixnerParams, omega, phi, N: int,
                  stack: WickKernelStack | None = None):
    """(sum_{n<=N} <:omega^n:, phi^n>/n!, closed form)."""
    phi = np.asarray(phi, dtype=np.complex128)
    if np.max(np.abs(phi)) >= params.radius:
        raise DomainError(f"||phi||_inf must be < {params.radius:.6g}")
    if stack is None:
        stack = wick_kernels(space, params, omega, N)
    total = 0j
    for n in range(N + 1):
        total += complex(pair(space, stack, tensor_power(phi, n), n)) / math.factorial(n)
    return total, gen_fun_field_closed(space, params, omega, phi)


def variation_norms(space: DiscreteSpace, stack: WickKernelStack):
    """Total variation sum |K_n| sigma^{(x)n} of each kernel viewed as a measure."""
    return [float(np.sum(np.abs(k) * _weights_power(space, n)))
            for n, k in enumerate(stack.kernels)]


def leading_coefficient(space: DiscreteSpace, params: MeixnerParams, omega, f, radius: float = 1.0):
    """Top coefficient of s -> <:(s omega)^n:, f>, by interpolation on a circle."""
    f = np.asarray(f)
    n = f.ndim
    pts = radius * np.exp(2j * np.pi * np.arange(n + 1) / (n + 1))
    stack = wick_kernels(space, params, pts[:, None] * np.asarray(omega)[None, :], n)
    vals = pair(space, stack, f, n)
    # the DFT of samples on the circle returns (n+1) a_k radius^k
    return complex(np.fft.fft(vals)[n] / (n + 1) / radius ** n)


# ---------------------------------------------------------------------------
# expectations under the product law
# ---------------------------------------------------------------------------

def _product_degree(F: FockVector, G: FockVector) -> int:
    return F.degree + G.degree


def expect_product(space: DiscreteSpace, params: MeixnerParams, F: FockVector, G: FockVector,
                   method: str = "gauss") -> complex:
    """E[conj(I F) I G] under mu_lam = prod_i mu_{lam, sigma_i}.

    ``gauss`` evaluates the functionals on the tensor Gauss rule built from
    each atom's Jacobi matrix; ``moments`` expands them as polynomials in the
    masses and contracts against the moment Hankel matrices.  Both are exact
    for the polynomial degrees allowed here.
    """
    deg = _product_degree(F, G)
    if deg > MAX_PRODUCT_DEGREE:
        raise BudgetError(f"total degree per atom {deg} exceeds {MAX_PRODUCT_DEGREE}")
    if method == "gauss":
        return _expect_gauss(space, params, F, G, deg)
    if method == "moments":
        return _expect_moments(space, params, F, G, deg)
    raise DomainError(f"unknown method {method!r}")


def product_rule(space: DiscreteSpace, params: MeixnerParams, deg: int):
    """Tensor Gauss nodes (B, m) and weights (B,) exact to degree ``deg`` per atom."""
    q = deg // 2 + 1
    rules = [poly1d.quadrature(params, float(t), q) for t in space.weights]
    nodes = np.array(list(itertools.product(*[r[0] for r in rules])))
    weights = np.array([math.prod(w) for w in itertools.product(*[r[1] for r in rules])])
    return nodes, weights


def _expect_gauss(space, params, F, G, deg):
    nodes, weights = product_rule(space, params, deg)
    stack = wick_kernels(space, params, nodes, max(F.degree, G.degree))
    vf = evaluate(space, stack, F)
    vg = evaluate(space, stack, G)
    return complex(np.sum(weights * np.conj(vf) * vg))


def _expect_moments(space, params, F, G, deg):
    m = space.m
    stack = polynomial_kernels(space, params, max(F.degree, G.degree))
    N = stack.batch_shape[0] - 1
    pf, pg = evaluate(space, stack, F), evaluate(space, stack, G)
    letters = "abcdefghijklmnopqrstuvwxyz"
    lf, lg = letters[:m], letters[m:2 * m]
    idx = np.arange(N + 1)
    # the contraction cancels heavily, so it runs in extended precision
    hankels = [_long_moments(params, float(t), 2 * N)[idx[:, None] + idx[None, :]]
               for t in space.weights]
    subscripts = ",".join([lf, lg] + [lf[i] + lg[i] for i in range(m)]) + "->"
    pf, pg = np.conj(pf).astype(np.clongdouble), pg.astype(np.clongdouble)
    return complex(np.einsum(subscripts, pf, pg, *hankels, optimize=True))


def _long_moments(params, t, kmax):
    a, b = poly1d.recurrence_coefficients(params, t, kmax + 1)
    return _kernels.NUMPY_KERNELS["basis_moments"](a.astype(np.longdouble), b.astype(np.longdouble), kmax)
