"""Annihilation and creation in the functional realization.

A test functional is a truncated Wick expansion

    phi(omega) = sum_n <:omega^{(x)n}:, f_n>,

held as its coefficient tensors.  Because phi is a polynomial in the atom
masses, shifts ``omega + z delta_x`` make sense for complex z and every
difference or derivative in z is exact once the shift polynomial is known.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import measures, wick
from .core import MeixnerParams, psi_inv
from .errors import DomainError
from .fock import DiscreteSpace, FockVector, create, field_op, plain_inner, tensor_power


@dataclass(frozen=True)
class TestFunctional:
    """phi = sum_n <:omega^n:, f_n> with coefficients f_0..f_N."""

    __test__ = False  # keep pytest from collecting it

    coefficients: FockVector

    @property
    def degree(self) -> int:
        return self.coefficients.degree

    @classmethod
    def from_list(cls, comps) -> "TestFunctional":
        return cls(FockVector.from_list(comps))

    def __call__(self, space: DiscreteSpace, params: MeixnerParams, omega):
        return evaluate(space, params, self, omega)


@dataclass(frozen=True)
class DualVector:
    components: FockVector

    @classmethod
    def from_list(cls, comps) -> "DualVector":
        return cls(FockVector.from_list(comps))


def evaluate(space: DiscreteSpace, params: MeixnerParams, phi: TestFunctional, omega):
    """phi(omega) for real or complex masses, batched over leading axes of omega."""
    stack = wick.wick_kernels(space, params, omega, max(phi.degree, 0))
    out = wick.evaluate(space, stack, phi.coefficients)
    return out[()] if np.ndim(out) == 0 else out


def _check_atom(space: DiscreteSpace, x: int):
    if not 0 <= x < space.m:
        raise DomainError(f"atom index {x} out of range 0..{space.m - 1}")


def lower(space: DiscreteSpace, x: int, phi: TestFunctional) -> TestFunctional:
    """d_x: f_n -> n f_n(x, .)."""
    _check_atom(space, x)
    comps = phi.coefficients.components
    if len(comps) == 1:
        return TestFunctional(FockVector((np.zeros((), dtype=np.complex128),)))
    return TestFunctional(FockVector(tuple(n * np.asarray(f[x], dtype=np.complex128)
                                           for n, f in enumerate(comps) if n >= 1)))


def delta(space: DiscreteSpace, x: int):
    """delta_x as a sigma-density."""
    out = np.zeros(space.m)
    out[x] = 1.0 / space.weights[x]
    return out


def raise_(space: DiscreteSpace, x: int, F: DualVector, max_degree=None) -> DualVector:
    """d_x^dagger: F_n -> delta_x (x)^ F_{n-1}."""
    _check_atom(space, x)
    return DualVector(create(space, delta(space, x), F.components, max_degree))


def dual_pairing(space: DiscreteSpace, F, phi) -> complex:
    """<<F, phi>> = sum_n n! <conj F_n, f_n>."""
    a = F.components if isinstance(F, DualVector) else F
    b = phi.coefficients if isinstance(phi, TestFunctional) else phi
    return sum(math.factorial(n) * plain_inner(space, f, g)
               for n, (f, g) in enumerate(zip(a.components, b.components)))


# ---------------------------------------------------------------------------
# shifts and derivatives
# ---------------------------------------------------------------------------

def shift_eval(space: DiscreteSpace, params: MeixnerParams, phi: TestFunctional, omega, z, x: int):
    """phi(omega + z delta_x); z may be complex and an array."""
    _check_atom(space, x)
    z = np.asarray(z, dtype=np.complex128)
    om = np.broadcast_to(np.asarray(omega, dtype=np.complex128), z.shape + (space.m,)).copy()
    om[..., x] += z
    return evaluate(space, params, phi, om)


def shift_coefficients(space: DiscreteSpace, params: MeixnerParams, phi: TestFunctional,
                       omega, x: int, radius: float = 1.0):
    """Coefficients a_0..a_N of z -> phi(omega + z delta_x), by interpolation on a circle."""
    N = max(phi.degree, 0)
    pts = radius * np.exp(2j * np.pi * np.arange(N + 1) / (N + 1))
    vals = shift_eval(space, params, phi, omega, pts, x)
    return np.fft.fft(vals) / (N + 1) / radius ** np.arange(N + 1)


def gateaux(space: DiscreteSpace, params: MeixnerParams, phi: TestFunctional, omega, x: int):
    """nabla_x phi(omega) = d/dt phi(omega + t delta_x) at t = 0."""
    return complex(shift_coefficients(space, params, phi, omega, x)[1]) if phi.degree >= 1 else 0j


def levy_lower(space: DiscreteSpace, params: MeixnerParams, x: int, phi: TestFunctional, omega):
    """int (phi(omega + s delta_x) - phi(omega)) s nu_lam(ds), by quadrature over nu_lam."""
    if phi.degree < 1:
        return 0j
    a = shift_coefficients(space, params, phi, omega, x)[1:]
    # (phi(omega + s) - phi(omega)) / s = sum_k a_k s^{k-1}, integrated against s^2 nu
    poly = np.polynomial.Polynomial(a)
    return measures.integrate_s2_levy(measures.LevyMeasure(params), lambda s: poly(np.asarray(s)))


def creation_via_fd(space: DiscreteSpace, params: MeixnerParams, xi, phi: TestFunctional, omega):
    """(A^+(xi) phi)(omega) from shifts of phi alone (no coefficient access)."""
    xi = np.asarray(xi)
    omega = np.asarray(omega, dtype=np.float64)
    sig = space.weights
    if params.is_gamma:
        total = 0j
        for x in range(space.m):
            co = shift_coefficients(space, params, phi, omega, x)
            co = np.concatenate([co, np.zeros(3)])
            d1, d2 = co[1], 2.0 * co[2]
            sq = d2 - 2.0 * d1 + co[0]      # (nabla - 1)^2 phi
            lin = d1 - co[0]                # (nabla - 1) phi
            total += omega[x] * xi[x] * sq + sig[x] * xi[x] * lin
        return total
    d = params.alpha - params.beta
    a = params.alpha / d
    total = 0j
    for x in range(space.m):
        up, mid, down = shift_eval(space, params, phi, omega, np.array([d, 0.0, -d]), x)
        square = (1.0 - a) ** 2 * down + 2.0 * a * (1.0 - a) * mid + a * a * up
        mixed = ((1.0 - a) * (mid - down) + a * (up - mid)) / d
        total += (omega[x] - params.c * sig[x]) * xi[x] * square - sig[x] * xi[x] * mixed
    return total


def creation_oracle(space: DiscreteSpace, params: MeixnerParams, xi, phi: TestFunctional, omega):
    """A^+(xi) phi at omega, from the coefficient map f_{n-1} -> xi (x)^ f_{n-1}."""
    raised = TestFunctional(create(space, np.asarray(xi), phi.coefficients))
    return complex(evaluate(space, params, raised, omega))


# ---------------------------------------------------------------------------
# operator identities on coefficients
# ---------------------------------------------------------------------------

def _sum_over_atoms(space: DiscreteSpace, xi, per_atom) -> FockVector:
    total = None
    for x in range(space.m):
        term = per_atom(x).scale(space.weights[x] * xi[x])
        total = term if total is None else total + term
    return total


def wick_multiplier(space: DiscreteSpace, params: MeixnerParams, xi, phi: TestFunctional) -> TestFunctional:
    """int sigma(dx) xi(x) :omega(x): phi, composed from d_x and d_x^dagger."""
    def one(x):
        low = lower(space, x, phi).coefficients
        low2 = lower(space, x, TestFunctional(low)).coefficients
        r0 = raise_(space, x, DualVector(phi.coefficients)).components
        r1 = raise_(space, x, DualVector(low)).components
        r2 = raise_(space, x, DualVector(low2)).components
        return r0 + r1.scale(params.lam) + low + r2
    return TestFunctional(_sum_over_atoms(space, np.asarray(xi), one))


def multiplication_operator(space: DiscreteSpace, params: MeixnerParams, xi, phi: TestFunctional) -> TestFunctional:
    """int sigma(dx) xi(x) omega(x) phi, with omega(x) = :omega(x): + c."""
    out = wick_multiplier(space, params, xi, phi).coefficients
    return TestFunctional(out + phi.coefficients.scale(params.c * space.integral(xi)))


def field_coefficients(space: DiscreteSpace, params: MeixnerParams, xi, phi: TestFunctional) -> FockVector:
    """The same operator read off the Fock-space ladder operators."""
    return field_op(space, params, np.asarray(xi), phi.coefficients)


def lowering_sum(space: DiscreteSpace, xi, phi: TestFunctional) -> FockVector:
    """int sigma(dx) xi(x) d_x phi on coefficients."""
    return _sum_over_atoms(space, np.asarray(xi), lambda x: lower(space, x, phi).coefficients)


def truncated_exponential(space: DiscreteSpace, h, N: int) -> TestFunctional:
    """sum_{n<=N} <:omega^n:, h^{(x)n}> / n!."""
    h = np.asarray(h, dtype=np.complex128)
    return TestFunctional(FockVector(tuple(tensor_power(h, n) / math.factorial(n)
                                           for n in range(N + 1))))


def psi_inv_nabla_residual(space: DiscreteSpace, params: MeixnerParams, phi_vec, omega, x: int, N: int):
    """|d_x E - Psi^{-1}(nabla_x E / E) E| for E the exponential truncated at N.

    E approximates G(omega, Psi^{-1}(phi)) = const exp<omega, phi>; the
    residual vanishes as N grows at the rate of the truncation tail.
    """
    h = psi_inv(params, np.asarray(phi_vec, dtype=np.complex128))
    E = truncated_exponential(space, h, N)
    value = complex(evaluate(space, params, E, omega))
    low = complex(evaluate(space, params, lower(space, x, E), omega))
    grad = gateaux(space, params, E, omega, x)
    rate = grad / value
    return abs(low - complex(psi_inv(params, rate)) * value), abs(rate - phi_vec[x])


__all__ = [
    "TestFunctional", "DualVector", "evaluate", "lower", "raise_", "delta", "dual_pairing",
    "shift_eval", "shift_coefficients", "gateaux", "levy_lower", "creation_via_fd",
    "creation_oracle", "wick_multiplier", "multiplication_operator", "field_coefficients",
    "lowering_sum", "truncated_exponential", "psi_inv_nabla_residual",
]
