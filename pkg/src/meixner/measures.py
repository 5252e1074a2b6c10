"""Orthogonality laws mu_{lam,t}, their Levy measures nu_lam, and samplers.

Three regimes:

* lam > 2: Pascal law on the lattice h k, h = sqrt(lam^2 - 4), with
  nu_lam = sum_k p^k / k delta_{h k};
* lam = 2: Gamma(t) law, nu_2(ds) = e^{-s}/s ds on (0, inf);
* lam < 2: Meixner law on R with a smooth Levy density.

The Meixner densities carry the tilt ``exp(+2 s arctan(lam/a)/a)``,
``a = sqrt(4 - lam^2)``; this is the orientation whose mean is ``c t``.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .core import MeixnerParams, Regime
from .errors import DomainError
from .special import abs_gamma_sq, log_abs_gamma

TAIL_MASS = 1e-12
QUAD_ABS_TOL = 1e-13
QUAD_REL_TOL = 1e-12
LEVY_REL_TOL = 1e-11  # the s^2 nu integrands hit roundoff below this
LATTICE_TOL = 1e-9
SAMPLER_MASS = 1e-9


class Kind(str, enum.Enum):
    DISCRETE = "discrete"
    CONTINUOUS = "continuous"


@dataclass(frozen=True)
class Measure1D:
    params: MeixnerParams
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError(f"t must be > 0, got {self.t!r}")

    @property
    def kind(self) -> Kind:
        return Kind.DISCRETE if self.params.regime is Regime.PASCAL else Kind.CONTINUOUS

    @property
    def mean(self) -> float:
        return self.params.c * self.t


@dataclass(frozen=True)
class LevyMeasure:
    params: MeixnerParams

    @property
    def representation(self) -> str:
        return {Regime.PASCAL: "atoms", Regime.GAMMA: "density",
                Regime.MEIXNER: "density"}[self.params.regime]


def _meixner_consts(params: MeixnerParams):
    a = math.sqrt(4.0 - params.lam ** 2)
    tilt = 2.0 * math.atan(params.lam / a) / a
    return a, tilt


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------

def pascal_pmf(params: MeixnerParams, t: float, k):
    k = np.asarray(k, dtype=np.float64)
    logp = (t * math.log1p(-params.p) + gammaln(t + k) - gammaln(t) - gammaln(k + 1.0)
            + k * math.log(params.p))
    return np.exp(logp)


def density(m: Measure1D, s):
    """pmf value (lam > 2, at lattice points) or pdf value (lam <= 2)."""
    s = np.asarray(s, dtype=np.float64)
    params, t = m.params, m.t
    if params.regime is Regime.PASCAL:
        h = params.lattice_step
        k = np.rint(s / h)
        on = (np.abs(s - k * h) <= LATTICE_TOL) & (k >= 0)
        out = np.where(on, pascal_pmf(params, t, np.where(on, k, 0.0)), 0.0)
    elif params.regime is Regime.GAMMA:
        pos = s > 0
        sp = np.where(pos, s, 1.0)
        vals = np.exp((t - 1.0) * np.log(sp) - sp - math.lgamma(t))
        out = np.where(pos, vals, 0.0)
        if t == 1.0:
            out = np.where(s == 0, 1.0, out)
        elif t < 1.0:
            out = np.where(s == 0, np.inf, out)
    else:
        a, tilt = _meixner_consts(params)
        logv = ((t - 1.0) / 2.0 * math.log(a * a) - math.log(2.0 * math.pi) - math.lgamma(t)
                + 2.0 * log_abs_gamma(t / 2.0 + 1j * s / a) + tilt * s)
        out = np.exp(logv)
    return out[()] if out.ndim == 0 else out


def lattice(m: Measure1D, mass: float = TAIL_MASS, power: int = 0):
    """Support points and masses of the Pascal law.

    Terms are added until the dropped tail weighs less than ``mass``, where
    the tail is weighted by ``k^power`` so that moments of order ``power``
    are resolved to that level as well.
    """
    params, t = m.params, m.t
    p = params.p
    pmf = [(1.0 - p) ** t]
    cum = pmf[0]
    k = 0
    while k < 100000:
        # the terms decay at least geometrically once k > t
        tail = pmf[-1] * (k + 1.0) ** power * p / (1.0 - p)
        if 1.0 - cum <= mass and k > t and tail <= mass:
            break
        pmf.append(pmf[-1] * (t + k) / (k + 1) * p)
        k += 1
        cum += pmf[-1]
    ks = np.arange(len(pmf), dtype=np.float64)
    return ks * params.lattice_step, np.array(pmf)


def meixner_support(m: Measure1D, mass: float = TAIL_MASS):
    """Interval [lo, hi] outside which a Meixner law has less than ``mass``."""
    a, tilt = _meixner_consts(m.params)
    # tails decay like |s|^{t-1} exp(-(pi -/+ tilt a) |s| / a)
    rate_hi = (math.pi - tilt * a) / a
    rate_lo = (math.pi + tilt * a) / a
    pad = 10.0 + 2.0 * abs(m.t)
    hi = m.mean + (pad - math.log(mass)) / rate_hi * (1.0 + 0.1 * m.t)
    lo = m.mean - (pad - math.log(mass)) / rate_lo * (1.0 + 0.1 * m.t)
    return lo, hi


def integrate_density(m: Measure1D, f, mass: float = TAIL_MASS, power: int = 8):
    """Integral of f(s) against mu_{lam,t}, numerically.

    ``power`` bounds the polynomial growth of f, used to size the Pascal tail.
    """
    params = m.params
    if params.regime is Regime.PASCAL:
        pts, w = lattice(m, mass, power)
        return complex(np.sum(w * f(pts)))
    if params.regime is Regime.GAMMA:
        def g(s):
            return f(s) * density(m, s)
        hi = m.t + 60.0 + 10.0 * math.sqrt(m.t)
        if m.t < 1.0:
            # s^{t-1} singularity: let quad's algebraic weight absorb it
            def gw(s):
                return f(s) * math.exp(-s - math.lgamma(m.t))
            re = integrate.quad(lambda s: np.real(gw(s)), 0.0, 1.0, weight="alg",
                                wvar=(m.t - 1.0, 0.0), epsabs=QUAD_ABS_TOL, epsrel=QUAD_REL_TOL, limit=200)[0]
            im = integrate.quad(lambda s: np.imag(gw(s)), 0.0, 1.0, weight="alg",
                                wvar=(m.t - 1.0, 0.0), epsabs=QUAD_ABS_TOL, epsrel=QUAD_REL_TOL, limit=200)[0]
            lo = 1.0
        else:
            re = im = 0.0
            lo = 0.0
        re += integrate.quad(lambda s: np.real(g(s)), lo, hi, epsabs=QUAD_ABS_TOL, epsrel=QUAD_REL_TOL, limit=400)[0]
        im += integrate.quad(lambda s: np.imag(g(s)), lo, hi, epsabs=QUAD_ABS_TOL, epsrel=QUAD_REL_TOL, limit=400)[0]
        return complex(re, im)
    lo, hi = meixner_support(m, mass)

    def g(s):
        return f(s) * density(m, s)
    pts = [m.mean]
    re = sum(integrate.quad(lambda s: np.real(g(s)), u, v, epsabs=QUAD_ABS_TOL, epsrel=QUAD_REL_TOL, limit=400)[0]
             for u, v in ((lo, pts[0]), (pts[0], hi)))
    im = sum(integrate.quad(lambda s: np.imag(g(s)), u, v, epsabs=QUAD_ABS_TOL, epsrel=QUAD_REL_TOL, limit=400)[0]
             for u, v in ((lo, pts[0]), (pts[0], hi)))
    return complex(re, im)


def total_mass(m: Measure1D) -> float:
    return integrate_density(m, lambda s: np.ones_like(np.asarray(s, dtype=float))).real


def numeric_moment(m: Measure1D, k: int) -> float:
    return integrate_density(m, lambda s: np.asarray(s, dtype=float) ** k).real


# ---------------------------------------------------------------------------
# characteristic function
# ---------------------------------------------------------------------------

def _d_of_u(params: MeixnerParams, u):
    a, b = params.alpha, params.beta
    return (a * np.exp(-1j * b * u) - b * np.exp(-1j * a * u)) / (a - b)


@lru_cache(maxsize=64)
def safe_u_bound(params: MeixnerParams) -> float:
    """Largest U with |D(u) - 1| < 1 on [-U, U], D the char-function denominator.

    For lam = 2 the closed form (1 - iu)^{-t} holds on the whole line.
    """
    if params.is_gamma:
        return math.inf
    grid = np.linspace(0.0, 60.0, 60001)
    bad = np.abs(_d_of_u(params, grid) - 1.0) >= 1.0
    bad |= np.abs(_d_of_u(params, -grid) - 1.0) >= 1.0
    if not bad.any():
        return 60.0
    j = int(np.argmax(bad))
    lo, hi = grid[j - 1], grid[j]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if max(abs(_d_of_u(params, mid) - 1.0), abs(_d_of_u(params, -mid) - 1.0)) >= 1.0:
            hi = mid
        else:
            lo = mid
    return lo


def char_fun(m: Measure1D, u):
    u = np.asarray(u, dtype=np.float64)
    params, t = m.params, m.t
    if np.any(np.abs(u) >= safe_u_bound(params)):
        raise DomainError(f"|u| must be < {safe_u_bound(params):.6g}")
    if params.is_gamma:
        out = np.exp(-t * np.log(1.0 - 1j * u))
    else:
        # alpha * beta = 1, so the exponent t/(alpha beta) is t
        out = np.exp(-t * np.log(_d_of_u(params, u)) + 1j * params.c * u * t)
    return out[()] if out.ndim == 0 else out


def laplace(m: Measure1D, z):
    """E[e^{z X}] for complex z near 0 (the char function with iu -> z)."""
    z = complex(z)
    params, t = m.params, m.t
    if params.is_gamma:
        return cmath.exp(-t * cmath.log(1.0 - z))
    a, b = params.alpha, params.beta
    d = (a * cmath.exp(-b * z) - b * cmath.exp(-a * z)) / (a - b)
    return cmath.exp(-t * cmath.log(d) + params.c * z * t)


# ---------------------------------------------------------------------------
# Levy measure
# ---------------------------------------------------------------------------

def levy_atoms(L: LevyMeasure, mass: float = TAIL_MASS, power: int = 8):
    """Atoms (h k, p^k / k), k >= 1, of nu_lam.

    The sum stops once the s^2-mass left out, weighted by s^power, is below
    ``mass``; on the lattice that tail is bounded geometrically.
    """
    params = L.params
    if params.regime is not Regime.PASCAL:
        raise DomainError("Levy atoms exist only for lam > 2")
    h, p = params.lattice_step, params.p
    k = 0
    while k < 100000:
        k += 1
        nxt = h * h * (k + 1) * p ** (k + 1) * max(1.0, h * (k + 1)) ** power
        if nxt / (1.0 - p) <= mass and k > power:
            break
    ks = np.arange(1, k + 1, dtype=np.float64)
    return h * ks, p ** ks / ks


def levy_density(L: LevyMeasure, s):
    """Density of nu_lam at s (lam <= 2), or atom mass at s (lam > 2)."""
    s = np.asarray(s, dtype=np.float64)
    if np.any(s == 0):
        raise DomainError("nu_lam is singular at s = 0")
    params = L.params
    if params.regime is Regime.PASCAL:
        h, p = params.lattice_step, params.p
        k = np.rint(s / h)
        on = (np.abs(s - k * h) <= LATTICE_TOL) & (k >= 1)
        kk = np.where(on, k, 1.0)
        out = np.where(on, p ** kk / kk, 0.0)
    elif params.regime is Regime.GAMMA:
        out = np.where(s > 0, np.exp(-np.abs(s)) / np.abs(s), 0.0)
    else:
        out = s2_levy_density(L, s) / (s * s)
    return out[()] if out.ndim == 0 else out


def s2_levy_density(L: LevyMeasure, s):
    """Density of the probability measure s^2 nu_lam(ds) for lam <= 2."""
    s = np.asarray(s, dtype=np.float64)
    params = L.params
    if params.regime is Regime.GAMMA:
        return np.where(s > 0, s * np.exp(-np.abs(s)), 0.0)
    if params.regime is Regime.PASCAL:
        raise DomainError("s^2 nu_lam is atomic for lam > 2; use levy_atoms")
    a, tilt = _meixner_consts(params)
    return a / (2.0 * math.pi) * abs_gamma_sq(1.0, s / a) * np.exp(tilt * s)


def s2_levy_support(L: LevyMeasure, mass: float = 1e-13):
    params = L.params
    if params.regime is Regime.GAMMA:
        return 0.0, 45.0 - math.log(mass)
    a, tilt = _meixner_consts(params)
    rate_hi = (math.pi - tilt * a) / a
    rate_lo = (math.pi + tilt * a) / a
    return -(12.0 - math.log(mass)) / rate_lo, (12.0 - math.log(mass)) / rate_hi


def integrate_s2_levy(L: LevyMeasure, f, mass: float = 1e-13):
    """Integral of f(s) against the probability measure s^2 nu_lam(ds)."""
    params = L.params
    if params.regime is Regime.PASCAL:
        pts, w = levy_atoms(L, mass)
        return complex(np.sum(w * pts * pts * f(pts)))
    lo, hi = s2_levy_support(L, mass)
    breaks = [lo, 0.0, hi] if lo < 0 else [0.0, 1.0, hi]
    total = 0j
    for u, v in zip(breaks[:-1], breaks[1:]):
        def g(s):
            return f(s) * s2_levy_density(L, s)
        re = integrate.quad(lambda s: np.real(g(s)), u, v, epsabs=QUAD_ABS_TOL, epsrel=LEVY_REL_TOL, limit=400)[0]
        im = integrate.quad(lambda s: np.imag(g(s)), u, v, epsabs=QUAD_ABS_TOL, epsrel=LEVY_REL_TOL, limit=400)[0]
        total += complex(re, im)
    return total


def _phi2(x):
    """(e^{x} - 1 - x) / x^2 for complex x, stable near 0."""
    x = np.asarray(x, dtype=np.complex128)
    small = np.abs(x) < 1e-3
    xs = np.where(small, 1.0, x)
    big = (np.exp(xs) - 1.0 - xs) / (xs * xs)
    ser = 0.5 + x / 6.0 + x * x / 24.0 + x ** 3 / 120.0
    return np.where(small, ser, big)


def _phi1(x):
    """(e^{x} - 1) / x for complex x, stable near 0."""
    x = np.asarray(x, dtype=np.complex128)
    small = np.abs(x) < 1e-5
    xs = np.where(small, 1.0, x)
    big = (np.exp(xs) - 1.0) / xs
    return np.where(small, 1.0 + x / 2.0 + x * x / 6.0, big)


def cumulant_radius(params: MeixnerParams) -> float:
    """Radius of theta for which int e^{|theta s|} s^2 nu(ds) is finite."""
    if params.regime is Regime.GAMMA:
        return 1.0
    if params.regime is Regime.PASCAL:
        return math.log(1.0 / params.p) / params.lattice_step
    a, tilt = _meixner_consts(params)
    return (math.pi - tilt * a) / a


def cumulant(params: MeixnerParams, theta):
    """Closed form of int (e^{s theta} - 1 - s theta) nu_lam(ds)."""
    theta = complex(theta)
    if abs(theta) >= cumulant_radius(params):
        raise DomainError(f"|theta| must be < {cumulant_radius(params):.6g}")
    if params.is_gamma:
        return -cmath.log(1.0 - theta) - theta
    a, b = params.alpha, params.beta
    return -cmath.log((a * cmath.exp(-b * theta) - b * cmath.exp(-a * theta)) / (a - b)) / (a * b)


def cumulant_numeric(params: MeixnerParams, theta):
    """Direct quadrature of int (e^{s theta} - 1 - s theta) nu_lam(ds)."""
    theta = complex(theta)
    L = LevyMeasure(params)
    return integrate_s2_levy(L, lambda s: theta * theta * _phi2(theta * np.asarray(s)))


def levy_exponent_numeric(params: MeixnerParams, u, compensated: bool):
    """int (e^{ius} - 1 [- ius]) nu_lam(ds), integrated against s^2 nu_lam."""
    L = LevyMeasure(params)
    iu = 1j * float(u)
    if compensated:
        return integrate_s2_levy(L, lambda s: iu * iu * _phi2(iu * np.asarray(s)))
    return integrate_s2_levy(L, lambda s: iu * _phi1(iu * np.asarray(s)) / np.asarray(s, dtype=float))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


@lru_cache(maxsize=32)
def _meixner_inverse_cdf_table(params: MeixnerParams, t: float):
    m = Measure1D(params, t)
    lo, hi = meixner_support(m, SAMPLER_MASS * 1e-3)
    grid = np.linspace(lo, hi, 200001)
    dens = density(m, grid)
    cdf = integrate.cumulative_trapezoid(dens, grid, initial=0.0)
    cdf /= cdf[-1]
    keep = np.concatenate(([True], np.diff(cdf) > 0))
    return cdf[keep], grid[keep]


def sample(m: Measure1D, count: int, seed: int) -> np.ndarray:
    if count < 1:
        raise DomainError("count must be >= 1")
    rng = rng_for(seed)
    params, t = m.params, m.t
    if params.regime is Regime.PASCAL:
        pts, pmf = lattice(m, 1e-16)
        cum = np.cumsum(pmf)
        u = rng.random(count) * cum[-1]
        idx = np.minimum(np.searchsorted(cum, u, side="right"), len(pts) - 1)
        return pts[idx]
    if params.regime is Regime.GAMMA:
        return rng.gamma(t, 1.0, size=count)
    cdf, grid = _meixner_inverse_cdf_table(params, float(t))
    u = SAMPLER_MASS + (1.0 - 2.0 * SAMPLER_MASS) * rng.random(count)
    return np.interp(u, cdf, grid)


def empirical_char_fun(samples, u):
    samples = np.asarray(samples, dtype=np.float64)
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    return np.array([np.mean(np.exp(1j * uu * samples)) for uu in u])


def log_char_fun(m: Measure1D, u):
    """Principal-branch log of char_fun on the safe interval."""
    u = np.asarray(u, dtype=np.float64)
    params, t = m.params, m.t
    if np.any(np.abs(u) >= safe_u_bound(params)):
        raise DomainError(f"|u| must be < {safe_u_bound(params):.6g}")
    if params.is_gamma:
        out = -t * np.log(1.0 - 1j * u)
    else:
        out = -t * np.log(_d_of_u(params, u)) + 1j * params.c * u * t
    return out[()] if out.ndim == 0 else out
