"""Verification suites: each returns a JSON-ready report dict.

Every suite takes the same keyword arguments (lam, atoms, weights,
max_degree, trials, tol, seed) and reports

    {suite, anchor, pass, max_residual, trials, tol, ...}.

Trials draw from their own generator seeded by (seed, trial index), so a
report depends only on its inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock, functional, measures, poly1d, wick
from .core import make_params, psi, psi_inv, psi_inv_radius
from .fock import DiscreteSpace, FockVector


@dataclass(frozen=True)
class SuiteInfo:
    anchor: str
    tol: float
    max_degree: int
    trials: int
    run: object


SUITES: dict[str, SuiteInfo] = {}


def suite(name, anchor, tol, max_degree=4, trials=10):
    def deco(fn):
        SUITES[name] = SuiteInfo(anchor, tol, max_degree, trials, fn)
        return fn
    return deco


def default_weights(m: int):
    return [0.5 * 2.0 ** i for i in range(m)]


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def _report(name, residuals, tol, trials, **extra):
    worst = float(max(residuals)) if len(residuals) else 0.0
    out = {"suite": name, "anchor": SUITES[name].anchor, "pass": bool(worst < tol),
           "max_residual": worst, "trials": int(trials), "tol": float(tol)}
    out.update(extra)
    return out


def run_suite(name: str, lam: float = 1.0, atoms: int = 3, weights=None, max_degree=None,
              trials=None, tol=None, seed: int = 0) -> dict:
    if name not in SUITES:
        raise KeyError(name)
    info = SUITES[name]
    weights = default_weights(atoms) if weights is None else list(weights)
    space = DiscreteSpace(np.asarray(weights, dtype=np.float64))
    return info.run(name=name, params=make_params(lam), space=space,
                    max_degree=info.max_degree if max_degree is None else int(max_degree),
                    trials=info.trials if trials is None else int(trials),
                    tol=info.tol if tol is None else float(tol), seed=int(seed))


def _rand_tensor(rng, m, n, cplx=False):
    a = rng.standard_normal((m,) * n)
    if cplx:
        a = a + 1j * rng.standard_normal((m,) * n)
    return fock.symmetrize(a, n)


def _single(m, n, f):
    return FockVector(tuple([np.zeros((m,) * k, dtype=np.complex128) for k in range(n)]
                            + [np.asarray(f, dtype=np.complex128)]))


def _omega(rng, space):
    return rng.uniform(0.0, 2.0, space.m) * space.weights + 0.1


# ---------------------------------------------------------------------------
# combinatorics and Fock space
# ---------------------------------------------------------------------------

@suite("census", "loop collections: |A_n| = n!", 0.5, max_degree=8, trials=1)
def _census(name, params, space, max_degree, trials, tol, seed):
    top = min(max_degree, fock.MAX_LOOP_DEGREE)
    counts = {n: len(fock.enumerate_loop_collections(n)) for n in range(1, top + 1)}
    res = [abs(c - math.factorial(n)) for n, c in counts.items()]
    return _report(name, res, tol, trials, counts={str(k): v for k, v in counts.items()})


@suite("fock-adjoint", "creation adjoint equals a_1^- + a_2^-", 1e-12)
def _fock_adjoint(name, params, space, max_degree, trials, tol, seed):
    m, res = space.m, []
    for k in range(trials):
        rng = trial_rng(seed, k)
        xi = rng.standard_normal(m)
        for n in range(max_degree):
            F = _single(m, n, _rand_tensor(rng, m, n, True))
            G = _single(m, n + 1, _rand_tensor(rng, m, n + 1, True))
            lhs = fock.fock_inner(space, fock.create(space, xi, F), G)
            rhs = fock.fock_inner(space, F.padded(m, n + 1), fock.annihilate(space, xi, G).padded(m, n + 1))
            res.append(abs(lhs - rhs) / max(1.0, abs(lhs)))
    return _report(name, res, tol, trials)


@suite("field-hermitian", "a_lam(xi) is symmetric in the extended product", 1e-12)
def _field_hermitian(name, params, space, max_degree, trials, tol, seed):
    m, res = space.m, []
    for k in range(trials):
        rng = trial_rng(seed, k)
        xi = rng.standard_normal(m)
        F = FockVector.from_list([_rand_tensor(rng, m, n) for n in range(max_degree)])
        G = FockVector.from_list([_rand_tensor(rng, m, n) for n in range(max_degree)])
        lhs = fock.fock_inner(space, fock.field_op(space, params, xi, F), G.padded(m, max_degree))
        rhs = fock.fock_inner(space, F.padded(m, max_degree), fock.field_op(space, params, xi, G))
        res.append(abs(lhs - rhs) / max(1.0, abs(lhs)))
    return _report(name, res, tol, trials)


@suite("gram", "extended product is positive semidefinite", 1e-10, max_degree=3, trials=1)
def _gram(name, params, space, max_degree, trials, tol, seed):
    _, gram = fock.monomial_gram(space, max_degree)
    low = float(np.min(np.linalg.eigvalsh(gram)))
    return _report(name, [max(0.0, -low)], tol, trials, min_eigenvalue=low)


# ---------------------------------------------------------------------------
# one-dimensional laws
# ---------------------------------------------------------------------------

T_VALUES = (0.5, 1.0, 2.0)


@suite("poly-orthogonality", "P^(n) orthogonal, norms prod b_k", 1e-9, trials=1)
def _poly_orth(name, params, space, max_degree, trials, tol, seed):
    res = []
    for t in T_VALUES:
        nodes, w = poly1d.quadrature(params, t, max_degree + 2)
        vals = poly1d.eval_all(params, t, max_degree, nodes)
        gram = (vals * w) @ vals.T
        norms = np.array([poly1d.norm_sq(params, t, n) for n in range(max_degree + 1)])
        scale = np.sqrt(np.outer(norms, norms))
        res.append(float(np.max(np.abs(gram - np.diag(norms)) / scale)))
    return _report(name, res, tol, trials)


@suite("moments", "integrated moments of the laws match the Jacobi matrix", 1e-6, max_degree=6, trials=1)
def _moments(name, params, space, max_degree, trials, tol, seed):
    res, mass = [], []
    for t in T_VALUES:
        m = measures.Measure1D(params, t)
        exact = poly1d.moments(params, t, max_degree)
        for k in range(max_degree + 1):
            num = measures.numeric_moment(m, k)
            res.append(abs(num - exact[k]) / max(1.0, abs(exact[k])))
        mass.append(measures.total_mass(m))
    return _report(name, res, tol, trials, total_mass=[float(x) for x in mass])


def _taylor_coefficients(m, kmax, points=64):
    """Coefficients of z -> E[e^{zX}] by Cauchy sums on a circle."""
    r = 0.25 * measures.cumulant_radius(m.params)
    zs = r * np.exp(2j * np.pi * np.arange(points) / points)
    vals = np.array([measures.laplace(m, z) for z in zs])
    return (np.fft.fft(vals) / points)[:kmax + 1] / r ** np.arange(kmax + 1)


@suite("charfun", "char function: Taylor data and empirical agreement", 1e-5, max_degree=6, trials=1)
def _charfun(name, params, space, max_degree, trials, tol, seed):
    res, emp_res = [], []
    count = 100000
    for t in T_VALUES:
        m = measures.Measure1D(params, t)
        exact = poly1d.moments(params, t, max_degree)
        coef = _taylor_coefficients(m, max_degree)
        for k in range(max_degree + 1):
            mk = coef[k].real * math.factorial(k)
            res.append(abs(mk - exact[k]) / max(1.0, abs(exact[k])))
        U = 0.9 * min(measures.safe_u_bound(params), 5.0)
        us = np.linspace(-U, U, 21)
        s = measures.sample(m, count, seed)
        emp = measures.empirical_char_fun(s, us)
        emp_res.append(float(np.max(np.abs(emp - measures.char_fun(m, us)))) * math.sqrt(count) / 4.0)
    # empirical misfit is reported in units of the 4/sqrt(N) band
    out = _report(name, res, tol, trials, empirical_band_fraction=float(max(emp_res)))
    out["pass"] = out["pass"] and max(emp_res) < 1.0
    return out


@suite("levy", "Levy-Khintchine exponent rebuilt from nu_lam", 1e-6, trials=1)
def _levy(name, params, space, max_degree, trials, tol, seed):
    m = measures.Measure1D(params, 1.0)
    U = 0.9 * min(measures.safe_u_bound(params), 5.0)
    comp = params.regime is measures.Regime.MEIXNER
    res = []
    for u in np.linspace(-U, U, 21):
        num = measures.levy_exponent_numeric(params, u, compensated=comp)
        if comp:
            num += 1j * params.c * u
        res.append(abs(num - measures.log_char_fun(m, u)))
    L = measures.LevyMeasure(params)
    mass = measures.integrate_s2_levy(L, lambda s: np.ones_like(np.asarray(s, dtype=float))).real
    first = measures.integrate_s2_levy(L, lambda s: np.asarray(s, dtype=float)).real
    res += [abs(mass - 1.0), abs(first - params.lam)]
    return _report(name, res, tol, trials, s2_mass=float(mass), s2_mean=float(first))


@suite("q-orthogonality", "Q^(n) orthogonal against s^2 nu_lam", 1e-6, max_degree=3, trials=1)
def _q_orth(name, params, space, max_degree, trials, tol, seed):
    L = measures.LevyMeasure(params)
    res = []
    for a in range(max_degree + 1):
        for b in range(a + 1):
            val = measures.integrate_s2_levy(
                L, lambda s: poly1d.q_poly(params, a, np.asarray(s, dtype=float))
                * poly1d.q_poly(params, b, np.asarray(s, dtype=float))).real
            if a == b:
                norm = float(np.prod([k * (k + 1.0) for k in range(1, a + 1)]))
                res.append(abs(val - norm) / max(1.0, norm))
            else:
                res.append(abs(val))
    return _report(name, res, tol, trials)


@suite("cumulant", "cumulant closed form vs quadrature over nu_lam", 1e-6, trials=1)
def _cumulant(name, params, space, max_degree, trials, tol, seed):
    res = []
    for th in np.linspace(-0.3, 0.3, 13):
        for z in (th, 1j * th):
            res.append(abs(measures.cumulant(params, z) - measures.cumulant_numeric(params, z)))
    return _report(name, res, tol, trials)


@suite("psi", "psi_inv inverts psi", 1e-12, trials=20)
def _psi(name, params, space, max_degree, trials, tol, seed):
    res = []
    r = 0.5 * min(params.radius, psi_inv_radius(params))
    for k in range(trials):
        rng = trial_rng(seed, k)
        z = r * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        res.append(abs(psi(params, psi_inv(params, z)) - z))
        res.append(abs(psi_inv(params, psi(params, z * 0.5)) - z * 0.5))
    return _report(name, res, tol, trials)


# ---------------------------------------------------------------------------
# Wick kernels
# ---------------------------------------------------------------------------

@suite("orthogonality", "unitarity of I_lam: E[conj(I f) I g] = delta n! (f, g)_ext", 1e-9, trials=50)
def _orthogonality(name, params, space, max_degree, trials, tol, seed):
    m, res = space.m, []
    for k in range(trials):
        rng = trial_rng(seed, k)
        fs = [_rand_tensor(rng, m, n) for n in range(max_degree + 1)]
        gs = [_rand_tensor(rng, m, n) for n in range(max_degree + 1)]
        for a in range(max_degree + 1):
            for b in range(max_degree + 1):
                e = wick.expect_product(space, params, _single(m, a, fs[a]), _single(m, b, gs[b]))
                exact = math.factorial(b) * fock.ext_inner(space, fs[a], gs[b]) if a == b else 0.0
                res.append(abs(e - exact))
    return _report(name, res, tol, trials)


@suite("product", "kernel pairings with indicators are products of P^(n)", 1e-10, trials=100)
def _product(name, params, space, max_degree, trials, tol, seed):
    m, res = space.m, []
    for k in range(trials):
        rng = trial_rng(seed, k)
        omega = _omega(rng, space)
        stack = wick.wick_kernels(space, params, omega, max_degree)
        # one block: chi_Delta^{(x)n}
        sel = rng.random(m) < 0.5
        sel[rng.integers(m)] = True
        chi = sel.astype(float)
        t, w = float(space.weights @ chi), float(omega @ chi)
        for n in range(max_degree + 1):
            got = wick.pair(space, stack, fock.tensor_power(chi, n), n)
            res.append(abs(got - poly1d.eval_poly(params, t, n, w)))
        # disjoint blocks
        if m >= 2:
            perm = rng.permutation(m)
            cut = int(rng.integers(1, m))
            d1, d2 = np.zeros(m), np.zeros(m)
            d1[perm[:cut]], d2[perm[cut:]] = 1.0, 1.0
            for k1 in range(max_degree + 1):
                for k2 in range(max_degree + 1 - k1):
                    f = fock.sym_product(fock.tensor_power(d1, k1), fock.tensor_power(d2, k2), k1, k2)
                    got = wick.pair(space, stack, f, k1 + k2)
                    want = (poly1d.eval_poly(params, float(space.weights @ d1), k1, float(omega @ d1))
                            * poly1d.eval_poly(params, float(space.weights @ d2), k2, float(omega @ d2)))
                    res.append(abs(got - want))
    return _report(name, res, tol, trials)


@suite("zuaf", "three-level identity behind the Wick recurrence", 1e-10, trials=100)
def _zuaf(name, params, space, max_degree, trials, tol, seed):
    res = []
    for k in range(trials):
        rng = trial_rng(seed, k)
        omega = _omega(rng, space)
        xi = rng.uniform(-1.0, 1.0, space.m)
        stack = wick.wick_kernels(space, params, omega, max_degree + 1)
        for n in range(max_degree + 1):
            res.append(wick.verify_zuaF(space, params, omega, xi, n, stack))
    return _report(name, res, tol, trials)


@suite("genfun", "generating function of Wick pairings, closed form", 1e-8, max_degree=12, trials=10)
def _genfun(name, params, space, max_degree, trials, tol, seed):
    res, one_d = [], []
    R = params.radius
    for k in range(trials):
        rng = trial_rng(seed, k)
        omega = _omega(rng, space)
        phi = 0.5 * R * rng.uniform(-1.0, 1.0, space.m)
        phi[rng.integers(space.m)] = 0.5 * R * rng.choice([-1.0, 1.0])
        tr, cl = wick.gen_fun_field(space, params, omega, phi, max_degree)
        res.append(abs(tr - cl))
        # phi = u chi_Delta reduces to the one-dimensional closed form
        u = 0.5 * R * rng.uniform(-1.0, 1.0)
        _, cl_field = wick.gen_fun_field(space, params, omega, u * np.ones(space.m), 0)
        _, cl_1d = poly1d.gen_fun(params, float(space.weights.sum()), float(omega.sum()), u, 0)
        one_d.append(abs(cl_field - cl_1d))
    out = _report(name, res + one_d, tol, trials)
    out.update(truncation_max=float(max(res)), one_dim_max=float(max(one_d)))
    return out


@suite("variation", "total variation of kernels grows at most like n! C^n", 1.0, max_degree=8, trials=5)
def _variation(name, params, space, max_degree, trials, tol, seed):
    rates = []
    for k in range(trials):
        rng = trial_rng(seed, k)
        omega = _omega(rng, space)
        stack = wick.wick_kernels(space, params, omega, max_degree)
        v = wick.variation_norms(space, stack)
        rates.append([math.log(v[n] / math.factorial(n)) / n for n in range(1, max_degree + 1)])
    rates = np.array(rates)
    # bounded growth: the late rates do not exceed the early maximum by more than tol
    excess = float(np.max(rates[:, -1] - np.max(rates[:, : max(1, max_degree // 2)], axis=1)))
    return _report(name, [max(0.0, excess)], tol, trials, rates=rates.max(axis=0).tolist())


@suite("leading", "pairing = <omega^n, f> + lower order", 1e-9, trials=10)
def _leading(name, params, space, max_degree, trials, tol, seed):
    res = []
    for k in range(trials):
        rng = trial_rng(seed, k)
        omega = _omega(rng, space)
        for n in range(1, max_degree + 1):
            f = _rand_tensor(rng, space.m, n)
            lead = wick.leading_coefficient(space, params, omega, f)
            want = wick.measure_pairing(space, omega, f)
            res.append(abs(lead - want) / max(1.0, abs(want)))
    return _report(name, res, tol, trials)


# ---------------------------------------------------------------------------
# functional realization
# ---------------------------------------------------------------------------

def _rand_functional(rng, m, N, cplx=False):
    return functional.TestFunctional.from_list([_rand_tensor(rng, m, n, cplx) for n in range(N + 1)])


@suite("adjoint", "raise is the adjoint of lower", 1e-12, trials=20)
def _adjoint(name, params, space, max_degree, trials, tol, seed):
    res = []
    for k in range(trials):
        rng = trial_rng(seed, k)
        phi = _rand_functional(rng, space.m, max_degree, True)
        F = functional.DualVector.from_list([_rand_tensor(rng, space.m, n, True) for n in range(max_degree)])
        for x in range(space.m):
            lhs = functional.dual_pairing(space, functional.raise_(space, x, F), phi)
            rhs = functional.dual_pairing(space, F, functional.lower(space, x, phi))
            res.append(abs(lhs - rhs) / max(1.0, abs(lhs)))
        # lowering integrated against xi is a_1^-
        xi = rng.standard_normal(space.m)
        a = functional.lowering_sum(space, xi, phi).components
        b = fock.annihilate1(space, xi, phi.coefficients).components
        res.append(max(float(np.max(np.abs(u - v), initial=0.0)) for u, v in zip(a, b)))
    return _report(name, res, tol, trials)


@suite("multiplication", "<omega, xi> acts as integral of xi(x) omega(x)", 1e-9, trials=10)
def _multiplication(name, params, space, max_degree, trials, tol, seed):
    res = []
    for k in range(trials):
        rng = trial_rng(seed, k)
        phi = _rand_functional(rng, space.m, max(max_degree - 1, 0))
        xi = rng.standard_normal(space.m)
        omega = _omega(rng, space)
        prod = functional.multiplication_operator(space, params, xi, phi)
        direct = (omega @ xi) * functional.evaluate(space, params, phi, omega)
        res.append(abs(functional.evaluate(space, params, prod, omega) - direct))
        psi_ = _rand_functional(rng, space.m, max_degree)
        lhs = functional.dual_pairing(space, prod.coefficients, psi_)
        rhs = functional.dual_pairing(space, functional.field_coefficients(space, params, xi, phi), psi_)
        res.append(abs(lhs - rhs))
    return _report(name, res, tol, trials)


@suite("levy-lower", "lowering as an integral over the Levy measure", 1e-6, max_degree=3, trials=5)
def _levy_lower(name, params, space, max_degree, trials, tol, seed):
    res = []
    for k in range(trials):
        rng = trial_rng(seed, k)
        phi = _rand_functional(rng, space.m, max_degree)
        omega = _omega(rng, space)
        for x in range(space.m):
            exact = functional.evaluate(space, params, functional.lower(space, x, phi), omega)
            res.append(abs(functional.levy_lower(space, params, x, phi, omega) - exact))
    return _report(name, res, tol, trials)


@suite("creation-fd", "creation from finite differences of phi", 1e-9, max_degree=2, trials=10)
def _creation_fd(name, params, space, max_degree, trials, tol, seed):
    res, imag = [], []
    for k in range(trials):
        rng = trial_rng(seed, k)
        phi = _rand_functional(rng, space.m, max_degree)
        xi = rng.standard_normal(space.m)
        omega = _omega(rng, space)
        fd = functional.creation_via_fd(space, params, xi, phi, omega)
        res.append(abs(fd - functional.creation_oracle(space, params, xi, phi, omega)))
        imag.append(abs(fd.imag))
    worst_im = float(max(imag))
    out = _report(name, res, tol, trials, max_imag=worst_im)
    if worst_im >= 1e-10:
        out["pass"] = False
    return out


@suite("psi-inv-nabla", "lowering equals psi_inv of the Gateaux derivative on exponentials",
       1e-6, max_degree=12, trials=5)
def _psi_inv_nabla(name, params, space, max_degree, trials, tol, seed):
    orders = list(range(2, max_degree + 1))
    table = np.zeros((trials, len(orders)))
    r = 0.2 * min(1.0, params.radius, psi_inv_radius(params))
    for k in range(trials):
        rng = trial_rng(seed, k)
        phi = r * rng.uniform(-1.0, 1.0, space.m)
        omega = _omega(rng, space)
        x = int(rng.integers(space.m))
        for j, N in enumerate(orders):
            table[k, j] = functional.psi_inv_nabla_residual(space, params, phi, omega, x, N)[0]
    worst = table.max(axis=0)
    # residuals oscillate between orders; require a clear geometric envelope
    slopes = [np.polyfit(orders, np.log10(np.maximum(row, 1e-300)), 1)[0] for row in table]
    decaying = bool(max(slopes) < -0.25)
    out = _report(name, [float(worst[-1])], tol, trials, residual_by_order=dict(
        zip([str(o) for o in orders], [float(v) for v in worst])),
        decay_per_order=float(max(slopes)), decaying=decaying)
    out["pass"] = out["pass"] and decaying
    return out
