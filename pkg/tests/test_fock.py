import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from meixner import BudgetError, DiscreteSpace, DomainError, FockVector, SymTensor, fock, make_params


def cycles_of(perm):
    seen, out = set(), []
    for start in range(len(perm)):
        if start in seen:
            continue
        cyc, j = [], start
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = perm[j]
        out.append(cyc)
    return out


def ext_inner_brute(sigma, f, g):
    """Loop collections of {0..n-1} are permutations; each cycle pins its arguments together."""
    n = f.ndim
    h = np.conj(f) * g
    total = 0j
    for perm in itertools.permutations(range(n)):
        cyc = cycles_of(perm)
        for atoms in itertools.product(range(len(sigma)), repeat=len(cyc)):
            idx = [0] * n
            w = 1.0
            for c, x in zip(cyc, atoms):
                for j in c:
                    idx[j] = x
                w *= sigma[x]
            total += w * h[tuple(idx)]
    return total


def rand_sym(rng, m, n, cplx=True):
    a = rng.standard_normal((m,) * n)
    if cplx:
        a = a + 1j * rng.standard_normal((m,) * n)
    return fock.symmetrize(a, n)


@pytest.mark.parametrize("n", range(1, 9))
def test_census_counts_factorial(n):
    assert len(fock.enumerate_loop_collections(n)) == math.factorial(n)


def test_census_small_cases():
    assert [c.blocks for c in fock.enumerate_loop_collections(2)] == [((1,), (2,)), ((1, 2),)]
    three = {c.blocks for c in fock.enumerate_loop_collections(3)}
    assert ((1, 2, 3),) in three and ((1, 3, 2),) in three and len(three) == 6


@pytest.mark.parametrize("n", range(1, 12))
def test_cycle_census_sums_and_matches_stirling(n):
    census = fock.cycle_census(n)
    assert sum(c for _, c in census) == math.factorial(n)
    # number of loop collections with k loops = unsigned Stirling number [n, k]
    by_k = {}
    for ct, c in census:
        by_k[len(ct)] = by_k.get(len(ct), 0) + c
    stirling = [[1]]
    for i in range(1, n + 1):
        prev = stirling[-1] + [0]
        stirling.append([0] + [prev[k - 1] + (i - 1) * prev[k] for k in range(1, i + 1)])
    for k, c in by_k.items():
        assert c == stirling[n][k]


def test_census_formula_agrees_with_enumeration():
    for n in range(1, 9):
        fock.cycle_census.cache_clear()
        enum = fock.cycle_census(n)
        parts = {}
        for part in fock._partitions(n):
            den = 1
            for k in set(part):
                mk = part.count(k)
                den *= k ** mk * math.factorial(mk)
            parts[part] = math.factorial(n) // den
        assert dict(enum) == parts


@pytest.mark.parametrize("bad", [0, 9])
def test_enumeration_range(bad):
    with pytest.raises(DomainError):
        fock.enumerate_loop_collections(bad)


def test_canonical_blocks_start_at_minimum():
    for c in fock.enumerate_loop_collections(5):
        assert all(b[0] == min(b) for b in c.blocks)
        assert [b[0] for b in c.blocks] == sorted(b[0] for b in c.blocks)


@pytest.mark.parametrize("n", range(0, 5))
def test_ext_inner_against_permutation_oracle(space3, n):
    rng = np.random.default_rng(n)
    f, g = rand_sym(rng, 3, n), rand_sym(rng, 3, n)
    want = ext_inner_brute(space3.weights, f, g) if n else np.conj(f) * g
    assert abs(fock.ext_inner(space3, f, g) - want) < 1e-12 * max(1, abs(want))


def test_ext_inner_degree_two_by_hand():
    sp = DiscreteSpace(np.array([0.5, 2.0]))
    f = np.array([[1.0, 0.0], [0.0, 0.0]])
    # plain part sigma_1^2 plus the single two-loop sigma_1
    assert fock.ext_inner(sp, f, f) == pytest.approx(0.25 + 0.5)


def test_symmetrize_is_projection():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((3, 3, 3, 3))
    s = fock.symmetrize(a, 4)
    assert fock.is_symmetric(s, 4)
    assert np.allclose(fock.symmetrize(s, 4), s)
    want = sum(np.transpose(a, p) for p in itertools.permutations(range(4))) / 24
    assert np.allclose(s, want)


def test_symmetrize_batched():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((5, 2, 3, 3))
    s = fock.symmetrize(a, 2)
    for i in range(5):
        for j in range(2):
            assert np.allclose(s[i, j], (a[i, j] + a[i, j].T) / 2)


def test_sym_tensor_and_powers():
    xi = np.array([1.0, 2.0, 3.0])
    t = fock.tensor_power(xi, 3)
    assert t[0, 1, 2] == pytest.approx(6.0)
    st_ = SymTensor(np.arange(9.0).reshape(3, 3), 2)
    assert np.allclose(st_.data, st_.data.T)


def test_monomial_gram_diagonal_entries():
    sp = DiscreteSpace(np.array([0.5, 1.0, 2.0]))
    labels, gram = fock.monomial_gram(sp, 2)
    i = labels.index((0, 0))
    j = labels.index((0, 1))
    assert gram[i, i] == pytest.approx(2 * (0.25 + 0.5))
    assert gram[j, j] == pytest.approx(2 * 0.5 * 1.0 / 2)
    assert np.linalg.eigvalsh(gram).min() > -1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(0, 2**31 - 1))
def test_creation_adjoint_is_both_annihilators(n, seed):
    sp = DiscreteSpace(np.array([0.5, 1.0, 2.0]))
    rng = np.random.default_rng(seed)
    xi = rng.standard_normal(3)
    F = FockVector(tuple(rand_sym(rng, 3, k) for k in range(n + 1)))
    G = FockVector(tuple(rand_sym(rng, 3, k) for k in range(n + 2)))
    lhs = fock.fock_inner(sp, fock.create(sp, xi, F), G)
    rhs = fock.fock_inner(sp, F.padded(3, n + 1), fock.annihilate(sp, xi, G).padded(3, n + 1))
    assert abs(lhs - rhs) < 1e-12 * max(1, abs(lhs))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([0.0, 1.0, 2.0, 3.0]), st.integers(0, 2**31 - 1))
def test_field_operator_symmetric(lam, seed):
    sp = DiscreteSpace(np.array([0.5, 1.0, 2.0]))
    p = make_params(lam)
    rng = np.random.default_rng(seed)
    xi = rng.standard_normal(3)
    F = FockVector(tuple(rand_sym(rng, 3, k) for k in range(4)))
    G = FockVector(tuple(rand_sym(rng, 3, k) for k in range(4)))
    lhs = fock.fock_inner(sp, fock.field_op(sp, p, xi, F), G.padded(3, 4))
    rhs = fock.fock_inner(sp, F.padded(3, 4), fock.field_op(sp, p, xi, G))
    assert abs(lhs - rhs) < 1e-11 * max(1, abs(lhs))


def test_annihilate1_by_hand(space3):
    rng = np.random.default_rng(3)
    f = rand_sym(rng, 3, 2)
    xi = rng.standard_normal(3)
    got = fock.annihilate1(space3, xi, FockVector((0j, np.zeros(3, complex), f))).components[1]
    want = 2 * sum(xi[x] * space3.weights[x] * f[x] for x in range(3))
    assert np.allclose(got, want)


def test_annihilate2_by_hand(space3):
    rng = np.random.default_rng(4)
    f = rand_sym(rng, 3, 3)
    xi = rng.standard_normal(3)
    got = fock.annihilate2(space3, xi, FockVector((0j, np.zeros(3, complex), np.zeros((3, 3), complex), f)))
    want = 6 * fock.symmetrize(np.array([[xi[a] * f[a, a, b] for b in range(3)] for a in range(3)]), 2)
    assert np.allclose(got.components[2], want)


@given(arrays(np.float64, 4, elements=st.floats(0.01, 10.0)))
def test_space_accepts_positive_weights(w):
    assert DiscreteSpace(w).m == 4


@pytest.mark.parametrize("w", [[], [1.0, 0.0], [1.0, -2.0], [np.nan]])
def test_space_rejects_bad_weights(w):
    with pytest.raises(DomainError):
        DiscreteSpace(np.array(w))


def test_budget():
    with pytest.raises(BudgetError):
        fock.check_budget(2, 21)
    fock.check_budget(2, 20)


def test_create_respects_truncation(space3):
    F = FockVector.from_list([1.0, np.ones(3)])
    with pytest.raises(BudgetError):
        fock.create(space3, np.ones(3), F, max_degree=1)
