"""Extended Fock space over a finite weighted atom set.

Tensors are dense arrays of shape ``(m,) * n`` over the atoms.  Degree-n
tensors are paired by summing over loop collections: every partition of
``{1..n}`` into cyclically ordered blocks contributes the integral of the
tensor restricted to the diagonal where each block's arguments coincide.
"""
from __future__ import annotations

import itertools
import math
import string
import threading
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .core import MeixnerParams
from .errors import BudgetError, DomainError

MAX_LOOP_DEGREE = 8
MAX_ENTRIES = 1 << 20      # dense tensor budget, m**n
SYM_TOL = 1e-13


@dataclass(frozen=True)
class DiscreteSpace:
    weights: np.ndarray
    atoms: tuple = ()

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if w.size < 1:
            raise DomainError("a space needs at least one atom")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise DomainError("atom weights must be finite and > 0")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        labels = tuple(self.atoms) or tuple(f"x{i + 1}" for i in range(w.size))
        if len(labels) != w.size:
            raise DomainError("one label per atom")
        object.__setattr__(self, "atoms", labels)

    @property
    def m(self) -> int:
        return int(self.weights.size)

    def integral(self, xi) -> complex:
        """<xi> = sum_i xi_i sigma_i."""
        return np.asarray(xi) @ self.weights

    def indicator(self, atoms) -> np.ndarray:
        out = np.zeros(self.m)
        out[list(atoms)] = 1.0
        return out

    def __hash__(self):
        return hash((self.weights.tobytes(), self.atoms))

    def __eq__(self, other):
        return (isinstance(other, DiscreteSpace) and self.atoms == other.atoms
                and np.array_equal(self.weights, other.weights))


def check_budget(m: int, n: int):
    if n < 0:
        raise DomainError("degree must be >= 0")
    if m ** n > MAX_ENTRIES:
        raise BudgetError(f"{m}^{n} tensor entries exceed the budget of {MAX_ENTRIES}")


# ---------------------------------------------------------------------------
# loop collections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LoopCollection:
    blocks: tuple  # tuple of tuples, each rotated so its minimum is first

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def cycle_type(self) -> tuple:
        return tuple(sorted((len(b) for b in self.blocks), reverse=True))

    def __len__(self):
        return len(self.blocks)


def _collections(items: tuple):
    if not items:
        yield ()
        return
    head, rest = items[0], items[1:]
    for k in range(len(rest) + 1):
        for mates in itertools.combinations(rest, k):
            left = tuple(x for x in rest if x not in mates)
            for order in itertools.permutations(mates):
                block = (head,) + order
                for tail in _collections(left):
                    yield (block,) + tail


_census_lock = threading.Lock()


@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple:
    return tuple(LoopCollection(c) for c in _collections(tuple(range(1, n + 1))))


def enumerate_loop_collections(n: int) -> tuple:
    """All partitions of {1..n} into cyclically ordered blocks, canonical form."""
    if not 1 <= n <= MAX_LOOP_DEGREE:
        raise DomainError(f"n must be in 1..{MAX_LOOP_DEGREE}, got {n}")
    with _census_lock:
        return _enumerate(n)


@lru_cache(maxsize=None)
def cycle_census(n: int) -> tuple:
    """((cycle type, count), ...) over A_n, sorted by type.

    Counted from the enumeration for n <= 8 and from the permutation
    cycle-index count n! / prod(k^{m_k} m_k!) beyond that.
    """
    if n == 0:
        return (((), 1),)
    if n <= MAX_LOOP_DEGREE:
        counts = Counter(c.cycle_type for c in enumerate_loop_collections(n))
        return tuple(sorted(counts.items()))
    out = []
    for part in _partitions(n):
        mult = Counter(part)
        den = 1
        for k, mk in mult.items():
            den *= k ** mk * math.factorial(mk)
        out.append((part, math.factorial(n) // den))
    return tuple(sorted(out))


def _partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


# ---------------------------------------------------------------------------
# symmetrization
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _orbit_index(m: int, n: int):
    """Orbit id of every flat multi-index under permutations, and orbit sizes."""
    idx = np.indices((m,) * n, dtype=np.int64).reshape(n, -1)
    key = np.sort(idx, axis=0)
    code = np.zeros(idx.shape[1], dtype=np.int64)
    for row in key:
        code = code * m + row
    _, inv, counts = np.unique(code, return_inverse=True, return_counts=True)
    return inv.reshape(-1), counts


def symmetrize(data, n: int):
    """Average over argument permutations of the last ``n`` axes."""
    data = np.asarray(data)
    if n <= 1:
        return data.astype(np.result_type(data, np.float64), copy=True)
    m = data.shape[-1]
    batch = data.shape[:data.ndim - n]
    inv, counts = _orbit_index(m, n)
    flat = np.ascontiguousarray(data.reshape((-1, m ** n)))
    if not np.iscomplexobj(flat):
        flat = flat.astype(np.float64)
    out = _kernels.orbit_mean(flat, inv, counts)
    return out.reshape(batch + (m,) * n)


def is_symmetric(data, n: int, tol: float = SYM_TOL) -> bool:
    if n <= 1:
        return True
    return bool(np.max(np.abs(symmetrize(data, n) - data), initial=0.0)
                <= tol * max(1.0, np.max(np.abs(data), initial=0.0)))


@dataclass(frozen=True)
class SymTensor:
    """Symmetric degree-n tensor over m atoms (symmetrized on construction)."""

    data: np.ndarray
    degree: int

    def __post_init__(self):
        d = np.asarray(self.data)
        if d.ndim != self.degree:
            raise DomainError(f"array of rank {d.ndim} cannot carry degree {self.degree}")
        if self.degree:
            check_budget(d.shape[0], self.degree)
        d = symmetrize(d.astype(np.complex128), self.degree)
        d.setflags(write=False)
        object.__setattr__(self, "data", d)

    @classmethod
    def scalar(cls, value) -> "SymTensor":
        return cls(np.asarray(value, dtype=np.complex128), 0)

    @classmethod
    def power(cls, xi, n: int) -> "SymTensor":
        """xi^{(x) n}."""
        return cls(tensor_power(xi, n), n)


def tensor_power(xi, n: int):
    xi = np.asarray(xi)
    out = np.ones(())
    for _ in range(n):
        out = np.multiply.outer(out, xi)
    return out


def sym_product(f, g, nf: int, ng: int):
    """Symmetric tensor product of plain arrays of degrees nf and ng."""
    return symmetrize(np.multiply.outer(f, g), nf + ng)


# ---------------------------------------------------------------------------
# inner products
# ---------------------------------------------------------------------------

_LETTERS = string.ascii_letters


@lru_cache(maxsize=None)
def _contraction(cycle_type: tuple) -> str:
    sub, outs = [], []
    for j, size in enumerate(cycle_type):
        sub.extend(_LETTERS[j] * size)
        outs.append(_LETTERS[j])
    return "".join(sub) + "," + ",".join(outs) + "->"


def diagonal_integral(h, sigma, cycle_type: tuple):
    """Integral of h restricted to the diagonal of the given block sizes."""
    if not cycle_type:
        return complex(h)
    subscripts = _contraction(cycle_type)
    return complex(np.einsum(subscripts, h, *([sigma] * len(cycle_type)), optimize=len(cycle_type) > 2))


def ext_inner(space: DiscreteSpace, f, g) -> complex:
    """(f, g)_ext = sum over loop collections of int (conj(f) g)_alpha."""
    fd, gd = _data(f), _data(g)
    if fd.ndim != gd.ndim:
        raise DomainError(f"degree mismatch: {fd.ndim} vs {gd.ndim}")
    n = fd.ndim
    if n == 0:
        return complex(np.conj(fd) * gd)
    h = np.conj(fd) * gd
    return complex(sum(count * diagonal_integral(h, space.weights, ct)
                       for ct, count in cycle_census(n)))


def plain_inner(space: DiscreteSpace, f, g) -> complex:
    """Usual H^{(x)n} product sum conj(f) g sigma^{(x)n}."""
    fd, gd = _data(f), _data(g)
    n = fd.ndim
    return diagonal_integral(np.conj(fd) * gd, space.weights, (1,) * n) if n else complex(np.conj(fd) * gd)


def _data(f):
    return f.data if isinstance(f, SymTensor) else np.asarray(f)


# ---------------------------------------------------------------------------
# Fock vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FockVector:
    components: tuple  # arrays, component n of shape (m,) * n

    @classmethod
    def from_list(cls, comps) -> "FockVector":
        out = []
        for n, c in enumerate(comps):
            arr = np.asarray(_data(c), dtype=np.complex128)
            if arr.ndim != n:
                raise DomainError(f"component {n} has rank {arr.ndim}")
            out.append(symmetrize(arr, n))
        return cls(tuple(out))

    @classmethod
    def vacuum(cls) -> "FockVector":
        return cls((np.ones((), dtype=np.complex128),))

    @classmethod
    def zeros(cls, m: int, N: int) -> "FockVector":
        return cls(tuple(np.zeros((m,) * n, dtype=np.complex128) for n in range(N + 1)))

    @property
    def degree(self) -> int:
        return len(self.components) - 1

    def padded(self, m: int, N: int) -> "FockVector":
        comps = list(self.components[:N + 1])
        comps += [np.zeros((m,) * n, dtype=np.complex128) for n in range(len(comps), N + 1)]
        return FockVector(tuple(comps))

    def __add__(self, other: "FockVector") -> "FockVector":
        N = max(self.degree, other.degree)
        m = _atom_count(self, other)
        a, b = self.padded(m, N), other.padded(m, N)
        return FockVector(tuple(x + y for x, y in zip(a.components, b.components)))

    def scale(self, s) -> "FockVector":
        return FockVector(tuple(s * c for c in self.components))

    def __sub__(self, other):
        return self + other.scale(-1.0)


def _atom_count(*vecs) -> int:
    for v in vecs:
        for c in v.components[1:]:
            return c.shape[0]
    return 1


def fock_inner(space: DiscreteSpace, F: FockVector, G: FockVector) -> complex:
    """sum_n n! (F_n, G_n)_ext."""
    total = 0j
    for n, (f, g) in enumerate(zip(F.components, G.components)):
        total += math.factorial(n) * ext_inner(space, f, g)
    return total


# ---------------------------------------------------------------------------
# ladder operators
# ---------------------------------------------------------------------------

def create_tensor(xi, f, n: int):
    return sym_product(np.asarray(xi), f, 1, n)


def annihilate1_tensor(space, xi, f, n: int):
    if n == 0:
        return None
    return n * np.tensordot(np.asarray(xi) * space.weights, f, axes=(0, 0))


def annihilate2_tensor(xi, f, n: int):
    if n == 0:
        return None
    if n == 1:
        return np.zeros((), dtype=np.complex128)
    diag = np.moveaxis(np.diagonal(f, axis1=0, axis2=1), -1, 0)
    return n * (n - 1) * symmetrize(_along_first(np.asarray(xi), diag), n - 1)


def neutral_tensor(xi, f, n: int):
    xi = np.asarray(xi)
    out = np.zeros_like(f, dtype=np.result_type(f, xi, np.float64))
    for axis in range(n):
        shape = [1] * n
        shape[axis] = xi.size
        out = out + xi.reshape(shape) * f
    return out if n else 0.0 * f


def _along_first(xi, f):
    return xi.reshape((-1,) + (1,) * (f.ndim - 1)) * f


def _check_room(space: DiscreteSpace, F: FockVector, max_degree):
    top = F.degree + 1
    if max_degree is not None and top > max_degree:
        raise BudgetError(f"degree {top} exceeds the truncation {max_degree}")
    check_budget(space.m, top)


def create(space: DiscreteSpace, xi, F: FockVector, max_degree=None) -> FockVector:
    """a^+(xi): f_n -> xi (x)^ f_n."""
    _check_room(space, F, max_degree)
    comps = [np.zeros((), dtype=np.complex128)]
    for n, f in enumerate(F.components):
        comps.append(create_tensor(xi, f, n))
    return FockVector(tuple(comps))


def _lowering(F: FockVector, op) -> FockVector:
    if F.degree == 0:
        return FockVector((np.zeros((), dtype=np.complex128),))
    return FockVector(tuple(np.asarray(op(f, n), dtype=np.complex128)
                            for n, f in enumerate(F.components) if n >= 1))


def annihilate1(space: DiscreteSpace, xi, F: FockVector) -> FockVector:
    """a_1^-(xi): f_n -> n int xi(x) f_n(x, .) dsigma."""
    return _lowering(F, lambda f, n: annihilate1_tensor(space, xi, f, n))


def annihilate2(space: DiscreteSpace, xi, F: FockVector) -> FockVector:
    """a_2^-(xi): f_n -> n(n-1) (xi(x1) f_n(x1, x1, x2, ...))~."""
    return _lowering(F, lambda f, n: annihilate2_tensor(xi, f, n))


def annihilate(space: DiscreteSpace, xi, F: FockVector) -> FockVector:
    return annihilate1(space, xi, F) + annihilate2(space, xi, F)


def neutral(space: DiscreteSpace, xi, F: FockVector) -> FockVector:
    """a^0(xi): f_n -> n (xi(x1) f_n)~."""
    return FockVector(tuple(np.asarray(neutral_tensor(xi, f, n), dtype=np.complex128)
                            for n, f in enumerate(F.components)))


def field_op(space: DiscreteSpace, params: MeixnerParams, xi, F: FockVector,
             max_degree=None) -> FockVector:
    """a_lam(xi) = a^+ + lam a^0 + a_1^- + a_2^- + c <xi> id."""
    out = create(space, xi, F, max_degree)
    out = out + neutral(space, xi, F).scale(params.lam)
    out = out + annihilate(space, xi, F)
    return out + F.scale(params.c * space.integral(xi))


# ---------------------------------------------------------------------------
# monomial Gram matrix
# ---------------------------------------------------------------------------

def monomials(space: DiscreteSpace, n: int):
    """(multiset, tensor) for chi_{x_i1} (x)^ ... (x)^ chi_{x_in}, i1 <= ... <= in."""
    eye = np.eye(space.m)
    out = []
    for combo in itertools.combinations_with_replacement(range(space.m), n):
        t = np.ones(())
        for i in combo:
            t = np.multiply.outer(t, eye[i])
        out.append((combo, symmetrize(t, n)))
    return out


def monomial_gram(space: DiscreteSpace, max_degree: int):
    """Gram matrix of all monomials of degree <= max_degree under the Fock product."""
    labels, vecs = [], []
    for n in range(max_degree + 1):
        for combo, t in monomials(space, n):
            labels.append(combo)
            vecs.append((n, t))
    size = len(vecs)
    gram = np.zeros((size, size))
    for a in range(size):
        for b in range(a, size):
            na, ta = vecs[a]
            nb, tb = vecs[b]
            if na == nb:
                val = math.factorial(na) * ext_inner(space, ta, tb).real
                gram[a, b] = gram[b, a] = val
    return labels, gram
