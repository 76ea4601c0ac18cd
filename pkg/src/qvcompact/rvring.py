"""The graded ring generated by the reciprocals 1/v of nonzero vectors.

Elements are ``LinFrac`` values over a ``VSpace``.  Graded pieces are handled
as numerators over D_n (see ``_dense.NumeratorSpace``), which turns membership
and independence questions into exact rank computations over F_q.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from ._dense import NumeratorSpace
from .linalg import RowSpace, VSpace, rank_array
from .ratfun import LinFrac, MPoly

RVElem = LinFrac

DEFAULT_DIM_CAP = 2000


def _check_level(space: VSpace, i: int):
    if not 1 <= i <= space.r:
        raise ValueError(f"index {i} outside 1..{space.r}")


def gen_recip(space: VSpace, v) -> LinFrac:
    """1/v, including the scalar that normalizes v."""
    if not any(v):
        raise ValueError("the zero vector has no reciprocal")
    return LinFrac.recip(space, tuple(v))


def shifted_form(space: VSpace, i: int, u) -> tuple[int, ...]:
    """Coefficients of X_i + u for u in V_{i-1}."""
    return tuple(u[:i - 1]) + (1,) + (0,) * (space.r - i)


@lru_cache(maxsize=None)
def f_elem(space: VSpace, i: int) -> LinFrac:
    """Sum of 1/(X_i + u) over u in V_{i-1}."""
    _check_level(space, i)
    total = LinFrac(space, MPoly(space.field, space.r))
    for u in space.vectors_in(i - 1):
        total = total + gen_recip(space, shifted_form(space, i, u))
    return total


@lru_cache(maxsize=None)
def e_set(space: VSpace, i: int) -> tuple[LinFrac, ...]:
    _check_level(space, i)
    return tuple(gen_recip(space, shifted_form(space, i, u)) for u in space.vectors_in(i - 1))


@lru_cache(maxsize=None)
def delta_set(space: VSpace, i: int) -> tuple[LinFrac, ...]:
    """1 together with 1/(X_i + u) for nonzero u in V_{i-1}."""
    _check_level(space, i)
    rest = [gen_recip(space, shifted_form(space, i, u)) for u in space.vectors_in(i - 1) if any(u)]
    return (LinFrac.const(space),) + tuple(rest)


# -- Hilbert function ----------------------------------------------------------

def binom_poly(t: int, k: int) -> int:
    """t(t-1)...(t-k+1)/k! for any integer t."""
    if k < 0:
        return 0
    num = 1
    for j in range(k):
        num *= t - j
    den = 1
    for j in range(2, k + 1):
        den *= j
    return num // den


def hilbert_poly(r: int, q: int, t: int) -> int:
    """Value of the Hilbert polynomial at any integer t."""
    total = 0
    for s in range(r):
        for I in itertools.combinations(range(2, r + 1), s):
            total += q ** sum(i - 1 for i in I) * binom_poly(t, s)
    return total


def hilbert_h(r: int, q: int, n: int) -> int:
    """Dimension of the degree -n piece (0 for n < 0)."""
    return hilbert_poly(r, q, n) if n >= 0 else 0


def a_rs(r: int, q: int, s: int) -> int:
    """Number of elements of the products of Delta-sets having s non-unit factors."""
    if not 0 <= s <= r - 1:
        raise ValueError("need 0 <= s <= r-1")
    return sum(
        _prod(q ** (i - 1) - 1 for i in I) for I in itertools.combinations(range(2, r + 1), s)
    )


def _prod(values) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def coh_dim(i: int, n: int, r: int, q: int) -> int:
    """Cohomology dimensions of the twisting sheaves O(n) on the compactification."""
    if i == 0 and n >= 0:
        return hilbert_poly(r, q, n)
    if i == r - 1 and n < 0:
        return abs(hilbert_poly(r, q, n))
    return 0


def cohomology_identity(r: int, q: int, n: int) -> tuple[int, int]:
    """Both sides of sum_s a_rs C(r-1+n-s, r-1) = h_r(n)."""
    lhs = sum(a_rs(r, q, s) * comb(r - 1 + n - s, r - 1) if r - 1 + n - s >= 0 else 0 for s in range(r))
    return lhs, hilbert_h(r, q, n)


# -- graded bases -----------------------------------------------------------------

def exponent_vectors(nvars: int, total: int):
    """Exponent tuples of the given total, lexicographically descending."""
    if nvars == 0:
        if total == 0:
            yield ()
        return
    for a in range(total, -1, -1):
        for rest in exponent_vectors(nvars - 1, total - a):
            yield (a,) + rest


@dataclass
class GradedBasis:
    """Spanning family of the degree -n piece, one entry per label.

    Each label is (I, u, exponents): the subset I of {2..r}, the vectors u_i in
    V_{i-1} picking 1/(X_i + u_i) for i in I, and exponents of f_1 and f_i for
    i in I.  ``factors`` lists the LinFrac factors whose product is the element.
    """

    space: VSpace
    n: int
    labels: list = field(default_factory=list)
    factors: list = field(default_factory=list)

    def __len__(self):
        return len(self.labels)

    def element(self, k: int) -> LinFrac:
        out = LinFrac.const(self.space)
        for f in self.factors[k]:
            out = out * f
        return out

    @property
    def elements(self) -> list[LinFrac]:
        return [self.element(k) for k in range(len(self))]


def _f_power_factors(space, levels, exps):
    out = []
    for i, a in zip(levels, exps):
        out.extend([f_elem(space, i)] * a)
    return out


def graded_basis(space: VSpace, n: int, cap: int = DEFAULT_DIM_CAP) -> GradedBasis:
    if n < 0:
        raise ValueError("graded pieces of positive degree vanish; n must be >= 0")
    if hilbert_h(space.r, space.q, n) > cap:
        raise ValueError(f"graded piece of dimension {hilbert_h(space.r, space.q, n)} exceeds cap {cap}")
    basis = GradedBasis(space, n)
    r = space.r
    for s in range(min(r - 1, n) + 1):
        for I in itertools.combinations(range(2, r + 1), s):
            choices = [space.vectors_in(i - 1) for i in I]
            for us in itertools.product(*choices):
                e_factors = [gen_recip(space, shifted_form(space, i, u)) for i, u in zip(I, us)]
                for exps in exponent_vectors(1 + s, n - s):
                    basis.labels.append((I, us, exps))
                    basis.factors.append(e_factors + _f_power_factors(space, (1,) + I, exps))
    return basis


def delta_products(space: VSpace) -> list[tuple[list[LinFrac], int]]:
    """All products delta_1 ... delta_r as (factors, number of non-unit factors)."""
    out = []
    for combo in itertools.product(*(range(len(delta_set(space, i))) for i in range(1, space.r + 1))):
        factors = [delta_set(space, i + 1)[j] for i, j in enumerate(combo) if j]
        out.append((factors, len(factors)))
    return out


def freeness_family(space: VSpace, n: int) -> list[list[LinFrac]]:
    """Delta-products times f-monomials of total degree -n, as factor lists."""
    fam = []
    levels = tuple(range(1, space.r + 1))
    for factors, s in delta_products(space):
        if s > n:
            continue
        for exps in exponent_vectors(space.r, n - s):
            fam.append(factors + _f_power_factors(space, levels, exps))
    return fam


@lru_cache(maxsize=64)
def _numerator_rows(space: VSpace, n: int, which: str) -> np.ndarray:
    ns = NumeratorSpace(space, n)
    fam = graded_basis(space, n).factors if which == "basis" else freeness_family(space, n)
    rows = np.zeros((len(fam), ns.width), dtype=np.uint8)
    for k, factors in enumerate(fam):
        rows[k] = ns.numerator(factors)
    rows.setflags(write=False)
    return rows


def basis_rows(space: VSpace, n: int) -> np.ndarray:
    """Numerators over D_n of the graded basis, one row per label."""
    return _numerator_rows(space, n, "basis")


def family_rank(space: VSpace, rows: np.ndarray) -> int:
    if rows.shape[0] == 0:
        return 0
    return rank_array(space.field, rows.copy())


@lru_cache(maxsize=64)
def basis_rowspace(space: VSpace, n: int) -> RowSpace:
    return RowSpace(space.field, basis_rows(space, n))


def graded_rank(space: VSpace, n: int) -> int:
    return family_rank(space, basis_rows(space, n))


def coords_in_basis(x: LinFrac, n: int, space: VSpace | None = None) -> list[int] | None:
    """Coordinates of x in graded_basis(n), or None when x is not in that piece."""
    space = space or x.space
    if n < 0:
        return None
    if not x.is_zero():
        deg = x.degree()
        if deg is None:
            raise ValueError("coordinates need a homogeneous element")
        if deg != -n:
            return None
    vec = NumeratorSpace(space, n).of_frac(x)
    if vec is None:
        return None
    return basis_rowspace(space, n).solve(vec[None, :])[0]


def combine_basis(space: VSpace, n: int, coords) -> LinFrac:
    """Rebuild an element from its coordinates."""
    ns = NumeratorSpace(space, n)
    F = space.field
    add, mul, _, _ = F.dense_tables()
    acc = np.zeros(ns.width, dtype=np.uint8)
    for c, row in zip(coords, basis_rows(space, n)):
        if c:
            acc = add[acc, mul[c, row]]
    return ns.to_frac(acc)


# -- relations and freeness --------------------------------------------------------

def _honest_recip(space: VSpace, v) -> LinFrac:
    """1/v computed by inverting the linear polynomial itself."""
    return LinFrac.from_poly(space, MPoly.linear(space.field, v)).inverse()


@dataclass
class Residual:
    family: int
    vectors: tuple
    value: LinFrac


def relation_residues(space: VSpace) -> list[Residual]:
    """Image of every generator of the relation ideal under Y_v -> 1/v."""
    F = space.field
    recip = {v: _honest_recip(space, v) for v in space.nonzero}
    out = []
    for v in space.nonzero:
        for alpha in range(2, F.q):
            av = space.scale(alpha, v)
            out.append(Residual(1, (alpha, v), recip[av] - recip[v].scale(F.inv(alpha))))
    vecs = space.nonzero
    for a in range(len(vecs)):
        for b in range(a, len(vecs)):
            v, w = vecs[a], vecs[b]
            s = space.add(v, w)
            if not any(s):
                continue
            val = recip[v] * recip[w] - recip[s] * (recip[v] + recip[w])
            out.append(Residual(2, (v, w), val))
    return out


@dataclass
class FreenessRow:
    n: int
    family_size: int
    rank: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.family_size == self.rank == self.expected


def freeness_check(space: VSpace, n_max: int) -> list[FreenessRow]:
    """Independence and spanning of the Delta-product family per degree."""
    rows = []
    for n in range(n_max + 1):
        fam = _numerator_rows(space, n, "freeness")
        rows.append(FreenessRow(n, fam.shape[0], family_rank(space, fam), hilbert_h(space.r, space.q, n)))
    return rows


def recip_rank(space: VSpace) -> int:
    """Rank of the family {1/v} in degree -1."""
    ns = NumeratorSpace(space, 1)
    rows = np.array([ns.numerator([gen_recip(space, v)]) for v in space.nonzero], dtype=np.uint8)
    return family_rank(space, rows)
