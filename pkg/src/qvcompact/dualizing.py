"""The ideal generated by 1/(v_0 ... v_r) over frames of r+1 vectors in
general position, its hatted basis and the averaging pairing."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from ._dense import NumeratorSpace, mul_sparse
from .invariants import reynolds_rows
from .linalg import RowSpace, VSpace, group_elements, rank, rank_array
from .ratfun import LinFrac
from .rvring import (
    basis_rows,
    delta_products,
    delta_set,
    exponent_vectors,
    f_elem,
    gen_recip,
    shifted_form,
)


@dataclass(frozen=True)
class IVGenerator:
    vectors: tuple

    def frac(self, space: VSpace) -> LinFrac:
        out = LinFrac.const(space)
        for v in self.vectors:
            out = out * gen_recip(space, v)
        return out

    def factors(self, space: VSpace) -> list[LinFrac]:
        return [gen_recip(space, v) for v in self.vectors]


def in_general_position(space: VSpace, vectors) -> bool:
    """Every r of the vectors are linearly independent."""
    r = space.r
    return all(rank(space.field, sub) == r for sub in itertools.combinations(vectors, r))


def iv_generators(space: VSpace, dedupe: bool = True) -> list[IVGenerator]:
    """Admissible (r+1)-tuples; with dedupe, one per multiset of lines."""
    r = space.r
    if dedupe:
        pool = itertools.combinations_with_replacement(space.reps, r + 1)
    else:
        pool = itertools.product(space.nonzero, repeat=r + 1)
    return [IVGenerator(tuple(t)) for t in pool if in_general_position(space, t)]


def _unit(space: VSpace, i: int):
    return space.unit(i - 1)


@lru_cache(maxsize=None)
def hat_delta_set(space: VSpace, i: int) -> tuple[LinFrac, ...]:
    """Image of delta_set(i) under 1 -> f_i/X_i, 1/(X_i+u) -> 1/(X_i+u) - 1/X_i."""
    inv_xi = gen_recip(space, _unit(space, i))
    head = f_elem(space, i) * inv_xi
    rest = [
        gen_recip(space, shifted_form(space, i, u)) - inv_xi for u in space.vectors_in(i - 1) if any(u)
    ]
    return (head,) + tuple(rest)


def hat_delta_factors(space: VSpace, i: int, j: int) -> list[LinFrac]:
    """Factor list of the j-th element of hat_delta_set(i), kept unexpanded."""
    if j == 0:
        return [f_elem(space, i), gen_recip(space, _unit(space, i))]
    return [hat_delta_set(space, i)[j]]


def hat_products(space: VSpace) -> list[tuple[list[LinFrac], int]]:
    """(factors, degree magnitude) of every product of hatted elements."""
    out = []
    for combo in itertools.product(*(range(len(delta_set(space, i))) for i in range(1, space.r + 1))):
        factors = []
        for i, j in enumerate(combo, start=1):
            factors += hat_delta_factors(space, i, j)
        out.append((factors, space.r + sum(1 for j in combo if j == 0)))
    return out


def iv_family(space: VSpace, n: int) -> list[list[LinFrac]]:
    """Hatted products times f-monomials of total degree -n."""
    fam = []
    fs = [f_elem(space, i) for i in range(1, space.r + 1)]
    for factors, d in hat_products(space):
        if d > n:
            continue
        for exps in exponent_vectors(space.r, n - d):
            fam.append(factors + [f for f, a in zip(fs, exps) for _ in range(a)])
    return fam


def iv_count(space: VSpace, n: int) -> int:
    """Predicted dimension of the degree -n piece of the ideal."""
    r = space.r
    return sum(comb(n - d + r - 1, r - 1) for _, d in hat_products(space) if d <= n)


@lru_cache(maxsize=64)
def iv_rows(space: VSpace, n: int) -> np.ndarray:
    ns = NumeratorSpace(space, n)
    fam = iv_family(space, n)
    rows = np.zeros((len(fam), ns.width), dtype=np.uint8)
    for k, factors in enumerate(fam):
        rows[k] = ns.numerator(factors)
    rows.setflags(write=False)
    return rows


@lru_cache(maxsize=64)
def _iv_rowspace(space: VSpace, n: int) -> RowSpace:
    return RowSpace(space.field, iv_rows(space, n))


def iv_membership(x: LinFrac, n: int, space: VSpace | None = None) -> list[int] | None:
    """Coordinates of x over the hatted spanning family, or None."""
    space = space or x.space
    if not x.is_zero():
        deg = x.degree()
        if deg is None:
            raise ValueError("membership needs a homogeneous element")
        if deg != -n:
            return None
    if n < space.r + 1:
        return [] if x.is_zero() else None
    vec = NumeratorSpace(space, n).of_frac(x)
    if vec is None:
        return None
    return _iv_rowspace(space, n).solve(vec[None, :])[0]


def iv_factors_membership(space: VSpace, factors, n: int) -> list[int] | None:
    """iv_membership for an element given as a product of factors."""
    if n < space.r + 1:
        return None
    vec = NumeratorSpace(space, n).numerator(factors)
    return _iv_rowspace(space, n).solve(vec[None, :])[0]


@dataclass
class IVDimRow:
    n: int
    from_generators: int
    hat_rank: int
    predicted: int

    @property
    def ok(self) -> bool:
        return self.from_generators == self.hat_rank == self.predicted


def iv_dimension(space: VSpace, n: int) -> IVDimRow:
    """Degree -n dimension of the ideal computed from generators and from the hatted family."""
    r = space.r
    predicted = iv_count(space, n)
    if n < r + 1:
        return IVDimRow(n, 0, 0, predicted)
    gens = iv_generators(space)
    ns = NumeratorSpace(space, n)
    m = n - r - 1
    lower = basis_rows(space, m)
    # generator times basis element of degree -m, as numerator over D_n
    gen_rows = []
    lower_ns = NumeratorSpace(space, m)
    F = space.field
    for gen in gens:
        g_frac = gen.frac(space)
        for row in lower:
            vec, d = mul_sparse(F, r, lower_ns.degree, row, g_frac.num)
            den = {i: m for i in range(len(space.reps))}
            for i, k in g_frac.den.items():
                den[i] += k
            gen_rows.append(ns._complete(vec, d, den))
    fam = iv_rows(space, n)
    return IVDimRow(
        n,
        rank_array(F, np.array(gen_rows, dtype=np.uint8)),
        rank_array(F, fam.copy()) if len(fam) else 0,
        predicted,
    )


# -- the pairing ------------------------------------------------------------------------

def _scalar_multiple(F, vec: np.ndarray, target: np.ndarray) -> int | None:
    """c with vec = c * target, or None."""
    nz = np.flatnonzero(target)
    c = F.div(int(vec[nz[0]]), int(target[nz[0]]))
    _, mul, _, _ = F.dense_tables()
    return c if np.array_equal(mul[c, target], vec) else None


def _averaged_table(space: VSpace, deltas, hats, group, target_factors) -> np.ndarray:
    """Average delta * hat over the group and read each entry as a multiple
    of the target.  Entries of another degree must vanish and read as 0."""
    F = space.field
    target_n = -sum(f.degree() for f in target_factors)
    by_degree: dict[int, list[tuple[int, int]]] = {}
    for a, (dfac, dn) in enumerate(deltas):
        for b, (hfac, hn) in enumerate(hats):
            by_degree.setdefault(dn + hn, []).append((a, b))
    table = np.zeros((len(deltas), len(hats)), dtype=np.int64)
    for n, cells in sorted(by_degree.items()):
        ns = NumeratorSpace(space, n)
        X = np.array([ns.numerator(deltas[a][0] + hats[b][0]) for a, b in cells], dtype=np.uint8)
        summed = reynolds_rows(space, n, group, X)
        target = ns.numerator(target_factors) if n == target_n else None
        for (a, b), row in zip(cells, summed):
            if not row.any():
                continue
            c = None if target is None else _scalar_multiple(F, row, target)
            if c is None:
                raise ArithmeticError(f"averaged entry ({a}, {b}) is not a multiple of the target")
            table[a, b] = c
    return table


def pairing_table(space: VSpace) -> np.ndarray:
    """[N_r(delta * hat(delta'))] as multiples of f_1^2 ... f_r^2."""
    fs = [f_elem(space, i) for i in range(1, space.r + 1)]
    U = group_elements("U", space.r, space.q)
    return _averaged_table(space, delta_products(space), hat_products(space), U, fs + fs)


def mr_table(space: VSpace) -> np.ndarray:
    """[M_r(delta * hat(delta'))] over Delta_r, as multiples of f_r^2."""
    r = space.r
    deltas = [([d], 0 if k == 0 else 1) for k, d in enumerate(delta_set(space, r))]
    hats = [(hat_delta_factors(space, r, j), 2 if j == 0 else 1) for j in range(len(deltas))]
    W = group_elements("W", r, space.q)
    fr = f_elem(space, r)
    return _averaged_table(space, deltas, hats, W, [fr, fr])


def mr_orthogonality(space: VSpace) -> bool:
    table = mr_table(space)
    return np.array_equal(table, np.eye(len(table), dtype=np.int64))


def pairing_is_identity(space: VSpace) -> bool:
    table = pairing_table(space)
    return np.array_equal(table, np.eye(len(table), dtype=np.int64))
