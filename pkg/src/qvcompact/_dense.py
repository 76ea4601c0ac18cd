"""Dense homogeneous polynomials, used as numerators over a fixed common
denominator.

A degree-d form in r variables is a uint8 vector indexed by the monomials of
degree d (sorted by a packed exponent key).  Multiplying by a monomial is a
fixed index permutation, so products with sparse factors and the action of
elementary matrices reduce to a few vectorised gathers per term.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from . import _kernels
from .gfq import FieldDesc
from .linalg import GroupElem
from .ratfun import LinFrac, MPoly, act_table

_KEY_BITS = 10  # exponents stay below 1024


def _pack(exps: np.ndarray) -> np.ndarray:
    keys = np.zeros(exps.shape[0], dtype=np.int64)
    for i in range(exps.shape[1]):
        keys = (keys << _KEY_BITS) | exps[:, i].astype(np.int64)
    return keys


class Monomials:
    """All monomials of one degree in r variables."""

    def __init__(self, r: int, d: int):
        if d >= 1 << _KEY_BITS:
            raise ValueError("degree too large for the dense representation")
        self.r = r
        self.d = d
        rows = []
        for combo in combinations_with_replacement(range(r), d):
            e = [0] * r
            for i in combo:
                e[i] += 1
            rows.append(e)
        exps = np.array(rows, dtype=np.int64).reshape(-1, r)
        order = np.argsort(_pack(exps))
        self.exps = exps[order]
        self.keys = _pack(self.exps)
        self.size = len(self.keys)

    def index(self, exps: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.keys, _pack(exps))

    def index_of(self, e) -> int:
        return int(self.index(np.array([e], dtype=np.int64))[0])


@lru_cache(maxsize=None)
def monomials(r: int, d: int) -> Monomials:
    return Monomials(r, d)


@lru_cache(maxsize=4096)
def shift_index(r: int, d: int, t: tuple[int, ...]) -> np.ndarray:
    """Position of (monomial k of degree d) * X^t among degree d+|t| monomials."""
    src = monomials(r, d)
    return monomials(r, d + sum(t)).index(src.exps + np.array(t, dtype=np.int64))


def to_dense(p: MPoly, d: int) -> np.ndarray:
    mons = monomials(p.nvars, d)
    out = np.zeros(mons.size, dtype=np.uint8)
    for e, c in p.terms.items():
        if sum(e) != d:
            raise ValueError("polynomial is not homogeneous of the requested degree")
        out[mons.index_of(e)] = c
    return out


def from_dense(F: FieldDesc, r: int, d: int, vec: np.ndarray) -> MPoly:
    mons = monomials(r, d)
    nz = np.flatnonzero(vec)
    return MPoly(F, r, {tuple(int(x) for x in mons.exps[k]): int(vec[k]) for k in nz})


def mul_sparse(F: FieldDesc, r: int, d: int, vec: np.ndarray, p: MPoly) -> tuple[np.ndarray, int]:
    """vec (degree d) times the homogeneous polynomial p."""
    degs = p.total_degrees()
    if len(degs) != 1:
        raise ValueError("factor must be homogeneous and nonzero")
    dp = degs.pop()
    add, mul, _, _ = F.dense_tables()
    out = np.zeros(monomials(r, d + dp).size, dtype=np.uint8)
    for e, c in p.terms.items():
        idx = shift_index(r, d, e)
        out[idx] = add[out[idx], mul[c, vec]]
    return out, d + dp


@lru_cache(maxsize=4096)
def _linear_shifts(r: int, d: int) -> np.ndarray:
    return np.stack([shift_index(r, d, tuple(1 if j == i else 0 for j in range(r))) for i in range(r)])


def mul_linear(F: FieldDesc, r: int, d: int, vec: np.ndarray, coeffs) -> np.ndarray:
    add, mul, _, _ = F.dense_tables()
    return _kernels.mul_linear(vec, _linear_shifts(r, d), np.asarray(coeffs, dtype=np.int64), monomials(r, d + 1).size, add, mul)


# -- group action by elementary substitutions ---------------------------------

def elementary_factors(g: GroupElem) -> list[tuple]:
    """Elementary substitutions whose composite is the action of g.

    Returned in application order.  ("add", j, i, a) sends X_j to X_j + a X_i,
    ("scale", j, c) sends X_j to c X_j and ("swap", i, j) exchanges X_i, X_j.
    """
    F = g.field
    r = g.r
    M = [list(row) for row in g.rows]
    ops = []  # inverses of the row operations, in the order performed
    for c in range(r):
        p = next(i for i in range(c, r) if M[i][c])
        if p != c:
            M[p], M[c] = M[c], M[p]
            ops.append(("swap", c, p))
        piv = M[c][c]
        if piv != 1:
            s = F.inv(piv)
            M[c] = [F.mul(s, x) for x in M[c]]
            ops.append(("scale", c, piv))
        for i in range(r):
            x = M[i][c]
            if i != c and x:
                M[i] = [F.sub(a, F.mul(x, b)) for a, b in zip(M[i], M[c])]
                # row_i -= x row_c is I - x E_ic; its inverse I + x E_ic sends X_c to X_c + x X_i
                ops.append(("add", c, i, x))
    # g = R_1^-1 ... R_k^-1, and act(g) applies the last factor first.
    return ops[::-1]


@lru_cache(maxsize=4096)
def _add_plan(F: FieldDesc, r: int, d: int, j: int, i: int, a: int):
    mons = monomials(r, d)
    E = mons.exps
    p = F.p
    binom = np.zeros((d + 1, d + 1), dtype=np.int64)
    for n in range(d + 1):
        binom[n, 0] = 1
        for k in range(1, n + 1):
            binom[n, k] = (binom[n - 1, k - 1] + binom[n - 1, k]) % p
    srcs, tgts, coeffs = [], [], []
    ak = 1
    for k in range(d + 1):
        src = np.flatnonzero(E[:, j] >= k)
        if src.size == 0:
            break
        moved = E[src].copy()
        moved[:, j] -= k
        moved[:, i] += k
        coeff = np.array([F.mul(ak, int(b)) for b in binom[E[src, j], k]], dtype=np.uint8)
        keep = coeff != 0
        srcs.append(src[keep])
        tgts.append(mons.index(moved[keep]))
        coeffs.append(coeff[keep])
        ak = F.mul(ak, a)
    return np.concatenate(srcs), np.concatenate(tgts), np.concatenate(coeffs)


@lru_cache(maxsize=4096)
def _scale_factors(F: FieldDesc, r: int, d: int, j: int, c: int) -> np.ndarray:
    E = monomials(r, d).exps
    powers = np.array([F.pow(c, k) for k in range(d + 1)], dtype=np.uint8)
    return powers[E[:, j]]


@lru_cache(maxsize=4096)
def _swap_perm(r: int, d: int, i: int, j: int) -> np.ndarray:
    mons = monomials(r, d)
    E = mons.exps.copy()
    E[:, [i, j]] = E[:, [j, i]]
    return mons.index(E)


def apply_elementary(F: FieldDesc, r: int, d: int, X: np.ndarray, op) -> np.ndarray:
    """Apply one elementary substitution to every row of X (shape (t, M))."""
    add, mul, _, _ = F.dense_tables()
    kind = op[0]
    if kind == "swap":
        out = np.zeros_like(X)
        out[:, _swap_perm(r, d, op[1], op[2])] = X
        return out
    if kind == "scale":
        return mul[_scale_factors(F, r, d, op[1], op[2])[None, :], X]
    _, j, i, a = op
    src, tgt, coeff = _add_plan(F, r, d, j, i, a)
    return _kernels.scatter(np.ascontiguousarray(X), src, tgt, coeff, add, mul)


def act_rows(g: GroupElem, d: int, X: np.ndarray) -> np.ndarray:
    """Substitute X_j -> g(X_j) in each row of X (forms of degree d)."""
    X = np.atleast_2d(X)
    for op in elementary_factors(g):
        X = apply_elementary(g.field, g.r, d, X, op)
    return X


# -- numerators over the common denominator D_n = prod(l)^n ---------------------

class NumeratorSpace:
    """Degree -n elements written as P / D_n with D_n the n-th power of the
    product of all normalized linear forms."""

    def __init__(self, space, n: int):
        if space.field.q > 256:
            raise ValueError("dense numerators need q <= 256")
        self.space = space
        self.n = n
        self.r = space.r
        self.nforms = len(space.reps)
        self.degree = (self.nforms - 1) * n
        self.width = monomials(self.r, self.degree).size

    def numerator(self, factors) -> np.ndarray:
        """Numerator of the product of LinFrac factors (total degree -n)."""
        F = self.space.field
        den: dict[int, int] = {}
        vec = np.ones(1, dtype=np.uint8)
        d = 0
        for f in factors:
            if f.is_zero():
                return np.zeros(self.width, dtype=np.uint8)
            vec, d = mul_sparse(F, self.r, d, vec, f.num)
            for i, m in f.den.items():
                den[i] = den.get(i, 0) + m
        return self._complete(vec, d, den)

    def _complete(self, vec, d, den) -> np.ndarray | None:
        F = self.space.field
        if d - sum(den.values()) != -self.n:
            raise ValueError("element does not have degree -n")
        for i, form in enumerate(self.space.reps):
            extra = self.n - den.get(i, 0)
            if extra < 0:
                return None
            for _ in range(extra):
                vec = mul_linear(F, self.r, d, vec, form)
                d += 1
        return vec

    def of_frac(self, x: LinFrac) -> np.ndarray | None:
        """Numerator of x over D_n, or None when its reduced denominator does not divide D_n."""
        if x.is_zero():
            return np.zeros(self.width, dtype=np.uint8)
        d = x.num.degree()
        return self._complete(to_dense(x.num, d), d, x.den)

    def to_frac(self, vec: np.ndarray) -> LinFrac:
        num = from_dense(self.space.field, self.r, self.degree, vec)
        return LinFrac(self.space, num, {i: self.n for i in range(self.nforms)})

    def act(self, g: GroupElem, X: np.ndarray) -> np.ndarray:
        """Rows of X transformed by g, still over D_n."""
        F = self.space.field
        _, scal = act_table(self.space, g)
        c = F.pow(F.prod(scal), self.n)  # g(D_n) = c D_n
        Y = act_rows(g, self.degree, X)
        if c != 1:
            _, mul, _, _ = F.dense_tables()
            Y = mul[F.inv(c), Y]
        return Y
