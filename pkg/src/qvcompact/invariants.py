"""Invariants of finite linear groups acting on the reciprocal ring and on
the polynomial ring: fixed-space dimensions, the unipotent counting formula,
Dickson invariants and weighted projective weights."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from ._dense import NumeratorSpace
from .gfq import prime_factors
from .linalg import (
    GroupElem,
    VSpace,
    double_cosets,
    generating_set,
    group_elements,
    group_generators,
    group_order,
    p_subgroups,
    rank_array,
)
from .ratfun import LinFrac, MPoly
from .rvring import (
    basis_rows,
    basis_rowspace,
    binom_poly,
    coords_in_basis,
    exponent_vectors,
    f_elem,
    hilbert_h,
)


def reynolds_sum(H, x):
    """Sum of g(x) over the listed group elements."""
    H = list(H)
    out = None
    for g in H:
        y = x.act(g)
        out = y if out is None else out + y
    return out


def reynolds_rows(space: VSpace, n: int, H, X: np.ndarray) -> np.ndarray:
    """Dense version of reynolds_sum on numerator rows over D_n."""
    ns = NumeratorSpace(space, n)
    add = space.field.dense_tables()[0]
    acc = np.zeros_like(np.atleast_2d(X))
    for g in H:
        acc = add[acc, ns.act(g, X)]
    return acc


# -- fixed spaces in graded pieces ----------------------------------------------------

@lru_cache(maxsize=4096)
def action_matrix(space: VSpace, n: int, g: GroupElem) -> np.ndarray:
    """Matrix of g on the graded basis: row k holds the coordinates of g(b_k)."""
    rows = basis_rows(space, n)
    images = NumeratorSpace(space, n).act(g, rows)
    coeffs, ok = basis_rowspace(space, n).solve_array(images)
    if not ok.all():
        raise ArithmeticError("group image left the graded piece")
    return coeffs


def fixed_dim(space: VSpace, n: int, gens) -> int:
    """Dimension of the common fixed space of gens in the degree -n piece."""
    h = hilbert_h(space.r, space.q, n)
    if h == 0:
        return 0
    F = space.field
    _, _, neg, _ = F.dense_tables()
    add = F.dense_tables()[0]
    eye = np.eye(h, dtype=np.uint8)
    blocks = []
    for g in gens:
        if g == GroupElem.identity(F, space.r):
            continue
        blocks.append(add[action_matrix(space, n, g), neg[eye]])
    if not blocks:
        return h
    # fixed row vectors c satisfy c (rho(g) - 1) = 0 for every generator
    return h - rank_array(F, np.hstack(blocks))


def invariant_dim_bruteforce(space: VSpace, H, n: int) -> int:
    H = list(H)
    return fixed_dim(space, n, generating_set(H))


def is_unipotent(H, p: int) -> bool:
    def p_power(k):
        while k % p == 0:
            k //= p
        return k == 1

    return all(p_power(g.order()) for g in H)


def psl_index(s: int, q: int) -> int:
    """[P_s : U L_s] = prod_{i=1}^s (q^i - 1)."""
    out = 1
    for i in range(1, s + 1):
        out *= q**i - 1
    return out


def unipotent_dim_formula(space: VSpace, H, n: int) -> int:
    """Sum over s of |H\\G/L_s| / [P_s:UL_s] * C(n-1, s-1)."""
    F = space.field
    H = list(H)
    if not is_unipotent(H, F.p):
        raise ValueError("subgroup is not unipotent")
    r, q = space.r, space.q
    G = _group(r, q, "GL")
    total = 0
    for s in range(1, r + 1):
        cosets = double_cosets(H, G, _group(r, q, "L", s), check=False)
        term = Fraction(cosets, psl_index(s, q))
        if term.denominator != 1:
            raise ArithmeticError(f"|H\\G/L_{s}| = {cosets} is not divisible by {psl_index(s, q)}")
        total += int(term) * binom_poly(n - 1, s - 1)
    return total


@lru_cache(maxsize=None)
def _group(r, q, kind, s=None):
    return group_elements(kind, r, q, s)


def f_monomial_span_dim(space: VSpace, n: int) -> int:
    """Dimension of the span of the degree -n monomials in f_1..f_r."""
    ns = NumeratorSpace(space, n)
    fs = [f_elem(space, i) for i in range(1, space.r + 1)]
    rows = [ns.numerator([f for f, a in zip(fs, e) for _ in range(a)]) for e in exponent_vectors(space.r, n)]
    return rank_array(space.field, np.array(rows, dtype=np.uint8))


# -- univariate polynomials with ring coefficients --------------------------------------

class UniPolyOverK:
    """Polynomial in T whose coefficients are MPoly or LinFrac values."""

    def __init__(self, coeffs, zero):
        self.zero = zero
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.coeffs = coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.zero

    def __mul__(self, other: "UniPolyOverK") -> "UniPolyOverK":
        out = [self.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return UniPolyOverK(out, self.zero)

    def evaluate(self, x):
        acc = self.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def product_of_roots(roots, zero, one) -> UniPolyOverK:
    """prod (T - root)."""
    out = UniPolyOverK([one], zero)
    for a in roots:
        out = out * UniPolyOverK([-a, one], zero)
    return out


# -- Dickson invariants ---------------------------------------------------------------

@dataclass
class Dickson:
    k: list          # k_0 .. k_{r-1}
    g: list          # g_1 .. g_r
    k_prime: MPoly   # product of the projective representatives
    expansion: UniPolyOverK
    constant: int    # c with k'_0^(q-1) = c * k_0


def dickson(space: VSpace) -> Dickson:
    F, r, q = space.field, space.r, space.q
    zero, one = MPoly(F, r), MPoly.const(F, r)
    expansion = product_of_roots([MPoly.linear(F, v) for v in space.vectors], zero, one)
    for d, c in enumerate(expansion.coeffs):
        if not c.is_zero() and d not in {q**i for i in range(r + 1)}:
            raise ArithmeticError(f"unexpected coefficient at T^{d}")
    ks = [expansion.coeff(q**i) for i in range(r)]
    gs = []
    for i in range(1, r + 1):
        g = one
        for u in space.vectors_in(i - 1):
            g = g.mul_linear(tuple(u[: i - 1]) + (1,) + (0,) * (r - i))
        gs.append(g)
    kp = one
    for v in space.reps:
        kp = kp.mul_linear(v)
    lhs = kp ** (q - 1)
    lead = max(ks[0].terms)
    constant = F.div(lhs.terms[lead], ks[0].terms[lead])
    if lhs != ks[0].scale(constant):
        raise ArithmeticError("k'_0^(q-1) is not a scalar multiple of k_0")
    return Dickson(ks, gs, kp, expansion, constant)


def dickson_fixedness(space: VSpace, dk: Dickson | None = None) -> dict[str, bool]:
    """k_i under GL, g_i under U and k'_0 under SL, each tested on generators."""
    dk = dk or dickson(space)
    r, q = space.r, space.q
    gl, u, sl = (group_generators(kind, r, q) for kind in ("GL", "U", "SL"))
    return {
        "k": all(k.act(g) == k for k in dk.k for g in gl),
        "g": all(x.act(g) == x for x in dk.g for g in u),
        "k_prime": all(dk.k_prime.act(g) == dk.k_prime for g in sl),
    }


def h_invariants(space: VSpace, dk: Dickson | None = None) -> list[LinFrac]:
    """h_i = k_i / k_0 for i < r and h_r = 1 / k_0."""
    dk = dk or dickson(space)
    inv_k0 = LinFrac.from_poly(space, dk.k[0]).inverse()
    hs = [LinFrac.from_poly(space, dk.k[i]) * inv_k0 for i in range(1, space.r)]
    return hs + [inv_k0]


def h_prime(space: VSpace, dk: Dickson | None = None) -> LinFrac:
    """1 / k'_0, the last generator for the determinant-one group."""
    dk = dk or dickson(space)
    return LinFrac.from_poly(space, dk.k_prime).inverse()


def reciprocal_root_poly(space: VSpace) -> UniPolyOverK:
    """prod over nonzero v of (T - 1/v)."""
    zero, one = LinFrac(space, MPoly(space.field, space.r)), LinFrac.const(space)
    return product_of_roots([LinFrac.recip(space, v) for v in space.nonzero], zero, one)


@dataclass
class HCheck:
    coefficients_match: bool
    roots_ok: bool
    members: list  # coordinates (or None) of each h_i in its graded piece


def check_h_identity(space: VSpace) -> HCheck:
    q, r = space.q, space.r
    hs = h_invariants(space)
    poly = reciprocal_root_poly(space)
    top = q**r - 1
    expected = {top: LinFrac.const(space)}
    for i, h in enumerate(hs, start=1):
        expected[q**r - q**i] = h
    match = poly.degree == top and all(
        poly.coeff(d) == expected.get(d, LinFrac(space, MPoly(space.field, r))) for d in range(top + 1)
    )
    roots = all(poly.evaluate(LinFrac.recip(space, v)).is_zero() for v in space.nonzero)
    members = [coords_in_basis(h, q**i - 1, space) for i, h in enumerate(hs, start=1)]
    return HCheck(match, roots, members)


# -- dimension counts for the invariant rings ----------------------------------------

def invariant_weights(which: str, r: int, q: int) -> list[int]:
    """Degrees (negated) of the free generators of R^H for H in {U, G, G'}."""
    if which == "U":
        return [1] * r
    if which == "G":
        return [q**i - 1 for i in range(1, r + 1)]
    if which == "G'":
        return [q**i - 1 for i in range(1, r)] + [(q**r - 1) // (q - 1)]
    raise ValueError(f"unknown group {which!r}")


def weighted_monomial_count(weights, n: int) -> int:
    counts = [1] + [0] * n
    for w in weights:
        for k in range(w, n + 1):
            counts[k] += counts[k - w]
    return counts[n]


_GROUP_KIND = {"U": "U", "G": "GL", "G'": "SL"}


@dataclass
class HilbertCheckRow:
    n: int
    bruteforce: int
    generators: int

    @property
    def ok(self) -> bool:
        return self.bruteforce == self.generators


def invariant_hilbert_check(space: VSpace, which: str, n_max: int) -> list[HilbertCheckRow]:
    gens = group_generators(_GROUP_KIND[which], space.r, space.q)
    weights = invariant_weights(which, space.r, space.q)
    return [
        HilbertCheckRow(n, fixed_dim(space, n, gens), weighted_monomial_count(weights, n))
        for n in range(n_max + 1)
    ]


# -- weighted projective spaces ----------------------------------------------------------

def wp_weights(case: str, r: int, q: int) -> list[int]:
    """Weights of the quotient varieties, cases 'a' through 'f'."""
    if case == "a":
        return [1] * r
    if case == "b":
        return [q**i for i in range(r)]
    if case == "c":
        return [q**i - 1 for i in range(1, r + 1)]
    if case == "d":
        return [q**r - q**i for i in range(r)]
    if case == "e":
        return [q**i - 1 for i in range(1, r)] + [(q**r - 1) // (q - 1)]
    if case == "f":
        return [(q**r - 1) // (q - 1)] + [q**r - q**i for i in range(1, r)]
    raise ValueError(f"unknown case {case!r}")


def _ord(n: int, ell: int) -> int:
    k = 0
    while n % ell == 0:
        n //= ell
        k += 1
    return k


def wp_regular(weights) -> bool:
    """Regularity criterion after removing the common factor of the weights."""
    weights = list(weights)
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be positive")
    g = 0
    for w in weights:
        g = gcd(g, w)
    weights = [w // g for w in weights]
    need = len(weights) - 1
    primes = sorted({p for w in weights for p in prime_factors(w)})
    for ell in primes:
        ords = [_ord(w, ell) for w in weights]
        if ords.count(max(ords)) < need:
            return False
    return True


def unipotent_subgroups(r: int, q: int):
    """All p-subgroups of GL_r(F_q), smallest first."""
    G = _group(r, q, "GL")
    return p_subgroups(G, G[0].field.p)


def index_identity(r: int, q: int, s: int) -> tuple[int, int]:
    """[P_s : U L_s] by enumeration, and the closed product."""
    P = set(_group(r, q, "P", s))
    U = _group(r, q, "U")
    L = _group(r, q, "L", s)
    UL = {u * l for u in U for l in L}
    if not UL <= P:
        raise ArithmeticError("U L_s is not inside P_s")
    return len(P) // len(UL), psl_index(s, q)


def bruhat_count(r: int, q: int, s: int) -> tuple[int, int]:
    """sum over s-subsets I of |E_I| [P_s:UL_s] against |G/L_s|."""
    lhs = 0
    for I in itertools.combinations(range(1, r + 1), s):
        lhs += q ** sum(i - 1 for i in I) * psl_index(s, q)
    return lhs, group_order("GL", r, q) // group_order("L", r, q, s)
