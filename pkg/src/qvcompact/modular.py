"""Points of the compactifications over extension fields k = F_{q^m}.

A reciprocal map stores one k-value per projective representative; the value
at alpha * rep is alpha^-1 times the stored value.  Linear maps to k store the
images of a basis (the standard basis of V, or the echelon basis of a
subspace).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from .gfq import FieldDesc, embedding_table, field_make, frobenius_code
from .linalg import Subspace, VSpace, gaussian_binomial, rank, subspaces, vspace


@lru_cache(maxsize=None)
def ext_field(q: int, m: int) -> FieldDesc:
    base = vspace(1, q).field
    return field_make(base.p, base.e * m)


class Ambient:
    """V = F_q^r together with an extension field k and the embedding F_q -> k."""

    def __init__(self, space: VSpace, K: FieldDesc):
        self.space = space
        self.K = K
        self.emb = embedding_table(space.field, K)

    @classmethod
    def make(cls, r: int, q: int, m: int) -> "Ambient":
        return _ambient(r, q, m)

    @property
    def r(self):
        return self.space.r

    @property
    def q(self):
        return self.space.q

    @property
    def m(self):
        return self.K.e // self.space.field.e

    def pair_k(self, coeffs_k, v) -> int:
        """sum_i coeffs_k[i] * v_i with v over F_q and coeffs in k."""
        K = self.K
        return K.sum(K.mul(c, self.emb[x]) for c, x in zip(coeffs_k, v) if x)


@lru_cache(maxsize=None)
def _ambient(r, q, m):
    return Ambient(vspace(r, q), ext_field(q, m))


# -- reciprocal maps ---------------------------------------------------------------

class ReciprocalMap:
    __slots__ = ("amb", "values")

    def __init__(self, amb: Ambient, values):
        self.amb = amb
        self.values = tuple(values)
        if len(self.values) != len(amb.space.reps):
            raise ValueError("need one value per projective representative")

    def __call__(self, v) -> int:
        a, i = self.amb.space.normalize(v)
        K = self.amb.K
        return K.mul(K.inv(self.amb.emb[a]), self.values[i])

    def __eq__(self, other):
        return isinstance(other, ReciprocalMap) and self.values == other.values and self.amb is other.amb

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"ReciprocalMap{self.values}"

    def is_zero(self) -> bool:
        return not any(self.values)

    def canonical(self) -> "ReciprocalMap":
        """Scale so that the first nonzero value is 1."""
        K = self.amb.K
        lead = next((x for x in self.values if x), None)
        if lead is None or lead == 1:
            return self
        s = K.inv(lead)
        return ReciprocalMap(self.amb, [K.mul(s, x) for x in self.values])

    def power(self, exponent_log: int) -> "ReciprocalMap":
        """Values raised to q^exponent_log."""
        K = self.amb.K
        return ReciprocalMap(self.amb, [frobenius_code(K, x, exponent_log, self.amb.q) for x in self.values])


def is_reciprocal(rho: ReciprocalMap) -> tuple[bool, tuple | None]:
    """Check rho(v) rho(w) = rho(v+w) (rho(v) + rho(w)); returns a witness pair on failure."""
    sp, K = rho.amb.space, rho.amb.K
    for v in sp.reps:
        rv = rho(v)
        for w in sp.nonzero:
            s = sp.add(v, w)
            if not any(s):
                continue
            rw = rho(w)
            if K.mul(rv, rw) != K.mul(rho(s), K.add(rv, rw)):
                return False, (v, w)
    return True, None


def support(rho: ReciprocalMap) -> Subspace:
    """The subspace on which rho is nonzero."""
    ok, witness = is_reciprocal(rho)
    if not ok:
        raise ValueError(f"not a reciprocal map (witness {witness})")
    sp = rho.amb.space
    live = [v for v, x in zip(sp.reps, rho.values) if x]
    W = Subspace.span(sp, live)
    if set(W.reps()) != set(live):
        raise ArithmeticError("support of a reciprocal map is not a subspace")
    return W


# -- linear maps -----------------------------------------------------------------------

class LinearMapToK:
    """An F_q-linear map W -> k given by the images of the echelon basis of W."""

    __slots__ = ("amb", "domain", "images")

    def __init__(self, amb: Ambient, domain: Subspace, images):
        self.amb = amb
        self.domain = domain
        self.images = tuple(images)
        if len(self.images) != domain.dim:
            raise ValueError("one image per basis vector of the domain")

    def __call__(self, v) -> int:
        c = self.domain.coords(tuple(v))
        if c is None:
            raise ValueError("vector outside the domain")
        return self.amb.pair_k(self.images, c)

    def __eq__(self, other):
        return isinstance(other, LinearMapToK) and (self.domain, self.images) == (other.domain, other.images)

    def __hash__(self):
        return hash((self.domain, self.images))

    def __repr__(self):
        return f"LinearMapToK({self.domain!r}, {self.images})"

    def is_injective(self) -> bool:
        return all(self(v) for v in self.domain.nonzero_vectors())


def full_space(sp: VSpace) -> Subspace:
    return Subspace.span(sp, [sp.unit(i) for i in range(sp.r)])


def extend_by_zero(amb: Ambient, lam: LinearMapToK) -> ReciprocalMap:
    """v -> 1/lam(v) on the domain of lam and 0 elsewhere."""
    K = amb.K
    vals = []
    for v in amb.space.reps:
        if v in lam.domain:
            x = lam(v)
            if x == 0:
                raise ValueError("linear map is not injective on its domain")
            vals.append(K.inv(x))
        else:
            vals.append(0)
    return ReciprocalMap(amb, vals)


def classify(rho: ReciprocalMap) -> tuple[Subspace, LinearMapToK]:
    """Support W and the injective linear map whose reciprocal is rho on W."""
    if rho.is_zero():
        raise ValueError("the zero map has no classification")
    W = support(rho)
    K = rho.amb.K
    lam = LinearMapToK(rho.amb, W, [K.inv(rho(b)) for b in W.basis])
    if extend_by_zero(rho.amb, lam) != rho:
        raise ArithmeticError("reciprocal map does not come from a linear map")
    return W, lam


def stratum_of(pt: ReciprocalMap) -> Subspace:
    return support(pt)


# -- point enumeration -------------------------------------------------------------------

def omega_count(q: int, s: int, m: int) -> int:
    """|Omega_s(F_{q^m})|: injective F_q-linear maps F_q^s -> k modulo k^x."""
    Q = q**m
    num = 1
    for i in range(s):
        num *= Q - q**i
    return num // (Q - 1) if s else 0


def qv_count_formula(q: int, r: int, m: int) -> int:
    return sum(gaussian_binomial(r, s, q) * omega_count(q, s, m) for s in range(1, r + 1))


def pv_count(q: int, r: int, m: int) -> int:
    return (q ** (m * r) - 1) // (q**m - 1)


def pv_count_strata(q: int, r: int, m: int) -> int:
    """Sum over nonzero quotients V'' of |Omega_{V''}(k)|."""
    return sum(gaussian_binomial(r, r - s, q) * omega_count(q, s, m) for s in range(1, r + 1))


def injective_maps(amb: Ambient, W: Subspace, normalized: bool = True):
    """Injective linear maps on W; with normalized, the first image is 1."""
    K = amb.K
    if W.dim == 0:
        return
    first = [1] if normalized else range(1, K.q)
    for head in first:
        for rest in itertools.product(range(K.q), repeat=W.dim - 1):
            lam = LinearMapToK(amb, W, (head,) + rest)
            if lam.is_injective():
                yield lam


def qv_points(amb: Ambient) -> list[ReciprocalMap]:
    """Canonically scaled points via the classification, grouped by stratum."""
    pts = []
    for W in sorted(s for s in subspaces(amb.r, amb.q) if s.dim > 0):
        for lam in injective_maps(amb, W):
            pts.append(extend_by_zero(amb, lam).canonical())
    return pts


def qv_points_bruteforce(amb: Ambient, cap: int = 1 << 20) -> list[ReciprocalMap]:
    """All nonzero reciprocal maps with first nonzero value 1, by exhaustive search."""
    K = amb.K
    N = len(amb.space.reps)
    if K.q**N > cap:
        raise ValueError(f"{K.q}^{N} functions exceed the brute-force cap {cap}")
    pts = []
    for vals in itertools.product(range(K.q), repeat=N):
        lead = next((x for x in vals if x), None)
        if lead != 1:
            continue
        rho = ReciprocalMap(amb, vals)
        if is_reciprocal(rho)[0]:
            pts.append(rho)
    return pts


def all_reciprocal_maps(amb: Ambient, cap: int = 1 << 20) -> list[ReciprocalMap]:
    """Every reciprocal map, zero included, by exhaustive search."""
    K = amb.K
    N = len(amb.space.reps)
    if K.q**N > cap:
        raise ValueError(f"{K.q}^{N} functions exceed the brute-force cap {cap}")
    out = []
    for vals in itertools.product(range(K.q), repeat=N):
        rho = ReciprocalMap(amb, vals)
        if is_reciprocal(rho)[0]:
            out.append(rho)
    return out


def random_reciprocal_map(amb: Ambient, rng: random.Random) -> ReciprocalMap:
    """Extension by zero of a random injective map on a random nonzero subspace."""
    subs = [s for s in subspaces(amb.r, amb.q) if s.dim > 0]
    K = amb.K
    while True:
        W = rng.choice(subs)
        lam = LinearMapToK(amb, W, [rng.randrange(K.q) for _ in range(W.dim)])
        if lam.is_injective():
            return extend_by_zero(amb, lam)


def pv_points(amb: Ambient) -> list[LinearMapToK]:
    """Nonzero linear maps V -> k with first nonzero image 1."""
    V = full_space(amb.space)
    out = []
    for imgs in itertools.product(range(amb.K.q), repeat=amb.r):
        if next((x for x in imgs if x), None) == 1:
            out.append(LinearMapToK(amb, V, imgs))
    return out


def pv_stratum(lam: LinearMapToK) -> Subspace:
    """Kernel of lam; its quotient V/ker indexes the stratum."""
    return Subspace.span(lam.amb.space, [v for v in lam.amb.space.nonzero if lam(v) == 0])


# -- the strange maps -------------------------------------------------------------------

def g_map(rho: ReciprocalMap) -> LinearMapToK:
    """l -> sum over <l,v> = 1 of rho(v), as a map on the dual space."""
    amb = rho.amb
    sp, K = amb.space, amb.K
    values = {}
    for ell in sp.vectors:
        values[ell] = K.sum(rho(v) for v in sp.nonzero if sp.pairing(ell, v) == 1)
    dual = full_space(sp)
    lam = LinearMapToK(amb, dual, [values[sp.unit(i)] for i in range(sp.r)])
    if any(lam(ell) != x for ell, x in values.items()):
        raise ArithmeticError("g_map produced a non-linear function")
    return lam


def f_map(lam: LinearMapToK) -> ReciprocalMap:
    """v -> product over <l,v> = 1 of lam(l)."""
    amb = lam.amb
    sp, K = amb.space, amb.K
    values = {v: K.prod(lam(ell) for ell in sp.vectors if sp.pairing(ell, v) == 1) for v in sp.nonzero}
    rho = ReciprocalMap(amb, [values[v] for v in sp.reps])
    if any(rho(v) != x for v, x in values.items()):
        raise ArithmeticError("f_map violates the scaling axiom")
    ok, witness = is_reciprocal(rho)
    if not ok:
        raise ArithmeticError(f"f_map output is not reciprocal (witness {witness})")
    return rho


def frobenius_linear(lam: LinearMapToK, exponent_log: int) -> LinearMapToK:
    K = lam.amb.K
    return LinearMapToK(lam.amb, lam.domain, [frobenius_code(K, x, exponent_log, lam.amb.q) for x in lam.images])


def linear_maps_on_dual(amb: Ambient):
    dual = full_space(amb.space)
    for imgs in itertools.product(range(amb.K.q), repeat=amb.r):
        yield LinearMapToK(amb, dual, imgs)


@dataclass
class CompositeReport:
    checked_lambda: int
    checked_rho: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def check_composites(amb: Ambient, lambdas, rhos) -> CompositeReport:
    """(g o f)(lam) = lam^(q^(r-1)) and (f o g)(rho) = rho^(q^(r-1))."""
    e = amb.r - 1
    failures = []
    nl = nr = 0
    for lam in lambdas:
        nl += 1
        if g_map(f_map(lam)) != frobenius_linear(lam, e):
            failures.append(("g.f", lam))
    for rho in rhos:
        nr += 1
        if f_map(g_map(rho)) != rho.power(e):
            failures.append(("f.g", rho))
    return CompositeReport(nl, nr, failures)


def strange_maps_exhaustive(r: int, q: int, m: int) -> CompositeReport:
    amb = Ambient.make(r, q, m)
    return check_composites(amb, linear_maps_on_dual(amb), all_reciprocal_maps(amb))


def strange_maps_sampled(r: int, q: int, m: int, samples: int, seed: int = 0) -> CompositeReport:
    amb = Ambient.make(r, q, m)
    rng = random.Random(seed)
    dual = full_space(amb.space)
    lambdas = [LinearMapToK(amb, dual, [rng.randrange(amb.K.q) for _ in range(r)]) for _ in range(samples)]
    rhos = [random_reciprocal_map(amb, rng) for _ in range(samples)]
    return check_composites(amb, lambdas, rhos)


def strange_bijection(amb: Ambient) -> bool:
    """f_map and g_map induce mutually inverse-up-to-Frobenius bijections on point sets."""
    qpts = set(qv_points(amb))
    ppts = pv_points(amb)
    images = {f_map(lam).canonical() for lam in ppts}
    back = {_canonical_linear(g_map(rho)) for rho in qpts}
    return images == qpts and back == {_canonical_linear(lam) for lam in ppts}


def _canonical_linear(lam: LinearMapToK) -> LinearMapToK:
    K = lam.amb.K
    lead = next((x for x in lam.images if x), None)
    if lead is None:
        return lam
    s = K.inv(lead)
    return LinearMapToK(lam.amb, lam.domain, [K.mul(s, x) for x in lam.images])


# -- compatibility with subspaces ----------------------------------------------------------

def restrict_functional(W: Subspace, ell) -> tuple[int, ...]:
    """Coordinates of l|_W in the dual of W's echelon basis."""
    sp = W.space
    return tuple(sp.pairing(ell, b) for b in W.basis)


@dataclass
class CompatReport:
    g_square: int
    f_square: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def gf_compat_check(amb: Ambient, W: Subspace, samples: int | None = None, seed: int = 0) -> CompatReport:
    """Both compatibility squares for the inclusion W -> V.

    W is coordinatized by its echelon basis, so maps on W live on F_q^s.
    samples=None runs exhaustively over reciprocal maps and linear maps on W.
    """
    sp, K = amb.space, amb.K
    s = W.dim
    sub = Ambient.make(s, amb.q, amb.m)
    rng = random.Random(seed)
    if samples is None:
        rhos = all_reciprocal_maps(sub)
        lams = list(linear_maps_on_dual(sub))
    else:
        rhos = [random_reciprocal_map(sub, rng) for _ in range(samples)]
        dual = full_space(sub.space)
        lams = [LinearMapToK(sub, dual, [rng.randrange(K.q) for _ in range(s)]) for _ in range(samples)]
    failures = []

    def push(rho_sub: ReciprocalMap) -> ReciprocalMap:
        vals = []
        for v in sp.reps:
            c = W.coords(v)
            vals.append(rho_sub(c) if c is not None else 0)
        return ReciprocalMap(amb, vals)

    for rho in rhos:
        lhs = g_map(push(rho))
        gw = g_map(rho)
        for ell in sp.vectors:
            if lhs(ell) != gw(restrict_functional(W, ell)):
                failures.append(("g", rho, ell))
                break
    r2 = amb.r - s
    dual_full = full_space(sp)
    for lam in lams:
        pulled = LinearMapToK(amb, dual_full, [lam(restrict_functional(W, sp.unit(i))) for i in range(amb.r)])
        lhs = push(f_map(lam).power(r2))
        if lhs != f_map(pulled):
            failures.append(("f", lam))
    return CompatReport(len(rhos), len(lams), failures)


# -- tangent spaces ----------------------------------------------------------------------

def tangent_dim(pt: ReciprocalMap) -> int:
    """Projective tangent dimension at pt of the cone cut out by the
    quadratic relations, in the coordinates Y_rep."""
    amb = pt.amb
    sp, K = amb.space, amb.K
    ok, witness = is_reciprocal(pt)
    if not ok:
        raise ValueError(f"point violates the relations at {witness}")
    N = len(sp.reps)
    y = pt.values

    def coord(v):
        a, i = sp.normalize(v)
        return i, K.inv(amb.emb[a])  # Y_v = scale * Y_rep[i]

    rows = []
    vecs = sp.nonzero
    for a_idx in range(len(vecs)):
        for b_idx in range(a_idx, len(vecs)):
            v, w = vecs[a_idx], vecs[b_idx]
            s = sp.add(v, w)
            if not any(s):
                continue
            (iv, cv), (iw, cw), (is_, cs) = coord(v), coord(w), coord(s)
            Yv, Yw, Ys = K.mul(cv, y[iv]), K.mul(cw, y[iw]), K.mul(cs, y[is_])
            row = [0] * N
            # d/dY of Y_v Y_w - Y_s (Y_v + Y_w), chained through Y_x = c_x Y_rep
            for idx, scale, partial in (
                (iv, cv, K.sub(Yw, Ys)),
                (iw, cw, K.sub(Yv, Ys)),
                (is_, cs, K.neg(K.add(Yv, Yw))),
            ):
                row[idx] = K.add(row[idx], K.mul(scale, partial))
            rows.append(row)
    kernel = N - rank(K, rows)
    return kernel - 1


def stratum_points(amb: Ambient, W: Subspace, limit: int | None = None) -> list[ReciprocalMap]:
    pts = []
    for lam in injective_maps(amb, W):
        pts.append(extend_by_zero(amb, lam).canonical())
        if limit is not None and len(pts) >= limit:
            break
    return pts
