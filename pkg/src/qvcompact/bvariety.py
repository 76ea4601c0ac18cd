"""Points of the smooth compactification B_V over k = F_{q^m}.

A point assigns to every nonzero subspace V' of V a hyperplane E_{V'} of
V' (x) k.  We store the hyperplane as a functional phi_{V'} (its kernel), given
by its values on the echelon basis of V' and scaled so that the first nonzero
value is 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .dualizing import iv_generators
from .linalg import Flag, Subspace, flags, rank, subspaces, vspace
from .modular import (
    Ambient,
    LinearMapToK,
    ReciprocalMap,
    full_space,
    injective_maps,
    omega_count,
)
from .ratfun import MPoly


class NotInChart(ValueError):
    """The point (or coordinate tuple) lies outside the chart U_F."""


def _canonical(K, values) -> tuple[int, ...]:
    lead = next((x for x in values if x), None)
    if lead is None:
        raise ValueError("a hyperplane needs a nonzero functional")
    s = K.inv(lead)
    return tuple(K.mul(s, x) for x in values)


@lru_cache(maxsize=None)
def nonzero_subspaces(r: int, q: int) -> tuple[Subspace, ...]:
    return tuple(sorted(W for W in subspaces(r, q) if W.dim > 0))


@lru_cache(maxsize=None)
def _inclusions(r: int, q: int) -> tuple[tuple[Subspace, Subspace], ...]:
    """Pairs (V'', V') of nonzero subspaces with V'' strictly inside V'."""
    subs = nonzero_subspaces(r, q)
    return tuple((a, b) for b in subs for a in subs if a.dim < b.dim and b.contains(a))


@lru_cache(maxsize=None)
def _coord_matrix(big: Subspace, small: Subspace) -> tuple[tuple[int, ...], ...]:
    """Echelon basis of small in the echelon coordinates of big."""
    return tuple(big.coords(b) for b in small.basis)


def _proportional(K, x, y) -> bool:
    """x and y span a space of dimension at most one."""
    return all(K.mul(x[i], y[j]) == K.mul(x[j], y[i]) for i in range(len(x)) for j in range(i + 1, len(x)))


class BPoint:
    __slots__ = ("amb", "phis", "_key", "_memo")

    def __init__(self, amb: Ambient, phis: dict):
        self.amb = amb
        self.phis = {W: _canonical(amb.K, vals) for W, vals in phis.items()}
        self._key = tuple(self.phis[W] for W in sorted(self.phis))
        self._memo = {}

    def __eq__(self, other):
        return isinstance(other, BPoint) and self.amb is other.amb and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"BPoint({self._key})"

    def phi(self, W: Subspace, v) -> int:
        """phi_W at a rational vector v of W."""
        c = W.coords(tuple(v))
        if c is None:
            raise ValueError("vector outside the subspace")
        return self.amb.pair_k(self.phis[W], c)

    def restricted(self, big: Subspace, small: Subspace) -> tuple[int, ...]:
        """phi_big on the echelon basis of small."""
        key = (big, small)
        out = self._memo.get(key)
        if out is None:
            vals = self.phis[big]
            out = tuple(self.amb.pair_k(vals, c) for c in _coord_matrix(big, small))
            self._memo[key] = out
        return out

    def kills(self, big: Subspace, small: Subspace) -> bool:
        """small (x) k lies inside E_big."""
        return not any(self.restricted(big, small))

    def top(self) -> Subspace:
        return max(self.phis)


# -- validity ------------------------------------------------------------------------

def is_bpoint(pt: BPoint) -> tuple[bool, tuple | None]:
    """Corank one everywhere and E_{V''} inside E_{V'}; witness on failure."""
    sp = pt.amb.space
    K = pt.amb.K
    for W in nonzero_subspaces(sp.r, sp.q):
        vals = pt.phis.get(W)
        if vals is None or len(vals) != W.dim or not any(vals):
            return False, (W,)
    for small, big in _inclusions(sp.r, sp.q):
        # E_small inside E_big  <=>  phi_big|small is a multiple of phi_small
        if not _proportional(K, pt.restricted(big, small), pt.phis[small]):
            return False, (small, big)
    return True, None


def _separated(F: Flag, small: Subspace, big: Subspace) -> bool:
    """Some member of F contains small but not big."""
    return any(W.contains(small) and not W.contains(big) for W in F)


@lru_cache(maxsize=None)
def _flag_pairs(F: Flag) -> tuple[tuple, tuple]:
    """Inclusion pairs split into (separated by F, not separated by F)."""
    W = F.members[-1]
    sep, free = [], []
    for small, big in _inclusions(W.space.r, W.space.q):
        (sep if _separated(F, small, big) else free).append((small, big))
    return tuple(sep), tuple(free)


def in_BF(pt: BPoint, F: Flag) -> bool:
    return all(pt.kills(big, small) for small, big in _flag_pairs(F)[0])


def in_UF(pt: BPoint, F: Flag) -> bool:
    return all(not pt.kills(big, small) for small, big in _flag_pairs(F)[1])


def in_stratum(pt: BPoint, F: Flag) -> bool:
    return in_BF(pt, F) and in_UF(pt, F)


def stratum_flag(pt: BPoint) -> Flag:
    """The flag F with pt in Omega_F, by descending through rational kernels."""
    ok, witness = is_bpoint(pt)
    if not ok:
        raise ValueError(f"invalid point (witness {witness})")
    sp = pt.amb.space
    chain = []
    top = full_space(sp)
    while top.dim:
        chain.append(top)
        top = Subspace.span(sp, [v for v in top.nonzero_vectors() if pt.phi(top, v) == 0])
    chain.append(top)
    F = Flag(chain)
    if not in_stratum(pt, F):
        raise ArithmeticError("stratum flag fails the stratum predicates")
    return F


# -- charts ----------------------------------------------------------------------------

def adapted_basis(F: Flag) -> list[tuple]:
    """e_1..e_r with V_i spanned by e_1..e_{dim V_i}; F must be complete.

    e_i is the first projective representative in V_i outside V_{i-1}.
    """
    if not F.is_complete:
        raise ValueError("charts need a complete flag")
    sp = F.members[0].space
    out = []
    for lo, hi in zip(F.members, F.members[1:]):
        out.append(next(v for v in sp.reps if v in hi and v not in lo))
    return out


def _phi_from_basis_values(amb: Ambient, W: Subspace, basis, values) -> tuple[int, ...]:
    """Functional on W given its values on some F_q-basis of W; returns echelon values."""
    K = amb.K
    sub = Subspace.span(amb.space, basis)
    if sub != W:
        raise ValueError("basis does not span the subspace")
    # echelon basis vector b = sum c_j basis_j; solve for c over F_q
    F = amb.space.field
    out = []
    for b in W.basis:
        c = _solve_combination(F, basis, b)
        out.append(K.sum(K.mul(amb.emb[x], y) for x, y in zip(c, values) if x))
    return tuple(out)


def _solve_combination(F, basis, target):
    for c in itertools.product(range(F.q), repeat=len(basis)):
        acc = [0] * len(target)
        for ci, v in zip(c, basis):
            if ci:
                acc = [F.add(a, F.mul(ci, x)) for a, x in zip(acc, v)]
        if tuple(acc) == tuple(target):
            return c
    raise ValueError("target outside the span")


def chart_to_point(amb: Ambient, F: Flag, a) -> BPoint:
    """The point of U_F with coordinates a_1..a_{r-1}.

    phi_{V_i}(e_j) = prod_{l=j}^{i-1} (-a_l); other subspaces restrict from the
    smallest flag member containing them.  Raises NotInChart when a restriction
    vanishes, which is exactly when the tuple leaves U_F.
    """
    K = amb.K
    r = amb.r
    a = tuple(a)
    if len(a) != r - 1:
        raise ValueError(f"need {r - 1} chart coordinates")
    e = adapted_basis(F)
    members = F.members
    phi_members = {}
    for i in range(1, r + 1):
        vals = []
        for j in range(1, i + 1):
            x = 1
            for l in range(j, i):
                x = K.mul(x, K.neg(a[l - 1]))
            vals.append(x)
        phi_members[members[i]] = _phi_from_basis_values(amb, members[i], e[:i], vals)
    phis = {}
    for W in nonzero_subspaces(r, amb.q):
        i = F.level(W)
        big = members[i]
        vals = tuple(amb.pair_k(phi_members[big], big.coords(b)) for b in W.basis)
        if not any(vals):
            raise NotInChart(f"coordinates {a} leave the chart: E_(V_{i}) contains {W!r}")
        phis[W] = vals
    pt = BPoint(amb, phis)
    ok, witness = is_bpoint(pt)
    if not ok:
        raise ArithmeticError(f"chart produced an invalid point (witness {witness})")
    if not in_UF(pt, F):
        raise NotInChart(f"coordinates {a} leave the chart")
    return pt


def chart_from_point(pt: BPoint, F: Flag) -> tuple[int, ...]:
    """a_{i-1} = -phi_{V_i}(e_{i-1}) / phi_{V_i}(e_i)."""
    if not in_UF(pt, F):
        raise NotInChart("point lies outside U_F")
    K = pt.amb.K
    e = adapted_basis(F)
    out = []
    for i in range(2, pt.amb.r + 1):
        Vi = F.members[i]
        out.append(K.neg(K.div(pt.phi(Vi, e[i - 2]), pt.phi(Vi, e[i - 1]))))
    return tuple(out)


@dataclass
class ChartReport:
    tuples: int
    in_chart: int
    roundtrips: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def chart_roundtrip(amb: Ambient, F: Flag) -> ChartReport:
    """Every coordinate tuple either roundtrips exactly or is provably outside U_F.

    Inside the chart: chart_from_point recovers a, the stratum is the trivial
    flag iff all a_j are nonzero, and the stratum flag is the subflag of F
    singled out by the vanishing coordinates.
    """
    K = amb.K
    r = amb.r
    failures = []
    inside = 0
    for a in itertools.product(range(K.q), repeat=r - 1):
        try:
            pt = chart_to_point(amb, F, a)
        except NotInChart:
            if _chart_tuple_in_UF(amb, F, a):
                failures.append(("rejected", a))
            continue
        inside += 1
        if chart_from_point(pt, F) != a:
            failures.append(("roundtrip", a))
            continue
        expected = Flag([F.members[0]] + [F.members[j] for j in range(1, r) if a[j - 1] == 0] + [F.members[-1]])
        if stratum_flag(pt) != expected:
            failures.append(("stratum", a))
    return ChartReport(K.q ** (r - 1), inside, inside - sum(1 for f in failures if f[0] != "rejected"), failures)


def _chart_tuple_in_UF(amb: Ambient, F: Flag, a) -> bool:
    """Independent test: V_i (x) k = E_{V_i} + V' (x) k for every V' at level i."""
    K = amb.K
    e = adapted_basis(F)
    for W in nonzero_subspaces(amb.r, amb.q):
        i = F.level(W)
        # E_{V_i} is spanned by e_j + a_j e_{j+1}; check whether W (x) k lies in it
        gens = []
        for j in range(1, i):
            vec = [0] * amb.r
            for t in range(amb.r):
                vec[t] = K.add(amb.emb[e[j - 1][t]], K.mul(a[j - 1], amb.emb[e[j][t]]))
            gens.append(vec)
        base = rank(K, gens) if gens else 0
        ext = rank(K, gens + [[amb.emb[x] for x in b] for b in W.basis])
        if ext == base:
            return False
    return True


def covering_flags(pt: BPoint) -> list[Flag]:
    """Complete flags whose chart contains pt."""
    sp = pt.amb.space
    return [F for F in flags(sp.r, sp.q, complete_only=True) if in_UF(pt, F)]


# -- enumeration -------------------------------------------------------------------------

def omega_point(amb: Ambient, lam: LinearMapToK) -> BPoint:
    """The point of the open stratum with E_{V'} = ker(lam) restricted to V'."""
    phis = {}
    for W in nonzero_subspaces(amb.r, amb.q):
        phis[W] = tuple(lam(b) for b in W.basis)
    return BPoint(amb, phis)


class Quotient:
    """V_i / V_{i-1} identified with F_q^d through a complement basis."""

    def __init__(self, lo: Subspace, hi: Subspace):
        self.lo, self.hi = lo, hi
        sp = hi.space
        comp = []
        cur = lo
        # echelon vectors of hi first, so that V/0 keeps the coordinates of V
        for v in list(hi.basis) + list(sp.reps):
            if v in hi and v not in cur:
                comp.append(v)
                cur = cur + Subspace.span(sp, [v])
        self.complement = comp
        self.d = len(comp)
        self.space = vspace(self.d, sp.q)
        self.full_basis = list(lo.basis) + comp

    def project(self, v) -> tuple[int, ...]:
        c = _solve_combination(self.hi.space.field, self.full_basis, v)
        return tuple(c[self.lo.dim:])

    def lift(self, w) -> tuple:
        F = self.hi.space.field
        out = [0] * self.hi.space.r
        for c, v in zip(w, self.complement):
            if c:
                out = [F.add(x, F.mul(c, y)) for x, y in zip(out, v)]
        return tuple(out)

    def preimage(self, S: Subspace) -> Subspace:
        return self.lo + Subspace.span(self.hi.space, [self.lift(b) for b in S.basis])

    def image(self, W: Subspace) -> Subspace:
        return Subspace.span(self.space, [self.project(b) for b in (W + self.lo).basis])


def _quotients(F: Flag) -> list[Quotient]:
    return [Quotient(lo, hi) for lo, hi in zip(F.members, F.members[1:])]


def mu_decompose(pt: BPoint, F: Flag) -> list[BPoint]:
    """Restrict pt in B_F to the successive quotients of F."""
    if not in_BF(pt, F):
        raise ValueError("point does not lie in B_F")
    parts = []
    for Q in _quotients(F):
        sub = Ambient.make(Q.d, pt.amb.q, pt.amb.m)
        phis = {}
        for S in nonzero_subspaces(Q.d, pt.amb.q):
            big = Q.preimage(S)
            phis[S] = tuple(pt.phi(big, Q.lift(b)) for b in S.basis)
        parts.append(BPoint(sub, phis))
    return parts


def nu_compose(amb: Ambient, parts, F: Flag) -> BPoint:
    """Inverse of mu_decompose: pull the quotient hyperplanes back."""
    quots = _quotients(F)
    if len(parts) != len(quots):
        raise ValueError("one part per step of the flag")
    phis = {}
    for W in nonzero_subspaces(amb.r, amb.q):
        i = F.level(W)
        Q, part = quots[i - 1], parts[i - 1]
        S = Q.image(W)
        phis[W] = tuple(part.phi(S, Q.project(b)) for b in W.basis)
    return BPoint(amb, phis)


def stratum_points(amb: Ambient, F: Flag) -> list[BPoint]:
    """Omega_F(k) through the product of open strata of the quotients."""
    factors = []
    for Q in _quotients(F):
        sub = Ambient.make(Q.d, amb.q, amb.m)
        factors.append([omega_point(sub, lam) for lam in injective_maps(sub, full_space(sub.space))])
    return [nu_compose(amb, parts, F) for parts in itertools.product(*factors)]


def bv_points(amb: Ambient) -> list[BPoint]:
    return [pt for F in flags(amb.r, amb.q) for pt in stratum_points(amb, F)]


def bv_count_strata(q: int, r: int, m: int) -> int:
    total = 0
    for F in flags(r, q):
        prod = 1
        for lo, hi in zip(F.members, F.members[1:]):
            prod *= omega_count(q, hi.dim - lo.dim, m)
        total += prod
    return total


def bv_points_bruteforce(amb: Ambient) -> list[BPoint]:
    """Backtracking over all hyperplane choices, largest subspaces first so
    that the nesting condition prunes early."""
    K = amb.K
    subs = sorted(nonzero_subspaces(amb.r, amb.q), key=lambda W: (-W.dim, W.basis))
    above = {W: [B for B in subs if B.dim > W.dim and B.contains(W)] for W in subs}
    funcs = {
        d: [v for v in itertools.product(range(K.q), repeat=d) if next((x for x in v if x), None) == 1]
        for d in range(1, amb.r + 1)
    }
    out = []
    chosen: dict = {}
    restricted: dict = {}

    def extend(idx):
        if idx == len(subs):
            out.append(BPoint(amb, dict(chosen)))
            return
        W = subs[idx]
        for vals in funcs[W.dim]:
            if all(_proportional(K, restricted[B, W], vals) for B in above[W]):
                chosen[W] = vals
                for S in subs[idx + 1:]:
                    if S.dim < W.dim and W.contains(S):
                        restricted[W, S] = tuple(amb.pair_k(vals, c) for c in _coord_matrix(W, S))
                extend(idx + 1)
                del chosen[W]

    extend(0)
    return out


def blowup_count(q: int, m: int) -> int:
    """Points of P^2 blown up in its F_q-rational points, over F_{q^m}."""
    Q = q**m
    rational = q * q + q + 1
    return (Q * Q + Q + 1) - rational + rational * (Q + 1)


# -- the morphisms to P_V and Q_V -------------------------------------------------------

def pi_P(pt: BPoint) -> LinearMapToK:
    V = pt.top()
    return LinearMapToK(pt.amb, V, pt.phis[V])


def pi_Q_via(pt: BPoint, F: Flag) -> ReciprocalMap:
    """rho(v) = kappa_i / phi_{V_i}(v) with i the level of v in F and
    phi_{V_i}|_{V_1} = kappa_i phi_{V_1}; requires pt in U_F."""
    if not in_UF(pt, F):
        raise NotInChart("point lies outside U_F")
    amb = pt.amb
    K = amb.K
    V1 = F.members[1]
    b = next(x for x in V1.basis if pt.phi(V1, x))
    ref = pt.phi(V1, b)
    vals = []
    for v in amb.space.reps:
        line = Subspace.span(amb.space, [v])
        Vi = F.members[F.level(line)]
        kappa = K.div(pt.phi(Vi, b), ref)
        if kappa:
            kappa_full = pt.restricted(Vi, V1)
            if kappa_full != tuple(K.mul(kappa, x) for x in pt.phis[V1]):
                raise ArithmeticError("restriction to V_1 is not proportional to phi_(V_1)")
        vals.append(K.div(kappa, pt.phi(Vi, v)) if kappa else 0)
    return ReciprocalMap(amb, vals).canonical()


def pi_Q(pt: BPoint) -> ReciprocalMap:
    return pi_Q_via(pt, stratum_flag(pt))


# -- boundary vanishing orders -------------------------------------------------------------

def chart_lambda(r: int, q: int) -> list[MPoly]:
    """lam(X_i) = prod_{l=i}^{r-1} (-a_l) in F_q[a_1..a_{r-1}]."""
    F = vspace(r, q).field
    out = []
    for i in range(1, r + 1):
        p = MPoly.const(F, r - 1)
        for l in range(i, r):
            p = p * MPoly.var(F, r - 1, l - 1).scale(F.neg(1))
        out.append(p)
    return out


def _order_in(p: MPoly, j: int) -> int:
    if p.is_zero():
        raise ValueError("order of the zero polynomial")
    return min(e[j - 1] for e in p.terms)


def boundary_order(v, v_ref, j: int, r: int, q: int) -> int:
    """Vanishing order of rho(v)/rho(v_ref) along {a_j = 0} in the standard chart."""
    sp = vspace(r, q)
    Vj = sp.coordinate_subspace(j)
    if not any(v_ref) or v_ref not in Vj:
        raise ValueError("reference vector must be a nonzero vector of V_j")
    lam = chart_lambda(r, q)

    def lam_of(x):
        total = MPoly(sp.field, r - 1)
        for c, p in zip(x, lam):
            if c:
                total = total + p.scale(c)
        return total

    return _order_in(lam_of(v_ref), j) - _order_in(lam_of(v), j)


def generator_orders(space, j: int) -> list[int]:
    """Total boundary order along {a_j = 0} of each dualizing-ideal generator."""
    ref = space.unit(0)
    return [sum(boundary_order(v, ref, j, space.r, space.q) for v in g.vectors) for g in iv_generators(space)]
