"""Sparse polynomials over F_q and fractions with products of linear forms
as denominators.

``LinFrac`` is the general element type (numerator MPoly over a multiset of
normalized linear forms).  ``LinMonomial`` is the special case
scalar * prod(l_i^{e_i}) with integer exponents of either sign; all the
distinguished elements of the ring (reciprocals, f_i, E- and Delta-sets and
their products) are of this shape, and group elements act on them by
permuting exponents, which is much cheaper than substituting numerators.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache

from .gfq import FieldDesc
from .linalg import GroupElem, VSpace

Exps = tuple[int, ...]


def _add_exps(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


class MPoly:
    """Polynomial in X_1..X_n over F_q as {exponent tuple: nonzero code}."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: FieldDesc, nvars: int, terms: dict[Exps, int] | None = None):
        self.field = field
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, F, n, c=1):
        return cls(F, n, {(0,) * n: c})

    @classmethod
    def var(cls, F, n, i):
        return cls(F, n, {tuple(1 if j == i else 0 for j in range(n)): 1})

    @classmethod
    def linear(cls, F, coeffs):
        n = len(coeffs)
        return cls(F, n, {tuple(1 if j == i else 0 for j in range(n)): c for i, c in enumerate(coeffs) if c})

    def _like(self, terms):
        return MPoly(self.field, self.nvars, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "MPoly") -> "MPoly":
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = F.add(out.get(e, 0), c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._like(out)

    def __neg__(self):
        F = self.field
        return self._like({e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "MPoly":
        if c == 0:
            return self._like({})
        F = self.field
        return self._like({e: F.mul(c, x) for e, x in self.terms.items()})

    def __mul__(self, other: "MPoly") -> "MPoly":
        F = self.field
        out: dict[Exps, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exps(e1, e2)
                out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        return self._like(out)

    def __pow__(self, n: int) -> "MPoly":
        result = MPoly.const(self.field, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_linear(self, coeffs) -> "MPoly":
        F = self.field
        out: dict[Exps, int] = {}
        for i, a in enumerate(coeffs):
            if not a:
                continue
            for e, c in self.terms.items():
                e2 = e[:i] + (e[i] + 1,) + e[i + 1 :]
                out[e2] = F.add(out.get(e2, 0), F.mul(a, c))
        return self._like(out)

    def total_degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def degree(self) -> int:
        return max(self.total_degrees(), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.total_degrees()) <= 1

    def sorted_terms(self) -> list[tuple[Exps, int]]:
        """Terms in graded lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def substitute_linear(self, images) -> "MPoly":
        """Replace X_i by the linear form with coefficient vector images[i]."""
        F = self.field
        lin = [MPoly.linear(F, img) for img in images]
        cache: dict[tuple[int, int], MPoly] = {}

        def power(i, k):
            if (i, k) not in cache:
                cache[(i, k)] = lin[i] ** k
            return cache[(i, k)]

        out = self._like({})
        for e, c in self.terms.items():
            term = MPoly.const(F, self.nvars, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def act(self, g: GroupElem) -> "MPoly":
        """Functorial action: X_j goes to g(X_j), the j-th column of g."""
        return self.substitute_linear([g.column(j) for j in range(self.nvars)])

    def evaluate(self, point, K: FieldDesc, embed_table) -> int:
        """Value at a point of K^n; coefficients mapped through embed_table."""
        total = 0
        for e, c in self.terms.items():
            v = embed_table[c]
            for x, k in zip(point, e):
                if k:
                    v = K.mul(v, K.pow(x, k))
            total = K.add(total, v)
        return total

    def divide_by_linform(self, coeffs) -> "MPoly | None":
        """Exact quotient by the linear form sum(coeffs[i] X_i), or None."""
        F = self.field
        j = next(i for i, c in enumerate(coeffs) if c)
        lead = coeffs[j]
        if lead != 1:
            q = self.divide_by_linform([F.div(c, lead) for c in coeffs])
            return None if q is None else q.scale(F.inv(lead))
        if not self.terms:
            return self
        # Synthetic division in X_j: p = sum_k p_k X_j^k by (X_j + m).
        rest = [c if i != j else 0 for i, c in enumerate(coeffs)]
        m = MPoly.linear(F, rest)
        slices: dict[int, dict[Exps, int]] = {}
        for e, c in self.terms.items():
            slices.setdefault(e[j], {})[e[:j] + (0,) + e[j + 1 :]] = c
        top = max(slices)
        coef = [self._like(slices.get(k, {})) for k in range(top + 1)]
        quot = [None] * top
        carry = coef[top]
        for k in range(top - 1, -1, -1):
            quot[k] = carry
            carry = coef[k] - m * carry
        if carry:
            return None
        out: dict[Exps, int] = {}
        for k, qk in enumerate(quot):
            for e, c in qk.terms.items():
                out[e[:j] + (k,) + e[j + 1 :]] = c
        return self._like(out)

    def __repr__(self):
        return poly_to_str(self)


def poly_to_str(p: MPoly) -> str:
    if not p.terms:
        return "0"
    F = p.field
    parts = []
    for e, c in p.sorted_terms():
        factors = [f"X{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]
        cs = _code_str(F, c)
        if factors:
            parts.append(("" if c == 1 else cs + "*") + "*".join(factors))
        else:
            parts.append(cs)
    return " + ".join(parts)


def _code_str(F: FieldDesc, c: int) -> str:
    return str(c) if F.e == 1 else "[" + ",".join(map(str, F.coeffs(c))) + "]"


# -- linear forms -------------------------------------------------------------

class LinForm:
    """Normalized linear form sum v_i X_i with first nonzero coefficient 1."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(coeffs)
        if not any(coeffs):
            raise ValueError("zero linear form")
        if coeffs[next(i for i, c in enumerate(coeffs) if c)] != 1:
            raise ValueError("linear form is not normalized")
        self.coeffs = coeffs

    def __eq__(self, other):
        return isinstance(other, LinForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"LinForm{self.coeffs}"

    def poly(self, F: FieldDesc) -> MPoly:
        return MPoly.linear(F, self.coeffs)


def linform_str(F: FieldDesc, v) -> str:
    parts = []
    for i, c in enumerate(v):
        if c:
            parts.append(("" if c == 1 else _code_str(F, c) + "*") + f"X{i + 1}")
    return "+".join(parts)


@lru_cache(maxsize=None)
def _linform_poly(space: VSpace, i: int) -> MPoly:
    return MPoly.linear(space.field, space.reps[i])


@lru_cache(maxsize=4096)
def act_table(space: VSpace, g: GroupElem) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """For each representative l_i: g(l_i) = scal[i] * l_{perm[i]}."""
    perm, scal = [], []
    for v in space.reps:
        a, j = space.normalize(g.apply(v))
        perm.append(j)
        scal.append(a)
    return tuple(perm), tuple(scal)


# -- fractions -------------------------------------------------------------------

class LinFrac:
    """num / prod(l^m) over normalized linear forms; kept reduced."""

    __slots__ = ("space", "num", "den")

    def __init__(self, space: VSpace, num: MPoly, den=None, reduce: bool = True):
        self.space = space
        self.num = num
        self.den: dict[int, int] = {i: m for i, m in (den or {}).items() if m}
        if num.is_zero():
            self.den = {}
        elif reduce:
            self._reduce()

    def _reduce(self):
        for i in sorted(self.den):
            while self.den.get(i, 0) > 0:
                q = self.num.divide_by_linform(self.space.reps[i])
                if q is None:
                    break
                self.num = q
                self.den[i] -= 1
            if self.den.get(i) == 0:
                del self.den[i]

    @property
    def field(self) -> FieldDesc:
        return self.space.field

    @classmethod
    def const(cls, space, c=1):
        return cls(space, MPoly.const(space.field, space.r, c))

    @classmethod
    def from_poly(cls, space, p: MPoly):
        return cls(space, p)

    @classmethod
    def recip(cls, space, v) -> "LinFrac":
        """1/v for a nonzero vector v, including the normalizing scalar."""
        a, i = space.normalize(v)
        return cls(space, MPoly.const(space.field, space.r, space.field.inv(a)), {i: 1}, reduce=False)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _den_poly(self, mults: dict[int, int]) -> MPoly:
        out = MPoly.const(self.field, self.space.r)
        for i, m in mults.items():
            for _ in range(m):
                out = out.mul_linear(self.space.reps[i])
        return out

    def _lift(self, target: dict[int, int]) -> MPoly:
        """Numerator after rewriting over the larger denominator target."""
        out = self.num
        for i, m in target.items():
            for _ in range(m - self.den.get(i, 0)):
                out = out.mul_linear(self.space.reps[i])
        return out

    def __add__(self, other: "LinFrac") -> "LinFrac":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        lcm = dict(self.den)
        for i, m in other.den.items():
            lcm[i] = max(lcm.get(i, 0), m)
        return LinFrac(self.space, self._lift(lcm) + other._lift(lcm), lcm)

    def __neg__(self):
        return LinFrac(self.space, -self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "LinFrac":
        return LinFrac(self.space, self.num.scale(c), self.den, reduce=False)

    def __mul__(self, other: "LinFrac") -> "LinFrac":
        if isinstance(other, int):
            return self.scale(other)
        den = Counter(self.den)
        den.update(other.den)
        return LinFrac(self.space, self.num * other.num, dict(den))

    def __pow__(self, n: int) -> "LinFrac":
        out = LinFrac.const(self.space)
        for _ in range(n):
            out = out * self
        return out

    def linear_factors(self) -> tuple[int, dict[int, int]] | None:
        """Write num = c * prod(l_i^k_i), or None if it is not such a product."""
        num = self.num
        if num.is_zero():
            return None
        factors: dict[int, int] = {}
        changed = True
        while changed and num.degree() > 0:
            changed = False
            for i, v in enumerate(self.space.reps):
                q = num.divide_by_linform(v)
                if q is not None:
                    num = q
                    factors[i] = factors.get(i, 0) + 1
                    changed = True
                    break
        if num.degree() != 0:
            return None
        return num.terms[(0,) * self.space.r], factors

    def inverse(self) -> "LinFrac":
        split = self.linear_factors()
        if split is None:
            raise ValueError("can only invert fractions whose numerator is a product of linear forms")
        c, factors = split
        num = self._den_poly(self.den).scale(self.field.inv(c))
        return LinFrac(self.space, num, factors)

    def __truediv__(self, other: "LinFrac") -> "LinFrac":
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, LinFrac):
            return NotImplemented
        common = {i: min(m, other.den.get(i, 0)) for i, m in self.den.items()}
        left = self.num * other._den_poly({i: m - common.get(i, 0) for i, m in other.den.items()})
        right = other.num * self._den_poly({i: m - common.get(i, 0) for i, m in self.den.items()})
        return left == right

    def __hash__(self):
        return hash((frozenset(self.num.terms.items()), frozenset(self.den.items())))

    def degree(self) -> int | None:
        """Homogeneous degree, or None for zero and non-homogeneous fractions."""
        if self.num.is_zero() or not self.num.is_homogeneous():
            return None
        return self.num.degree() - sum(self.den.values())

    def act(self, g: GroupElem) -> "LinFrac":
        F = self.field
        perm, scal = act_table(self.space, g)
        num = self.num.act(g)
        den: dict[int, int] = {}
        for i, m in self.den.items():
            den[perm[i]] = den.get(perm[i], 0) + m
            num = num.scale(F.pow(F.inv(scal[i]), m))
        return LinFrac(self.space, num, den, reduce=False)

    def __repr__(self):
        return frac_to_str(self)


def frac_to_str(a: LinFrac) -> str:
    F = a.field
    num = poly_to_str(a.num)
    if not a.den:
        return num
    den = "".join(
        f"({linform_str(F, a.space.reps[i])})" + (f"^{m}" if m > 1 else "") for i, m in sorted(a.den.items())
    )
    return f"({num}) / {den}"


def frac_degree(a: LinFrac) -> int | None:
    return a.degree()


def act(g: GroupElem, a):
    return a.act(g)


class LinMonomial:
    """scalar * prod_i l_i^{e_i} for normalized linear forms l_i, e_i in Z."""

    __slots__ = ("space", "scalar", "exps")

    def __init__(self, space: VSpace, scalar: int, exps: dict[int, int] | None = None):
        self.space = space
        self.scalar = scalar
        self.exps = {i: e for i, e in (exps or {}).items() if e}

    @classmethod
    def one(cls, space):
        return cls(space, 1)

    @classmethod
    def recip(cls, space, v):
        a, i = space.normalize(v)
        return cls(space, space.field.inv(a), {i: -1})

    @classmethod
    def form(cls, space, v):
        a, i = space.normalize(v)
        return cls(space, a, {i: 1})

    def __mul__(self, other: "LinMonomial") -> "LinMonomial":
        exps = dict(self.exps)
        for i, e in other.exps.items():
            exps[i] = exps.get(i, 0) + e
        return LinMonomial(self.space, self.space.field.mul(self.scalar, other.scalar), exps)

    def __pow__(self, n: int) -> "LinMonomial":
        if n < 0:
            return self.inverse() ** (-n)
        return LinMonomial(self.space, self.space.field.pow(self.scalar, n), {i: e * n for i, e in self.exps.items()})

    def inverse(self):
        return LinMonomial(self.space, self.space.field.inv(self.scalar), {i: -e for i, e in self.exps.items()})

    def scale(self, c: int) -> "LinMonomial":
        return LinMonomial(self.space, self.space.field.mul(self.scalar, c), self.exps)

    def degree(self) -> int:
        return sum(self.exps.values())

    def key(self):
        return (self.scalar, tuple(sorted(self.exps.items())))

    def __eq__(self, other):
        return isinstance(other, LinMonomial) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def act(self, g: GroupElem) -> "LinMonomial":
        F = self.space.field
        perm, scal = act_table(self.space, g)
        c = self.scalar
        exps: dict[int, int] = {}
        for i, e in self.exps.items():
            c = F.mul(c, F.pow(scal[i], e))
            exps[perm[i]] = exps.get(perm[i], 0) + e
        return LinMonomial(self.space, c, exps)

    def to_frac(self) -> LinFrac:
        F = self.space.field
        num = MPoly.const(F, self.space.r, self.scalar)
        den = {}
        for i, e in self.exps.items():
            if e > 0:
                for _ in range(e):
                    num = num.mul_linear(self.space.reps[i])
            else:
                den[i] = -e
        return LinFrac(self.space, num, den, reduce=False)

    def __repr__(self):
        return f"LinMonomial({frac_to_str(self.to_frac())})"
