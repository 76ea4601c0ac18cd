"""Finite fields F_p^e with deterministic construction and embeddings.

Elements are encoded as integers: the element c_0 + c_1 g + ... + c_{e-1} g^{e-1}
has code c_0 + c_1 p + ... + c_{e-1} p^{e-1}, where g is the class of x modulo
the canonical modulus.  Every algorithm in the package works on these codes;
``FqElem`` is a thin operator-overloading wrapper for interactive use.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

MAX_FIELD_SIZE = 2**20
_LOG_TABLE_LIMIT = 2**14
_ADD_TABLE_LIMIT = 729
_DENSE_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^e, raising ValueError if q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = prime_factors(q)[0]
    e, m = 0, q
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


# -- polynomials over Z/p as coefficient lists, low degree first ---------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    a = _trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(m)/2."""
    e = len(m) - 1
    if e == 1:
        return True
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(m, list(low) + [1], p):
                return False
    return True


def canonical_modulus(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree e.

    Candidates are compared on their coefficient tuples (c_0, ..., c_{e-1})
    read from the constant term upwards.
    """
    for low in itertools.product(range(p), repeat=e):
        m = list(low) + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldDesc:
    """The field F_q, q = p^e, with its canonical modulus."""

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._add: list[list[int]] | None = None
        self._dense: tuple[np.ndarray, ...] | None = None
        self._primitive: int | None = None

    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (field_make, (self.p, self.e))

    # -- code <-> coefficients
    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, cs) -> int:
        code = 0
        for c in reversed(list(cs)):
            code = code * self.p + (c % self.p)
        return code

    @property
    def gen(self) -> int:
        """Code of the class of x (the polynomial generator)."""
        return self.p if self.e > 1 else (-self.modulus[0]) % self.p

    def elements(self) -> range:
        return range(self.q)

    # -- additive structure
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a + b) % self.p
        if self._add is not None:
            return self._add[a][b]
        if self.q <= _ADD_TABLE_LIMIT:
            self._add = [[self._add_digits(x, y, 1) for y in range(self.q)] for x in range(self.q)]
            return self._add[a][b]
        return self._add_digits(a, b, 1)

    def _add_digits(self, a: int, b: int, sign: int) -> int:
        p, out, scale = self.p, 0, 1
        for _ in range(self.e):
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + sign * y) % p) * scale
            scale *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.e == 1:
            return (-a) % self.p
        return self._add_digits(0, a, -1)

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a - b) % self.p
        return self._add_digits(a, b, -1)

    # -- multiplicative structure
    def _mul_poly(self, a: int, b: int) -> int:
        x, y = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.e - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] = (prod[i + j] + xi * yj) % self.p
        return self.from_coeffs(_poly_mod(prod, list(self.modulus), self.p))

    def _pow_poly(self, a: int, n: int) -> int:
        result, base = 1, a
        while n:
            if n & 1:
                result = self._mul_poly(result, base)
            base = self._mul_poly(base, base)
            n >>= 1
        return result

    @property
    def primitive(self) -> int:
        """Smallest code generating the multiplicative group."""
        if self._primitive is None:
            if self.q == 2:
                self._primitive = 1
            else:
                n = self.q - 1
                factors = prime_factors(n)
                for g in range(2, self.q):
                    if all(self._pow_poly(g, n // f) != 1 for f in factors):
                        self._primitive = g
                        break
        return self._primitive

    def _build_logs(self):
        g = self.primitive
        exp = [0] * (2 * (self.q - 1))
        log = [0] * self.q
        x = 1
        for i in range(self.q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, g) if self.e > 1 else (x * g) % self.p
        exp[self.q - 1 :] = exp[: self.q - 1]
        self._exp, self._log = exp, log

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.e == 1:
            return (a * b) % self.p
        if self._exp is None:
            if self.q > _LOG_TABLE_LIMIT:
                return self._mul_poly(a, b)
            self._build_logs()
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is None:
            if self.q > _LOG_TABLE_LIMIT:
                return self._pow_poly(a, self.q - 2)
            self._build_logs()
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if n == 0 else 0
        n %= self.q - 1
        if self.e == 1:
            return pow(a, n, self.p)
        if self._exp is None:
            if self.q > _LOG_TABLE_LIMIT:
                return self._pow_poly(a, n)
            self._build_logs()
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def prod(self, values) -> int:
        out = 1
        for v in values:
            out = self.mul(out, v)
        return out

    def sum(self, values) -> int:
        out = 0
        for v in values:
            out = self.add(out, v)
        return out

    def dense_tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(add, mul, neg, inv) lookup tables as int64 arrays for the kernels."""
        if self._dense is None:
            if self.q > _DENSE_TABLE_LIMIT:
                raise ValueError(f"{self!r} is too large for dense tables")
            q = self.q
            add = np.array([[self.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
            mul = np.array([[self.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
            neg = np.array([self.neg(a) for a in range(q)], dtype=np.int64)
            inv = np.array([0] + [self.inv(a) for a in range(1, q)], dtype=np.int64)
            self._dense = (add, mul, neg, inv)
        return self._dense

    def __call__(self, value) -> "FqElem":
        if isinstance(value, FqElem):
            if value.field is not self:
                raise ValueError("field mismatch")
            return value
        if isinstance(value, (tuple, list)):
            return FqElem(self, self.from_coeffs(value))
        return FqElem(self, int(value) % self.q if self.e == 1 else int(value))


@lru_cache(maxsize=None)
def field_make(p: int, e: int = 1) -> FieldDesc:
    """Canonical F_{p^e}; repeated calls return the same object."""
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if e < 1:
        raise ValueError(f"extension degree {e} < 1")
    if p**e > MAX_FIELD_SIZE:
        raise ValueError(f"field of size {p}^{e} exceeds the enumeration bound")
    return FieldDesc(p, e, canonical_modulus(p, e))


def gf(q: int) -> FieldDesc:
    """Field of size q (a prime power)."""
    return field_make(*prime_power(q))


class FqElem:
    """An element of a FieldDesc, with arithmetic operators."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldDesc, code: int):
        if not 0 <= code < field.q:
            raise ValueError(f"code {code} out of range for {field!r}")
        self.field = field
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def _other(self, b) -> int:
        if isinstance(b, FqElem):
            if b.field is not self.field:
                raise ValueError("field mismatch")
            return b.code
        if isinstance(b, int):
            return self.field.from_coeffs([b]) if self.field.e > 1 else b % self.field.p
        return NotImplemented

    def __add__(self, b):
        return FqElem(self.field, self.field.add(self.code, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return FqElem(self.field, self.field.sub(self.code, self._other(b)))

    def __rsub__(self, b):
        return FqElem(self.field, self.field.sub(self._other(b), self.code))

    def __neg__(self):
        return FqElem(self.field, self.field.neg(self.code))

    def __mul__(self, b):
        return FqElem(self.field, self.field.mul(self.code, self._other(b)))

    __rmul__ = __mul__

    def __truediv__(self, b):
        return FqElem(self.field, self.field.div(self.code, self._other(b)))

    def __rtruediv__(self, b):
        return FqElem(self.field, self.field.div(self._other(b), self.code))

    def __pow__(self, n: int):
        return FqElem(self.field, self.field.pow(self.code, n))

    def inv(self):
        return FqElem(self.field, self.field.inv(self.code))

    def __eq__(self, b):
        if isinstance(b, FqElem):
            return self.field is b.field and self.code == b.code
        if isinstance(b, int):
            return self.code == self._other(b)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.e, self.code))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __repr__(self):
        if self.field.e == 1:
            return f"{self.code}"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
                coef = str(c) if (c != 1 or i == 0) else ""
                terms.append(coef + ("*" if coef and mono else "") + mono)
        return "+".join(terms) if terms else "0"


def frobenius_code(field: FieldDesc, a: int, n: int, base_q: int | None = None) -> int:
    """a^(base_q^n) on codes; base_q defaults to the characteristic."""
    if n < 0:
        raise ValueError("negative Frobenius power")
    base = field.p if base_q is None else base_q
    if a == 0:
        return 0
    exponent = pow(base, n, field.q - 1) if field.q > 2 else 1
    if exponent == 0:
        exponent = field.q - 1
    return field.pow(a, exponent)


def frobenius(a: FqElem, n: int, base_q: int | None = None) -> FqElem:
    """The base_q^n-th power map (base_q = size of the base field of the tower)."""
    return FqElem(a.field, frobenius_code(a.field, a.code, n, base_q))


@lru_cache(maxsize=None)
def _generator_image(src: FieldDesc, tgt: FieldDesc) -> int:
    """Smallest root (by code) of the source modulus inside the target."""
    for y in range(tgt.q):
        acc = 0
        for c in reversed(src.modulus):
            acc = tgt.add(tgt.mul(acc, y), tgt.from_coeffs([c]))
        if acc == 0:
            return y
    raise AssertionError("modulus has no root in target")  # pragma: no cover


@lru_cache(maxsize=None)
def embedding_table(src: FieldDesc, tgt: FieldDesc) -> tuple[int, ...]:
    """Image codes of every element of src under the canonical embedding.

    The choice is made per pair of fields, so composing F_4 -> F_64 -> F_4096
    differs from the direct F_4 -> F_4096 map."""
    if src.p != tgt.p or tgt.e % src.e:
        raise ValueError(f"{src!r} does not embed in {tgt!r}")
    if src.e == 1:
        return tuple(tgt.from_coeffs([c]) for c in range(src.q))
    y = _generator_image(src, tgt)
    powers = [1]
    for _ in range(src.e - 1):
        powers.append(tgt.mul(powers[-1], y))
    out = []
    for code in range(src.q):
        acc = 0
        for c, yp in zip(src.coeffs(code), powers):
            if c:
                acc = tgt.add(acc, tgt.mul(tgt.from_coeffs([c]), yp))
        out.append(acc)
    return tuple(out)


def embed(a: FqElem, target: FieldDesc) -> FqElem:
    """Canonical embedding F_{p^e} -> F_{p^{em}} (generator to smallest root)."""
    return FqElem(target, embedding_table(a.field, target)[a.code])
