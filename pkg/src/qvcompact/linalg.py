"""Linear algebra over F_q: vectors, canonical subspaces, flags and matrix groups.

Vectors are tuples of field codes.  Subspaces are stored by their reduced row
echelon basis, so equal subspaces compare and hash equal.  Matrices act on
column vectors: ``g * v``; the j-th column of g is the image of X_j.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import _kernels
from .gfq import FieldDesc, gf

Vec = tuple[int, ...]

DEFAULT_GROUP_CAP = 25000


# -- row reduction ----------------------------------------------------------

def rref_rows(F: FieldDesc, rows) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form of a small matrix given as code lists."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots: list[int] = []
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        s = F.inv(M[rank][c])
        M[rank] = [F.mul(s, x) for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = F.neg(M[i][c])
                M[i] = [F.add(x, F.mul(f, y)) for x, y in zip(M[i], M[rank])]
        pivots.append(c)
        rank += 1
        if rank == len(M):
            break
    return M[:rank], pivots


def _use_kernels(F: FieldDesc, nrows: int, ncols: int) -> bool:
    return F.q <= 256 and nrows * ncols > 400


def rank(F: FieldDesc, rows) -> int:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    if _use_kernels(F, len(rows), len(rows[0])):
        return rank_array(F, np.array(rows, dtype=np.uint8))
    return len(rref_rows(F, rows)[1])


def rank_array(F: FieldDesc, M: np.ndarray) -> int:
    """Rank of a uint8 matrix of field codes (the array is overwritten)."""
    if M.size == 0:
        return 0
    add, mul, neg, inv = F.dense_tables()
    if M.shape[0] > M.shape[1]:
        M = np.ascontiguousarray(M.T)
    r, _ = _kernels.rref(M, add, mul, neg, inv, False)
    return int(r)


def nullspace(F: FieldDesc, rows, ncols: int) -> list[list[int]]:
    """Basis of {x : M x = 0} for the matrix with the given rows."""
    R, pivots = rref_rows(F, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [0] * ncols
        x[fcol] = 1
        for row, pc in zip(R, pivots):
            x[pc] = F.neg(row[fcol])
        basis.append(x)
    return basis


class RowSpace:
    """Echelon data of a family of rows that remembers how each pivot row
    was combined, so targets can be expressed in the original family."""

    def __init__(self, F: FieldDesc, rows: np.ndarray):
        self.field = F
        n, m = rows.shape
        self.n_input = n
        aug = np.zeros((n, m + n), dtype=np.uint8)
        aug[:, :m] = rows
        aug[np.arange(n), m + np.arange(n)] = 1
        add, mul, neg, inv = F.dense_tables()
        r, pivots = _kernels.rref(aug, add, mul, neg, inv, True)
        self.rank = int(r)
        self.width = m
        self.pivots = pivots
        self.echelon = np.ascontiguousarray(aug[: self.rank])
        self.relations = aug[self.rank :, m:]  # rows combining to zero

    @property
    def independent(self) -> bool:
        return self.rank == self.n_input

    def solve_array(self, targets: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(coefficients, solvable): coefficients c with c . rows = target per row."""
        F = self.field
        add, mul, neg, _ = F.dense_tables()
        t = targets.shape[0]
        X = np.zeros((t, self.width + self.n_input), dtype=np.uint8)
        X[:, : self.width] = targets
        X = _kernels.reduce_rows(self.echelon, self.pivots[self.pivots < self.width], X, add, mul, neg)
        solvable = ~X[:, : self.width].any(axis=1)
        return neg[X[:, self.width :]].astype(np.uint8), solvable

    def solve(self, targets: np.ndarray) -> list[list[int] | None]:
        """Coefficients c with c . rows = target, or None if not in the span."""
        coeffs, ok = self.solve_array(targets)
        return [[int(c) for c in row] if good else None for row, good in zip(coeffs, ok)]


# -- vectors and the ambient space ----------------------------------------

class VSpace:
    """F_q^r with its enumerations of nonzero vectors and projective representatives."""

    def __init__(self, r: int, F: FieldDesc):
        if r < 1:
            raise ValueError("dimension must be at least 1")
        self.r = r
        self.field = F
        self.q = F.q
        self.vectors: list[Vec] = [v for v in itertools.product(range(F.q), repeat=r)]
        self.nonzero: list[Vec] = [v for v in self.vectors if any(v)]
        self.reps: list[Vec] = [v for v in self.nonzero if v[next(i for i, x in enumerate(v) if x)] == 1]
        self.rep_index = {v: i for i, v in enumerate(self.reps)}
        self._norm: dict[Vec, tuple[int, int]] = {}
        for i, v in enumerate(self.reps):
            for a in range(1, F.q):
                self._norm[tuple(F.mul(a, x) for x in v)] = (a, i)

    def __repr__(self):
        return f"VSpace(r={self.r}, q={self.q})"

    def normalize(self, v: Vec) -> tuple[int, int]:
        """(alpha, i) with v = alpha * reps[i]."""
        try:
            return self._norm[tuple(v)]
        except KeyError:
            raise ValueError("zero vector has no projective representative") from None

    def scale(self, a: int, v: Vec) -> Vec:
        return tuple(self.field.mul(a, x) for x in v)

    def add(self, v: Vec, w: Vec) -> Vec:
        return tuple(self.field.add(x, y) for x, y in zip(v, w))

    def sub(self, v: Vec, w: Vec) -> Vec:
        return tuple(self.field.sub(x, y) for x, y in zip(v, w))

    def pairing(self, ell: Vec, v: Vec) -> int:
        F = self.field
        return F.sum(F.mul(a, b) for a, b in zip(ell, v))

    def unit(self, i: int) -> Vec:
        return tuple(1 if j == i else 0 for j in range(self.r))

    def coordinate_subspace(self, i: int) -> "Subspace":
        """V_i = span(X_1, ..., X_i)."""
        return Subspace.span(self, [self.unit(j) for j in range(i)])

    def vectors_in(self, i: int) -> list[Vec]:
        """All vectors of V_i in enumeration order."""
        return [v for v in self.vectors if not any(v[i:])]


@lru_cache(maxsize=None)
def vspace(r: int, q: int) -> VSpace:
    return VSpace(r, gf(q))


def nonzero_vectors(r: int, q: int) -> list[Vec]:
    return list(vspace(r, q).nonzero)


def projective_reps(r: int, q: int) -> list[Vec]:
    return list(vspace(r, q).reps)


def pairing(F: FieldDesc, ell: Vec, v: Vec) -> int:
    return F.sum(F.mul(a, b) for a, b in zip(ell, v))


# -- subspaces and flags -----------------------------------------------------

class Subspace:
    """Subspace of F_q^r stored by its reduced row echelon basis."""

    __slots__ = ("space", "basis", "pivots", "_hash")

    def __init__(self, space: VSpace, basis: tuple[Vec, ...], pivots: tuple[int, ...]):
        self.space = space
        self.basis = basis
        self.pivots = pivots
        self._hash = hash((space.r, space.q, basis))

    @classmethod
    def span(cls, space: VSpace, vectors) -> "Subspace":
        rows, pivots = rref_rows(space.field, [list(v) for v in vectors])
        return cls(space, tuple(tuple(r) for r in rows), tuple(pivots))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return self.space.r

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.space is other.space and self.basis == other.basis

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (self.dim, self.basis) < (other.dim, other.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, basis={list(self.basis)})"

    def coords(self, v: Vec) -> tuple[int, ...] | None:
        """Coordinates of v in the echelon basis, or None if v is not inside."""
        c = tuple(v[p] for p in self.pivots)
        F = self.space.field
        recon = [0] * self.space.r
        for ci, row in zip(c, self.basis):
            if ci:
                recon = [F.add(x, F.mul(ci, y)) for x, y in zip(recon, row)]
        return c if tuple(recon) == tuple(v) else None

    def __contains__(self, v) -> bool:
        return self.coords(tuple(v)) is not None

    def contains(self, other: "Subspace") -> bool:
        return all(b in self for b in other.basis)

    def combine(self, coeffs) -> Vec:
        F = self.space.field
        out = [0] * self.space.r
        for c, row in zip(coeffs, self.basis):
            if c:
                out = [F.add(x, F.mul(c, y)) for x, y in zip(out, row)]
        return tuple(out)

    def vectors(self) -> list[Vec]:
        return [self.combine(c) for c in itertools.product(range(self.space.q), repeat=self.dim)]

    def nonzero_vectors(self) -> list[Vec]:
        return [v for v in self.vectors() if any(v)]

    def reps(self) -> list[Vec]:
        """Projective representatives of the ambient space lying in self."""
        return [v for v in self.space.reps if v in self]

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.space, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.space, [v for v in self.vectors() if v in other])


def subspaces(r: int, q: int, dim: int | None = None) -> list[Subspace]:
    """All subspaces of F_q^r (optionally of one dimension), sorted canonically."""
    space = vspace(r, q)
    found = {Subspace.span(space, [])}
    frontier = set(found)
    while frontier:
        nxt = set()
        for W in frontier:
            for v in space.reps:
                if v not in W:
                    nxt.add(W + Subspace.span(space, [v]))
        nxt -= found
        found |= nxt
        frontier = nxt
    out = sorted(found)
    if dim is not None:
        out = [W for W in out if W.dim == dim]
    return out


def gaussian_binomial(r: int, s: int, q: int) -> int:
    if s < 0 or s > r:
        return 0
    num = den = 1
    for i in range(s):
        num *= q ** (r - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


class Flag:
    """Chain 0 = V_0 < V_1 < ... < V_m = V."""

    __slots__ = ("members",)

    def __init__(self, members):
        members = tuple(sorted(members, key=lambda W: W.dim))
        if members[0].dim != 0 or members[-1].dim != members[-1].space.r:
            raise ValueError("flag must contain 0 and V")
        for a, b in zip(members, members[1:]):
            if a.dim >= b.dim or not b.contains(a):
                raise ValueError("flag members must be strictly nested")
        self.members = members

    def __eq__(self, other):
        return isinstance(other, Flag) and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return "Flag(dims=" + ",".join(str(W.dim) for W in self.members) + ")"

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    @property
    def is_complete(self) -> bool:
        return len(self.members) == self.members[-1].space.r + 1

    def is_subflag_of(self, other: "Flag") -> bool:
        return set(self.members) <= set(other.members)

    def level(self, W: Subspace) -> int:
        """The unique i with W in V_i and W not in V_{i-1}."""
        for i, Vi in enumerate(self.members):
            if Vi.contains(W):
                return i
        raise ValueError("subspace outside the ambient space")  # pragma: no cover


def flag_count(r: int, q: int) -> int:
    """Number of flags 0 < ... < V of F_q^r, by the dimension of the step below V."""
    counts = [1]
    for n in range(1, r + 1):
        counts.append(sum(gaussian_binomial(n, j, q) * counts[j] for j in range(n)))
    return counts[r]


def flags(r: int, q: int, complete_only: bool = False) -> list[Flag]:
    subs = subspaces(r, q)
    space = vspace(r, q)
    zero = Subspace.span(space, [])
    whole = subs[-1]
    out = []

    def extend(chain):
        top = chain[-1]
        if top == whole:
            out.append(Flag(chain))
            return
        for W in subs:
            if W.dim > top.dim and W.contains(top):
                if complete_only and W.dim != top.dim + 1:
                    continue
                extend(chain + [W])

    extend([zero])
    return out


def standard_flag(space: VSpace) -> Flag:
    return Flag([space.coordinate_subspace(i) for i in range(space.r + 1)])


# -- matrix groups -----------------------------------------------------------

class GroupElem:
    """Invertible r x r matrix over F_q (rows of codes)."""

    __slots__ = ("field", "rows", "_hash")

    def __init__(self, F: FieldDesc, rows):
        self.field = F
        self.rows = tuple(tuple(r) for r in rows)
        self._hash = hash(self.rows)

    @classmethod
    def identity(cls, F: FieldDesc, r: int) -> "GroupElem":
        return cls(F, [[1 if i == j else 0 for j in range(r)] for i in range(r)])

    @classmethod
    def from_columns(cls, F: FieldDesc, cols) -> "GroupElem":
        cols = list(cols)
        return cls(F, [[c[i] for c in cols] for i in range(len(cols))])

    @property
    def r(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        return isinstance(other, GroupElem) and self.rows == other.rows

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.rows < other.rows

    def __repr__(self):
        return f"GroupElem({[list(r) for r in self.rows]})"

    def __mul__(self, other: "GroupElem") -> "GroupElem":
        F = self.field
        cols = list(zip(*other.rows))
        return GroupElem(F, [[F.sum(F.mul(a, b) for a, b in zip(row, col)) for col in cols] for row in self.rows])

    def apply(self, v: Vec) -> Vec:
        F = self.field
        return tuple(F.sum(F.mul(a, b) for a, b in zip(row, v)) for row in self.rows)

    def column(self, j: int) -> Vec:
        return tuple(row[j] for row in self.rows)

    def det(self) -> int:
        F = self.field
        M = [list(r) for r in self.rows]
        n = len(M)
        det = 1
        for c in range(n):
            piv = next((i for i in range(c, n) if M[i][c]), None)
            if piv is None:
                return 0
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                det = F.neg(det)
            det = F.mul(det, M[c][c])
            s = F.inv(M[c][c])
            for i in range(c + 1, n):
                if M[i][c]:
                    f = F.neg(F.mul(M[i][c], s))
                    M[i] = [F.add(x, F.mul(f, y)) for x, y in zip(M[i], M[c])]
        return det

    def inverse(self) -> "GroupElem":
        F = self.field
        n = self.r
        aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(self.rows)]
        R, pivots = rref_rows(F, aug)
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return GroupElem(F, [row[n:] for row in R])

    def order(self) -> int:
        ident = GroupElem.identity(self.field, self.r)
        x, k = self, 1
        while x != ident:
            x = x * self
            k += 1
        return k


def gl_order(r: int, q: int) -> int:
    out = 1
    for i in range(r):
        out *= q**r - q**i
    return out


def _invertible_matrices(F: FieldDesc, r: int):
    """All invertible matrices, built row by row outside the span of earlier rows."""
    space_vectors = list(itertools.product(range(F.q), repeat=r))

    def rec(rows, span):
        if len(rows) == r:
            yield GroupElem(F, rows)
            return
        for v in space_vectors:
            if v in span:
                continue
            new_span = set(span)
            for w in span:
                for a in range(F.q):
                    new_span.add(tuple(F.add(x, F.mul(a, y)) for x, y in zip(w, v)))
            yield from rec(rows + [v], frozenset(new_span))

    yield from rec([], frozenset([tuple([0] * r)]))


def _block_elements(F: FieldDesc, r: int, s: int, upper_left_identity: bool) -> list[GroupElem]:
    upper = [GroupElem.identity(F, s)] if upper_left_identity else list(_invertible_matrices(F, s))
    lower = list(_invertible_matrices(F, r - s)) if r > s else [None]
    out = []
    for A in upper:
        for D in lower:
            for B in itertools.product(range(F.q), repeat=s * (r - s)):
                rows = []
                for i in range(s):
                    rows.append(list(A.rows[i]) + list(B[i * (r - s) : (i + 1) * (r - s)]))
                for i in range(r - s):
                    rows.append([0] * s + list(D.rows[i]))
                out.append(GroupElem(F, rows))
    return out


def group_order(kind: str, r: int, q: int, s: int | None = None) -> int:
    """Order of the named group, from closed formulas."""
    if kind == "GL":
        return gl_order(r, q)
    if kind == "SL":
        return gl_order(r, q) // (q - 1)
    if kind == "U":
        return q ** (r * (r - 1) // 2)
    if kind == "W":
        return q ** (r - 1)
    if s is None or not 1 <= s <= r:
        raise ValueError("block groups need 1 <= s <= r")
    if kind == "P":
        return gl_order(s, q) * gl_order(r - s, q) * q ** (s * (r - s))
    if kind == "L":
        return gl_order(r - s, q) * q ** (s * (r - s))
    raise ValueError(f"unknown group kind {kind!r}")


def group_elements(kind: str, r: int, q: int, s: int | None = None, cap: int = DEFAULT_GROUP_CAP) -> list[GroupElem]:
    """Enumerate GL, SL, U (upper unitriangular), W, P_s or L_s in canonical order."""
    kind = kind.upper().removesuffix("_R").removesuffix("_S")
    if group_order(kind, r, q, s) > cap:
        raise ValueError(f"group {kind} of order {group_order(kind, r, q, s)} exceeds cap {cap}")
    F = gf(q)
    if kind == "GL":
        out = list(_invertible_matrices(F, r))
    elif kind == "SL":
        out = [g for g in _invertible_matrices(F, r) if g.det() == 1]
    elif kind == "U":
        out = []
        slots = [(i, j) for i in range(r) for j in range(i + 1, r)]
        for vals in itertools.product(range(q), repeat=len(slots)):
            rows = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
            for (i, j), a in zip(slots, vals):
                rows[i][j] = a
            out.append(GroupElem(F, rows))
    elif kind == "W":
        out = []
        for u in itertools.product(range(q), repeat=r - 1):
            rows = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
            for i in range(r - 1):
                rows[i][r - 1] = u[i]
            out.append(GroupElem(F, rows))
    elif kind == "P":
        out = _block_elements(F, r, s, False)
    elif kind == "L":
        out = _block_elements(F, r, s, True)
    else:  # pragma: no cover - group_order already rejected it
        raise ValueError(kind)
    return sorted(out)


def group_generators(kind: str, r: int, q: int) -> list[GroupElem]:
    """A small generating set of GL, SL or U (elementary matrices)."""
    F = gf(q)
    kind = kind.upper().removesuffix("_R")
    basis = [F.from_coeffs([0] * k + [1]) for k in range(F.e)]
    gens = []
    for i in range(r):
        for j in range(r):
            if i == j or (kind == "U" and j < i):
                continue
            for a in basis:
                rows = [[1 if x == y else 0 for y in range(r)] for x in range(r)]
                rows[i][j] = a
                gens.append(GroupElem(F, rows))
    if kind == "GL" and q > 2:
        rows = [[1 if x == y else 0 for y in range(r)] for x in range(r)]
        rows[0][0] = F.primitive
        gens.append(GroupElem(F, rows))
    elif kind not in ("GL", "SL", "U"):
        raise ValueError(f"no generator recipe for {kind!r}")
    if r == 1 and kind != "GL":
        gens = [GroupElem.identity(F, 1)]
    return gens


def subgroup_closure(gens, cap: int = DEFAULT_GROUP_CAP) -> list[GroupElem]:
    """The subgroup generated by gens, in canonical order."""
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator to know the dimension")
    ident = GroupElem.identity(gens[0].field, gens[0].r)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise ValueError(f"subgroup exceeds cap {cap}")
        frontier = nxt
    return sorted(seen)


def generating_set(H) -> list[GroupElem]:
    """Greedy generating set of a subgroup given by its elements."""
    H = sorted(H)
    gens: list[GroupElem] = []
    closure = {GroupElem.identity(H[0].field, H[0].r)}
    for h in H:
        if h not in closure:
            gens.append(h)
            closure = set(subgroup_closure(gens))
    if not gens:
        gens = [H[0]]
    return gens


def is_subgroup(H) -> bool:
    H = set(H)
    if not H:
        return False
    return set(subgroup_closure(generating_set(H))) == H


CAYLEY_TABLE_LIMIT = 4000


class GroupTable:
    """Index arithmetic for an enumerated matrix group.

    Elements are encoded as base-q integers of their entries (first entry most
    significant), so the canonical sorted order is also the key order and
    multiplying every element by a fixed matrix is one vectorised pass.
    """

    def __init__(self, elements):
        self.elements = sorted(elements)
        first = self.elements[0]
        self.field = first.field
        self.r = first.r
        self.size = len(self.elements)
        self.mats = np.array([g.rows for g in self.elements], dtype=np.int64).reshape(self.size, self.r, self.r)
        self.keys = self._encode(self.mats)
        if np.any(np.diff(self.keys) <= 0):
            raise ValueError("elements are not distinct")
        self.identity = self.index(GroupElem.identity(self.field, self.r))
        self._table = None

    def _encode(self, mats: np.ndarray) -> np.ndarray:
        flat = mats.reshape(mats.shape[0], -1)
        keys = np.zeros(flat.shape[0], dtype=np.int64)
        for k in range(flat.shape[1]):
            keys = keys * self.field.q + flat[:, k]
        return keys

    def _lookup(self, keys: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, self.size - 1)
        if np.any(self.keys[pos] != keys):
            raise ValueError("product left the enumerated set; it is not a group")
        return pos

    def index(self, g: "GroupElem") -> int:
        return int(self._lookup(self._encode(np.array([g.rows], dtype=np.int64)))[0])

    def _matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        add, mul, _, _ = self.field.dense_tables()
        out = np.zeros(np.broadcast_shapes(A.shape, B.shape), dtype=np.int64)
        for k in range(self.r):
            out = add[out, mul[A[..., :, k][..., :, None], B[..., k, :][..., None, :]]]
        return out

    def right_perm(self, g: "GroupElem") -> np.ndarray:
        """i -> index of elements[i] * g."""
        return self._lookup(self._encode(self._matmul(self.mats, np.array(g.rows, dtype=np.int64)[None])))

    def left_perm(self, g: "GroupElem") -> np.ndarray:
        """i -> index of g * elements[i]."""
        return self._lookup(self._encode(self._matmul(np.array(g.rows, dtype=np.int64)[None], self.mats)))

    @property
    def table(self) -> np.ndarray:
        """Full Cayley table, table[i, j] = index of elements[i] * elements[j]."""
        if self._table is None:
            if self.size > CAYLEY_TABLE_LIMIT:
                raise ValueError("group too large for a full multiplication table")
            self._table = np.stack([self.right_perm(g) for g in self.elements], axis=1)
        return self._table

    def closure(self, gens) -> frozenset[int]:
        """Indices of the subgroup generated by the given element indices."""
        T = self.table
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(T[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def order(self, i: int) -> int:
        T = self.table
        x, k = i, 1
        while x != self.identity:
            x = int(T[x, i])
            k += 1
        return k


def _orbit_count(size: int, perms) -> int:
    seen = np.zeros(size, dtype=bool)
    orbits = 0
    for start in range(size):
        if seen[start]:
            continue
        orbits += 1
        seen[start] = True
        stack = [start]
        while stack:
            x = stack.pop()
            for p in perms:
                y = p[x]
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
    return orbits


def double_cosets(H, G, K, check: bool = True) -> int:
    """Number of orbits of H x K on G under (h, k) g = h g k^-1."""
    if check:
        for name, S in (("H", H), ("K", K)):
            if not is_subgroup(S):
                raise ValueError(f"{name} is not closed under multiplication")
    table = G if isinstance(G, GroupTable) else GroupTable(G)
    perms = [table.left_perm(h).tolist() for h in generating_set(H)]
    perms += [table.right_perm(k).tolist() for k in generating_set(K)]
    return _orbit_count(table.size, perms)


def p_subgroups(G, p: int) -> list[list[GroupElem]]:
    """All subgroups of p-power order of an enumerated group."""
    def is_p_power(n):
        while n % p == 0:
            n //= p
        return n == 1

    T = G if isinstance(G, GroupTable) else GroupTable(G)
    p_elems = [i for i in range(T.size) if is_p_power(T.order(i))]
    trivial = frozenset([T.identity])
    found = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for H in frontier:
            gens = sorted(H)
            for g in p_elems:
                if g in H:
                    continue
                K = T.closure(gens + [g])
                if K not in found and is_p_power(len(K)):
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    groups = [sorted(T.elements[i] for i in H) for H in found]
    return sorted(groups, key=lambda H: (len(H), H))
