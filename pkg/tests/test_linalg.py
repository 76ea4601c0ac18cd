import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qvcompact.gfq import gf
from qvcompact.invariants import bruhat_count, index_identity
from qvcompact.linalg import (
    Flag,
    GroupElem,
    GroupTable,
    RowSpace,
    Subspace,
    double_cosets,
    flag_count,
    flags,
    gaussian_binomial,
    group_elements,
    group_generators,
    group_order,
    nullspace,
    p_subgroups,
    projective_reps,
    rank,
    rank_array,
    standard_flag,
    subgroup_closure,
    subspaces,
    vspace,
)


def test_projective_reps_small_cases():
    assert projective_reps(1, 2) == [(1,)]
    assert sorted(projective_reps(2, 2)) == [(0, 1), (1, 0), (1, 1)]
    assert len(projective_reps(3, 2)) == 7
    for r, q in [(2, 3), (3, 3), (2, 4), (2, 5)]:
        assert len(projective_reps(r, q)) == (q**r - 1) // (q - 1)


@pytest.mark.parametrize("r,q", [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3), (2, 4), (4, 2)])
def test_subspace_counts_match_gaussian_binomials(r, q):
    subs = subspaces(r, q)
    for s in range(r + 1):
        assert sum(1 for W in subs if W.dim == s) == gaussian_binomial(r, s, q)
    assert len(subspaces(r, q, 0)) == 1


def test_named_subspace_counts():
    assert len(subspaces(3, 2, 1)) == 7
    assert len(subspaces(2, 3, 1)) == 4


def test_flag_counts():
    assert len(flags(1, 2)) == 1
    assert len(flags(2, 2, complete_only=True)) == 3
    assert len(flags(3, 2, complete_only=True)) == 21
    # all flags of F_2^3: trivial + 7 lines + 7 planes + 21 complete
    assert len(flags(3, 2)) == 36


@pytest.mark.parametrize("r,q", [(1, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_flag_count_matches_enumeration(r, q):
    assert flag_count(r, q) == len(flags(r, q))


def test_flag_validation_and_levels():
    sp = vspace(3, 2)
    F = standard_flag(sp)
    assert F.is_complete and len(F) == 4
    line = Subspace.span(sp, [(1, 1, 0)])
    assert F.level(line) == 2
    with pytest.raises(ValueError):
        Flag([sp.coordinate_subspace(1), sp.coordinate_subspace(3)])


@given(st.sampled_from([(2, 2), (3, 2), (2, 3), (3, 3), (2, 4)]), st.randoms(use_true_random=False))
def test_subspace_operations(rq, rnd):
    r, q = rq
    subs = subspaces(r, q)
    A, B = rnd.choice(subs), rnd.choice(subs)
    S, I = A + B, A.intersect(B)
    assert S.dim + I.dim == A.dim + B.dim
    assert S.contains(A) and S.contains(B) and A.contains(I) and B.contains(I)
    for v in A.vectors():
        c = A.coords(v)
        assert A.combine(c) == v
    assert len(A.vectors()) == q**A.dim


@pytest.mark.parametrize("kind,r,q,s", [
    ("GL", 2, 2, None), ("GL", 2, 3, None), ("GL", 3, 2, None), ("SL", 2, 3, None),
    ("U", 3, 2, None), ("U", 3, 3, None), ("W", 3, 3, None), ("P", 3, 2, 1), ("L", 3, 2, 2), ("L", 3, 2, 3),
])
def test_group_orders_match_enumeration(kind, r, q, s):
    G = group_elements(kind, r, q, s)
    assert len(G) == group_order(kind, r, q, s) == len(set(G))


def test_named_group_orders():
    assert len(group_elements("GL", 2, 2)) == 6
    assert len(group_elements("U", 3, 2)) == 8
    assert group_elements("L", 3, 2, 3) == [GroupElem.identity(gf(2), 3)]


def test_group_cap_enforced():
    with pytest.raises(ValueError):
        group_elements("GL", 4, 3)


@pytest.mark.parametrize("kind,r,q", [("U", 3, 2), ("U", 2, 3), ("GL", 2, 3), ("SL", 2, 3), ("GL", 3, 2), ("U", 2, 4)])
def test_generators_generate(kind, r, q):
    assert subgroup_closure(group_generators(kind, r, q)) == group_elements(kind, r, q)


def test_closure_examples():
    F = gf(2)
    ident = GroupElem.identity(F, 2)
    assert subgroup_closure([ident]) == [ident]
    t = GroupElem(F, [[1, 1], [0, 1]])
    assert len(subgroup_closure([t])) == 2


def _double_coset_oracle(H, G, K):
    left = set()
    count = 0
    for g in G:
        if g in left:
            continue
        count += 1
        left |= {h * g * k for h in H for k in K}
    return count


@pytest.mark.parametrize("r,q,s", [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 2, 2)])
def test_double_cosets_against_set_oracle(r, q, s):
    G = group_elements("GL", r, q)
    U = group_elements("U", r, q)
    L = group_elements("L", r, q, s)
    assert double_cosets(U, G, L) == _double_coset_oracle(U, G, L)
    ident = [GroupElem.identity(gf(q), r)]
    assert double_cosets(ident, G, ident) == len(G)
    assert double_cosets(G, G, ident) == 1


def test_double_cosets_rejects_non_subgroups():
    G = group_elements("GL", 2, 2)
    with pytest.raises(ValueError):
        double_cosets(G[:2] + G[3:4], G, G[:1])


def test_group_table_matches_matrix_products():
    G = group_elements("GL", 2, 3)
    T = GroupTable(G)
    rnd = random.Random(1)
    for _ in range(50):
        a, b = rnd.choice(G), rnd.choice(G)
        assert T.elements[T.right_perm(b)[T.index(a)]] == a * b
        assert T.elements[T.left_perm(a)[T.index(b)]] == a * b


def test_p_subgroups_of_small_groups():
    # Sylow 2-subgroups of GL_2(F_2) = S_3 have order 2, there are 3 of them
    subs = p_subgroups(group_elements("GL", 2, 2), 2)
    assert sorted(len(H) for H in subs) == [1, 2, 2, 2]
    subs = p_subgroups(group_elements("GL", 2, 3), 3)
    assert sorted(len(H) for H in subs) == [1, 3, 3, 3, 3]


@pytest.mark.parametrize("r,q,s", [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 2, 2), (2, 2, 2), (3, 3, 1)])
def test_index_identity_and_bruhat(r, q, s):
    lhs, rhs = index_identity(r, q, s)
    assert lhs == rhs
    lhs, rhs = bruhat_count(r, q, s)
    assert lhs == rhs


@given(st.sampled_from([2, 3, 4, 5, 9]), st.integers(1, 6), st.integers(1, 7), st.randoms(use_true_random=False))
def test_rank_nullity(q, n, m, rnd):
    F = gf(q)
    rows = [[rnd.randrange(q) for _ in range(m)] for _ in range(n)]
    k = rank(F, rows)
    assert k <= min(n, m)
    null = nullspace(F, rows, m)
    assert len(null) == m - k
    for v in null:
        for row in rows:
            assert F.sum(F.mul(a, b) for a, b in zip(row, v)) == 0
    assert rank_array(F, np.array(rows, dtype=np.uint8).reshape(n, m)) == k


@given(st.sampled_from([2, 3, 4, 7]), st.integers(1, 8), st.integers(1, 8), st.randoms(use_true_random=False))
def test_rowspace_solve_roundtrip(q, n, m, rnd):
    F = gf(q)
    add, mul, _, _ = F.dense_tables()
    rows = np.array([[rnd.randrange(q) for _ in range(m)] for _ in range(n)], dtype=np.uint8)
    rs = RowSpace(F, rows)
    c = [rnd.randrange(q) for _ in range(n)]
    target = np.zeros(m, dtype=np.uint8)
    for ci, row in zip(c, rows):
        target = add[target, mul[ci, row]]
    sol = rs.solve(target[None, :])[0]
    assert sol is not None
    back = np.zeros(m, dtype=np.uint8)
    for ci, row in zip(sol, rows):
        back = add[back, mul[ci, row]]
    assert np.array_equal(back, target)


def test_rowspace_detects_non_members():
    F = gf(3)
    rs = RowSpace(F, np.array([[1, 0, 0], [0, 1, 0]], dtype=np.uint8))
    assert rs.solve(np.array([[0, 0, 1]], dtype=np.uint8)) == [None]
    assert rs.independent


def test_group_elem_laws():
    G = group_elements("GL", 2, 3)
    rnd = random.Random(0)
    for _ in range(30):
        a, b = rnd.choice(G), rnd.choice(G)
        assert (a * b).det() == gf(3).mul(a.det(), b.det())
        assert a * a.inverse() == GroupElem.identity(gf(3), 2)
        v = (rnd.randrange(3), rnd.randrange(3))
        assert (a * b).apply(v) == a.apply(b.apply(v))


def test_gaussian_binomial_values():
    assert [gaussian_binomial(3, s, 2) for s in range(4)] == [1, 7, 7, 1]
    assert gaussian_binomial(4, 2, 2) == 35
    assert all(gaussian_binomial(r, s, q) == gaussian_binomial(r, r - s, q)
               for r, s, q in itertools.product(range(1, 5), range(5), (2, 3)) if s <= r)
