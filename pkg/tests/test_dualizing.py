import itertools
import random

import numpy as np
import pytest

from qvcompact.dualizing import (
    hat_delta_set,
    hat_products,
    in_general_position,
    iv_count,
    iv_dimension,
    iv_generators,
    iv_membership,
    mr_orthogonality,
    mr_table,
    pairing_is_identity,
    pairing_table,
)
from qvcompact.invariants import reynolds_sum
from qvcompact.linalg import group_elements, vspace
from qvcompact.ratfun import LinFrac
from qvcompact.rvring import delta_products, delta_set, f_elem, gen_recip


def product(space, factors):
    out = LinFrac.const(space)
    for f in factors:
        out = out * f
    return out


def test_iv_generators_examples():
    space = vspace(1, 3)
    gens = iv_generators(space)
    assert len(gens) == 1 and gens[0].vectors == ((1,), (1,))
    assert all(len(g.vectors) == 2 for g in iv_generators(space, dedupe=False))

    space = vspace(2, 2)
    gens = iv_generators(space)
    assert [sorted(g.vectors) for g in gens] == [[(0, 1), (1, 0), (1, 1)]]
    for r, q in [(2, 3), (3, 2)]:
        sp = vspace(r, q)
        for g in iv_generators(sp):
            assert g.frac(sp).degree() == -(r + 1)
            assert in_general_position(sp, g.vectors)


def test_general_position_rejects_dependent_tuples():
    space = vspace(2, 3)
    assert not in_general_position(space, [(1, 0), (2, 0), (0, 1)])


def test_hat_delta_examples():
    space = vspace(1, 2)
    x1 = gen_recip(space, (1,))
    assert hat_delta_set(space, 1) == (x1 * x1,)
    space = vspace(3, 3)
    assert len(hat_delta_set(space, 3)) == 9
    for i in (1, 2, 3):
        degrees = [x.degree() for x in hat_delta_set(space, i)]
        assert degrees[0] == -2 and all(d == -1 for d in degrees[1:])
        assert len(hat_delta_set(space, i)) == len(delta_set(space, i))


def test_iv_membership_examples():
    space = vspace(1, 2)
    x1 = gen_recip(space, (1,))
    c = iv_membership(x1 * x1, 2)
    assert c is not None and sum(1 for a in c if a) == 1
    assert iv_membership(x1, 1) is None
    space = vspace(2, 2)
    for g in iv_generators(space, dedupe=False):
        assert iv_membership(g.frac(space), 3) is not None
    with pytest.raises(ValueError):
        iv_membership(x1 + x1 * x1, 2, space=vspace(1, 2))


def test_iv_is_an_ideal():
    rnd = random.Random(11)
    for r, q in [(2, 2), (2, 3), (3, 2)]:
        space = vspace(r, q)
        gens = iv_generators(space)
        for _ in range(8):
            x = rnd.choice(gens).frac(space)
            k = rnd.randrange(1, 3)
            for _ in range(k):
                x = x * gen_recip(space, rnd.choice(space.nonzero))
            assert iv_membership(x, r + 1 + k) is not None


def test_f_times_reciprocal_not_in_ideal():
    space = vspace(2, 3)
    x = f_elem(space, 1) * gen_recip(space, (1, 1))
    assert iv_membership(x, 2) is None


@pytest.mark.parametrize("r,q,n_max", [(1, 2, 5), (1, 3, 5), (2, 2, 6), (2, 3, 5), (3, 2, 5)])
def test_iv_dimension_two_ways(r, q, n_max):
    space = vspace(r, q)
    for n in range(n_max + 1):
        row = iv_dimension(space, n)
        assert row.ok, row
    assert iv_count(space, r) == 0


def test_iv_count_generating_function():
    # r=2, q=2: the hatted products have degrees 3 and 4, each free over F_q[f_1, f_2]
    space = vspace(2, 2)
    assert sorted(d for _, d in hat_products(space)) == [3, 4]
    assert [iv_count(space, n) for n in range(6)] == [0, 0, 0, 1, 3, 5]


def symbolic_pairing(space):
    """Oracle: apply N_r to fractions directly and divide by f_1^2 ... f_r^2."""
    U = group_elements("U", space.r, space.q)
    target = product(space, [f_elem(space, i) for i in range(1, space.r + 1)] * 2)
    deltas = delta_products(space)
    hats = hat_products(space)
    table = np.zeros((len(deltas), len(hats)), dtype=np.int64)
    F = space.field
    for a, (dfac, _) in enumerate(deltas):
        for b, (hfac, _) in enumerate(hats):
            val = reynolds_sum(U, product(space, dfac + hfac))
            if val.is_zero():
                continue
            for c in range(1, F.q):
                if val == target.scale(c):
                    table[a, b] = c
                    break
            else:
                raise AssertionError("entry is not a multiple of the target")
    return table


@pytest.mark.parametrize("r,q", [(1, 2), (1, 3), (2, 2), (2, 3)])
def test_pairing_against_symbolic_oracle(r, q):
    space = vspace(r, q)
    table = pairing_table(space)
    assert np.array_equal(table, symbolic_pairing(space))
    assert np.array_equal(table, np.eye(len(table), dtype=np.int64))


def test_pairing_r3_q2():
    space = vspace(3, 2)
    assert pairing_table(space).shape == (8, 8)
    assert pairing_is_identity(space)


@pytest.mark.parametrize("r,q", [(1, 3), (2, 2), (2, 3), (3, 2), (2, 4)])
def test_mr_orthogonality(r, q):
    space = vspace(r, q)
    assert mr_orthogonality(space)
    assert mr_table(space).shape == (q ** (r - 1),) * 2


def test_mr_examples_directly():
    space = vspace(2, 3)
    W = group_elements("W", 2, 3)
    f2 = f_elem(space, 2)
    hats = hat_delta_set(space, 2)
    assert reynolds_sum(W, hats[0]) == f2 * f2
    for h in hats[1:]:
        assert reynolds_sum(W, h).is_zero()
    deltas = delta_set(space, 2)
    for (i, d), (j, h) in itertools.product(enumerate(deltas), enumerate(hats)):
        if i != j:
            assert reynolds_sum(W, d * h).is_zero()
