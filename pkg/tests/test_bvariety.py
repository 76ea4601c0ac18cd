import itertools

import pytest

from qvcompact.bvariety import (
    BPoint,
    NotInChart,
    adapted_basis,
    blowup_count,
    boundary_order,
    bv_count_strata,
    bv_points,
    bv_points_bruteforce,
    chart_from_point,
    chart_roundtrip,
    chart_to_point,
    covering_flags,
    generator_orders,
    in_BF,
    in_stratum,
    in_UF,
    is_bpoint,
    mu_decompose,
    nonzero_subspaces,
    nu_compose,
    omega_point,
    pi_P,
    pi_Q,
    pi_Q_via,
    stratum_flag,
    stratum_points,
)
from qvcompact.linalg import Flag, flags, standard_flag, vspace
from qvcompact.modular import (
    Ambient,
    extend_by_zero,
    full_space,
    injective_maps,
    qv_points,
    stratum_of,
)

CASES = [(1, 2, 1), (2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, 2)]


@pytest.fixture(scope="module")
def points():
    cache = {}

    def get(r, q, m):
        if (r, q, m) not in cache:
            cache[r, q, m] = bv_points(Ambient.make(r, q, m))
        return cache[r, q, m]

    return get


@pytest.mark.parametrize("r,q,m", CASES)
def test_enumeration_matches_brute_force(r, q, m, points):
    amb = Ambient.make(r, q, m)
    pts = points(r, q, m)
    assert len(pts) == len(set(pts)) == bv_count_strata(q, r, m)
    assert set(pts) == set(bv_points_bruteforce(amb))
    assert all(is_bpoint(p)[0] for p in pts)


def test_named_counts():
    assert bv_count_strata(2, 1, 3) == 1
    assert bv_count_strata(2, 2, 1) == 3
    assert bv_count_strata(2, 3, 1) == 21 == (4 + 2 + 1) * 3
    for q in (2, 3, 4):
        for m in (1, 2, 3):
            assert bv_count_strata(q, 3, m) == blowup_count(q, m)


def test_r2_any_top_hyperplane_is_valid():
    amb = Ambient.make(2, 2, 2)
    sp = amb.space
    lines = [W for W in nonzero_subspaces(2, 2) if W.dim == 1]
    V = full_space(sp)
    for vals in itertools.product(range(amb.K.q), repeat=2):
        if any(vals):
            pt = BPoint(amb, {V: vals, **{L: (1,) for L in lines}})
            assert is_bpoint(pt) == (True, None)


def test_nesting_violation_is_reported(points):
    amb = Ambient.make(3, 2, 2)
    pt = points(3, 2, 2)[0]
    V = full_space(amb.space)
    found = False
    for vals in itertools.product(range(amb.K.q), repeat=3):
        if not any(vals):
            continue
        cand = BPoint(amb, {**pt.phis, V: vals})
        ok, witness = is_bpoint(cand)
        if not ok:
            small, big = witness
            assert big.contains(small) and small != big
            found = True
            break
    assert found


def test_missing_subspace_is_invalid(points):
    pt = points(2, 2, 1)[0]
    phis = dict(pt.phis)
    phis.pop(next(iter(phis)))
    assert not is_bpoint(BPoint(pt.amb, phis))[0]


@pytest.mark.parametrize("r,q,m", CASES)
def test_stratum_predicates(r, q, m, points):
    all_flags = flags(r, q)
    trivial = next(F for F in all_flags if len(F) == 2)
    for pt in points(r, q, m):
        F0 = stratum_flag(pt)
        assert in_BF(pt, trivial)
        for F in all_flags:
            assert in_stratum(pt, F) == (F == F0)


@pytest.mark.parametrize("r,q,m", [(3, 2, 1), (2, 3, 2), (3, 2, 2)])
def test_flag_compatibility(r, q, m, points):
    pts = points(r, q, m)
    all_flags = flags(r, q)
    for pt in pts[:: max(1, len(pts) // 12)]:
        for F, G in itertools.product(all_flags, repeat=2):
            if not F.is_subflag_of(G) and in_BF(pt, F):
                assert not in_UF(pt, G)


def test_generic_point_has_trivial_flag():
    amb = Ambient.make(3, 2, 3)
    lam = next(injective_maps(amb, full_space(amb.space)))
    assert len(stratum_flag(omega_point(amb, lam))) == 2


def test_rational_points_have_complete_flags(points):
    for pt in points(2, 2, 1):
        assert stratum_flag(pt).is_complete


@pytest.mark.parametrize("r,q,m", CASES)
def test_closure_and_cover(r, q, m, points):
    all_flags = flags(r, q)
    for pt in points(r, q, m):
        F0 = stratum_flag(pt)
        for F in all_flags:
            if F.is_subflag_of(F0):
                assert in_BF(pt, F)
        if r > 1:
            assert covering_flags(pt)


@pytest.mark.parametrize("r,q,m", [(2, 2, 2), (2, 3, 2), (3, 2, 2), (3, 2, 3), (2, 4, 1)])
def test_charts_roundtrip(r, q, m):
    amb = Ambient.make(r, q, m)
    for F in flags(r, q, complete_only=True):
        rep = chart_roundtrip(amb, F)
        assert rep.ok, rep.failures[:3]
        assert rep.tuples == amb.K.q ** (r - 1)


def test_chart_f4_r3_counts():
    amb = Ambient.make(3, 2, 2)
    rep = chart_roundtrip(amb, standard_flag(amb.space))
    assert (rep.tuples, rep.in_chart, rep.roundtrips) == (16, 5, 5)


def test_chart_origin_is_deepest_stratum():
    for r, q, m in [(2, 2, 2), (3, 2, 2), (3, 3, 1)]:
        amb = Ambient.make(r, q, m)
        F = standard_flag(amb.space)
        assert stratum_flag(chart_to_point(amb, F, (0,) * (r - 1))) == F


@pytest.mark.parametrize("r,q,m", [(2, 2, 2), (2, 3, 2), (3, 2, 3)])
def test_nonzero_coordinates_give_open_stratum(r, q, m):
    amb = Ambient.make(r, q, m)
    F = standard_flag(amb.space)
    seen = 0
    for a in itertools.product(range(1, amb.K.q), repeat=r - 1):
        try:
            pt = chart_to_point(amb, F, a)
        except NotInChart:
            continue
        seen += 1
        assert len(stratum_flag(pt)) == 2
    assert seen


def test_chart_rejections():
    amb = Ambient.make(3, 2, 1)
    F = standard_flag(amb.space)
    with pytest.raises(ValueError):
        chart_to_point(amb, F, (0,))
    with pytest.raises(ValueError):
        adapted_basis(Flag([F.members[0], F.members[-1]]))
    pt = chart_to_point(amb, F, (0, 0))
    other = next(G for G in flags(3, 2, complete_only=True) if not in_UF(pt, G))
    with pytest.raises(NotInChart):
        chart_from_point(pt, other)


@pytest.mark.parametrize("r,q,m", [(2, 2, 2), (3, 2, 1), (3, 2, 2), (2, 3, 2)])
def test_mu_nu_roundtrip(r, q, m, points):
    amb = Ambient.make(r, q, m)
    for F in flags(r, q):
        for pt in points(r, q, m):
            if not in_BF(pt, F):
                with pytest.raises(ValueError):
                    mu_decompose(pt, F)
                continue
            parts = mu_decompose(pt, F)
            assert nu_compose(amb, parts, F) == pt
            if len(F) == 2:
                assert parts == [pt]
        for pt in stratum_points(amb, F):
            parts = mu_decompose(pt, F)
            assert all(len(stratum_flag(p)) == 2 for p in parts)
            assert mu_decompose(nu_compose(amb, parts, F), F) == parts


@pytest.mark.parametrize("r,q,m", CASES)
def test_pi_q_stratum_compatibility(r, q, m, points):
    amb = Ambient.make(r, q, m)
    qpts = set(qv_points(amb))
    for pt in points(r, q, m):
        rho = pi_Q(pt)
        assert rho in qpts
        assert stratum_of(rho) == stratum_flag(pt).members[1]
        if r > 1:
            images = {pi_Q_via(pt, F) for F in covering_flags(pt)}
            assert images == {rho}


@pytest.mark.parametrize("r,q,m", [(2, 2, 2), (3, 2, 3), (2, 3, 2)])
def test_maps_on_open_stratum(r, q, m):
    amb = Ambient.make(r, q, m)
    V = full_space(amb.space)
    for lam in injective_maps(amb, V):
        pt = omega_point(amb, lam)
        assert pi_Q(pt) == extend_by_zero(amb, lam).canonical()
        assert pi_P(pt) == lam


def test_pi_q_on_boundary_r2():
    amb = Ambient.make(2, 2, 2)
    F = standard_flag(amb.space)
    pt = chart_to_point(amb, F, (0,))
    assert stratum_of(pi_Q(pt)) == F.members[1]


@pytest.mark.parametrize("r,q", [(2, 2), (3, 2), (3, 3), (4, 2)])
def test_boundary_orders(r, q):
    sp = vspace(r, q)
    for j in range(1, r):
        Vj = sp.coordinate_subspace(j)
        ref = sp.unit(0)
        for v in sp.nonzero:
            assert boundary_order(v, ref, j, r, q) == (0 if v in Vj else 1)
    with pytest.raises(ValueError):
        boundary_order(sp.unit(0), sp.unit(r - 1), 1, r, q)


def test_generator_orders_minimum():
    sp = vspace(3, 2)
    assert min(generator_orders(sp, 2)) == 2
    assert min(generator_orders(vspace(3, 3), 2)) == 2
    assert min(generator_orders(vspace(2, 2), 1)) == 2
