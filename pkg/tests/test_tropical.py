from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from bnchains import (
    AmbiguousSpecialPointError,
    BNParams,
    ChainGeometry,
    Interior,
    Node,
    RankDeficiencyError,
    Tableau,
    TropicalDivisor,
    check_genericity,
    divisor_from_tableau,
    effective_vanishing_from_tableau,
    enumerate_tableaux,
    is_equivalent_to_effective,
    loop_class,
    loop_reduce,
    point_on_loop,
    rank_at_least,
    reduce_to_q0,
    solve_special_point,
    tropical_rank,
    tropical_vanishing_table,
)

from worked_example import (
    PARAMS_662,
    TROP_CASES_662,
    TROP_EPSILON_662,
    TROP_TABLE_662,
    tableau_662,
)


def circle(l=13, m=1):
    return ChainGeometry(((F(l), F(m)),))


@pytest.fixture
def geom662():
    return ChainGeometry(tuple((F(10 + k), F(1)) for k in range(6)))


def test_geometry_validation():
    with pytest.raises(ValueError):
        ChainGeometry(((F(0), F(1)),))
    with pytest.raises(ValueError):
        ChainGeometry(())
    geom = circle()
    assert geom.g == 1 and geom.circumference(1) == 14


def test_point_canonicalization():
    geom = circle()
    assert point_on_loop(geom, 1, F(0)) == Node(0)
    assert point_on_loop(geom, 1, F(13)) == Node(1)
    assert point_on_loop(geom, 1, F(14)) == Node(0)
    assert point_on_loop(geom, 1, F(17)) == Interior(1, F(3))
    # -1 mod 14 = 13, which is the node position
    assert point_on_loop(geom, 1, F(-1)) == Node(1)
    assert point_on_loop(geom, 1, F(-5, 2)) == Interior(1, F(23, 2))


def test_divisor_normalization():
    d = TropicalDivisor(((Node(0), 1), (Node(0), 2), (Interior(1, F(3)), 1)))
    assert d.degree == 4
    assert d.multiplicity(Node(0)) == 3
    zero = TropicalDivisor(((Node(0), 1), (Node(0), -1)))
    assert zero.points == () and zero.degree == 0
    total = d - d
    assert total.points == ()


def test_genericity_examples():
    g6 = ChainGeometry(tuple([(F(13), F(1))] * 6))
    assert check_genericity(g6).generic
    bad = ChainGeometry(tuple([(F(13), F(1))] * 5 + [(F(1), F(3))]))
    report = check_genericity(bad)
    assert not report.generic and report.failing_loops == (6,)
    assert check_genericity(ChainGeometry(((F(1), F(1)),))).generic  # g=1 vacuous


def test_loop_class_examples():
    geom = circle()
    assert loop_class(geom, 1, [(F(0), 2), (F(11), 1)]) == 11
    assert loop_class(geom, 1, []) == 0
    assert loop_class(geom, 1, [(F(13), 3)]) == 11


def test_loop_reduce_examples():
    geom = circle()
    assert loop_reduce(geom, 1, [(F(0), 2)]) == (2, None)
    moved, leftover = loop_reduce(geom, 1, [(F(13), 3)])
    assert moved == 2 and leftover == Interior(1, F(11))
    assert loop_reduce(geom, 1, [(F(13), 1), (F(1), 1)]) == (2, None)


def test_reduce_examples():
    geom = circle()
    red = reduce_to_q0(geom, TropicalDivisor(((Node(0), 3),)))
    assert red.u == 3 and red.epsilon == (0,)
    p = Interior(1, F(5))
    red = reduce_to_q0(geom, TropicalDivisor(((p, 1),)))
    assert red.u == 0 and red.epsilon == (1,) and red.x == (p,)


def test_reduce_worked_example(geom662):
    divisor = divisor_from_tableau(tableau_662(), geom662)
    red = reduce_to_q0(geom662, divisor)
    assert red.u == 2
    assert red.epsilon == TROP_EPSILON_662


def test_effectivity_examples():
    geom = circle()
    assert is_equivalent_to_effective(geom, TropicalDivisor(((Node(1), 2),)))
    d = TropicalDivisor(((Interior(1, F(5)), 1), (Node(0), -1)))
    assert not is_equivalent_to_effective(geom, d)
    d = TropicalDivisor(((Node(1), 1), (Node(0), -1)))
    assert not is_equivalent_to_effective(geom, d)
    # degree-0 trivial class is effective (the zero divisor)
    d = TropicalDivisor(((Interior(1, F(13) + F(1)), 0),))
    assert is_equivalent_to_effective(geom, d)


def test_solve_special_point():
    g6 = ChainGeometry(tuple([(F(13), F(1))] * 6))
    x = solve_special_point(g6, 1, 2)
    assert x == Interior(1, F(11))
    assert solve_special_point(circle(1, 1), 1, 0) == Node(1)
    assert solve_special_point(circle(), 1, 0) == Node(1)
    with pytest.raises(ValueError):
        solve_special_point(g6, 1, -1)


def test_vanishing_table_worked_example(geom662):
    divisor = divisor_from_tableau(tableau_662(), geom662)
    table = tropical_vanishing_table(geom662, divisor, 2)
    assert tuple(row.orders for row in table.u) == TROP_TABLE_662
    assert table.case_tags == TROP_CASES_662
    assert table.epsilon == TROP_EPSILON_662


def test_vanishing_table_trivial_cases():
    geom = circle()
    table = tropical_vanishing_table(geom, TropicalDivisor(((Node(0), 2),)), 0)
    assert table.u[0].orders == (2,)
    assert table.case_tags == ("a",)  # no leftover, bottom order positive
    table = tropical_vanishing_table(geom, TropicalDivisor(((Node(0), 0),)), 0)
    assert table.case_tags == ("b",)


def test_vanishing_table_case_c():
    # leftover special at t0 = 1 with adjacent collision u_1 + 1 = u_0
    geom = circle()
    x = solve_special_point(geom, 1, 1)  # 1*Q_0 + x = 2*Q_1
    divisor = TropicalDivisor(((Node(0), 2), (x, 1)))
    table = tropical_vanishing_table(geom, divisor, 2)
    assert table.case_tags == ("c",)
    assert table.u[1].orders == (2, 1, 0)


def test_vanishing_table_case_e():
    geom = circle()
    divisor = TropicalDivisor(((Node(0), 2), (Interior(1, F(5)), 1)))
    table = tropical_vanishing_table(geom, divisor, 2)
    assert table.case_tags == ("e",)
    assert table.u[1].orders == (2, 1, 0)


def test_vanishing_table_case_d_at_node():
    # two interior special steps open a gap above the bottom order, after
    # which a leftover at the node Q_3 is 2-special and the 0 climbs to 1
    geom = ChainGeometry(tuple([(F(13), F(1))] * 3))
    x1 = solve_special_point(geom, 1, 2)
    x2 = solve_special_point(geom, 2, 1)
    divisor = TropicalDivisor(((Node(0), 2), (x1, 1), (x2, 1), (Node(3), 1)))
    table = tropical_vanishing_table(geom, divisor, 2)
    assert table.case_tags == ("d", "d", "d")
    assert [row.orders for row in table.u] == [
        (2, 1, 0),
        (3, 1, 0),
        (3, 2, 0),
        (3, 2, 1),
    ]
    assert table.x[2] == Node(3)


def test_vanishing_table_case_c_at_node():
    # a node leftover whose climb collides with the next order up
    geom = circle()
    divisor = TropicalDivisor(((Node(0), 2), (Node(1), 1)))
    table = tropical_vanishing_table(geom, divisor, 2)
    assert table.case_tags == ("c",)
    assert table.u[1].orders == (2, 1, 0)


def test_vanishing_table_rank_deficiency():
    geom = circle()
    with pytest.raises(RankDeficiencyError):
        tropical_vanishing_table(geom, TropicalDivisor(((Node(0), 1),)), 2)


def test_ambiguous_special_point():
    # non-generic loop (l/m = 1/2): 3*l = c, so orders 0 and 3 collide
    geom = ChainGeometry(((F(1), F(2)),))
    x = point_on_loop(geom, 1, F(2))  # = (0+1)*l ... and (3+1)*l = 4 mod 3 = 1? no
    # coordinates: (u+1)*l mod 3 for u = 0..: 1, 2, 0, 1, 2, ...
    divisor = TropicalDivisor(((Node(0), 4), (Interior(1, F(2)), 1)))
    # u(0) = (4,3,2,1,0) for r = 4: (u_t+1)*l mod 3 = (5,4,3,2,1) mod 3 = (2,1,0,2,1)
    with pytest.raises(AmbiguousSpecialPointError):
        tropical_vanishing_table(geom, divisor, 4)


def test_divisor_from_tableau_worked_example(geom662):
    divisor = divisor_from_tableau(tableau_662(), geom662)
    assert divisor.degree == 6
    assert divisor.multiplicity(Node(0)) == 2
    # loop 1: u = 2, coord = 3*10 mod 11 = 8
    assert divisor.multiplicity(Interior(1, F(8))) == 1
    assert divisor.multiplicity(Interior(2, F(10))) == 1
    assert divisor.multiplicity(Interior(3, F(9))) == 1
    assert divisor.multiplicity(Interior(5, F(13))) == 1


def test_divisor_from_tableau_all_in_last_column():
    p = BNParams(2, 0, 0)  # kbar = 2, single column = last column
    t = Tableau(p, ((1,), (2,)))
    geom = ChainGeometry(((F(5), F(2)), (F(7), F(3))))
    divisor = divisor_from_tableau(t, geom)
    assert divisor.points == ()  # r = 0 and every index in the last column


def test_divisor_from_tableau_mixed_rule():
    # placed first-column indices give special points, last-column indices
    # contribute nothing, the free index gets a sampled generic point
    p = BNParams(5, 4, 1)
    t = Tableau(p, ((1, 2), (3, 4)))
    assert t.free_indices == (5,)
    geom = ChainGeometry(tuple([(F(9), F(1))] * 5))
    divisor = divisor_from_tableau(t, geom)
    assert divisor.degree == 4
    assert divisor.multiplicity(Node(0)) == 1
    assert divisor.multiplicity(solve_special_point(geom, 1, 1)) == 1
    assert divisor.multiplicity(solve_special_point(geom, 3, 1)) == 1
    sampled = [
        pt for pt, _ in divisor.points if isinstance(pt, Interior) and pt.loop == 5
    ]
    assert len(sampled) == 1


def test_divisor_from_tableau_generic_sampling_deterministic():
    p = BNParams(5, 4, 1)
    t = next(iter(enumerate_tableaux(p)))
    geom = ChainGeometry(tuple([(F(9), F(1))] * 5))
    d1 = divisor_from_tableau(t, geom, seed=7)
    d2 = divisor_from_tableau(t, geom, seed=7)
    d3 = divisor_from_tableau(t, geom, seed=8)
    assert d1 == d2
    assert d1 != d3
    assert d1.degree == 4
    # the sampled point sits on the free loop and avoids special congruences
    free = t.free_indices[0]
    pts = [pt for pt, _ in d1.points if isinstance(pt, Interior) and pt.loop == free]
    assert len(pts) == 1
    x = pts[0]
    c = geom.circumference(free)
    l = geom.ell(free)
    specials = {((u + 1) * l) % c for u in range(p.d + 1)}
    assert x.coord not in specials and x.coord not in (F(0), l)


def test_rank_examples_on_circle():
    geom = circle()
    two_x = TropicalDivisor(((Interior(1, F(5)), 2),))
    assert tropical_rank(geom, two_x) == 1
    assert tropical_rank(geom, TropicalDivisor(((Node(0), 1),))) == 0
    assert rank_at_least(geom, TropicalDivisor(((Node(0), 1),)), 0)
    assert not rank_at_least(geom, TropicalDivisor(((Node(0), 1),)), 1)
    anti = TropicalDivisor(((Node(0), -1),))
    assert tropical_rank(geom, anti) == -1


def test_rank_worked_example(geom662):
    divisor = divisor_from_tableau(tableau_662(), geom662)
    assert rank_at_least(geom662, divisor, 2)
    assert not rank_at_least(geom662, divisor, 3)
    assert tropical_rank(geom662, divisor) == 2


def test_closed_form_agreement_all_662(geom662):
    for t in enumerate_tableaux(PARAMS_662):
        divisor = divisor_from_tableau(t, geom662)
        table = tropical_vanishing_table(geom662, divisor, 2)
        for i in range(7):
            expected = effective_vanishing_from_tableau(t, i)
            assert table.u[i] == expected


def params_strategy(max_g=5):
    return (
        st.tuples(
            st.integers(1, max_g), st.integers(0, 2 * max_g), st.integers(0, 3)
        )
        .map(lambda t: BNParams(*t))
        .filter(lambda p: p.rho >= 0 and p.kbar >= 0)
    )


@st.composite
def tableau_and_geometry(draw):
    params = draw(params_strategy())
    tableaux = list(enumerate_tableaux(params))
    t = tableaux[draw(st.integers(0, len(tableaux) - 1))]
    bound = max(2 * params.g - 2, 1)
    lengths = []
    for _ in range(params.g):
        num = draw(st.integers(bound, 3 * bound))
        den = draw(st.integers(1, 3))
        lengths.append((F(num, den), F(1)))
    geom = ChainGeometry(tuple(lengths))
    if not check_genericity(geom).generic:
        geom = ChainGeometry(tuple((F(bound + i), F(1)) for i in range(params.g)))
    seed = draw(st.integers(0, 10))
    return t, geom, seed


@given(tableau_and_geometry())
@settings(max_examples=50, deadline=None)
def test_tableau_divisor_matches_closed_form(data):
    t, geom, seed = data
    p = t.params
    divisor = divisor_from_tableau(t, geom, seed=seed)
    assert divisor.degree == p.d
    table = tropical_vanishing_table(geom, divisor, p.r)
    for i in range(p.g + 1):
        assert table.u[i] == effective_vanishing_from_tableau(t, i)
        assert table.u[i][p.r] == 0


@given(tableau_and_geometry())
@settings(max_examples=25, deadline=None)
def test_tableau_divisor_rank_certification(data):
    t, geom, seed = data
    p = t.params
    divisor = divisor_from_tableau(t, geom, seed=seed)
    assert rank_at_least(geom, divisor, p.r)
    assert not rank_at_least(geom, divisor, p.r + 1)


@given(tableau_and_geometry())
@settings(max_examples=30, deadline=None)
def test_reduction_soundness(data):
    t, geom, seed = data
    divisor = divisor_from_tableau(t, geom, seed=seed)
    red = reduce_to_q0(geom, divisor)
    rebuilt = {Node(0): red.u}
    for eps, x in zip(red.epsilon, red.x):
        if eps:
            rebuilt[x] = rebuilt.get(x, 0) + 1
    assert all(e in (0, 1) for e in red.epsilon)
    for k, x in enumerate(red.x, start=1):
        if x is not None:
            assert x != Node(k - 1)
    residue = reduce_to_q0(geom, divisor - TropicalDivisor.from_dict(rebuilt))
    assert residue.u == 0 and not any(residue.epsilon)
