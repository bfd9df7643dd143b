import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from intensity_lab import constructions as C
from intensity_lab import groups as GR
from intensity_lab import structure as S
from intensity_lab.intensity import alpha_yo


@pytest.fixture(scope="module")
def sl2_m2():
    return C.build_sl2_triangle(5, 2)


def test_yo_series(Y, Y_series):
    assert Y_series.nilpotency_class == 4
    assert [len(H) for H in Y_series.pcs][-1] == 1
    assert len(Y_series.frattini) == 81 and Y_series.frattini == Y_series.term(2)
    assert [len(H) for H in Y_series.derived] == [729, 81, 1]
    assert Y_series.term(9) == GR.trivial_subgroup(Y)
    with pytest.raises(ValueError):
        Y_series.term(0)


def test_depth_matches_series(Y, Y_series):
    for i in range(1, 5):
        mask = Y_series.depth >= i
        assert mask.sum() == len(Y_series.term(i))


def test_widths_of_abelian_group():
    G = C.build_abelian(5, [2, 1])
    assert S.series(G).widths == [3] and S.nilpotency_class(G) == 1
    assert [len(H) for H in S.series(G).pcs] == [125, 5, 1]


def test_trivial_group_series():
    G = C.trivial_group()
    s = S.series(G)
    assert s.nilpotency_class == 0 and s.widths == []


def test_extraspecial_and_kappa(Y, heis):
    assert S.is_extraspecial(heis)
    assert S.is_extraspecial(C.build_extraspecial(5, 2))
    assert not S.is_extraspecial(Y)
    assert not S.is_extraspecial(C.build_abelian(3, [1, 1]))
    assert S.is_kappa_group(Y)
    assert not S.is_kappa_group(heis)
    assert not S.is_kappa_group(C.build_sn_delta(5, None, 2))


def test_yo_g2_elementary_abelian(Y, Y_series):
    assert S.is_elementary_abelian(Y, Y_series.term(2))
    assert S.kappa_g2_holds(Y)


def test_obelisk_predicates(sn_m2, sl2_m2):
    assert S.is_obelisk(sn_m2) and S.is_framed(sn_m2) and S.lines_criterion(sn_m2)
    assert S.is_obelisk(sl2_m2)
    assert not S.is_framed(sl2_m2) and not S.lines_criterion(sl2_m2)
    rep = S.framed_report(sl2_m2)
    assert len(rep) == 6 and 0 < sum(rep.values()) < 6


def test_obelisk_guards(Y):
    with pytest.raises(ValueError):
        S.is_obelisk(Y)
    E = C.build_extraspecial(5, 1, "p2")
    assert not S.is_obelisk(E)
    with pytest.raises(S.NotAnObelisk):
        S.is_framed(E)
    assert not S.is_obelisk(C.build_abelian(5, [1, 1]))


def test_maximal_subgroups(sn_m2):
    maxes = S.maximal_subgroups(sn_m2)
    assert len(maxes) == 6
    assert all(len(M) * 5 == sn_m2.n for _, M in maxes)
    assert len({M.key for _, M in maxes}) == 6


def test_regularity(Y, heis, sn_m2):
    assert S.is_regular(heis)
    assert S.is_regular(C.build_abelian(3, [2, 2]))
    r = S.regularity(Y)
    assert not r.regular and not r.sampled and r.counterexample is not None
    r = S.regularity(sn_m2)
    assert r.regular and r.sampled
    assert S.regularity(sn_m2, samples=50, seed=3).pairs_checked == 50 + 9


def test_power_abelian(Y, heis, sn_m2):
    assert S.power_abelian_report(heis)["holds"]
    assert S.power_abelian_report(sn_m2)["holds"]
    assert not S.power_abelian_report(Y)["holds"]


def test_cubing_identity(heis, Y4):
    assert S.cubing_identity_holds(heis)
    assert S.cubing_identity_holds(Y4)


def test_p_power_congruence(Y, sn_m2):
    assert S.p_power_congruence_holds(Y)
    assert S.p_power_congruence_holds(sn_m2, samples=500)


def test_black_core_and_widths(sn_m2, sl2_m2):
    assert S.black_core_holds(sn_m2)
    assert S.blackburn_widths_hold(sn_m2) and S.blackburn_widths_hold(sl2_m2)
    assert S.obelisk_centre_holds(sn_m2)


def test_normal_squeeze(Y, sn_m2):
    assert S.normal_squeeze_holds(Y)
    assert S.normal_squeeze_holds(C.build_abelian(3, [1, 1, 1]))
    # the extra central Z/3 is normal but not squeezed between layers
    G = C.build_direct_product([C.build_extraspecial(3, 1), C.build_abelian(3, [1])])
    assert not S.normal_squeeze_holds(G)


def test_cyclic_jumps(sn_m2):
    assert S.cyclic_jumps_hold(sn_m2)
    assert not S.cyclic_jumps_hold(C.build_extraspecial(5, 1, "p2"))


def test_plus_minus(Y):
    a = alpha_yo(Y)
    plus, minus = S.plus_minus_decomposition(Y, a)
    assert len(plus) * len(minus) == Y.n
    assert (len(plus), len(minus)) == S.plus_minus_jump_orders(Y, a) == (9, 81)
    with pytest.raises(ValueError):
        S.plus_minus_decomposition(Y, np.arange(Y.n))


def test_lcs_matches_all_pairs(Y, heis):
    assert S.lcs_matches_all_pairs(Y)
    assert S.lcs_matches_all_pairs(heis)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_jump_widths_add_up(data):
    G = _yo()
    subs = GR.all_subgroups(G)
    H = subs[data.draw(st.integers(0, len(subs) - 1))]
    J = S.jump_profile(G, H)
    assert 3 ** sum(w for _, w in J.jumps) == len(H)
    assert all(1 <= j <= 4 for j in J.jump_indices)


_Y = []


def _yo():
    if not _Y:
        _Y.append(C.build_yo())
    return _Y[0]
