import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from intensity_lab import constructions as C
from intensity_lab import groups as GR
from intensity_lab import intensity as I


def test_identity_and_inner_are_intense(Y, heis):
    for G in (Y, heis):
        assert I.is_intense(G, I.identity_automorphism(G))
        a = I.inner_automorphism(G, G.generators[0])
        assert a.scalar == 1 and I.is_intense(G, a)


def test_alpha_yo(Y, Y_series):
    a = I.alpha_yo(Y)
    assert a.order() == 2 and a.scalar == 2
    assert I.is_intense(Y, a)
    assert I.minus_one_powers_check(Y, a)
    assert I.stabilizes_normal_subgroups(Y, a)
    assert (a.perm[Y_series.term(4).members] == Y_series.term(4).members).all()


def test_scalar_automorphisms_on_heisenberg(heis):
    a = I.scalar_automorphism_extraspecial(heis, 2)
    assert a.scalar == 2 and I.is_intense(heis, a)
    assert a.compose(a).scalar == 1


def test_basis_swap_is_not_intense():
    G = C.build_abelian(3, [1, 1])
    x, y = G.generators
    a = I.automorphism_from_generator_images(G, [y, x])
    assert a.scalar == I.NON_SCALAR
    assert not I.is_intense(G, a)


def test_power_map_is_intense_on_abelian():
    G = C.build_abelian(5, [2, 1])
    a = I.automorphism_from_generator_images(G, [G.power(g, 3) for g in G.generators])
    assert a.scalar == 3 and I.is_intense(G, a)


def test_bad_generator_images():
    G = C.build_abelian(3, [2, 1])
    g1, g2 = G.generators
    with pytest.raises(I.NotAHomomorphism):
        I.automorphism_from_generator_images(G, [g2, g1])
    heis = C.build_extraspecial(3, 1)
    x = heis.generators[0]
    with pytest.raises(I.NotBijective):
        I.automorphism_from_generator_images(heis, [x, x])
    with pytest.raises(ValueError):
        I.automorphism_from_generator_images(heis, [x])


@pytest.mark.parametrize("builder,expected", [
    (lambda: C.build_abelian(3, [2, 1]), 2),
    (lambda: C.build_abelian(5, [2]), 4),
    (lambda: C.build_abelian(5, [1, 1]), 4),
    (C.build_dihedral8, 1),
    (C.trivial_group, 1),
    (lambda: C.build_extraspecial(3, 1, "p"), 2),
    (lambda: C.build_extraspecial(5, 1, "p"), 4),
    (lambda: C.build_extraspecial(5, 1, "p2"), 1),
])
def test_intensity_small(builder, expected):
    G = builder()
    assert I.intensity(G).intensity == expected


@pytest.mark.parametrize("builder", [
    lambda: C.build_abelian(3, [1, 1]),
    lambda: C.build_abelian(5, [1, 1]),
    lambda: C.build_abelian(3, [2, 1]),
    lambda: C.build_extraspecial(3, 1, "p"),
    lambda: C.build_extraspecial(3, 1, "p2"),
    lambda: C.build_semidirect_cyclic(9, 3, 4),
])
def test_search_agrees_with_brute_force(builder):
    G = builder()
    rep = I.intensity(G)
    scalars, n_intense = I.brute_force_intense_scalars(G)
    assert rep.realized == scalars
    assert n_intense >= 1


def test_brute_force_limit(Y):
    with pytest.raises(GR.CapacityExceeded):
        I.brute_force_intense_scalars(Y)


def test_yo_intensity_and_witness(Y):
    rep = I.intensity(Y)
    assert rep.intensity == 2 and rep.realized == [1, 2]
    w = I.automorphism_from_generator_images(Y, rep.witnesses[2], gens=rep.generators)
    assert w.scalar == 2 and I.is_intense(Y, w)


def test_threads_do_not_change_the_answer(heis):
    a = I.intensity(heis).to_dict()
    b = I.intensity(heis, threads=2).to_dict()
    a.pop("seconds"), b.pop("seconds")
    assert a == b


def test_budget_is_enforced(Y):
    with pytest.raises(GR.CapacityExceeded):
        I.intensity(Y, budget=1)


def test_untabulated_group_refused():
    H = C.build_sn_delta(5, None, 3, 5)
    assert H.table is None
    with pytest.raises(GR.CapacityExceeded):
        I.intensity(H)


def test_quotient_inherits_scalars(Y, Y4):
    rep = I.intensity(Y4)
    assert set(I.intensity(Y).realized) <= set(rep.realized)
    a = I.induced_automorphism(Y4, I.alpha_yo(Y))
    assert a.scalar == 2 and I.is_intense(Y4, a)


def test_report_dict(heis):
    d = I.intensity(heis).to_dict()
    assert d["fingerprint"] == {"name": heis.name, "order": 27, "p": 3, "widths": [2, 1]}
    assert set(d["witnesses"]) == {"1", "2"}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 728), st.integers(0, 728))
def test_intense_automorphisms_form_a_group(g, h):
    Y = _yo()
    a = I.inner_automorphism(Y, g)
    b = _alpha().compose(I.inner_automorphism(Y, h))
    ab = a.compose(b)
    assert I.is_intense(Y, ab)
    assert ab.scalar == 2
    assert I.frattini_scalar(Y, ab) == 2


_Y = []


def _alpha():
    if len(_Y) < 2:
        _Y.append(I.alpha_yo(_yo()))
    return _Y[1]


def _yo():
    if not _Y:
        _Y.append(C.build_yo())
    return _Y[0]
