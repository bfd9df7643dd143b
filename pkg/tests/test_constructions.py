import json

import numpy as np
import pytest

from intensity_lab import constructions as C
from intensity_lab import groups as GR
from intensity_lab.rings import Mat2
from intensity_lab.structure import series


@pytest.mark.parametrize("p,type_,order,exponent", [
    (3, [1], 3, 3),
    (3, [2, 1], 27, 9),
    (5, [2], 25, 25),
    (5, [1, 1, 1], 125, 5),
    (2, [1, 1], 4, 2),
])
def test_abelian(p, type_, order, exponent):
    G = C.build_abelian(p, type_)
    assert G.n == order and G.is_abelian() and G.exponent() == exponent


def test_semidirect_is_dihedral():
    G = C.build_semidirect_cyclic(4, 2, 3)
    assert G.n == 8 and not G.is_abelian()
    # D8: five involutions, centre of order 2
    assert sum(1 for o in G.orders() if o == 2) == 5
    assert len(GR.center(G)) == 2


def test_semidirect_rejects_bad_action():
    with pytest.raises(C.SpecError):
        C.build_semidirect_cyclic(9, 3, 2)


@pytest.mark.parametrize("p,n,exp,order,exponent", [
    (3, 1, "p", 27, 3),
    (3, 1, "p2", 27, 9),
    (5, 1, "p", 125, 5),
    (5, 1, "p2", 125, 25),
    (3, 2, "p", 243, 3),
])
def test_extraspecial(p, n, exp, order, exponent):
    G = C.build_extraspecial(p, n, exp)
    assert G.n == order and G.exponent() == exponent
    Z = GR.center(G)
    S = series(G)
    assert len(Z) == p and S.lcs[1] == Z


def test_semidirect_25_5_6_is_extraspecial_exponent_25():
    G = C.build_semidirect_cyclic(25, 5, 6)
    H = C.build_extraspecial(5, 1, "p2")
    assert G.n == H.n == 125
    assert sorted(G.orders()) == sorted(H.orders())


def test_direct_product():
    G = C.build_direct_product([C.build_abelian(3, [2]), C.build_abelian(3, [1])])
    assert G.n == 27 and G.is_abelian() and G.exponent() == 9
    assert len(G.generators) == 2


def test_yo_group(Y, Y_series):
    members, candidates = C.yo_filter_set()
    assert candidates == 2187 and len(members) == 729
    assert Y_series.widths == [2, 1, 2, 1]
    assert [len(H) for H in Y_series.lcs] == [729, 81, 27, 3, 1]


def test_sn_m2(sn_m2):
    S = series(sn_m2)
    assert sn_m2.n == 3125
    assert S.widths == [2, 1, 2]
    count, ambient = C.sn_filter_count(5, 2, 2)
    assert count == 3125 and ambient == 5 * 5 * 25 * 25


def test_sn_filter_count_matches_bruteforce():
    # brute force over 1 + m mod 25, independent of the bincount trick
    p, t, q = 5, 2, 25
    n = 0
    for a in range(1, q, p):
        for b in range(0, q, p):
            for c in range(q):
                for d in range(q):
                    n += (a * a - t * b * b - p * c * c + t * p * d * d) % q == 1
    assert n == C.sn_filter_count(p, t, 2)[0]


def test_sn_quotient_by_truncation(sn_g5):
    assert sn_g5.n == 15625
    assert series(sn_g5).widths == [2, 1, 2, 1]
    G4 = C.build_sn_delta(5, None, 3, 4)
    assert G4.n == 3125


def test_sn_truncation_agrees_with_full_quotient(sn_m2):
    # for M = 2, G / G_3 via truncation and via quotienting the full group
    S = series(sn_m2)
    Q = GR.quotient(sn_m2, S.term(3))
    T = C.build_sn_delta(5, None, 2, 3)
    assert Q.n == T.n == 125
    assert sorted(Q.orders()) == sorted(T.orders())
    assert series(T).widths == [2, 1]


def test_sn_t_invariance():
    a = C.build_sn_delta(5, 2, 2)
    b = C.build_sn_delta(5, 3, 2)
    assert a.n == b.n
    assert series(a).widths == series(b).widths
    assert np.bincount(a.orders()).tolist() == np.bincount(b.orders()).tolist()


def test_sn_rejects_residue():
    with pytest.raises(C.SpecError):
        C.build_sn_delta(5, 4, 2)
    with pytest.raises(C.SpecError):
        C.build_sn_delta(3, None, 2)


def test_sl2_triangle_m2_against_independent_filter():
    p, q = 5, 25
    want = set()
    for a in range(1, q, p):
        for d in range(1, q, p):
            for c in range(0, q, p):
                for b in range(q):
                    if (a * d - b * c) % q == 1:
                        want.add(Mat2(a, b, c, d))
    G = C.build_sl2_triangle(5, 2)
    assert len(want) == 625
    assert set(G.elements) == want
    assert [len(H) for H in series(G).lcs] == [625, 25, 5, 1]


def test_sl2_filter_count():
    assert C.sl2_filter_count(5, 2) == 625
    assert C.sl2_filter_count(5, 3) == 5 ** 7


def test_sl2_quotient():
    Q = C.build_sl2_triangle(5, 3, 4)
    assert Q.n == 78125 // 25
    assert Q.meta["generator_labels"] == ["B(1)", "C(p)", "D(1+p)"]


def test_build_from_spec_dict():
    G = C.build({"kind": "extraspecial", "p": 3})
    assert G.n == 27 and G.meta["spec"] == {"kind": "extraspecial", "p": 3}
    G = C.build({"kind": "direct_product", "factors": [
        {"kind": "abelian", "p": 3, "type": [1]}, {"kind": "abelian", "p": 3, "type": [1]}]})
    assert G.n == 9


def test_spec_roundtrip_and_hash():
    s = C.GroupSpec.from_json('{"p": 5, "kind": "sn_delta", "M": 2}')
    assert C.GroupSpec.from_json(s.canonical_json()) == s
    assert s.content_hash() == C.GroupSpec.from_dict({"kind": "sn_delta", "M": 2, "p": 5}).content_hash()
    assert s.content_hash() != C.GroupSpec.from_dict({"kind": "sn_delta", "M": 3, "p": 5}).content_hash()


@pytest.mark.parametrize("bad", [
    {"kind": "abelian", "p": 3, "type": [1], "colour": "red"},
    {"p": 3},
    {"kind": "nope"},
    {"kind": "abelian", "p": 4, "type": [1]},
    {"kind": "abelian", "p": 3, "type": []},
    {"kind": "extraspecial", "p": 3, "exponent": "p3"},
    {"kind": "extraspecial", "p": 3, "n": 2, "exponent": "p2"},
    {"kind": "sn_delta", "p": 5, "M": 1},
    {"kind": "sn_delta", "p": 5, "M": 2, "k": 9},
    {"kind": "sl2_triangle", "p": 3, "M": 2},
    [1, 2],
])
def test_spec_rejects(bad):
    with pytest.raises(C.SpecError):
        C.GroupSpec.from_json(json.dumps(bad))


def test_spec_rejects_bad_json():
    with pytest.raises(C.SpecError):
        C.GroupSpec.from_json("{kind: yo")


def test_capacity_guard_on_build():
    with pytest.raises(GR.CapacityExceeded):
        C.build({"kind": "sl2_triangle", "p": 5, "M": 3}, max_order=10_000)
