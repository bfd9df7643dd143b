"""Series, jumps and widths, and the structural predicates on finite p-groups."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .groups import (Subgroup, _normal_closure_in, _with_gens, all_subgroups, center,
                     coset_labels, is_normal, lower_central_series, normal_closure,
                     subgroup_generated, trivial_subgroup, whole_group)


class NotAnObelisk(ValueError):
    pass


def _log_p(n, p):
    if n == 1:
        return 0
    e = round(math.log(n, p))
    if p ** e != n:
        raise AssertionError(f"index {n} is not a power of {p}: corrupted subgroup data")
    return e


@dataclass
class SeriesData:
    p: int
    lcs: list
    pcs: list
    derived: list
    frattini: Subgroup
    depth: np.ndarray
    widths: list

    @property
    def nilpotency_class(self):
        return len(self.lcs) - 1

    def term(self, i):
        """G_i with G_i = 1 past the end."""
        if i <= 0:
            raise ValueError("LCS terms are indexed from 1")
        return self.lcs[i - 1] if i <= len(self.lcs) else self.lcs[-1]

    def width(self, i):
        return self.widths[i - 1] if 1 <= i <= len(self.widths) else 0


@dataclass
class JumpProfile:
    subgroup: Subgroup
    jumps: list = field(default_factory=list)

    @property
    def jump_indices(self):
        return [j for j, _ in self.jumps]


def p_central_series(G):
    p = G.p
    terms = [whole_group(G)]
    while len(terms[-1]) > 1:
        cur = terms[-1]
        gens = [G.commutator(g, h) for g in G.generators for h in cur.gens]
        gens += sorted({G.power(int(x), p) for x in cur.members})
        nxt = normal_closure(G, [x for x in gens if x])
        if len(nxt) == len(cur):
            raise ValueError("not a p-group")
        terms.append(nxt)
    return terms


def derived_series(G):
    terms = [whole_group(G)]
    while len(terms[-1]) > 1:
        cur = terms[-1]
        comms = [G.commutator(a, b) for a in cur.gens for b in cur.gens]
        nxt = normal_closure(G, [c for c in comms if c])
        if len(nxt) == len(cur):
            break
        terms.append(nxt)
    return terms


def frattini(G):
    """Phi(G) = G^p [G,G] for a p-group: generated by G_2 and the p-th powers of generators."""
    if "frattini" not in G._cache:
        lcs = lower_central_series(G)
        G2 = lcs[1] if len(lcs) > 1 else trivial_subgroup(G)
        gens = list(G2.gens) + [G.power(g, G.p) for g in G.generators]
        G._cache["frattini"] = subgroup_generated(G, [g for g in gens if g])
    return G._cache["frattini"]


def series(G):
    if "series" in G._cache:
        return G._cache["series"]
    if G.p is None:
        if G.n == 1:
            p = 1
        else:
            raise ValueError("series needs a group of prime-power order")
    p = G.p or 1
    lcs = lower_central_series(G)
    depth = np.zeros(G.n, dtype=np.int64)
    for i, H in enumerate(lcs, start=1):
        depth[H.members] = i
    widths = [_log_p(len(lcs[i]) // len(lcs[i + 1]), p) for i in range(len(lcs) - 1)]
    if G.n > 1:
        pcs = p_central_series(G)
        der = derived_series(G)
    else:
        pcs = der = [whole_group(G)]
    data = SeriesData(p, lcs, pcs, der, frattini(G) if G.n > 1 else whole_group(G), depth, widths)
    G._cache["series"] = data
    return data


def nilpotency_class(G):
    return series(G).nilpotency_class


def jump_profile(G, H):
    """Jumps j of H (H ∩ G_j != H ∩ G_{j+1}) with widths log_p |H∩G_j : H∩G_{j+1}|."""
    S = series(G)
    d = S.depth[H.members]
    jumps = []
    for j in range(1, S.nilpotency_class + 1):
        upper = int((d >= j).sum())
        lower = int((d >= j + 1).sum())
        if upper != lower:
            jumps.append((j, _log_p(upper // lower, S.p)))
    return JumpProfile(H, jumps)


# --- predicates ---------------------------------------------------------------

def is_abelian(G):
    return G.is_abelian()


def is_extraspecial(G):
    """G_2 central and Z(G) cyclic of order p."""
    if G.n == 1:
        return False
    Z = center(G)
    lcs = lower_central_series(G)
    G2 = lcs[1] if len(lcs) > 1 else trivial_subgroup(G)
    return len(Z) == G.p and G2.issubset(Z)


def is_kappa_group(G):
    """p = 3, |G:G_2| = 9 and cubing induces a bijection G/G_2 -> G_3/G_4."""
    if G.p != 3:
        return False
    S = series(G)
    G2, G3, G4 = S.term(2), S.term(3), S.term(4)
    if G.n // len(G2) != 9 or len(G3) // len(G4) != 9:
        return False
    cube = G.power_map(3)
    lab2 = coset_labels(G, G2)
    lab4 = coset_labels(G, G4)
    g3mask = G3.mask(G.n)
    if not g3mask[cube].all():
        return False
    # well defined: x^3 G_4 constant on each coset of G_2
    image = {}
    for x in range(G.n):
        c = int(lab2[x])
        v = int(lab4[cube[x]])
        if image.setdefault(c, v) != v:
            return False
    return len(set(image.values())) == 9


def _require_obelisk_prime(G):
    if G.p is None or G.p <= 3:
        raise ValueError("obelisk predicates need p > 3")


def power_subgroup_all(G, H, e):
    """<h^e : h in H>."""
    powers = sorted({G.power(int(h), e) for h in H.members} - {0})
    return subgroup_generated(G, powers) if powers else trivial_subgroup(G)


def is_obelisk(G):
    _require_obelisk_prime(G)
    if G.is_abelian():
        return False
    S = series(G)
    G3 = S.term(3)
    if G.n // len(G3) != G.p ** 3:
        return False
    return power_subgroup_all(G, whole_group(G), G.p) == G3


def maximal_subgroup_reps(G):
    """Representatives x with M = <x, Phi(G)> running over the maximal subgroups,
    assuming G/Phi(G) has rank 2 (true for obelisks and kappa-groups)."""
    Phi = frattini(G)
    gens = _minimal_generators(G)
    if len(gens) != 2:
        raise ValueError("expected a 2-generated group")
    g1, g2 = gens
    reps = [g2] + [G.mul(g1, G.power(g2, b)) for b in range(G.p)]
    return reps, Phi


def _minimal_generators(G):
    """Greedy subset of the generators that is minimal modulo Phi(G)."""
    Phi = frattini(G)
    chosen = []
    cur = Phi
    for g in G.generators:
        if g not in cur:
            chosen.append(g)
            cur = subgroup_generated(G, list(Phi.gens) + chosen)
            if len(cur) == G.n:
                break
    return chosen


def maximal_subgroups(G):
    reps, Phi = maximal_subgroup_reps(G)
    return [(x, subgroup_generated(G, [x] + list(Phi.gens))) for x in reps]


def subgroup_frattini(G, M):
    """Phi(M) = M^p [M, M] = normal closure in M of commutators and p-th powers of generators."""
    gens = list(M.gens)
    elems = [G.commutator(a, b) for i, a in enumerate(gens) for b in gens[i + 1:]]
    elems += [G.power(a, G.p) for a in gens]
    return _normal_closure_in(G, M, [e for e in elems if e])


def is_framed(G):
    if not is_obelisk(G):
        raise NotAnObelisk("group is not a p-obelisk")
    return all(framed_report(G).values())


def framed_report(G):
    """{line representative: Phi(M) == G_3} over the p+1 maximal subgroups."""
    G3 = series(G).term(3)
    return {x: subgroup_frattini(G, M) == G3 for x, M in maximal_subgroups(G)}


def lines_report(G):
    """For each line l = <x G_2> of G/G_2: do rho(l G_2) and [x, G_2] generate G_3 modulo G_4?"""
    if not is_obelisk(G):
        raise NotAnObelisk("group is not a p-obelisk")
    S = series(G)
    if S.nilpotency_class < 3:
        raise NotAnObelisk("lines criterion needs class >= 3 (G_3/G_4 is trivial otherwise)")
    G2, G3, G4 = S.term(2), S.term(3), S.term(4)
    reps, _ = maximal_subgroup_reps(G)
    out = {}
    for x in reps:
        span = subgroup_generated(G, [x] + list(G2.gens))
        elems = sorted({G.power(int(y), G.p) for y in span.members})
        elems += [G.commutator(x, y) for y in G2.gens]
        H = subgroup_generated(G, [e for e in elems if e] + list(G4.gens))
        out[x] = G3.issubset(H)
    return out


def lines_criterion(G):
    return all(lines_report(G).values())


# --- regularity -----------------------------------------------------------------

def _regular_pair(G, x, y, cache):
    p = G.p
    xy = G.mul(x, y)
    gamma = G.mul(G.inv(G.mul(G.power(x, p), G.power(y, p))), G.power(xy, p))
    if gamma == 0:
        return True
    c = G.commutator(x, y)
    H = subgroup_generated(G, [x, y])
    if H.key in cache:
        Dp = cache[H.key]
    else:
        D = _normal_closure_in(G, H, [c])
        Dp = power_subgroup_all(G, D, p)
        cache[H.key] = Dp
    return gamma in Dp


@dataclass
class RegularityResult:
    regular: bool
    sampled: bool
    pairs_checked: int
    counterexample: tuple | None = None

    def __bool__(self):
        return self.regular


def regularity(G, exhaustive_limit=3 ** 6, samples=10_000, seed=0):
    """(xy)^p = x^p y^p gamma with gamma in [<x,y>,<x,y>]^p, for all pairs or a seeded sample."""
    if G.n == 1 or G.is_abelian():
        return RegularityResult(True, False, 0)
    cache = {}
    gens = G.generators
    pairs = [(a, b) for a in gens for b in gens]
    sampled = G.n > exhaustive_limit
    if sampled:
        rng = np.random.default_rng(seed)
        pairs += [tuple(map(int, r)) for r in rng.integers(0, G.n, size=(samples, 2))]
    checked = 0
    for x, y in pairs:
        checked += 1
        if not _regular_pair(G, x, y, cache):
            return RegularityResult(False, sampled, checked, (x, y))
    if not sampled:
        # all pairs; gamma = 1 pairs are dismissed in bulk with the table
        for x, y in _nontrivial_gamma_pairs(G):
            checked += 1
            if not _regular_pair(G, x, y, cache):
                return RegularityResult(False, False, checked, (x, y))
    return RegularityResult(True, sampled, checked)


def _nontrivial_gamma_pairs(G):
    p = G.p
    if G.table is None:
        for x in range(G.n):
            for y in range(G.n):
                yield x, y
        return
    T = G.table
    pw = G.power_map(p)
    ar = np.arange(G.n)
    for x in range(G.n):
        xy = T[x, ar]
        gamma = T[G.inverse[T[pw[x], pw[ar]]], pw[xy]]
        for y in np.flatnonzero(gamma != 0):
            yield x, int(y)


def is_regular(G, **kw):
    return regularity(G, **kw).regular


def power_abelian_report(G):
    """Check G^{p^k} = rho^k(G) as sets and |mu_{p^k}| = |G : G^{p^k}| for every k."""
    p = G.p
    rows = []
    k = 1
    exp = G.exponent()
    while True:
        e = p ** k
        images = np.unique(G.power_map(e)) if G.table is not None else \
            np.unique([G.power(x, e) for x in range(G.n)])
        gen = power_subgroup_all(G, whole_group(G), e)
        n_mu = int((G.power_map(e) == 0).sum()) if G.table is not None else \
            sum(1 for x in range(G.n) if G.power(x, e) == 0)
        rows.append({"k": k, "power_subgroup_order": len(gen), "power_set_size": len(images),
                     "sets_equal": len(images) == len(gen) and bool((images == gen.members).all()),
                     "mu_order": n_mu, "index": G.n // len(gen),
                     "mu_matches_index": n_mu == G.n // len(gen)})
        if e >= exp:
            break
        k += 1
    return {"rows": rows, "holds": all(r["sets_equal"] and r["mu_matches_index"] for r in rows)}


# --- involutions ----------------------------------------------------------------

def _perm(alpha):
    return np.asarray(getattr(alpha, "perm", alpha), dtype=np.int64)


def plus_minus_decomposition(G, alpha):
    """G+ = fixed points (a subgroup) and G- = inverted elements, for alpha of order 2."""
    perm = _perm(alpha)
    ar = np.arange(G.n)
    if G.n % 2 == 0:
        raise ValueError("need |G| odd")
    if (perm == ar).all():
        raise ValueError("alpha is the identity, not of order 2")
    if not (perm[perm] == ar).all():
        raise ValueError("alpha does not have order 2")
    plus = np.flatnonzero(perm == ar)
    minus = np.flatnonzero(perm == G.inverse)
    assert len(plus) * len(minus) == G.n, "|G| != |G+||G-|"
    return _with_gens(G, plus), minus


def plus_minus_jump_orders(G, alpha):
    """(|G+|, |G-|) predicted from widths: product of p^w over even, resp. odd, indices,
    for an automorphism acting as (-1)^i on the layers."""
    S = series(G)
    even = sum(w for i, w in enumerate(S.widths, start=1) if i % 2 == 0)
    odd = sum(w for i, w in enumerate(S.widths, start=1) if i % 2 == 1)
    return S.p ** even, S.p ** odd


# --- property suites (instance checks) --------------------------------------------

def cubing_identity_holds(G):
    """(xy)^3 = x^3 y^3 [x y^-1, [x, y]] for all pairs (needs the full table)."""
    T = G.table
    ar = np.arange(G.n)
    cube = G.power_map(3)
    inv = G.inverse
    for x in range(G.n):
        xy = T[x, ar]
        lhs = cube[xy]
        c = T[T[x, ar], T[inv[x], inv[ar]]]           # [x, y]
        u = T[x, inv[ar]]                                # x y^-1
        cc = T[T[u, c], T[inv[u], inv[c]]]               # [x y^-1, [x, y]]
        rhs = T[T[cube[x], cube[ar]], cc]
        if not (lhs == rhs).all():
            return False
    return True


def p_power_congruence_holds(G, samples=None, seed=0):
    """(xy)^p = x^p y^p modulo G_2^p G_p."""
    S = series(G)
    p = S.p
    G2 = S.term(2)
    elems = [G.power(int(x), p) for x in G2.members] + list(S.term(p).gens)
    N = normal_closure(G, [e for e in elems if e])
    lab = coset_labels(G, N)
    if samples is None and G.table is not None:
        T = G.table
        pw = G.power_map(p)
        ar = np.arange(G.n)
        for x in range(G.n):
            lhs = lab[pw[T[x, ar]]]
            rhs = lab[T[pw[x], pw[ar]]]
            if not (lhs == rhs).all():
                return False
        return True
    rng = np.random.default_rng(seed)
    for x, y in rng.integers(0, G.n, size=(samples or 10_000, 2)):
        x, y = int(x), int(y)
        if lab[G.power(G.mul(x, y), p)] != lab[G.mul(G.power(x, p), G.power(y, p))]:
            return False
    return True


def black_core_holds(G):
    """rho^k(G_i) = G_{2k+i} as sets for all i, k >= 1 (obelisks)."""
    S = series(G)
    c = S.nilpotency_class
    for i in range(1, c + 1):
        Gi = S.term(i)
        k = 1
        while 2 * k + i <= c + 1:
            e = S.p ** k
            img = np.unique([G.power(int(x), e) for x in Gi.members])
            target = S.term(2 * k + i).members if 2 * k + i <= c else np.zeros(1, dtype=np.int64)
            if len(img) != len(target) or not (img == target).all():
                return False
            k += 1
    return True


def blackburn_widths_hold(G):
    """w_i w_{i+1} <= 2, product exactly 2 before c-1, widths (2,1,2,1,...,f)."""
    S = series(G)
    w = S.widths + [0]
    c = S.nilpotency_class
    for i in range(c):
        if w[i] * w[i + 1] > 2:
            return False
        if w[i] * w[i + 1] == 1 and i + 1 != c - 1:
            return False
    return all(w[i - 1] == (2 if i % 2 else 1) for i in range(1, c))


def obelisk_centre_holds(G):
    S = series(G)
    return center(G) == S.term(S.nilpotency_class)


def normal_squeeze_holds(G):
    """Every subgroup: normal iff G_{i+1} <= H <= G_i for some i."""
    S = series(G)
    c = S.nilpotency_class
    for H in all_subgroups(G):
        squeezed = any(S.term(i + 1).issubset(H) and H.issubset(S.term(i))
                       for i in range(1, c + 1))
        if squeezed != is_normal(G, H):
            return False
    return True


def cyclic_jumps_hold(G):
    """Every cyclic subgroup has jumps of a single parity, each of width 1."""
    seen = set()
    orders = G.orders()
    for x in range(1, G.n):
        H = subgroup_generated(G, [x])
        if H.key in seen:
            continue
        seen.add(H.key)
        J = jump_profile(G, H)
        if any(w != 1 for _, w in J.jumps):
            return False
        if len({j % 2 for j in J.jump_indices}) > 1:
            return False
    return True


def is_elementary_abelian(G, H):
    gens = list(H.gens)
    if any(G.mul(a, b) != G.mul(b, a) for a in gens for b in gens):
        return False
    return all(G.power(int(h), G.p) == 0 for h in H.members)


def kappa_g2_holds(G):
    """A kappa-group of class 4 with |G_4| = 3 has elementary abelian G_2."""
    S = series(G)
    if not (is_kappa_group(G) and S.nilpotency_class == 4 and len(S.term(4)) == 3):
        return True
    return is_elementary_abelian(G, S.term(2))


def lcs_matches_all_pairs(G):
    """Recompute each G_{i+1} from all commutators [g, h], g in G, h in G_i."""
    S = series(G)
    for i in range(1, S.nilpotency_class + 1):
        Gi = S.term(i)
        comms = sorted({G.commutator(g, int(h)) for g in range(G.n) for h in Gi.members} - {0})
        H = subgroup_generated(G, comms) if comms else trivial_subgroup(G)
        if H != S.term(i + 1):
            return False
    return True
