"""Automorphisms from generator images, the intense predicate, and intensity.

Every intense automorphism of a p-group acts on G/Phi(G) as a scalar, and
the kernel of the intense character has a cyclic complement, so each
realized scalar has a witness acting as that scalar. The search therefore
runs over generator images g_i -> g_i^lam * phi_i with phi_i in Phi(G).
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .groups import (CapacityExceeded, all_subgroups, class_of_subgroup, coset_labels,
                     subgroup_conjugacy_classes, subgroup_index_map)
from .structure import _minimal_generators, frattini, series

NON_SCALAR = "non-scalar"
DEFAULT_CANDIDATE_BUDGET = 2_000_000


class NotAHomomorphism(ValueError):
    pass


class NotBijective(ValueError):
    pass


class GeneratorTree:
    """Breadth-first spanning tree of G for an arbitrary generating list.

    ``layers`` holds (elements, parents, generator positions) per BFS layer so
    that a homomorphism can be extended layer by layer with array operations.
    """

    def __init__(self, G, gens):
        self.G = G
        self.gens = [int(g) for g in gens]
        n = G.n
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        frontier = np.zeros(1, dtype=np.int64)
        self.layers = []
        while len(frontier):
            elems, parents, gpos = [], [], []
            for s, g in enumerate(self.gens):
                nxt = G.mul_many(frontier, g)
                fresh = ~seen[nxt]
                # keep the first occurrence within this batch
                cand, first = np.unique(nxt[fresh], return_index=True)
                seen[cand] = True
                elems.append(cand)
                parents.append(frontier[fresh][first])
                gpos.append(np.full(len(cand), s, dtype=np.int64))
            e = np.concatenate(elems)
            if len(e) == 0:
                break
            self.layers.append((e, np.concatenate(parents), np.concatenate(gpos)))
            frontier = e
        if not seen.all():
            raise ValueError("the given elements do not generate G")

    def extend(self, images):
        """Word-wise extension perm with perm(parent * g_s) = perm(parent) * images[s]."""
        G = self.G
        perm = np.zeros(G.n, dtype=np.int64)
        imgs = np.asarray(images, dtype=np.int64)
        for e, par, s in self.layers:
            perm[e] = G.mul_many(perm[par], imgs[s])
        return perm


def _tree(G, gens):
    key = ("tree", tuple(int(g) for g in gens))
    if key not in G._cache:
        G._cache[key] = GeneratorTree(G, gens)
    return G._cache[key]


@dataclass
class Automorphism:
    gens: list
    images: list
    perm: np.ndarray
    scalar: object = None
    p: int | None = None

    def __call__(self, x):
        return int(self.perm[x])

    def order(self):
        ar = np.arange(len(self.perm))
        cur, k = self.perm.copy(), 1
        while not (cur == ar).all():
            cur = self.perm[cur]
            k += 1
        return k

    def compose(self, other):
        """self after other."""
        scalar = None
        if isinstance(self.scalar, int) and isinstance(other.scalar, int) and self.p:
            scalar = (self.scalar * other.scalar) % self.p
        return Automorphism(other.gens, [int(self.perm[x]) for x in other.images],
                            self.perm[other.perm], scalar, self.p)


def _homomorphism_ok(G, gens, images, perm):
    """perm(x g) = perm(x) perm(g) for every element x and every generator g."""
    ar = np.arange(G.n)
    for g, img in zip(gens, images):
        if not (perm[G.mul_many(ar, g)] == G.mul_many(perm, img)).all():
            return False
    return True


def automorphism_from_generator_images(G, images, gens=None):
    gens = list(G.generators if gens is None else gens)
    images = [int(x) for x in images]
    if len(images) != len(gens):
        raise ValueError("need one image per generator")
    perm = _tree(G, gens).extend(images)
    if not _homomorphism_ok(G, gens, images, perm):
        raise NotAHomomorphism("generator images do not extend to a homomorphism")
    if perm[0] != 0 or len(np.unique(perm)) != G.n:
        raise NotBijective("extension is not a bijection")
    alpha = Automorphism(gens, images, perm, p=G.p)
    alpha.scalar = frattini_scalar(G, alpha)
    return alpha


def identity_automorphism(G):
    return automorphism_from_generator_images(G, G.generators)


def inner_automorphism(G, g):
    return automorphism_from_generator_images(G, [G.conj(g, s) for s in G.generators])


def frattini_scalar(G, alpha):
    """lam in F_p^* with alpha(x) = x^lam mod Phi(G), or NON_SCALAR."""
    if G.n == 1:
        return 1
    Phi = frattini(G)
    p = G.p
    for lam in range(1, p):
        if all(G.mul(int(alpha.perm[g]), G.power(g, -lam)) in Phi for g in G.generators):
            return lam
    return NON_SCALAR


def is_intense(G, alpha):
    """alpha maps each subgroup (class representative) into its own conjugacy class."""
    classes = subgroup_conjugacy_classes(G)
    subs = all_subgroups(G)
    idx = subgroup_index_map(G)
    class_of = class_of_subgroup(G)
    perm = alpha.perm
    for cid in _class_check_order(G):
        H = subs[classes[cid][0]]
        img = np.sort(perm[H.members]).astype(np.int32).tobytes()
        if class_of[idx[img]] != cid:
            return False
    return True


def _class_check_order(G):
    """Class ids ordered by representative size (cyclic, small subgroups fail first)."""
    if "class_order" not in G._cache:
        classes = subgroup_conjugacy_classes(G)
        subs = all_subgroups(G)
        G._cache["class_order"] = sorted(range(len(classes)),
                                         key=lambda c: (len(subs[classes[c][0]]), c))
    return G._cache["class_order"]


@dataclass
class IntensityReport:
    fingerprint: dict
    generators: list
    realized: list
    intensity: int
    witnesses: dict = field(default_factory=dict)
    candidates_examined: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self):
        return {
            "fingerprint": self.fingerprint,
            "generators": self.generators,
            "realizedScalars": self.realized,
            "intensity": self.intensity,
            "witnesses": {str(k): v for k, v in sorted(self.witnesses.items())},
            "candidatesExamined": {str(k): v for k, v in sorted(self.candidates_examined.items())},
            "seconds": round(self.seconds, 3),
        }


def fingerprint(G):
    out = {"name": G.name, "order": G.n, "p": G.p}
    if G.n > 1:
        out["widths"] = series(G).widths
    return out


def _search_lambda(G, gens, lam, budget):
    """First (lexicographic) intense automorphism acting as lam on G/Phi, or None."""
    Phi = frattini(G)
    orders = G.orders()
    tree = _tree(G, gens)
    cosets = []
    for g in gens:
        base = G.power(g, lam)
        coset = np.sort(G.mul_many(np.full(len(Phi), base), Phi.members))
        coset = coset[orders[coset] == orders[g]]
        cosets.append(coset.tolist())
    total = 1
    for c in cosets:
        total *= len(c)
    if total > budget:
        raise CapacityExceeded(f"{total} candidates for lambda={lam} exceed budget {budget}")
    examined = 0
    for images in itertools.product(*cosets):
        examined += 1
        perm = tree.extend(images)
        if not _homomorphism_ok(G, gens, images, perm):
            continue
        if len(np.unique(perm)) != G.n:
            continue
        alpha = Automorphism(list(gens), list(images), perm, lam, G.p)
        if is_intense(G, alpha):
            return alpha, examined
    return None, examined


def intensity(G, budget=DEFAULT_CANDIDATE_BUDGET, threads=1):
    t0 = time.perf_counter()
    fp = fingerprint(G)
    if G.n == 1 or G.p == 2:
        # F_p^* is trivial for p = 2; the identity realizes the scalar 1
        return IntensityReport(fp, list(G.generators), [1], 1, {1: list(G.generators)}, {1: 0},
                               time.perf_counter() - t0)
    if G.table is None:
        raise CapacityExceeded("intensity needs a tabulated group (order <= 4096)")
    gens = _minimal_generators(G)
    subgroup_conjugacy_classes(G)
    lams = list(range(1, G.p))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda l: _search_lambda(G, gens, l, budget), lams))
    else:
        results = [_search_lambda(G, gens, l, budget) for l in lams]
    realized, witnesses, examined = [], {}, {}
    for lam, (alpha, count) in zip(lams, results):
        examined[lam] = count
        if alpha is not None:
            realized.append(lam)
            witnesses[lam] = [int(x) for x in alpha.images]
    _assert_subgroup_of_units(realized, G.p)
    return IntensityReport(fp, [int(g) for g in gens], realized, len(realized), witnesses,
                           examined, time.perf_counter() - t0)


def _assert_subgroup_of_units(realized, p):
    s = set(realized)
    assert 1 in s, "scalar 1 not realized"
    assert all((a * b) % p in s for a in s for b in s), "realized scalars not closed"


def brute_force_intense_scalars(G, limit=81):
    """Character image of Int(G) from every generator-image tuple (small groups only)."""
    if G.n > limit:
        raise CapacityExceeded(f"brute force limited to order <= {limit}")
    if G.n == 1:
        return [1], 1
    gens = _minimal_generators(G) if G.p else list(G.generators)
    orders = G.orders()
    tree = _tree(G, gens)
    pools = [np.flatnonzero(orders == orders[g]).tolist() for g in gens]
    scalars = set()
    n_intense = 0
    for images in itertools.product(*pools):
        perm = tree.extend(images)
        if not _homomorphism_ok(G, gens, images, perm) or len(np.unique(perm)) != G.n:
            continue
        alpha = Automorphism(list(gens), list(images), perm)
        if is_intense(G, alpha):
            n_intense += 1
            lam = frattini_scalar(G, alpha)
            assert lam != NON_SCALAR, "intense automorphism not scalar on G/Phi"
            scalars.add(lam)
    return sorted(scalars), n_intense


def brute_force_intensity(G, limit=81):
    scalars, _ = brute_force_intense_scalars(G, limit)
    return 1 if G.p == 2 else len(scalars)


def induced_automorphism(Q, alpha):
    """Automorphism of a QuotientTable Q = G/N induced by alpha (N must be alpha-stable)."""
    G = Q.parent_group
    if not np.isin(alpha.perm[Q.kernel.members], Q.kernel.members).all():
        raise ValueError("kernel is not alpha-stable")
    images = [int(Q.projection[alpha.perm[g]]) for g in G.generators]
    return automorphism_from_generator_images(Q, images)


def stabilizes_normal_subgroups(G, alpha):
    from .groups import is_normal
    for H in all_subgroups(G):
        if is_normal(G, H):
            if not np.isin(alpha.perm[H.members], H.members).all():
                return False
    return True


def minus_one_powers_check(G, alpha):
    """alpha acts as (-1)^i on every layer G_i/G_{i+1}."""
    S = series(G)
    if alpha.order() != 2:
        raise ValueError("alpha must have order 2")
    if S.nilpotency_class < 3:
        raise ValueError("need class >= 3")
    if not is_intense(G, alpha):
        raise ValueError("alpha must be intense")
    for i in range(1, S.nilpotency_class + 1):
        Gi, Gn = S.term(i), S.term(i + 1)
        lab = coset_labels(G, Gn)
        xs = Gi.members
        target = xs if i % 2 == 0 else G.inverse[xs]
        if not (lab[alpha.perm[xs]] == lab[target]).all():
            return False
    return True


# --- named automorphisms -----------------------------------------------------------

def alpha_yo(Y):
    """s + ti + uj + vk -> s - ti - uj + vk on the 729-element group."""
    alg = Y.meta["algebra"]
    R = alg.ring
    perm = np.array([Y._index[(x[0], R.neg(x[1]), R.neg(x[2]), x[3])] for x in Y.elements],
                    dtype=np.int64)
    images = [int(perm[g]) for g in Y.generators]
    alpha = automorphism_from_generator_images(Y, images)
    if not (alpha.perm == perm).all():
        raise AssertionError("coordinate formula disagrees with the generator extension")
    return alpha


def scalar_automorphism_extraspecial(G, m):
    """a_m: scales X and Y by m (and Z by m^2) on G(Z,Y,X,theta)."""
    return automorphism_from_generator_images(G, [G.power(g, m) for g in G.generators])
