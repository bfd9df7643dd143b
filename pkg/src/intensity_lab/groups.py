"""Finite groups as interned index tables.

A :class:`GroupTable` numbers its elements ``0..n-1`` in breadth-first order
from a generating seed (index 0 is the identity) and records, for every
element, the edge ``(parent, generator)`` through which it was discovered.
Right multiplication by the seed generators is always tabulated; the full
``n x n`` multiplication table is materialised when ``n <= TABLE_LIMIT``,
otherwise products go through the ambient arithmetic and an interning map.
"""
from __future__ import annotations

import json
import struct
from collections import deque

import numpy as np

from .rings import is_prime

TABLE_LIMIT = 4096
DEFAULT_MAX_ORDER = 2_000_000
DEFAULT_MAX_SUBGROUPS = 500_000


class CapacityExceeded(RuntimeError):
    pass


class NotNormal(ValueError):
    pass


def _prime_power(n):
    """(p, e) with n = p^e, or (None, None)."""
    if n == 1:
        return None, 0
    p = 2
    while n % p:
        p += 1
    e, m = 0, n
    while m % p == 0:
        m //= p
        e += 1
    return (p, e) if m == 1 else (None, None)


def _index_dtype(n):
    return np.int16 if n < 2 ** 15 else np.int32


class GroupTable:
    def __init__(self, right, inverse, parent, parent_gen, generators, elements=None,
                 ambient_mul=None, index=None, name="", meta=None):
        self.n = len(inverse)
        self.right = right
        self.inverse = inverse
        self.parent = parent
        self.parent_gen = parent_gen
        self.generators = list(generators)
        self.elements = elements
        self._ambient_mul = ambient_mul
        self._index = index
        self.name = name
        self.meta = dict(meta or {})
        self.p, self.log_order = _prime_power(self.n)
        self.table = None
        self._cache = {}
        self._order_cache = {}
        if self.n <= TABLE_LIMIT:
            self.table = self._derive_table()

    def __repr__(self):
        return f"GroupTable({self.name or '?'}, order={self.n})"

    def __len__(self):
        return self.n

    @property
    def order(self):
        return self.n

    @property
    def identity(self):
        return 0

    # --- multiplication -------------------------------------------------
    def _derive_table(self):
        n = self.n
        T = np.empty((n, n), dtype=_index_dtype(n))
        T[:, 0] = np.arange(n)
        # x * y = (x * parent(y)) * gen(y), columns filled in BFS order
        for y in range(1, n):
            T[:, y] = self.right[T[:, self.parent[y]], self.parent_gen[y]]
        return T

    def mul(self, i, j):
        if self.table is not None:
            return int(self.table[i, j])
        if j == 0:
            return i
        if self._ambient_mul is not None:
            return self._ambient_mul(i, j)
        # no ambient arithmetic (e.g. loaded snapshot): walk the word of j
        w = self.word(j)
        for g in w:
            i = int(self.right[i, g])
        return i

    def inv(self, i):
        return int(self.inverse[i])

    def power(self, x, e):
        if e < 0:
            x, e = self.inv(x), -e
        out, base = 0, x
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def commutator(self, x, y):
        """[x, y] = x y x^-1 y^-1."""
        return self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))

    def conj(self, g, x):
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def mul_many(self, xs, y):
        """Elementwise xs[k] * y (y scalar or array)."""
        xs = np.asarray(xs)
        if self.table is not None:
            return self.table[xs, y].astype(np.int64)
        if np.ndim(y) == 0:
            return np.array([self.mul(int(x), int(y)) for x in xs], dtype=np.int64)
        return np.array([self.mul(int(x), int(b)) for x, b in zip(xs, y)], dtype=np.int64)

    def left_many(self, g, ys):
        ys = np.asarray(ys)
        if self.table is not None:
            return self.table[g, ys].astype(np.int64)
        return np.array([self.mul(int(g), int(y)) for y in ys], dtype=np.int64)

    def conj_many(self, g, xs):
        """g x g^-1 for every x in xs."""
        return self.mul_many(self.left_many(g, xs), self.inv(g))

    def word(self, i):
        """Generator positions spelling element i from the identity."""
        out = []
        while i != 0:
            out.append(int(self.parent_gen[i]))
            i = int(self.parent[i])
        return out[::-1]

    # --- element orders and power maps ----------------------------------
    def element_order(self, x):
        if x in self._order_cache:
            return self._order_cache[x]
        k, y = 1, x
        while y != 0:
            y = self.mul(y, x)
            k += 1
        self._order_cache[x] = k
        return k

    def orders(self):
        if "orders" not in self._cache:
            if self.table is not None:
                ar = np.arange(self.n)
                cur = ar.copy()
                orders = np.zeros(self.n, dtype=np.int64)
                k = 1
                while True:
                    done = (cur == 0) & (orders == 0)
                    orders[done] = k
                    if (orders > 0).all():
                        break
                    cur = self.table[cur, ar].astype(np.int64)
                    k += 1
            else:
                orders = np.array([self.element_order(x) for x in range(self.n)])
            self._cache["orders"] = orders
        return self._cache["orders"]

    def power_map(self, e):
        """Array x -> x^e over all elements."""
        key = ("pow", e)
        if key not in self._cache:
            if self.table is not None:
                out = np.zeros(self.n, dtype=np.int64)
                base = np.arange(self.n)
                while e:
                    if e & 1:
                        out = self.table[out, base].astype(np.int64)
                    base = self.table[base, base].astype(np.int64)
                    e >>= 1
                self._cache[key] = out
            else:
                self._cache[key] = np.array([self.power(x, e) for x in range(self.n)], dtype=np.int64)
        return self._cache[key]

    def exponent(self):
        return int(np.lcm.reduce(self.orders())) if self.n > 1 else 1

    def is_abelian(self):
        g = self.generators
        return all(self.mul(a, b) == self.mul(b, a) for a in g for b in g)

    # --- validation ---------------------------------------------------------
    def validate(self, samples=100_000, seed=0):
        """Identity, inverses, generator consistency and random associativity."""
        n = self.n
        ar = np.arange(n)
        if self.table is not None:
            T = self.table
            assert (T[0] == ar).all() and (T[:, 0] == ar).all(), "identity"
            assert (T[ar, self.inverse] == 0).all(), "inverse"
            for s, g in enumerate(self.generators):
                assert (T[:, g] == self.right[:, s]).all(), "generator column"
            rng = np.random.default_rng(seed)
            a, b, c = rng.integers(0, n, size=(3, samples))
            assert (T[T[a, b], c] == T[a, T[b, c]]).all(), "associativity"
            # each row a permutation (Latin square)
            assert all(len(np.unique(T[x])) == n for x in range(0, n, max(1, n // 64))), "latin"
        else:
            rng = np.random.default_rng(seed)
            for _ in range(min(samples, 2000)):
                a, b, c = (int(v) for v in rng.integers(0, n, size=3))
                assert self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)), "associativity"
            for x in rng.integers(0, n, size=min(n, 2000)):
                assert self.mul(int(x), self.inv(int(x))) == 0, "inverse"
        # reachability: every parent chain reaches the identity
        assert self.parent[0] == -1 and all(self.parent[i] < i for i in range(1, n)), "parent words"
        return True


def closure(seed, mul, inv, identity=None, max_order=DEFAULT_MAX_ORDER, name="", meta=None):
    """Intern the group generated by ``seed`` inside an ambient monoid.

    Elements are discovered breadth-first, multiplying on the right by the
    seed elements in order, so indexing is deterministic.
    """
    seed = list(seed)
    if identity is None:
        if not seed:
            identity = None
        else:
            identity = mul(seed[0], inv(seed[0]))
    elements = [identity]
    index = {identity: 0}
    parent = [-1]
    parent_gen = [-1]
    ngens = len(seed)
    right_rows = []
    pos = 0
    while pos < len(elements):
        x = elements[pos]
        row = []
        for s, g in enumerate(seed):
            y = mul(x, g)
            j = index.get(y)
            if j is None:
                j = len(elements)
                if j >= max_order:
                    raise CapacityExceeded(f"group order exceeds {max_order}")
                index[y] = j
                elements.append(y)
                parent.append(pos)
                parent_gen.append(s)
            row.append(j)
        right_rows.append(row)
        pos += 1
    n = len(elements)
    dt = np.int64
    right = np.array(right_rows, dtype=dt).reshape(n, ngens)
    inverse = np.array([index[inv(x)] for x in elements], dtype=dt) if n > 1 else np.zeros(1, dtype=dt)
    gens = [index[g] for g in seed]

    def ambient_mul(i, j):
        return index[mul(elements[i], elements[j])]

    return GroupTable(right, inverse, np.array(parent), np.array(parent_gen), gens,
                      elements=elements, ambient_mul=ambient_mul, index=index, name=name, meta=meta)


# --- subgroups ------------------------------------------------------------

class Subgroup:
    """Canonical sorted member array plus a generating list."""

    __slots__ = ("members", "gens", "_key", "_set")

    def __init__(self, members, gens=()):
        self.members = np.asarray(members, dtype=np.int64)
        self.gens = tuple(int(g) for g in gens)
        self._key = None
        self._set = None

    @property
    def order(self):
        return len(self.members)

    def __len__(self):
        return len(self.members)

    @property
    def key(self):
        if self._key is None:
            self._key = self.members.astype(np.int32).tobytes()
        return self._key

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __contains__(self, x):
        if self._set is None:
            self._set = frozenset(self.members.tolist())
        return int(x) in self._set

    def issubset(self, other):
        return len(self) <= len(other) and bool(np.isin(self.members, other.members).all())

    def mask(self, n):
        m = np.zeros(n, dtype=bool)
        m[self.members] = True
        return m

    def __repr__(self):
        return f"Subgroup(order={len(self)}, gens={list(self.gens)})"


def _canonical(members, gens):
    return Subgroup(np.unique(np.asarray(members, dtype=np.int64)), gens)


def whole_group(G):
    if "whole" not in G._cache:
        G._cache["whole"] = Subgroup(np.arange(G.n), [g for g in G.generators if g != 0])
    return G._cache["whole"]


def trivial_subgroup(G):
    return Subgroup(np.zeros(1, dtype=np.int64), ())


def _closure_members(G, gens):
    """Members of the subgroup generated by gens (right-multiplication closure)."""
    gens = [int(g) for g in gens if g != 0]
    if G.table is not None:
        mask = np.zeros(G.n, dtype=bool)
        mask[0] = True
        frontier = np.zeros(1, dtype=np.int64)
        T = G.table
        while len(frontier) and gens:
            cand = np.unique(T[frontier][:, gens].ravel())
            new = cand[~mask[cand]]
            mask[new] = True
            frontier = new
        return np.flatnonzero(mask)
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return np.array(sorted(seen), dtype=np.int64)


def subgroup_generated(G, gens):
    gens = [int(g) for g in gens]
    members = _closure_members(G, gens)
    return Subgroup(members, [g for g in dict.fromkeys(gens) if g != 0])


def join(G, H, extra):
    """Subgroup generated by H and the elements of ``extra``."""
    gens = list(H.gens) + [int(x) for x in extra]
    return subgroup_generated(G, gens)


def product_with_normal(G, H, N):
    """H N for N normal in G (given as subgroups)."""
    return subgroup_generated(G, list(H.gens) + list(N.gens))


def commutator(G, x, y):
    return G.commutator(x, y)


def power(G, x, e):
    return G.power(x, e)


def center(G):
    return centralizer(G, G.generators)


def centralizer(G, S):
    S = [int(s) for s in (S.gens if isinstance(S, Subgroup) else S)]
    if G.table is not None:
        T = G.table
        mask = np.ones(G.n, dtype=bool)
        for s in S:
            mask &= T[:, s] == T[s, :]
        members = np.flatnonzero(mask)
    else:
        members = [x for x in range(G.n) if all(G.mul(x, s) == G.mul(s, x) for s in S)]
    return _with_gens(G, members)


def _with_gens(G, members):
    """Wrap a known-closed member set, choosing a small generating list."""
    members = np.asarray(members, dtype=np.int64)
    gens = []
    cur = np.zeros(1, dtype=np.int64)
    target = len(members)
    cur_set = None
    if G.table is not None:
        mask = np.zeros(G.n, dtype=bool)
        mask[0] = True
        order_by = members[np.argsort(-G.orders()[members], kind="stable")]
        for x in order_by:
            if len(cur) == target:
                break
            if not mask[x]:
                gens.append(int(x))
                cur = _closure_members(G, gens)
                mask[cur] = True
    else:
        cur_set = {0}
        for x in members:
            if len(cur_set) == target:
                break
            if int(x) not in cur_set:
                gens.append(int(x))
                cur_set = set(_closure_members(G, gens).tolist())
    return Subgroup(members, gens)


def conjugate(G, H, g):
    return _canonical(G.conj_many(g, H.members), [G.conj(g, h) for h in H.gens])


def normalizer(G, H):
    if G.table is not None:
        T = G.table
        ar = np.arange(G.n)
        mask = np.ones(G.n, dtype=bool)
        hmask = H.mask(G.n)
        for h in H.gens:
            conj = T[T[ar, h], G.inverse].astype(np.int64)
            mask &= hmask[conj]
        return _with_gens(G, np.flatnonzero(mask))
    members = [g for g in range(G.n) if all(G.conj(g, h) in H for h in H.gens)]
    return _with_gens(G, members)


def is_normal(G, H):
    return all(G.conj(g, h) in H for g in G.generators for h in H.gens)


def normal_closure(G, S):
    gens = [int(s) for s in (S.gens if isinstance(S, Subgroup) else S) if s != 0]
    H = subgroup_generated(G, gens)
    changed = True
    while changed:
        changed = False
        for g in G.generators:
            for h in list(H.gens):
                c = G.conj(g, h)
                if c not in H:
                    H = subgroup_generated(G, list(H.gens) + [c])
                    changed = True
    return H


def intersection(H, K):
    members = np.intersect1d(H.members, K.members)
    return Subgroup(members, ())


def power_subgroup(G, H, e=None):
    """H^e = <h^e : h in H> (default e = p)."""
    if e is None:
        e = G.p
    if G.table is not None and len(H) == G.n:
        pw = G.power_map(e)
    else:
        pw = None
    powers = set()
    for h in H.members:
        powers.add(int(pw[h]) if pw is not None else G.power(int(h), e))
    powers.discard(0)
    return subgroup_generated(G, sorted(powers)) if powers else trivial_subgroup(G)


def commutator_subgroup(G, H, K, K_normal_in=None):
    """[H, K] = normal closure in <H, K> of commutators of generators.

    Valid when H and K normalise each other's generated closures the usual
    way; for the uses here (K normal in G, H = G or H normal) this holds.
    """
    comms = [G.commutator(h, k) for h in H.gens for k in K.gens]
    ambient = K_normal_in
    if ambient is None:
        ambient = H if K.issubset(H) else subgroup_generated(G, list(H.gens) + list(K.gens))
    return _normal_closure_in(G, ambient, comms)


def _normal_closure_in(G, A, S):
    """Normal closure of S inside the subgroup A."""
    H = subgroup_generated(G, [s for s in S if s != 0])
    changed = True
    while changed:
        changed = False
        for g in A.gens:
            for h in list(H.gens):
                c = G.conj(g, h)
                if c not in H:
                    H = subgroup_generated(G, list(H.gens) + [c])
                    changed = True
    return H


# --- quotients -----------------------------------------------------------

class QuotientTable(GroupTable):
    """G/N as a GroupTable whose elements are canonical coset representatives."""

    parent_group: GroupTable
    kernel: Subgroup
    coset_rep: np.ndarray
    projection: np.ndarray

    def lift(self, q):
        return int(self.elements[q])


def coset_labels(G, N):
    """Minimum element of each coset xN, for every x."""
    labels = np.full(G.n, -1, dtype=np.int64)
    Nm = N.members
    for x in range(G.n):
        if labels[x] < 0:
            labels[G.mul_many(np.full(len(Nm), x), Nm) if G.table is None else G.table[x, Nm].astype(np.int64)] = x
    return labels


def quotient(G, N):
    if not is_normal(G, N):
        raise NotNormal("kernel is not normal")
    rep = coset_labels(G, N)
    seed = [int(rep[g]) for g in G.generators]
    Q = closure(seed, lambda a, b: int(rep[G.mul(a, b)]), lambda a: int(rep[G.inv(a)]),
                identity=0, name=f"{G.name}/N{len(N)}", meta=dict(G.meta))
    Q.__class__ = QuotientTable
    Q.parent_group = G
    Q.kernel = N
    Q.coset_rep = rep
    Q.projection = np.array([Q._index[int(r)] for r in rep], dtype=np.int64)
    assert Q.n * len(N) == G.n
    return Q


# --- subgroup lattice ------------------------------------------------------

def all_subgroups(G, max_count=DEFAULT_MAX_SUBGROUPS):
    """Every subgroup of a p-group, layer by layer via cyclic extensions.

    A subgroup of order p^(j+1) is <S, x> for some S of order p^j and
    x in N_G(S) \\ S with x^p in S.
    """
    if "subgroups" in G._cache:
        return G._cache["subgroups"]
    if G.n == 1:
        G._cache["subgroups"] = [trivial_subgroup(G)]
        return G._cache["subgroups"]
    p = G.p
    if p is None:
        raise ValueError("all_subgroups needs a group of prime-power order")
    pw = G.power_map(p)
    layer = [trivial_subgroup(G)]
    out = list(layer)
    T = G.table
    while layer and len(layer[0]) < G.n:
        found = {}
        for S in layer:
            N = normalizer(G, S)
            smask = S.mask(G.n)
            covered = smask.copy()
            cand = N.members[~smask[N.members]]
            cand = cand[smask[pw[cand]]]
            for x in cand:
                if covered[x]:
                    continue
                x = int(x)
                # <S, x> = union of S x^k, k < p
                parts = [S.members]
                xk = x
                for _ in range(p - 1):
                    parts.append(G.mul_many(S.members, xk) if T is None else T[S.members, xk].astype(np.int64))
                    xk = G.mul(xk, x)
                members = np.sort(np.concatenate(parts))
                covered[members] = True
                key = members.astype(np.int32).tobytes()
                if key not in found:
                    found[key] = Subgroup(members, S.gens + (x,))
                    if len(out) + len(found) > max_count:
                        raise CapacityExceeded(f"more than {max_count} subgroups")
        layer = [found[k] for k in sorted(found)]
        out.extend(layer)
    G._cache["subgroups"] = out
    return out


def subgroup_index_map(G):
    if "subgroup_index" not in G._cache:
        G._cache["subgroup_index"] = {H.key: i for i, H in enumerate(all_subgroups(G))}
    return G._cache["subgroup_index"]


def subgroup_conjugacy_classes(G):
    """Partition of all_subgroups(G) into conjugation orbits (lists of indices)."""
    if "classes" in G._cache:
        return G._cache["classes"]
    subs = all_subgroups(G)
    idx = subgroup_index_map(G)
    class_of = np.full(len(subs), -1, dtype=np.int64)
    classes = []
    gens = [g for g in G.generators if g != 0]
    for i, H in enumerate(subs):
        if class_of[i] >= 0:
            continue
        cid = len(classes)
        orbit = [i]
        class_of[i] = cid
        queue = deque([i])
        while queue:
            K = subs[queue.popleft()]
            for g in gens:
                conj = np.sort(G.conj_many(g, K.members))
                j = idx[conj.astype(np.int32).tobytes()]
                if class_of[j] < 0:
                    class_of[j] = cid
                    orbit.append(j)
                    queue.append(j)
        classes.append(sorted(orbit))
    G._cache["classes"] = classes
    G._cache["class_of"] = class_of
    return classes


def class_of_subgroup(G):
    subgroup_conjugacy_classes(G)
    return G._cache["class_of"]


# --- binary snapshots ------------------------------------------------------

MAGIC = b"IGRP"
SNAPSHOT_VERSION = 1


def save_snapshot(G, path, descriptor=None):
    """Versioned binary dump: header, Cayley data, optional full table, JSON descriptor."""
    n = G.n
    ngens = len(G.generators)
    has_table = G.table is not None
    desc = json.dumps(descriptor or {}, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<HIIIBI", SNAPSHOT_VERSION, n, G.p or 0, ngens, int(has_table), len(desc)))
        fh.write(np.asarray(G.generators, dtype="<i4").tobytes())
        fh.write(G.right.astype("<i4").tobytes())
        fh.write(G.inverse.astype("<i4").tobytes())
        fh.write(G.parent.astype("<i4").tobytes())
        fh.write(G.parent_gen.astype("<i4").tobytes())
        if has_table:
            fh.write(G.table.astype("<i4").tobytes())
        fh.write(desc)


def load_snapshot(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != MAGIC:
        raise ValueError("not an IGRP snapshot")
    hdr = struct.calcsize("<HIIIBI")
    version, n, p, ngens, has_table, dlen = struct.unpack("<HIIIBI", data[4:4 + hdr])
    if version != SNAPSHOT_VERSION:
        raise ValueError(f"unsupported snapshot version {version}")
    off = 4 + hdr

    def take(count, shape=None):
        nonlocal off
        arr = np.frombuffer(data, dtype="<i4", count=count, offset=off).astype(np.int64)
        off += 4 * count
        return arr.reshape(shape) if shape else arr

    gens = take(ngens)
    right = take(n * ngens, (n, ngens))
    inverse = take(n)
    parent = take(n)
    parent_gen = take(n)
    table = take(n * n, (n, n)) if has_table else None
    descriptor = json.loads(data[off:off + dlen].decode() or "{}")
    G = GroupTable(right, inverse, parent, parent_gen, gens.tolist(), meta={"descriptor": descriptor})
    if table is not None and G.table is not None:
        assert (G.table == table).all(), "snapshot table mismatch"
    return G, descriptor


def lower_central_series(G):
    """[G_1, G_2, ...] down to the trivial subgroup (nilpotent G assumed).

    G_{i+1} is the normal closure of commutators of generators of G with
    generators of G_i, which equals [G, G_i] because G_i is normal.
    """
    if "lcs" in G._cache:
        return G._cache["lcs"]
    terms = [whole_group(G)]
    while len(terms[-1]) > 1:
        cur = terms[-1]
        comms = [G.commutator(g, h) for g in G.generators for h in cur.gens]
        nxt = normal_closure(G, comms)
        if len(nxt) == len(cur):
            raise ValueError("group is not nilpotent")
        terms.append(nxt)
    G._cache["lcs"] = terms
    return terms
