"""Constructors for the concrete group families, plus the JSON group spec."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .groups import (DEFAULT_MAX_ORDER, closure, lower_central_series, quotient)
from .rings import (CoefficientRing, DeltaTruncation, Mat2, Quaternion, QuaternionAlgebra,
                    is_nonresidue, is_prime, mat_det, mat_inv, mat_mul, smallest_nonresidue,
                    sqrt_one_mod)

SPEC_KINDS = ("abelian", "extraspecial", "semidirect_cyclic", "direct_product",
              "yo", "sn_delta", "sl2_triangle")
SPEC_KEYS = {"kind", "p", "type", "n", "exponent", "M", "k", "t", "u", "m", "factors"}


class SpecError(ValueError):
    pass


class ConstructionMismatch(RuntimeError):
    """Closure and independent filter disagree."""


def _need_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise SpecError(f"p={p!r} is not a prime")


@dataclass
class GroupSpec:
    kind: str
    p: Optional[int] = None
    type: Optional[list] = None
    n: Optional[int] = None
    exponent: Optional[str] = None
    M: Optional[int] = None
    k: Optional[int] = None
    t: Optional[int] = None
    u: Optional[int] = None
    m: Optional[int] = None
    factors: Optional[list] = None

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise SpecError("group spec must be a JSON object")
        extra = set(d) - SPEC_KEYS
        if extra:
            raise SpecError(f"unknown keys in group spec: {sorted(extra)}")
        if "kind" not in d:
            raise SpecError("group spec needs a 'kind'")
        d = dict(d)
        if d.get("factors") is not None:
            d["factors"] = [cls.from_dict(f) for f in d["factors"]]
        spec = cls(**d)
        spec.validate()
        return spec

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    def to_dict(self):
        out = {}
        for key in sorted(SPEC_KEYS):
            v = getattr(self, key)
            if v is None:
                continue
            if key == "factors":
                v = [f.to_dict() for f in v]
            out[key] = v
        return out

    def canonical_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def content_hash(self):
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]

    def validate(self):
        kind = self.kind
        if kind not in SPEC_KINDS:
            raise SpecError(f"unknown kind {kind!r}")
        if self.exponent is not None and kind != "extraspecial":
            raise SpecError("'exponent' only applies to extraspecial groups")
        if self.M is not None and self.M < 1:
            raise SpecError("M must be >= 1")
        if kind == "abelian":
            _need_prime(self.p)
            if not self.type or any((not isinstance(a, int)) or a < 1 for a in self.type):
                raise SpecError("abelian 'type' must be a non-empty list of positive ints")
        elif kind == "extraspecial":
            _need_prime(self.p)
            if self.exponent not in (None, "p", "p2"):
                raise SpecError("exponent must be 'p' or 'p2'")
            if (self.n or 1) < 1:
                raise SpecError("n must be >= 1")
            if self.exponent == "p2" and (self.n or 1) != 1:
                raise SpecError("exponent p2 only with n=1")
        elif kind == "semidirect_cyclic":
            if None in (self.n, self.m, self.u):
                raise SpecError("semidirect_cyclic needs n, m, u")
        elif kind == "direct_product":
            if not self.factors:
                raise SpecError("direct_product needs factors")
        elif kind == "sn_delta":
            _need_prime(self.p)
            if self.p <= 3:
                raise SpecError("sn_delta needs p > 3")
            if self.M is None or self.M < 2:
                raise SpecError("sn_delta needs M >= 2")
            if self.t is not None and not is_nonresidue(self.t, self.p):
                raise SpecError(f"t={self.t} is not a non-residue mod {self.p}")
            if self.k is not None and not (1 <= self.k <= 2 * self.M):
                raise SpecError("need 1 <= k <= 2M")
        elif kind == "sl2_triangle":
            _need_prime(self.p)
            if self.p <= 3:
                raise SpecError("sl2_triangle needs p > 3")
            if self.M is None or self.M < 2:
                raise SpecError("sl2_triangle needs M >= 2")
            if self.k is not None and self.k < 1:
                raise SpecError("k must be >= 1")
        return self


def build(spec, max_order=DEFAULT_MAX_ORDER):
    """Construct the group described by a GroupSpec (or plain dict)."""
    if isinstance(spec, dict):
        spec = GroupSpec.from_dict(spec)
    spec.validate()
    kind = spec.kind
    if kind == "abelian":
        G = build_abelian(spec.p, spec.type)
    elif kind == "extraspecial":
        G = build_extraspecial(spec.p, spec.n or 1, spec.exponent or "p")
    elif kind == "semidirect_cyclic":
        G = build_semidirect_cyclic(spec.n, spec.m, spec.u)
    elif kind == "direct_product":
        G = build_direct_product([build(f, max_order) for f in spec.factors])
    elif kind == "yo":
        G = build_yo()
    elif kind == "sn_delta":
        G = build_sn_delta(spec.p, spec.t, spec.M, spec.k, max_order=max_order)
    else:
        G = build_sl2_triangle(spec.p, spec.M, spec.k, max_order=max_order)
    G.meta["spec"] = spec.to_dict()
    return G


def trivial_group():
    """closure of the empty seed."""
    return closure([], None, None, identity=0, name="trivial", meta={"family": "trivial"})


# --- small families --------------------------------------------------------

def build_abelian(p, type):
    _need_prime(p)
    mods = [p ** a for a in type]
    r = len(mods)

    def mul(x, y):
        return tuple((u + v) % q for u, v, q in zip(x, y, mods))

    def inv(x):
        return tuple(-u % q for u, q in zip(x, mods))

    seed = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    return closure(seed, mul, inv, identity=(0,) * r, name=f"abelian{p}^{list(type)}",
                   meta={"family": "abelian", "p": p, "type": list(type)})


def build_semidirect_cyclic(n, m, u):
    """Z/n x| Z/m, the generator of Z/m acting by multiplication by u."""
    if n < 1 or m < 1 or pow(u, m, n) != 1 % n:
        raise SpecError(f"need u^m = 1 mod n (u={u}, m={m}, n={n})")
    upow = [pow(u, b, n) for b in range(m)]

    def mul(x, y):
        return ((x[0] + upow[x[1]] * y[0]) % n, (x[1] + y[1]) % m)

    def inv(x):
        b = -x[1] % m
        return ((-upow[b] * x[0]) % n, b)

    seed = [(1 % n, 0), (0, 1 % m)]
    return closure(seed, mul, inv, identity=(0, 0), name=f"semidirect({n},{m},{u})",
                   meta={"family": "semidirect_cyclic", "n": n, "m": m, "u": u})


def build_extraspecial(p, n=1, exponent="p"):
    """G(Z,Y,X,theta) with theta the dot product; 'p2' gives Z/p^2 x| Z/p."""
    _need_prime(p)
    if exponent in ("p2", p * p):
        if n != 1:
            raise SpecError("exponent p^2 only with n=1")
        G = build_semidirect_cyclic(p * p, p, 1 + p)
        G.name = f"extraspecial{p}^3-exp{p * p}"
        G.meta.update(family="extraspecial", p=p, n=1, exponent="p2")
        return G
    if exponent not in ("p", p):
        raise SpecError("exponent must be 'p' or 'p2'")
    if n < 1:
        raise SpecError("n must be >= 1")

    # element (z, y_1..y_n, x_1..x_n)
    def mul(a, b):
        theta = sum(a[1 + n + i] * b[1 + i] for i in range(n))
        return ((a[0] + b[0] + theta) % p,) + tuple((u + v) % p for u, v in zip(a[1:], b[1:]))

    def inv(a):
        theta = sum(a[1 + n + i] * a[1 + i] for i in range(n))
        return ((theta - a[0]) % p,) + tuple(-u % p for u in a[1:])

    dim = 2 * n + 1
    # generators: x-basis then y-basis
    seed = [tuple(int(j == 1 + n + i) for j in range(dim)) for i in range(n)]
    seed += [tuple(int(j == 1 + i) for j in range(dim)) for i in range(n)]
    return closure(seed, mul, inv, identity=(0,) * dim, name=f"extraspecial{p}^{dim}-exp{p}",
                   meta={"family": "extraspecial", "p": p, "n": n, "exponent": "p"})


def build_direct_product(factors):
    factors = list(factors)
    r = len(factors)

    def mul(x, y):
        return tuple(F.mul(a, b) for F, a, b in zip(factors, x, y))

    def inv(x):
        return tuple(F.inv(a) for F, a in zip(factors, x))

    seed = []
    for i, F in enumerate(factors):
        for g in F.generators:
            seed.append(tuple(g if j == i else 0 for j in range(r)))
    return closure(seed, mul, inv, identity=(0,) * r, name=" x ".join(F.name for F in factors),
                   meta={"family": "direct_product", "factors": [F.name for F in factors]})


def build_dihedral8():
    G = build_semidirect_cyclic(4, 2, 3)
    G.name = "dihedral8"
    return G


# --- the 729-element group ---------------------------------------------------

def yo_algebra():
    return QuaternionAlgebra.yo()


def yo_generators(alg=None):
    """a = 1 - eps + i and b = 1 - eps + j."""
    alg = alg or yo_algebra()
    R = alg.ring
    one_minus_eps = R.sub(1, R.eps)
    return Quaternion(one_minus_eps, 1, 0, 0), Quaternion(one_minus_eps, 0, 1, 0)


def yo_filter_set(alg=None):
    """Every x in 1 + m with x * bar(x) = 1 (2187 candidates)."""
    alg = alg or yo_algebra()
    X = alg.all_elements_array()
    R = alg.ring
    # 1 + m: real part in 1 + eps*R
    X = X[(X[:, 0] % R.p) == 1]
    prod = alg.mul_arrays(X, alg.bar_arrays(X))
    keep = (prod[:, 0] == 1) & (prod[:, 1:] == 0).all(axis=1)
    return {Quaternion(*map(int, row)) for row in X[keep]}, len(X)


def build_yo(check=True):
    alg = yo_algebra()
    a, b = yo_generators(alg)
    G = closure([a, b], alg.mul, alg.bar, identity=alg.one(), name="Y",
                meta={"family": "yo", "p": 3})
    if check:
        members, candidates = yo_filter_set(alg)
        if candidates != 2187 or members != set(G.elements):
            raise ConstructionMismatch("closure of a, b differs from the norm-one filter")
    G.meta["algebra"] = alg
    return G


# --- norm-one group of the (t, p) algebra --------------------------------------

def sn_seed(p, t, precision):
    """Three norm-one elements of 1 + m: in the j, k and p*i directions."""
    q = p ** precision
    s1 = sqrt_one_mod((1 + p) % q, p, precision)
    s2 = sqrt_one_mod((1 - t * p) % q, p, precision)
    s3 = sqrt_one_mod((1 + t * p * p) % q, p, precision)
    return [Quaternion(s1, 0, 1, 0), Quaternion(s2, 0, 0, 1), Quaternion(s3, p % q, 0, 0)]


def sn_filter_count(p, t, M):
    """Vectorised count of x in 1 + m (mod p^M) with norm 1, and the size of 1 + m."""
    q = p ** M
    a = 1 + p * np.arange(p ** (M - 1), dtype=np.int64)
    b = p * np.arange(p ** (M - 1), dtype=np.int64)
    c = np.arange(q, dtype=np.int64)
    d = np.arange(q, dtype=np.int64)
    # norm = a^2 - t b^2 - p c^2 + t p d^2; split into (a, b) and (c, d) parts
    ab = (a[:, None] ** 2 - t * b[None, :] ** 2) % q
    cd = (-p * c[:, None] ** 2 + t * p * d[None, :] ** 2) % q
    hist_ab = np.bincount(ab.ravel(), minlength=q)
    hist_cd = np.bincount(cd.ravel(), minlength=q)
    # pairs with ab + cd = 1 mod q
    target = (1 - np.arange(q)) % q
    count = int((hist_ab * hist_cd[target]).sum())
    return count, len(a) * len(b) * q * q


def sn_filter_set(p, t, M):
    alg = QuaternionAlgebra.delta(p, t, M)
    q = p ** M
    out = set()
    for a in range(1, q, p):
        for b in range(0, q, p):
            for c in range(q):
                for d in range(q):
                    if (a * a - t * b * b - p * c * c + t * p * d * d) % q == 1:
                        out.add(Quaternion(a, b, c, d))
    assert all(alg.norm(x) == 1 for x in list(out)[:50])
    return out


def build_sn_delta(p, t=None, M=2, k=None, check=True, max_order=DEFAULT_MAX_ORDER):
    """Norm-one units of 1 + m in the (t, p) algebra mod p^M, or its quotient by G_k.

    G_k = (1 + m^k) ∩ G, so G/G_k is built directly as the closure of the
    seed inside Delta / m^k.
    """
    _need_prime(p)
    if p <= 3:
        raise SpecError("sn_delta needs p > 3")
    if M < 2:
        raise SpecError("sn_delta needs M >= 2")
    if t is None:
        t = smallest_nonresidue(p)
    if not is_nonresidue(t, p):
        raise SpecError(f"t={t} is not a non-residue mod {p}")
    if k is not None and not (1 <= k <= 2 * M):
        raise SpecError("need 1 <= k <= 2M")
    kk = 2 * M if k is None else k
    meta = {"family": "sn_delta", "p": p, "t": t, "M": M, "k": k,
            "note": f"identified with G/G_{2 * M} of the pro-p group"}
    if kk == 2 * M:
        alg = QuaternionAlgebra.delta(p, t, M)
        seed = sn_seed(p, t, M)
        G = closure(seed, alg.mul, alg.bar, identity=alg.one(), max_order=max_order,
                    name=f"Sn(D{p},t={t},M={M})", meta=meta)
        if check:
            count, ambient = sn_filter_count(p, t, M)
            if count != G.n:
                raise ConstructionMismatch(f"closure order {G.n} != filter count {count}")
            if ambient <= 10 ** 6 and set(G.elements) != sn_filter_set(p, t, M):
                raise ConstructionMismatch("closure differs from the norm-one filter set")
            bad = [x for x in G.elements[:2000] if alg.norm(x) != 1 or x[0] % p != 1 or x[1] % p]
            if bad:
                raise ConstructionMismatch("element outside 1 + m or of norm != 1")
        G.meta["algebra"] = alg
        return G
    trunc = DeltaTruncation(p, t, kk)
    seed = [trunc.reduce(x) for x in sn_seed(p, t, trunc.alg.ring.m)]
    G = closure(seed, trunc.mul, trunc.bar, identity=trunc.reduce(Quaternion(1, 0, 0, 0)),
                max_order=max_order, name=f"Sn(D{p},t={t})/G{kk}", meta=meta)
    G.meta["truncation"] = trunc
    return G


# --- the unitriangular-mod-p SL2 -------------------------------------------------

def sl2_seed(p, M):
    q = p ** M
    u = (1 + p) % q
    return [Mat2(1, 1, 0, 1), Mat2(1, 0, p % q, 1), Mat2(pow(u, -1, q), 0, 0, u)]


def sl2_filter_count(p, M):
    """Count matrices mod p^M with det 1, a = d = 1 and c = 0 mod p."""
    q = p ** M
    a = 1 + p * np.arange(p ** (M - 1), dtype=np.int64)
    b = np.arange(q, dtype=np.int64)
    c = p * np.arange(p ** (M - 1), dtype=np.int64)
    d = 1 + p * np.arange(p ** (M - 1), dtype=np.int64)
    ad = (a[:, None] * d[None, :]) % q
    bc = (b[:, None] * c[None, :]) % q
    h_ad = np.bincount(ad.ravel(), minlength=q)
    h_bc = np.bincount(bc.ravel(), minlength=q)
    target = (np.arange(q) - 1) % q  # ad - bc = 1  =>  bc = ad - 1
    return int((h_ad * h_bc[target]).sum())


def sl2_member(x, p, q):
    return mat_det(x, q) == 1 and x[0] % p == 1 and x[3] % p == 1 and x[2] % p == 0


def build_sl2_triangle(p, M=2, k=None, check=True, max_order=DEFAULT_MAX_ORDER):
    _need_prime(p)
    if p <= 3:
        raise SpecError("sl2_triangle needs p > 3")
    if M < 2:
        raise SpecError("sl2_triangle needs M >= 2")
    q = p ** M
    meta = {"family": "sl2_triangle", "p": p, "M": M, "k": None,
            "generator_labels": ["B(1)", "C(p)", "D(1+p)"]}
    G = closure(sl2_seed(p, M), lambda x, y: mat_mul(x, y, q), lambda x: mat_inv(x, q),
                identity=Mat2(1, 0, 0, 1), max_order=max_order, name=f"SL2tri({p},M={M})", meta=meta)
    if check:
        expected = p ** (3 * M - 2)
        if G.n != expected or sl2_filter_count(p, M) != expected:
            raise ConstructionMismatch(f"order {G.n}, expected {expected}")
        if not all(sl2_member(x, p, q) for x in G.elements):
            raise ConstructionMismatch("closure left the unitriangular-mod-p subgroup")
    if k is None:
        return G
    lcs = lower_central_series(G)
    if k > len(lcs):
        k = len(lcs)
    Q = quotient(G, lcs[k - 1])
    Q.name = f"SL2tri({p},M={M})/G{k}"
    Q.meta.update(meta, k=k)
    return Q


def dihedral8():
    return build_dihedral8()
