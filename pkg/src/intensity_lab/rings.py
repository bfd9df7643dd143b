"""Finite coefficient rings, quaternion algebras over them, and 2x2 matrices.

Ring elements are plain ints in ``range(ring.size)``:

* ``Z/p^m``: the canonical residue.
* ``F_p[eps]`` (eps^2 = 0): ``u + v*eps`` is packed as ``u + p*v``.

Quaternions are 4-tuples of ring elements on the basis (1, i, j, k).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

INF = float("inf")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def smallest_nonresidue(p: int) -> int:
    squares = {x * x % p for x in range(1, p)}
    for t in range(2, p):
        if t not in squares:
            return t
    raise ValueError(f"no quadratic non-residue mod {p}")


def is_nonresidue(t: int, p: int) -> bool:
    t %= p
    return t != 0 and pow(t, (p - 1) // 2, p) == p - 1


def sqrt_one_mod(u: int, p: int, m: int) -> int:
    """Square root of ``u`` congruent to 1 mod p, in Z/p^m (p odd, u = 1 mod p)."""
    q = p ** m
    if p == 2 or u % p != 1:
        raise ValueError("need odd p and u = 1 mod p")
    a = 1
    for _ in range(m + 1):
        a = (a - (a * a - u) * pow(2 * a, -1, q)) % q
    assert (a * a - u) % q == 0
    return a


@dataclass(frozen=True)
class CoefficientRing:
    kind: str  # "zmod" or "dual"
    p: int
    m: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.kind not in ("zmod", "dual"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.m < 1:
            raise ValueError("m must be >= 1")

    @classmethod
    def zmod(cls, p, m=1):
        return cls("zmod", p, m)

    @classmethod
    def dual(cls, p):
        return cls("dual", p, 2)

    @property
    def size(self) -> int:
        return self.p ** self.m

    @property
    def modulus(self) -> int:
        return self.p ** self.m

    @property
    def eps(self) -> int:
        if self.kind != "dual":
            raise AttributeError("eps only exists in dual numbers")
        return self.p

    def __repr__(self):
        if self.kind == "dual":
            return f"F_{self.p}[eps]"
        return f"Z/{self.p}^{self.m}"

    def elements(self):
        return range(self.size)

    def from_int(self, x: int) -> int:
        if self.kind == "zmod":
            return x % self.size
        return x % self.p

    def dual_parts(self, x):
        return x % self.p, x // self.p

    def add(self, x, y):
        if self.kind == "zmod":
            return (x + y) % self.size
        p = self.p
        return (x % p + y % p) % p + p * ((x // p + y // p) % p)

    def neg(self, x):
        if self.kind == "zmod":
            return -x % self.size
        p = self.p
        return (-(x % p)) % p + p * ((-(x // p)) % p)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.kind == "zmod":
            return x * y % self.size
        p = self.p
        u1, v1 = x % p, x // p
        u2, v2 = y % p, y // p
        return u1 * u2 % p + p * ((u1 * v2 + v1 * u2) % p)

    def is_unit(self, x) -> bool:
        return x % self.p != 0

    def valuation(self, x):
        """p-adic (resp. eps-adic) valuation; ``inf`` for zero."""
        if x == 0:
            return INF
        if self.kind == "dual":
            return 0 if x % self.p else 1
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    # lookup tables for vectorised arithmetic
    @cached_property
    def add_table(self) -> np.ndarray:
        s = self.size
        return np.array([[self.add(x, y) for y in range(s)] for x in range(s)], dtype=np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        s = self.size
        return np.array([[self.mul(x, y) for y in range(s)] for x in range(s)], dtype=np.int64)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg(x) for x in range(self.size)], dtype=np.int64)


class Quaternion(NamedTuple):
    a: int
    b: int
    c: int
    d: int


@dataclass(frozen=True)
class QuaternionAlgebra:
    """Rank-4 algebra with i^2 = A, j^2 = B and k = k_sign * ij.

    ``family`` selects the distinguished ideal: ``"delta"`` is m = Delta*j with
    basis weights (0, 0, 1, 1); ``"yo"`` is m = Ai + Aj with weights (0, 1, 1, 2).
    A uniformiser of the coefficient ring has weight 2 in both.
    """

    ring: CoefficientRing
    A: int
    B: int
    k_sign: int = 1
    family: str = "delta"

    @classmethod
    def delta(cls, p, t=None, precision=2):
        """The (t, p) algebra over Z/p^precision, with k = ij."""
        if t is None:
            t = smallest_nonresidue(p)
        if not is_nonresidue(t, p):
            raise ValueError(f"t={t} is not a quadratic non-residue mod {p}")
        ring = CoefficientRing.zmod(p, precision)
        return cls(ring, t % ring.size, p % ring.size, 1, "delta")

    @classmethod
    def yo(cls):
        """The (eps, eps) algebra over F_3[eps], with k = ji = -ij."""
        ring = CoefficientRing.dual(3)
        return cls(ring, ring.eps, ring.eps, -1, "yo")

    @property
    def size(self):
        return self.ring.size ** 4

    @property
    def basis_weights(self):
        return (0, 0, 1, 1) if self.family == "delta" else (0, 1, 1, 2)

    @property
    def nilpotency_index(self):
        """Smallest e with m^e = 0 at this precision."""
        # top weight is 2*(ring nilpotency - 1) + max basis weight
        if self.family == "delta":
            return 2 * self.ring.m
        return 2 * (self.ring.m - 1) + max(self.basis_weights) + 1

    def one(self):
        return Quaternion(1, 0, 0, 0)

    def zero(self):
        return Quaternion(0, 0, 0, 0)

    def scalar(self, r):
        return Quaternion(self.ring.from_int(r), 0, 0, 0)

    def elements(self):
        s = self.ring.size
        for a in range(s):
            for b in range(s):
                for c in range(s):
                    for d in range(s):
                        yield Quaternion(a, b, c, d)

    def add(self, x, y):
        R = self.ring
        return Quaternion(*(R.add(u, v) for u, v in zip(x, y)))

    def neg(self, x):
        R = self.ring
        return Quaternion(*(R.neg(u) for u in x))

    def mul(self, x, y):
        R = self.ring
        if R.kind == "zmod":
            q = R.size
            a1, b1, c1, d1 = x
            a2, b2, c2, d2 = y
            A, B, s = self.A, self.B, self.k_sign
            return Quaternion(
                (a1 * a2 + A * b1 * b2 + B * c1 * c2 - A * B * d1 * d2) % q,
                (a1 * b2 + b1 * a2 + s * B * (d1 * c2 - c1 * d2)) % q,
                (a1 * c2 + c1 * a2 + s * A * (b1 * d2 - d1 * b2)) % q,
                (a1 * d2 + d1 * a2 + s * (b1 * c2 - c1 * b2)) % q,
            )
        add, mul, sub, neg = R.add, R.mul, R.sub, R.neg
        a1, b1, c1, d1 = x
        a2, b2, c2, d2 = y
        A, B = self.A, self.B
        AB = mul(A, B)
        re = sub(add(add(mul(a1, a2), mul(A, mul(b1, b2))), mul(B, mul(c1, c2))), mul(AB, mul(d1, d2)))
        ti = mul(B, sub(mul(d1, c2), mul(c1, d2)))
        tj = mul(A, sub(mul(b1, d2), mul(d1, b2)))
        tk = sub(mul(b1, c2), mul(c1, b2))
        if self.k_sign < 0:
            ti, tj, tk = neg(ti), neg(tj), neg(tk)
        i = add(add(mul(a1, b2), mul(b1, a2)), ti)
        j = add(add(mul(a1, c2), mul(c1, a2)), tj)
        k = add(add(mul(a1, d2), mul(d1, a2)), tk)
        return Quaternion(re, i, j, k)

    def bar(self, x):
        R = self.ring
        return Quaternion(x[0], R.neg(x[1]), R.neg(x[2]), R.neg(x[3]))

    def norm(self, x):
        """x * bar(x) = a^2 - A b^2 - B c^2 + AB d^2 (a central scalar)."""
        R = self.ring
        a, b, c, d = x
        mul, add, sub = R.mul, R.add, R.sub
        AB = mul(self.A, self.B)
        return add(sub(sub(mul(a, a), mul(self.A, mul(b, b))), mul(self.B, mul(c, c))), mul(AB, mul(d, d)))

    def power(self, x, e):
        out = self.one()
        base = x
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inverse_unit(self, x):
        """Inverse of a unit as bar(x) / norm(x)."""
        n = self.norm(x)
        R = self.ring
        if not R.is_unit(n):
            raise ZeroDivisionError("not a unit")
        ninv = next(y for y in R.elements() if R.mul(n, y) == 1)
        return Quaternion(*(R.mul(ninv, u) for u in self.bar(x)))

    def valuation(self, x):
        """Largest e with x in m^e; ``inf`` for zero."""
        best = INF
        for coord, w in zip(x, self.basis_weights):
            v = self.ring.valuation(coord)
            if v != INF:
                best = min(best, 2 * v + w)
        if best >= self.nilpotency_index:
            return INF
        return best

    def in_one_plus_m(self, x) -> bool:
        return self.valuation(self.add(x, self.neg(self.one()))) >= 1

    # vectorised helpers: arrays of shape (..., 4)
    def mul_arrays(self, X, Y):
        R = self.ring
        M, Ad, N = R.mul_table, R.add_table, R.neg_table
        a1, b1, c1, d1 = (X[..., t] for t in range(4))
        a2, b2, c2, d2 = (Y[..., t] for t in range(4))
        A, B = self.A, self.B
        AB = R.mul(A, B)

        def sub(u, v):
            return Ad[u, N[v]]

        re = sub(Ad[Ad[M[a1, a2], M[A, M[b1, b2]]], M[B, M[c1, c2]]], M[AB, M[d1, d2]])
        ti = M[B, sub(M[d1, c2], M[c1, d2])]
        tj = M[A, sub(M[b1, d2], M[d1, b2])]
        tk = sub(M[b1, c2], M[c1, b2])
        if self.k_sign < 0:
            ti, tj, tk = N[ti], N[tj], N[tk]
        i = Ad[Ad[M[a1, b2], M[b1, a2]], ti]
        j = Ad[Ad[M[a1, c2], M[c1, a2]], tj]
        k = Ad[Ad[M[a1, d2], M[d1, a2]], tk]
        return np.stack([re, i, j, k], axis=-1)

    def bar_arrays(self, X):
        N = self.ring.neg_table
        return np.stack([X[..., 0], N[X[..., 1]], N[X[..., 2]], N[X[..., 3]]], axis=-1)

    def all_elements_array(self):
        s = self.ring.size
        g = np.indices((s, s, s, s)).reshape(4, -1).T
        return g.astype(np.int64)

    def encode_arrays(self, X):
        s = self.ring.size
        return ((X[..., 0] * s + X[..., 1]) * s + X[..., 2]) * s + X[..., 3]


def quat_mul(x, y, alg: QuaternionAlgebra) -> Quaternion:
    return alg.mul(x, y)


def quat_bar(x, alg: QuaternionAlgebra) -> Quaternion:
    return alg.bar(x)


def ideal_valuation(x, alg: QuaternionAlgebra):
    return alg.valuation(x)


def delta_ideal_moduli(p: int, k: int):
    """Per-coordinate moduli of m^k in the (t, p) algebra: x in m^k iff each
    coordinate vanishes modulo the returned modulus."""
    s, odd = divmod(k, 2)
    if odd:
        return (p ** (s + 1), p ** (s + 1), p ** s, p ** s)
    return (p ** s,) * 4


class DeltaTruncation:
    """Arithmetic in Delta / m^k for the (t, p) algebra."""

    def __init__(self, p, t, k):
        self.p, self.t, self.k = p, t, k
        self.moduli = delta_ideal_moduli(p, k)
        self.alg = QuaternionAlgebra.delta(p, t, precision=max(1, (k + 1) // 2))

    def reduce(self, x):
        return Quaternion(*(u % q for u, q in zip(x, self.moduli)))

    def mul(self, x, y):
        return self.reduce(self.alg.mul(x, y))

    def bar(self, x):
        return self.reduce(self.alg.bar(x))


class Mat2(NamedTuple):
    a: int
    b: int
    c: int
    d: int


def mat_mul(x, y, q):
    return Mat2((x[0] * y[0] + x[1] * y[2]) % q, (x[0] * y[1] + x[1] * y[3]) % q,
                (x[2] * y[0] + x[3] * y[2]) % q, (x[2] * y[1] + x[3] * y[3]) % q)


def mat_det(x, q):
    return (x[0] * x[3] - x[1] * x[2]) % q


def mat_inv(x, q):
    dinv = pow(mat_det(x, q), -1, q)
    return Mat2(x[3] * dinv % q, -x[1] * dinv % q, -x[2] * dinv % q, x[0] * dinv % q)
