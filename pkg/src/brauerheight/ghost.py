"""Independent Witt arithmetic by exact ghost components over Z.

Every coordinate is lifted to a torsion-free ring (``Z[t]/(g)`` for F_q,
``Z[t][x]/(g, x^m)`` for truncated rings), ghost components are added or
multiplied there, and the coordinates are solved back by exact division by
p^k.  Since the Witt polynomials have integer coefficients, reducing the
solved integers mod p gives the Witt sum/product.  No universal polynomials
and no Teichmueller lifts are involved.
"""

from __future__ import annotations

from .fields import PrimeSpec, TruncatedRing
from .witt import WittVec, WittError


class _ZqLift:
    """Z[t]/(g) with g the monic integer lift of the field modulus."""

    def __init__(self, spec: PrimeSpec):
        self.spec = spec
        self.d = spec.d
        self.g = spec.modulus
        self.zero = (0,) * self.d
        self.one = (1,) + (0,) * (self.d - 1)

    def lift(self, code: int) -> tuple:
        return tuple(self.spec.to_vec(code))

    def reduce(self, z: tuple) -> int:
        return self.spec.from_vec([x % self.spec.p for x in z])

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def scale(self, a, k: int):
        return tuple(k * x for x in a)

    def divexact(self, a, k: int):
        out = []
        for x in a:
            qt, r = divmod(x, k)
            if r:
                raise AssertionError("ghost solve: inexact division")
            out.append(qt)
        return tuple(out)

    def mul(self, a, b):
        d, g = self.d, self.g
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                for j in range(d):
                    prod[k - d + j] -= c * g[j]
        return tuple(prod[:d])


class _TruncLift:
    """Z[t][x]/(g, x^m): tuples of m elements of the Z[t]/(g) lift."""

    def __init__(self, ring: TruncatedRing):
        self.ring = ring
        self.base = _ZqLift(ring.field)
        self.m = ring.m
        self.zero = (self.base.zero,) * self.m
        self.one = (self.base.one,) + (self.base.zero,) * (self.m - 1)

    def lift(self, value: tuple) -> tuple:
        return tuple(self.base.lift(c) for c in value)

    def reduce(self, z: tuple) -> tuple:
        return tuple(self.base.reduce(c) for c in z)

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def scale(self, a, k: int):
        return tuple(self.base.scale(x, k) for x in a)

    def divexact(self, a, k: int):
        return tuple(self.base.divexact(x, k) for x in a)

    def mul(self, a, b):
        B, m = self.base, self.m
        out = [B.zero] * m
        for i, x in enumerate(a):
            if not any(x):
                continue
            for j in range(m - i):
                y = b[j]
                if any(y):
                    out[i + j] = B.add(out[i + j], B.mul(x, y))
        return tuple(out)


def _lift_ring(ring):
    if isinstance(ring, PrimeSpec):
        return _ZqLift(ring)
    if isinstance(ring, TruncatedRing):
        return _TruncLift(ring)
    raise WittError(f"no integer lift for {ring!r}")


def _pow(L, a, e: int):
    result, base = L.one, a
    while e:
        if e & 1:
            result = L.mul(result, base)
        e >>= 1
        if e:
            base = L.mul(base, base)
    return result


def ghost_vector(L, xs, p: int) -> list:
    """Ghost components w_0..w_{n-1} of lifted coordinates."""
    out = []
    for k in range(len(xs)):
        w = L.zero
        for j in range(k + 1):
            w = L.add(w, L.scale(_pow(L, xs[j], p ** (k - j)), p**j))
        out.append(w)
    return out


def solve_from_ghost(L, ghosts, p: int) -> list:
    coords = []
    for k, w in enumerate(ghosts):
        acc = w
        for j, c in enumerate(coords):
            acc = L.sub(acc, L.scale(_pow(L, c, p ** (k - j)), p**j))
        coords.append(L.divexact(acc, p**k))
    return coords


def ghost_oracle(a: WittVec, b: WittVec, op: str) -> WittVec:
    """Witt sum (op='add') or product (op='mul') computed through ghost components."""
    if a.ring != b.ring or a.n != b.n:
        raise WittError("shape mismatch")
    L = _lift_ring(a.ring)
    p = a.p
    ga = ghost_vector(L, [L.lift(x) for x in a.coords], p)
    gb = ghost_vector(L, [L.lift(x) for x in b.coords], p)
    if op == "add":
        g = [L.add(x, y) for x, y in zip(ga, gb)]
    elif op == "mul":
        g = [L.mul(x, y) for x, y in zip(ga, gb)]
    else:
        raise ValueError(op)
    return WittVec(a.ring, tuple(L.reduce(c) for c in solve_from_ghost(L, g, p)))
