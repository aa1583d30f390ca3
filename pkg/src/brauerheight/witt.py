"""Truncated Witt vectors W_n(R) over rings of characteristic p.

Two arithmetic back ends:

* universal sum/product polynomials (:func:`build_witt_table`), evaluated in
  the coefficient ring; works for any characteristic-p ring, including the
  non-perfect truncated rings ``F_q[x]/(x^m)`` on which Serre's map acts;
* for perfect coefficient fields ``F_q``, the isomorphism of W_n(F_q) with the
  Galois ring ``(Z/p^n)[t]/(g)`` via Teichmueller digits.  This keeps large
  cases (p = 7, n = 4) cheap where the universal polynomials are far too big.

Length conventions: ``F: W_n -> W_n``, ``V: W_n -> W_{n+1}``, ``R: W_n -> W_{n-1}``.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from typing import Sequence

from .fields import PrimeSpec, TruncatedDiffElem, TruncatedRing, FieldElement, format_poly, Poly

# Universal polynomials are only built when the top ghost weight p^(n-1) is
# at most this; above it the term count explodes (p=7, n=4 is ~10^5 terms).
TABLE_WEIGHT_LIMIT = 49


class WittError(ValueError):
    pass


# --- integer multivariate polynomials ----------------------------------------
# dict {exponent tuple: int}; variables ordered a_0..a_{n-1}, b_0..b_{n-1}

MPoly = dict


def _madd(f: MPoly, g: MPoly, scale: int = 1) -> MPoly:
    out = dict(f)
    for e, c in g.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _mmul(f: MPoly, g: MPoly) -> MPoly:
    out: MPoly = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _mpow(f: MPoly, k: int, nvars: int) -> MPoly:
    result: MPoly = {(0,) * nvars: 1}
    base = f
    while k:
        if k & 1:
            result = _mmul(result, base)
        k >>= 1
        if k:
            base = _mmul(base, base)
    return result


def _var(i: int, nvars: int) -> MPoly:
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): 1}


def _ghost(xs: Sequence[MPoly], k: int, p: int, nvars: int) -> MPoly:
    """w_k(x) = sum_{j<=k} p^j x_j^(p^(k-j))."""
    out: MPoly = {}
    for j in range(k + 1):
        out = _madd(out, _mpow(xs[j], p ** (k - j), nvars), p**j)
    return out


def _mdiv_exact(f: MPoly, m: int) -> MPoly:
    out = {}
    for e, c in f.items():
        qt, r = divmod(c, m)
        if r:
            raise AssertionError(f"non-exact division by {m} in Witt polynomial solve")
        out[e] = qt
    return out


def _meval_int(f: MPoly, point: Sequence[int]) -> int:
    total = 0
    for e, c in f.items():
        t = c
        for x, k in zip(point, e):
            if k:
                t *= x**k
        total += t
    return total


@dataclass(frozen=True)
class WittPolyTable:
    p: int
    n: int
    sum_polys: tuple
    prod_polys: tuple

    @property
    def nvars(self) -> int:
        return 2 * self.n

    def reduced(self, which: str) -> tuple:
        """Polynomials with coefficients reduced mod p (zero terms dropped)."""
        polys = self.sum_polys if which == "sum" else self.prod_polys
        return tuple({e: c % self.p for e, c in f.items() if c % self.p} for f in polys)

    def check_ghost(self, rng: random.Random | None = None, points: int = 100,
                    symbolic: bool | None = None) -> bool:
        p, n, nv = self.p, self.n, self.nvars
        if symbolic is None:
            symbolic = n <= 4 and p ** (n - 1) <= 27
        a = [_var(i, nv) for i in range(n)]
        b = [_var(n + i, nv) for i in range(n)]
        if symbolic:
            for k in range(n):
                wa, wb = _ghost(a, k, p, nv), _ghost(b, k, p, nv)
                if _ghost(self.sum_polys, k, p, nv) != _madd(wa, wb):
                    return False
                if _ghost(self.prod_polys, k, p, nv) != _mmul(wa, wb):
                    return False
            return True
        rng = rng or random.Random(0)
        for _ in range(points):
            pt = [rng.randrange(-50, 50) for _ in range(nv)]
            av, bv = pt[:n], pt[n:]
            sv = [_meval_int(f, pt) for f in self.sum_polys]
            pv = [_meval_int(f, pt) for f in self.prod_polys]
            for k in range(n):
                w = lambda xs: sum(p**j * xs[j] ** (p ** (k - j)) for j in range(k + 1))
                if w(sv) != w(av) + w(bv) or w(pv) != w(av) * w(bv):
                    return False
        return True


_table_cache: dict[tuple[int, int], WittPolyTable] = {}
_table_lock = threading.Lock()


def build_witt_table(p: int, n: int) -> WittPolyTable:
    """Universal Witt sum and product polynomials S_0..S_{n-1}, P_0..P_{n-1}.

    Solved recursively from the ghost components over Z; every division by
    p^k is checked to be exact.  Cached per (p, n).
    """
    if n < 1:
        raise WittError("length must be >= 1")
    if p ** (n - 1) > TABLE_WEIGHT_LIMIT:
        raise WittError(f"Witt polynomials for p={p}, n={n} exceed the size limit")
    key = (p, n)
    with _table_lock:
        if key in _table_cache:
            return _table_cache[key]
        table = _build_uncached(p, n)
        _table_cache[key] = table
        return table


def _build_uncached(p: int, n: int) -> WittPolyTable:
    nv = 2 * n
    a = [_var(i, nv) for i in range(n)]
    b = [_var(n + i, nv) for i in range(n)]
    sums: list[MPoly] = []
    prods: list[MPoly] = []
    for k in range(n):
        wa, wb = _ghost(a, k, p, nv), _ghost(b, k, p, nv)
        s_num, p_num = _madd(wa, wb), _mmul(wa, wb)
        for j in range(k):
            s_num = _madd(s_num, _mpow(sums[j], p ** (k - j), nv), -(p**j))
            p_num = _madd(p_num, _mpow(prods[j], p ** (k - j), nv), -(p**j))
        sums.append(_mdiv_exact(s_num, p**k))
        prods.append(_mdiv_exact(p_num, p**k))
    table = WittPolyTable(p, n, tuple(sums), tuple(prods))
    if not table.check_ghost(random.Random(p * 1000 + n)):
        raise AssertionError(f"ghost identity fails for p={p}, n={n}")
    return table


def table_available(p: int, n: int) -> bool:
    return n >= 1 and p ** (n - 1) <= TABLE_WEIGHT_LIMIT


# --- Witt vectors ------------------------------------------------------------

@dataclass(frozen=True)
class WittVec:
    """Length-n Witt vector; ``coords`` are raw values of ``ring``.

    ``ring`` is a :class:`PrimeSpec` (coords are field codes) or a
    :class:`TruncatedRing` (coords are coefficient tuples).
    """

    ring: object
    coords: tuple

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def n(self) -> int:
        return len(self.coords)

    @classmethod
    def of(cls, coords: Sequence, ring=None) -> "WittVec":
        """Build from FieldElement / TruncatedDiffElem coordinates (or raw values with ``ring``)."""
        raw = []
        for c in coords:
            if isinstance(c, FieldElement):
                ring = ring or c.spec
                raw.append(c.code)
            elif isinstance(c, TruncatedDiffElem):
                ring = ring or c.ring
                raw.append(c.value)
            else:
                raw.append(c)
        if ring is None:
            raise WittError("cannot infer the coefficient ring")
        if isinstance(ring, PrimeSpec):
            raw = [ring.scalar(c) if isinstance(c, int) and ring.d == 1 else c for c in raw]
        return cls(ring, tuple(raw))

    def elements(self) -> list:
        if isinstance(self.ring, PrimeSpec):
            return [FieldElement(self.ring, c) for c in self.coords]
        return [TruncatedDiffElem(self.ring, c) for c in self.coords]

    def __add__(self, other: "WittVec") -> "WittVec":
        return witt_add(self, other)

    def __mul__(self, other: "WittVec") -> "WittVec":
        return witt_mul(self, other)

    def __neg__(self) -> "WittVec":
        return witt_neg(self)

    def __sub__(self, other: "WittVec") -> "WittVec":
        return witt_add(self, witt_neg(other))

    def __repr__(self) -> str:
        return "W(" + ", ".join(repr(e) for e in self.elements()) + ")"


def witt_zero(ring, n: int) -> WittVec:
    return WittVec(ring, (ring.zero,) * n)


def witt_one(ring, n: int) -> WittVec:
    return WittVec(ring, (ring.one,) + (ring.zero,) * (n - 1))


def teichmuller(ring, x, n: int) -> WittVec:
    return WittVec(ring, (x,) + (ring.zero,) * (n - 1))


def random_witt(ring, n: int, rng: random.Random) -> WittVec:
    return WittVec(ring, tuple(ring.random(rng) for _ in range(n)))


def _check_pair(a: WittVec, b: WittVec) -> None:
    if a.ring != b.ring or a.n != b.n:
        raise WittError(f"Witt vectors of different shapes: {a.ring!r}/{a.n} vs {b.ring!r}/{b.n}")


# table back end

def _eval_table(polys: Sequence[MPoly], values: Sequence, ring) -> tuple:
    p = ring.p
    cache: dict[tuple[int, int], object] = {}

    def power(i: int, k: int):
        key = (i, k)
        if key not in cache:
            if k == 1:
                cache[key] = values[i]
            elif k % p == 0 and k // p >= 1:
                cache[key] = ring.frob(power(i, k // p), 1)
            else:
                cache[key] = ring.mul(power(i, k - 1), values[i])
        return cache[key]

    out = []
    for f in polys:
        acc = ring.zero
        for e, c in f.items():
            term = ring.scalar(c)
            for i, k in enumerate(e):
                if k:
                    term = ring.mul(term, power(i, k))
            acc = ring.add(acc, term)
        out.append(acc)
    return tuple(out)


_reduced_cache: dict[tuple[int, int, str], tuple] = {}


def _reduced(p: int, n: int, which: str) -> tuple:
    key = (p, n, which)
    if key not in _reduced_cache:
        _reduced_cache[key] = build_witt_table(p, n).reduced(which)
    return _reduced_cache[key]


def _table_op(a: WittVec, b: WittVec, which: str) -> WittVec:
    polys = _reduced(a.p, a.n, which)
    return WittVec(a.ring, _eval_table(polys, a.coords + b.coords, a.ring))


# Galois ring back end

class GaloisRing:
    """GR(p^n, d) = (Z/p^n)[t]/(g~) where g~ lifts the modulus of F_q."""

    def __init__(self, spec: PrimeSpec, n: int):
        self.spec = spec
        self.n = n
        self.mod = spec.p**n
        self.g = spec.modulus  # entries in [0, p): a fine integer lift
        self._teich: dict[int, tuple] = {}

    def mul(self, a: tuple, b: tuple) -> tuple:
        d, M = self.spec.d, self.mod
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        g = self.g
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                for j in range(d):
                    prod[k - d + j] -= c * g[j]
        return tuple(x % M for x in prod[:d])

    def add(self, a: tuple, b: tuple) -> tuple:
        return tuple((x + y) % self.mod for x, y in zip(a, b))

    def pow(self, a: tuple, e: int) -> tuple:
        result = (1,) + (0,) * (self.spec.d - 1)
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def teich(self, code: int) -> tuple:
        t = self._teich.get(code)
        if t is None:
            t = self.pow(self.spec.to_vec(code), self.spec.q ** (self.n - 1))
            self._teich[code] = t
        return t

    def from_witt(self, coords: Sequence[int]) -> tuple:
        # (a_0, a_1, ...) = sum_i V^i [a_i] = sum_i p^i [a_i^(p^-i)]
        spec = self.spec
        z = (0,) * spec.d
        for i, a in enumerate(coords):
            if a:
                t = self.teich(spec.frob(a, -i))
                z = self.add(z, tuple(spec.p**i * x for x in t))
        return z

    def to_witt(self, z: tuple) -> tuple:
        spec, p = self.spec, self.spec.p
        out = []
        for i in range(self.n):
            digit = spec.from_vec([x % p for x in z])
            out.append(spec.frob(digit, i))
            t = self.teich(digit)
            z = tuple(((x - y) % self.mod) // p for x, y in zip(z, t))
        return tuple(out)


_gr_cache: dict[tuple, GaloisRing] = {}


def _galois(spec: PrimeSpec, n: int) -> GaloisRing:
    key = (spec, n)
    if key not in _gr_cache:
        _gr_cache[key] = GaloisRing(spec, n)
    return _gr_cache[key]


def _galois_op(a: WittVec, b: WittVec, which: str) -> WittVec:
    gr = _galois(a.ring, a.n)
    za, zb = gr.from_witt(a.coords), gr.from_witt(b.coords)
    z = gr.add(za, zb) if which == "sum" else gr.mul(za, zb)
    return WittVec(a.ring, gr.to_witt(z))


def _dispatch(a: WittVec, b: WittVec, which: str, method: str) -> WittVec:
    _check_pair(a, b)
    if method == "auto":
        method = "galois" if isinstance(a.ring, PrimeSpec) else "table"
    if method == "galois":
        if not isinstance(a.ring, PrimeSpec):
            raise WittError("the Galois-ring back end needs a perfect field of coefficients")
        return _galois_op(a, b, which)
    if method == "table":
        return _table_op(a, b, which)
    raise WittError(f"unknown method {method!r}")


def witt_add(a: WittVec, b: WittVec, method: str = "auto") -> WittVec:
    return _dispatch(a, b, "sum", method)


def witt_mul(a: WittVec, b: WittVec, method: str = "auto") -> WittVec:
    return _dispatch(a, b, "prod", method)


def witt_neg(a: WittVec) -> WittVec:
    # -1 = [-1] for odd p, and [-1]*(x_0, x_1, ...) = (-x_0, -x_1, ...)
    return WittVec(a.ring, tuple(a.ring.neg(x) for x in a.coords))


def witt_scalar(k: int, a: WittVec, method: str = "auto") -> WittVec:
    """k * a by double-and-add; negative k allowed."""
    if k < 0:
        return witt_scalar(-k, witt_neg(a), method)
    result = witt_zero(a.ring, a.n)
    base = a
    while k:
        if k & 1:
            result = witt_add(result, base, method)
        k >>= 1
        if k:
            base = witt_add(base, base, method)
    return result


def witt_F(a: WittVec) -> WittVec:
    return WittVec(a.ring, tuple(a.ring.frob(x, 1) for x in a.coords))


def witt_V(a: WittVec) -> WittVec:
    return WittVec(a.ring, (a.ring.zero,) + a.coords)


def witt_R(a: WittVec) -> WittVec:
    if a.n < 2:
        raise WittError("restriction needs length >= 2")
    return WittVec(a.ring, a.coords[:-1])


# --- Serre's map -------------------------------------------------------------

@dataclass(frozen=True)
class WittDifferential:
    """The 1-form c(x) dx with c in F_q[x]/(x^(m-1))."""

    ring: TruncatedRing
    coeffs: tuple

    def __add__(self, other: "WittDifferential") -> "WittDifferential":
        if self.ring != other.ring:
            raise WittError("differentials over different rings")
        return WittDifferential(self.ring, self.ring.add(self.coeffs, other.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self) -> str:
        return f"({format_poly(Poly(self.ring.field, self.coeffs))})*dx"


def serre_D(a: WittVec, i: int | None = None) -> WittDifferential:
    """D_i(a_0, ..., a_{i-1}) = sum_j a_j^(p^(i-1-j) - 1) da_j."""
    R = a.ring
    if not isinstance(R, TruncatedRing):
        raise WittError("Serre's map needs coordinates in a truncated differential ring")
    if i is None:
        i = a.n
    if a.n != i:
        raise WittError(f"D_{i} needs a vector of length {i}, got {a.n}")
    if R.m < 2:
        raise WittError("truncation order must be >= 2")
    target = TruncatedRing(R.field, R.m - 1)
    p = R.p
    total = target.zero
    for j, aj in enumerate(a.coords):
        da = R.derivative(aj)
        if not any(da):
            continue
        e = p ** (i - 1 - j) - 1
        factor = R.pow(aj, e)[: R.m - 1]
        total = target.add(total, target.mul(factor, da))
    return WittDifferential(target, total)
