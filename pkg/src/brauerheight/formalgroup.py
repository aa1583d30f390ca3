"""One-dimensional formal group laws over F_q, truncated at total degree N.

Series are dense numpy arrays whose last axis holds the F_p-coordinates of
each F_q coefficient: univariate series have shape ``(N+1, d)``, bivariate
ones ``(N+1, N+1, d)`` with every entry of total degree > N kept at zero.
Arithmetic modulo (t)^(N+1), resp. (X, Y)^(N+1), is exact because the
truncation ideal is an ideal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fields import PrimeSpec, fq_convolve, fq_matmul
from .strata import INF

ASSOC_EXACT_DEGREE = 16  # exact trivariate associativity check up to this degree
ASSOC_RANDOM_TRIALS = 3


class FormalGroupError(ValueError):
    pass


def default_precision(p: int) -> int:
    return p * p + 4


# --- series helpers ----------------------------------------------------------

def _const(spec: PrimeSpec, code: int) -> np.ndarray:
    return np.array(spec.to_vec(code), dtype=np.int64)


def _mask(N: int) -> np.ndarray:
    r = np.arange(N + 1)
    return (r[:, None] + r[None, :] <= N)[..., None]


def _uni_mul(a: np.ndarray, b: np.ndarray, spec: PrimeSpec) -> np.ndarray:
    return fq_convolve(a, b, spec, a.shape[:1])


def _bi_mul(A: np.ndarray, B: np.ndarray, spec: PrimeSpec) -> np.ndarray:
    N = A.shape[0] - 1
    return fq_convolve(A, B, spec, (N + 1, N + 1)) * _mask(N)


def _scale(spec: PrimeSpec, code: int, A: np.ndarray) -> np.ndarray:
    if code == 0:
        return np.zeros_like(A)
    c = _const(spec, code).reshape((1,) * (A.ndim - 1) + (spec.d,))
    return fq_convolve(A, c, spec, A.shape[:-1])


def _unit_inverse(U: np.ndarray, spec: PrimeSpec, mul) -> np.ndarray:
    """Newton iteration x <- x (2 - U x) for a series with unit constant term."""
    corner = (0,) * (U.ndim - 1)
    u0 = spec.from_vec(U[corner])
    if u0 == 0:
        raise FormalGroupError("series is not a unit")
    x = np.zeros_like(U)
    x[corner] = _const(spec, spec.inv(u0))
    two = np.zeros_like(U)
    two[corner] = _const(spec, spec.scalar(2))
    N = U.shape[0] - 1
    for _ in range(max(1, math.ceil(math.log2(N + 1))) + 1):
        x = mul(x, (two - mul(U, x, spec)) % spec.p, spec)
    return x


def _valuation(a: np.ndarray):
    nz = np.flatnonzero(a.reshape(a.shape[0], -1).any(axis=1))
    return int(nz[0]) if len(nz) else None


def _powers(b: np.ndarray, spec: PrimeSpec, count: int) -> np.ndarray:
    """Stack of b^0, ..., b^(count-1) for a univariate series b."""
    out = np.zeros((count,) + b.shape, dtype=np.int64)
    out[0, 0] = _const(spec, 1)
    for j in range(1, count):
        out[j] = _uni_mul(out[j - 1], b, spec)
    return out


# --- formal group laws -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FormalGroupLaw:
    """F(X, Y) = sum c_ij X^i Y^j with i + j <= N; ``coeffs[i, j]`` is c_ij."""

    base: PrimeSpec
    precision: int
    coeffs: np.ndarray
    name: str = ""
    elliptic: bool = False
    verify: bool = field(default=True, repr=False)

    def __post_init__(self):
        N = self.precision
        if self.coeffs.shape != (N + 1, N + 1, self.base.d):
            raise FormalGroupError(f"coefficient table has shape {self.coeffs.shape}")
        if np.any(self.coeffs * ~_mask(N)):
            raise FormalGroupError("coefficients beyond total degree N")
        self.coeffs.setflags(write=False)
        if self.verify:
            self.check()

    @property
    def p(self) -> int:
        return self.base.p

    def coefficient(self, i: int, j: int) -> int:
        return self.base.from_vec(self.coeffs[i, j])

    def check(self, rng: np.random.Generator | None = None) -> None:
        if not self.check_identity():
            raise FormalGroupError(f"{self.name}: F(X, 0) != X")
        if not self.check_commutative():
            raise FormalGroupError(f"{self.name}: not commutative")
        if not self.check_associative(rng):
            raise FormalGroupError(f"{self.name}: associativity fails (series expansion bug)")

    def check_identity(self) -> bool:
        C = self.coeffs
        e = _const(self.base, 1)
        row, col = C[:, 0].copy(), C[0, :].copy()
        if not (np.array_equal(row[1], e) and np.array_equal(col[1], e)):
            return False
        row[1] = 0
        col[1] = 0
        return not row.any() and not col.any()

    def check_commutative(self) -> bool:
        return np.array_equal(self.coeffs, self.coeffs.transpose(1, 0, 2))

    def check_associative(self, rng: np.random.Generator | None = None,
                          exact_degree: int = ASSOC_EXACT_DEGREE,
                          trials: int = ASSOC_RANDOM_TRIALS) -> bool:
        """Exact trivariate comparison through ``exact_degree``, then random
        univariate substitutions at full precision."""
        if not self._associative_exact(min(exact_degree, self.precision)):
            return False
        if exact_degree >= self.precision:
            return True
        rng = rng or np.random.default_rng(0)
        N, p, d = self.precision, self.p, self.base.d
        for _ in range(trials):
            a, b, c = (rng.integers(0, p, (N + 1, d)) for _ in range(3))
            a[0] = b[0] = c[0] = 0
            left = self.substitute(self.substitute(a, b), c)
            right = self.substitute(a, self.substitute(b, c))
            if not np.array_equal(left, right):
                return False
        return True

    def _associative_exact(self, n: int) -> bool:
        spec = self.base
        C = self.coeffs[: n + 1, : n + 1]
        r = np.arange(n + 1)
        tri_mask = (r[:, None, None] + r[None, :, None] + r[None, None, :] <= n)[..., None]

        def mul(A, B):
            return fq_convolve(A, B, spec, (n + 1,) * 3) * tri_mask

        shape = (n + 1,) * 3 + (spec.d,)
        U = np.zeros(shape, dtype=np.int64)  # F(X, Y)
        U[:, :, 0] = C * _mask(n)
        V = np.zeros(shape, dtype=np.int64)  # F(Y, Z)
        V[0, :, :] = C * _mask(n)
        one = np.zeros(shape, dtype=np.int64)
        one[0, 0, 0] = _const(spec, 1)

        # F(U, Z) = sum_i U^i G_i(Z), G_i(Z) = sum_j c_ij Z^j
        left = np.zeros(shape, dtype=np.int64)
        Up = one
        for i in range(n + 1):
            G = np.zeros(shape, dtype=np.int64)
            G[0, 0, :] = C[i]
            left = (left + mul(Up, G)) % spec.p
            Up = mul(Up, U)
        # F(X, V) = sum_j H_j(X) V^j, H_j(X) = sum_i c_ij X^i
        right = np.zeros(shape, dtype=np.int64)
        Vp = one
        for j in range(n + 1):
            H = np.zeros(shape, dtype=np.int64)
            H[:, 0, 0] = C[:, j]
            right = (right + mul(H, Vp)) % spec.p
            Vp = mul(Vp, V)
        return np.array_equal(left * tri_mask, right * tri_mask)

    def substitute(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """F(a(t), b(t)) mod t^(N+1) for univariate a, b without constant term."""
        spec, N = self.base, self.precision
        if a[0].any() or b[0].any():
            raise FormalGroupError("substituted series must have no constant term")
        G = fq_matmul(self.coeffs, _powers(b, spec, N + 1), spec)  # G[i] = sum_j c_ij b^j
        out = np.zeros((N + 1, spec.d), dtype=np.int64)
        ap = np.zeros_like(out)
        ap[0] = _const(spec, 1)
        for i in range(N + 1):
            if not ap.any():
                break
            out = (out + _uni_mul(ap, G[i], spec)) % spec.p
            ap = _uni_mul(ap, a, spec)
        return out

    def add_to_t(self, b: np.ndarray) -> np.ndarray:
        """F(t, b(t)); the X-argument is t itself, so powers of X are shifts."""
        spec, N = self.base, self.precision
        G = fq_matmul(self.coeffs, _powers(b, spec, N + 1), spec)
        out = np.zeros((N + 1, spec.d), dtype=np.int64)
        for i in range(N + 1):
            out[i:] += G[i, : N + 1 - i]
        return out % spec.p

    def inverse_series(self) -> np.ndarray:
        """iota(t) with F(t, iota(t)) = 0, by fixed-point iteration."""
        spec, N = self.base, self.precision
        t = _t(spec, N)
        iota = (-t) % spec.p
        for _ in range(N + 1):
            # F(t, iota) = t + iota + higher  =>  iota <- iota - F(t, iota)
            nxt = (iota - self.add_to_t(iota)) % spec.p
            if np.array_equal(nxt, iota):
                break
            iota = nxt
        if self.add_to_t(iota).any():
            raise FormalGroupError(f"{self.name}: formal inverse did not converge")
        return iota

    def multiplication_series(self, m: int) -> np.ndarray:
        """[m](t) by double-and-add through general substitution."""
        if m < 1:
            raise FormalGroupError("m must be >= 1")
        t = _t(self.base, self.precision)
        acc = None
        for bit in bin(m)[2:]:
            if acc is not None:
                acc = self.substitute(acc, acc)
            if bit == "1":
                acc = t.copy() if acc is None else self.add_to_t(acc)
        return acc


def _t(spec: PrimeSpec, N: int) -> np.ndarray:
    t = np.zeros((N + 1, spec.d), dtype=np.int64)
    t[1] = _const(spec, 1)
    return t


def _table(spec: PrimeSpec, N: int, entries: dict) -> np.ndarray:
    C = np.zeros((N + 1, N + 1, spec.d), dtype=np.int64)
    for (i, j), code in entries.items():
        C[i, j] = _const(spec, code)
    return C


def multiplicative_fgl(base: PrimeSpec, N: int) -> FormalGroupLaw:
    if N < base.p:
        raise FormalGroupError("precision must be >= p")
    return FormalGroupLaw(base, N, _table(base, N, {(1, 0): 1, (0, 1): 1, (1, 1): 1}), "Gm")


def additive_fgl(base: PrimeSpec, N: int) -> FormalGroupLaw:
    if N < base.p:
        raise FormalGroupError("precision must be >= p")
    return FormalGroupLaw(base, N, _table(base, N, {(1, 0): 1, (0, 1): 1}), "Ga")


def weierstrass_w(E, N: int) -> np.ndarray:
    """w(z) = -1/y as a series in z = -x/y, from w = z^3 + a z w^2 + b w^3."""
    spec = E.spec
    z = _t(spec, N)
    z3 = np.zeros_like(z)
    if N >= 3:
        z3[3] = _const(spec, 1)
    az = _scale(spec, E.a, z)
    w = np.zeros_like(z)
    for _ in range(N):
        w2 = _uni_mul(w, w, spec)
        nxt = (z3 + _uni_mul(az, w2, spec) + _scale(spec, E.b, _uni_mul(w2, w, spec))) % spec.p
        if np.array_equal(nxt, w):
            break
        w = nxt
    return w


def elliptic_fgl(E, N: int | None = None, verify: bool = True) -> FormalGroupLaw:
    """Formal group law of y^2 = x^3 + a x + b in the parameter z = -x/y."""
    spec = E.spec
    p = spec.p
    N = default_precision(p) if N is None else N
    if N < p * p + 1:
        raise FormalGroupError("precision must be >= p^2 + 1 for elliptic laws")
    w = weierstrass_w(E, N + 1)
    mask = _mask(N)
    shape = (N + 1, N + 1, spec.d)
    # lambda = (w(z2) - w(z1)) / (z2 - z1): coefficient of z1^i z2^j is w_{i+j+1}
    lam = np.zeros(shape, dtype=np.int64)
    for i in range(N + 1):
        for j in range(N + 1 - i):
            lam[i, j] = w[i + j + 1]
    w1 = np.zeros(shape, dtype=np.int64)
    w1[:, 0] = w[: N + 1]
    z1 = np.zeros(shape, dtype=np.int64)
    z1[1, 0] = _const(spec, 1)
    z2 = z1.transpose(1, 0, 2).copy()
    nu = (w1 - _bi_mul(lam, z1, spec)) % p
    lam2 = _bi_mul(lam, lam, spec)
    lam3 = _bi_mul(lam2, lam, spec)
    one = np.zeros(shape, dtype=np.int64)
    one[0, 0] = _const(spec, 1)
    # z3 = -z1 - z2 + (-2 a lam nu - 3 b lam^2 nu) / (1 + a lam^2 + b lam^3)
    num = -(_scale(spec, spec.scalar(2), _scale(spec, E.a, _bi_mul(lam, nu, spec)))
            + _scale(spec, spec.scalar(3), _scale(spec, E.b, _bi_mul(lam2, nu, spec))))
    den = (one + _scale(spec, E.a, lam2) + _scale(spec, E.b, lam3)) % p
    frac = _bi_mul(num % p, _unit_inverse(den, spec, _bi_mul), spec)
    z3 = (-z1 - z2 + frac) % p
    # the inverse of (x, y) is (x, -y), i.e. z -> -z
    F = (-z3 * mask) % p
    return FormalGroupLaw(spec, N, F, f"E({E.a},{E.b})", elliptic=True, verify=verify)


# --- [p]-series and height ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class PSeries:
    law: FormalGroupLaw
    coeffs: np.ndarray  # (N+1, d)

    def __post_init__(self):
        if self.coeffs[:2].any():
            raise FormalGroupError("[p](t) must have no constant or linear term over F_q")

    @property
    def precision(self) -> int:
        return self.law.precision

    @property
    def valuation(self):
        return _valuation(self.coeffs)

    def leading(self):
        v = self.valuation
        return None if v is None else self.law.base.from_vec(self.coeffs[v])


def multiplication_iterates(G: FormalGroupLaw, m: int) -> list[np.ndarray]:
    """[1](t), ..., [m](t) by repeated formal addition [k+1] = F(t, [k])."""
    out = [_t(G.base, G.precision)]
    for _ in range(m - 1):
        out.append(G.add_to_t(out[-1]))
    return out


def p_series(G: FormalGroupLaw, check: bool = True) -> PSeries:
    p = G.p
    if G.precision < p * p + 1 and G.elliptic:
        raise FormalGroupError("precision must be >= p^2 + 1")
    its = multiplication_iterates(G, p)
    if check:
        # [m] = F([k], [m - k]) through the general substitution path
        for m in range(2, p + 1):
            k = m // 2
            if not np.array_equal(G.substitute(its[k - 1], its[m - k - 1]), its[m - 1]):
                raise FormalGroupError(f"{G.name}: [m]-series homomorphism fails at m = {m}")
    return PSeries(G, its[-1])


def height_of(s: PSeries):
    """log_p of the valuation of [p](t); INF when [p] vanishes to precision."""
    p = s.law.p
    v = s.valuation
    if v is None:
        if s.law.elliptic:
            raise FormalGroupError(f"{s.law.name}: [p] vanishes to precision, impossible for an elliptic law")
        return INF
    h = 0
    n = v
    while n % p == 0:
        n //= p
        h += 1
    if n != 1:
        raise FormalGroupError(f"valuation {v} of [p](t) is not a power of {p}")
    if s.law.elliptic and h > 2:
        raise FormalGroupError(f"{s.law.name}: elliptic law with valuation {v} > p^2")
    return h
