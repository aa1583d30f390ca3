"""Finite fields F_{p^d}, polynomials over them, and truncated differential rings.

Field elements are encoded internally as integer codes ``c_0 + c_1 p + ... +
c_{d-1} p^{d-1}`` standing for ``c_0 + c_1 t + ... + c_{d-1} t^{d-1}`` in
``F_p[t]/(modulus)``.  Hot loops (point counting, series arithmetic) work on
codes through the :class:`PrimeSpec` methods; :class:`FieldElement` is the
public, operator-overloaded wrapper.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.signal import fftconvolve

MAX_DEFAULT_PRIME = 13
ZERO_DEGREE = -1  # degree of the zero polynomial

_ADD_TABLE_LIMIT = 1024


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


# --- dense polynomial helpers over F_p (lists, low degree first) -------------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_polymod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _trim(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], -1, p)
    while len(a) - 1 >= db and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        for k, bk in enumerate(b):
            a[shift + k] = (a[shift + k] - coef * bk) % p
        _trim(a)
    return a


def _monic_polys(p: int, deg: int) -> Iterable[tuple[int, ...]]:
    """All monic polynomials of exact degree ``deg``, lexicographic in the low coefficients."""
    for n in range(p**deg):
        digits = []
        for _ in range(deg):
            digits.append(n % p)
            n //= p
        yield tuple(digits) + (1,)


def is_irreducible_fp(poly: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim([c % p for c in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for k in range(1, deg // 2 + 1):
        for g in _monic_polys(p, k):
            if not _fp_polymod(poly, g, p):
                return False
    return True


@lru_cache(maxsize=None)
def first_irreducible(p: int, d: int) -> tuple[int, ...]:
    for g in _monic_polys(p, d):
        if is_irreducible_fp(g, p):
            return g
    raise FieldError(f"no irreducible polynomial of degree {d} over F_{p}")  # pragma: no cover


# --- the field ---------------------------------------------------------------

class PrimeSpec:
    """The finite field F_p[t]/(modulus) with table-driven arithmetic on codes.

    ``modulus`` is a monic irreducible polynomial of degree ``d`` given as its
    coefficient list, constant term first.  When omitted, the lexicographically
    first monic irreducible polynomial of degree ``d`` is used.
    """

    def __init__(self, p: int, d: int = 1, modulus: Sequence[int] | None = None,
                 *, allow_large: bool = False):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if p == 2:
            raise FieldError("p = 2 is not supported (y^2 = f(x) degenerates)")
        if p > MAX_DEFAULT_PRIME and not allow_large:
            raise FieldError(f"p = {p} exceeds the supported bound {MAX_DEFAULT_PRIME}")
        if d < 1:
            raise FieldError("extension degree must be >= 1")
        if modulus is None:
            modulus = first_irreducible(p, d)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != d + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {d}")
        if not is_irreducible_fp(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.d = d
        self.q = p**d
        self.modulus = modulus
        self._digits = [self._code_to_vec(c) for c in range(self.q)]
        self._build_tables()

    # encoding
    def _code_to_vec(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.d):
            out.append(code % self.p)
            code //= self.p
        return tuple(out)

    def to_vec(self, code: int) -> tuple[int, ...]:
        return self._digits[code]

    def from_vec(self, vec: Sequence[int]) -> int:
        code = 0
        for c in reversed(list(vec)[: self.d]):
            code = code * self.p + int(c) % self.p
        return code

    def _vec_mul(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        p, d = self.p, self.d
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        rem = _fp_polymod(prod, self.modulus, p)
        return tuple(rem + [0] * (d - len(rem)))

    def _build_tables(self) -> None:
        q = self.q
        # primitive element by search
        for g in range(1, q):
            exp = [0] * (q - 1)
            x = 1
            seen = set()
            gv = self._digits[g]
            ok = True
            for k in range(q - 1):
                if x in seen:
                    ok = False
                    break
                seen.add(x)
                exp[k] = x
                x = self.from_vec(self._vec_mul(self._digits[x], gv))
            if ok and len(seen) == q - 1:
                break
        self._exp = exp + exp  # doubled to skip a modulo in mul
        self._log = [0] * q
        for k, x in enumerate(exp):
            self._log[x] = k
        if q <= _ADD_TABLE_LIMIT:
            self._add = [[self._add_digits(a, b) for b in range(q)] for a in range(q)]
        else:
            self._add = None
        self._neg = [self.from_vec([-c for c in self._digits[a]]) for a in range(q)]

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        return self.from_vec([(x + y) % p for x, y in zip(self._digits[a], self._digits[b])])

    # arithmetic on codes
    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        if self._add is not None:
            return self._add[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frob(self, a: int, r: int = 1) -> int:
        """a^(p^r); negative r is the inverse Frobenius."""
        r %= self.d
        return self.pow(a, self.p**r)

    def scalar(self, n: int) -> int:
        """Image of the integer n."""
        return n % self.p

    def is_square(self, a: int) -> bool:
        return a == 0 or self._log[a] % 2 == 0

    def elements(self) -> range:
        return range(self.q)

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.q)

    def elem(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.spec != self:
                raise FieldError("element belongs to a different field")
            return x
        if isinstance(x, (tuple, list)):
            return FieldElement(self, self.from_vec(x))
        return FieldElement(self, self.scalar(int(x)))

    def gen(self) -> "FieldElement":
        """The class of t."""
        return FieldElement(self, self.from_vec((0, 1)) if self.d > 1 else 0)

    @property
    def char(self) -> int:
        return self.p

    # embeddings
    def extension(self, k: int) -> tuple["PrimeSpec", list[int]]:
        """F_{q^k} together with the embedding of codes F_q -> F_{q^k}."""
        big = PrimeSpec(self.p, self.d * k, allow_large=True)
        if self.d == 1:
            return big, list(range(self.p))
        # root of our modulus in the big field
        root = None
        for z in big.elements():
            acc = 0
            for c in reversed(self.modulus):
                acc = big.add(big.mul(acc, z), big.scalar(c))
            if acc == 0:
                root = z
                break
        assert root is not None
        powers = [1]
        for _ in range(self.d - 1):
            powers.append(big.mul(powers[-1], root))
        emb = []
        for code in self.elements():
            acc = 0
            for c, pw in zip(self._digits[code], powers):
                acc = big.add(acc, big.mul(big.scalar(c), pw))
            emb.append(acc)
        return big, emb

    # numpy helpers: elements as length-d coefficient vectors
    def reduction_matrix(self) -> np.ndarray:
        """Rows are t^k mod modulus for k < 2d - 1, as F_p vectors."""
        d, p = self.d, self.p
        rows = []
        for k in range(2 * d - 1):
            mono = [0] * k + [1]
            r = _fp_polymod(mono, self.modulus, p)
            rows.append(r + [0] * (d - len(r)))
        return np.array(rows, dtype=np.int64)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeSpec) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))

    def __repr__(self) -> str:
        if self.d == 1:
            return f"PrimeSpec(p={self.p})"
        return f"PrimeSpec(p={self.p}, d={self.d}, modulus={self.modulus})"

    def __reduce__(self):
        return (_rebuild_spec, (self.p, self.d, self.modulus))


@lru_cache(maxsize=None)
def _rebuild_spec(p: int, d: int, modulus: tuple[int, ...]) -> PrimeSpec:
    return PrimeSpec(p, d, modulus, allow_large=True)


def prime_field(p: int, d: int = 1) -> PrimeSpec:
    """Cached constructor for the default model of F_{p^d}."""
    return _rebuild_spec(p, d, first_irreducible(p, d))


@dataclass(frozen=True)
class FieldElement:
    spec: PrimeSpec
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.to_vec(self.code)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldError("mismatched fields")
            return other.code
        if isinstance(other, int):
            return self.spec.scalar(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return FieldElement(self.spec, self.spec.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self.code, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self._coerce(other), self.code))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.code))

    def __mul__(self, other):
        return FieldElement(self.spec, self.spec.mul(self.code, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.spec, self.spec.div(self.code, self._coerce(other)))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.code, e))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.code == self.spec.scalar(other)
        return isinstance(other, FieldElement) and self.spec == other.spec and self.code == other.code

    def __hash__(self) -> int:
        return hash((self.spec, self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __repr__(self) -> str:
        if self.spec.d == 1:
            return str(self.code)
        terms = [_fmt_term(c, k, "t") for k, c in reversed(list(enumerate(self.coeffs))) if c]
        return "+".join(terms) or "0"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.spec != b.spec:
        raise FieldError("mismatched fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.code == 0:
            raise ZeroDivisionError("division by zero in a finite field")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def frobenius(a: FieldElement, r: int = 1) -> FieldElement:
    return FieldElement(a.spec, a.spec.frob(a.code, r))


# --- coefficient rings for Poly ----------------------------------------------

class IntegersMod:
    """Z/nZ on plain integers; used for exact lifts Z/p^e."""

    def __init__(self, n: int):
        self.n = n

    zero = 0
    one = 1

    def add(self, a, b):
        return (a + b) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def neg(self, a):
        return -a % self.n

    def mul(self, a, b):
        return a * b % self.n

    def scalar(self, k):
        return k % self.n

    def __eq__(self, other):
        return isinstance(other, IntegersMod) and other.n == self.n

    def __hash__(self):
        return hash(("Z/n", self.n))

    def __repr__(self):
        return f"IntegersMod({self.n})"


class Poly:
    """Dense univariate polynomial over a PrimeSpec or IntegersMod (codes, low degree first)."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs: Iterable[int]):
        self.ring = ring
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ring, self.coeffs))

    def _check(self, other: "Poly") -> None:
        if self.ring != other.ring:
            raise FieldError("polynomials over different rings")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        R = self.ring
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(R, [R.add(self.coeff(k), other.coeff(k)) for k in range(n)])

    def __neg__(self) -> "Poly":
        return Poly(self.ring, [self.ring.neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        R = self.ring
        if not self.coeffs or not other.coeffs:
            return Poly(R, [])
        out = [R.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = R.add(out[i + j], R.mul(a, b))
        return Poly(R, out)

    def scale(self, c: int) -> "Poly":
        return Poly(self.ring, [self.ring.mul(c, a) for a in self.coeffs])

    def __pow__(self, e: int) -> "Poly":
        return poly_power_coeffs(self, e)

    def derivative(self) -> "Poly":
        R = self.ring
        return Poly(R, [R.mul(R.scalar(k), c) for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: int) -> int:
        R = self.ring
        acc = R.zero
        for c in reversed(self.coeffs):
            acc = R.add(R.mul(acc, x), c)
        return acc

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        R = self.ring
        if not isinstance(R, PrimeSpec):
            raise FieldError("division needs a field of coefficients")
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = R.inv(other.lead)
        quo = [0] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db and rem:
            coef = R.mul(rem[-1], inv_lead)
            shift = len(rem) - 1 - db
            quo[shift] = coef
            for k, b in enumerate(other.coeffs):
                rem[shift + k] = R.sub(rem[shift + k], R.mul(coef, b))
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(R, quo), Poly(R, rem)

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        return self.scale(self.ring.inv(self.lead)) if self.coeffs else self

    def __repr__(self) -> str:
        return format_poly(self)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def is_squarefree(f: Poly) -> bool:
    return poly_gcd(f, f.derivative()).degree == 0


def poly_power_coeffs(f: Poly, e: int) -> Poly:
    if e < 0:
        raise ValueError("negative exponent")
    result = Poly(f.ring, [f.ring.one])
    base = f
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


# --- ASCII polynomial form ---------------------------------------------------

def _fmt_term(c: int, k: int, var: str) -> str:
    if k == 0:
        return str(c)
    mono = var if k == 1 else f"{var}^{k}"
    return mono if c == 1 else f"{c}*{mono}"


def format_poly(f: Poly, var: str = "x") -> str:
    """Canonical form: descending degree, '+'-joined, least nonnegative residues.

    Over F_{p^d} with d > 1 each coefficient is printed as its integer code.
    """
    terms = [_fmt_term(c, k, var) for k, c in reversed(list(enumerate(f.coeffs))) if c]
    return "+".join(terms) if terms else "0"


_TERM = re.compile(r"^(?:(\d+)\*?)?(?:([a-z])(?:\^(\d+))?)?$")


def parse_poly(text: str, ring, var: str = "x") -> Poly:
    """Inverse of :func:`format_poly`; also accepts '-' and whitespace."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    s = s.replace("-", "+-")
    coeffs: dict[int, int] = {}
    for raw in s.split("+"):
        if not raw:
            continue
        sign = 1
        if raw.startswith("-"):
            sign, raw = -1, raw[1:]
        m = _TERM.match(raw)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"cannot parse term {raw!r} in {text!r}")
        c_txt, v, e_txt = m.groups()
        if v is not None and v != var:
            raise ValueError(f"unexpected variable {v!r}")
        c = int(c_txt) if c_txt is not None else 1
        k = 0 if v is None else (int(e_txt) if e_txt else 1)
        if isinstance(ring, PrimeSpec):
            if ring.d > 1 and not 0 <= c < ring.q:
                raise ValueError(f"coefficient code {c} out of range for F_{ring.q}")
            code = c if ring.d > 1 else ring.scalar(c)
            if sign < 0:
                code = ring.neg(code)
            coeffs[k] = ring.add(coeffs.get(k, 0), code)
        else:
            coeffs[k] = ring.add(coeffs.get(k, 0), ring.scalar(sign * c))
    deg = max(coeffs)
    return Poly(ring, [coeffs.get(k, 0) for k in range(deg + 1)])


# --- numpy convolution over F_q ----------------------------------------------

def fq_convolve(a: np.ndarray, b: np.ndarray, spec: PrimeSpec,
                shape: tuple[int, ...] | None = None) -> np.ndarray:
    """Multiply two dense (multivariate) polynomials with coefficients in F_q.

    ``a`` and ``b`` have shape ``(*dims, d)`` where the last axis holds the
    F_p-coordinates of each coefficient.  The product is reduced mod the
    field modulus and cropped (or zero-padded) to ``shape``.  Small inputs use
    a Kronecker-substituted integer convolution; large ones a float FFT whose
    rounding is exact because every coefficient stays far below 2^52.
    """
    p, d = spec.p, spec.d
    nd = a.ndim - 1
    full = tuple(a.shape[r] + b.shape[r] - 1 for r in range(nd))
    blk = 2 * d - 1
    if a.size * b.size <= _DIRECT_CONV_LIMIT:
        c = _kronecker_convolve(a, b, full, blk)
    else:
        bound = min(a.size, b.size) * (p - 1) ** 2
        assert bound < 2**45, "FFT convolution would lose exactness"
        c = np.rint(fftconvolve(a.astype(np.float64), b.astype(np.float64))).astype(np.int64)
    if shape is not None:
        c = c[tuple(slice(0, s) for s in shape)]
        pad = [(0, max(0, s - c.shape[r])) for r, s in enumerate(shape)] + [(0, 0)]
        c = np.pad(c, pad)
    if d == 1:
        return c % p
    return (c % p) @ spec.reduction_matrix() % p


_DIRECT_CONV_LIMIT = 40_000


def _kronecker_convolve(a: np.ndarray, b: np.ndarray, full: tuple, blk: int) -> np.ndarray:
    nd = len(full)
    strides = [blk] * nd
    for r in range(nd - 2, -1, -1):
        strides[r] = strides[r + 1] * full[r + 1]
    size = strides[0] * full[0] if nd else blk

    def flatten(x: np.ndarray) -> np.ndarray:
        out = np.zeros(size, dtype=np.int64)
        idx = np.indices(x.shape).reshape(x.ndim, -1)
        pos = sum(idx[r] * strides[r] for r in range(nd)) + idx[nd]
        out[pos] = x.reshape(-1)
        return out

    c = np.convolve(flatten(a), flatten(b))
    c = c[:size]
    return np.pad(c, (0, size - len(c))).reshape(*full, blk)


def fq_matmul(A: np.ndarray, B: np.ndarray, spec: PrimeSpec) -> np.ndarray:
    """Matrix product over F_q for arrays of shape (n, m, d) and (m, k, d)."""
    p, d = spec.p, spec.d
    if d == 1:
        return (A[..., 0] @ B[..., 0] % p)[..., None]
    out = np.zeros((A.shape[0], B.shape[1], 2 * d - 1), dtype=np.int64)
    for s in range(d):
        for u in range(d):
            out[..., s + u] += A[..., s] @ B[..., u] % p
    return (out % p) @ spec.reduction_matrix() % p


def codes_to_array(codes: Sequence[int], spec: PrimeSpec) -> np.ndarray:
    return np.array([spec.to_vec(c) for c in codes], dtype=np.int64).reshape(len(codes), spec.d)


def array_to_codes(arr: np.ndarray, spec: PrimeSpec) -> tuple[int, ...]:
    flat = arr.reshape(-1, spec.d)
    if spec.d == 1:
        return tuple(int(x) for x in flat[:, 0])
    return tuple(spec.from_vec(row) for row in flat.tolist())


# --- truncated differential rings --------------------------------------------

class TruncatedRing:
    """F_q[x]/(x^m).  Elements are tuples of m field codes."""

    def __init__(self, field: PrimeSpec, m: int):
        if m < 1:
            raise ValueError("truncation order must be >= 1")
        self.field = field
        self.m = m
        self.p = field.p
        self.zero = (0,) * m
        self.one = (1,) + (0,) * (m - 1)

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncatedRing) and (self.field, self.m) == (other.field, other.m)

    def __hash__(self) -> int:
        return hash((self.field, self.m))

    def __repr__(self) -> str:
        return f"TruncatedRing({self.field!r}, m={self.m})"

    @property
    def char(self) -> int:
        return self.p

    def add(self, a, b):
        F = self.field
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.field.neg(x) for x in a)

    def sub(self, a, b):
        F = self.field
        return tuple(F.sub(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        F, m = self.field, self.m
        if F.d == 1:
            c = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))[:m] % F.p
            return tuple(int(x) for x in c)
        arr = fq_convolve(codes_to_array(a, F), codes_to_array(b, F), F, (m,))
        return array_to_codes(arr, F)

    def pow(self, a, e: int):
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def frob(self, a, r: int = 1):
        """a^(p^r) for r >= 0: coefficientwise Frobenius and x -> x^(p^r)."""
        F, m = self.field, self.m
        step = F.p**r
        out = [0] * m
        for k, c in enumerate(a):
            if c and k * step < m:
                out[k * step] = F.frob(c, r)
        return tuple(out)

    def scalar(self, n: int):
        return (self.field.scalar(n),) + (0,) * (self.m - 1)

    def from_poly(self, coeffs: Sequence[int]):
        c = [int(x) for x in coeffs][: self.m]
        return tuple(c + [0] * (self.m - len(c)))

    def x(self):
        return self.from_poly([0, 1])

    def random(self, rng: random.Random):
        return tuple(self.field.random(rng) for _ in range(self.m))

    def derivative(self, a):
        """Formal derivative F_q[x]/(x^m) -> F_q[x]/(x^(m-1))."""
        F = self.field
        return tuple(F.mul(F.scalar(k), c) for k, c in enumerate(a))[1:]

    def elem(self, coeffs) -> "TruncatedDiffElem":
        return TruncatedDiffElem(self, self.from_poly(coeffs))


@dataclass(frozen=True)
class TruncatedDiffElem:
    ring: TruncatedRing
    value: tuple

    @property
    def m(self) -> int:
        return self.ring.m

    def __add__(self, other):
        return TruncatedDiffElem(self.ring, self.ring.add(self.value, other.value))

    def __sub__(self, other):
        return TruncatedDiffElem(self.ring, self.ring.sub(self.value, other.value))

    def __mul__(self, other):
        return TruncatedDiffElem(self.ring, self.ring.mul(self.value, other.value))

    def __pow__(self, e: int):
        return TruncatedDiffElem(self.ring, self.ring.pow(self.value, e))

    def __repr__(self) -> str:
        return format_poly(Poly(self.ring.field, self.value)) + f" mod x^{self.m}"


def formal_derivative(g: TruncatedDiffElem) -> TruncatedDiffElem:
    R = g.ring
    if R.m == 1:
        raise ValueError("derivative undefined on F_q[x]/(x)")
    target = TruncatedRing(R.field, R.m - 1)
    return TruncatedDiffElem(target, R.derivative(g.value))
