"""Genus-2 and elliptic curves y^2 = f(x) over F_q.

Two routes to p-rank and supersingularity:

* the Cartier-Manin matrix, read off the coefficients of f^((p-1)/2);
* point counts over F_q, F_{q^2} -> L-polynomial -> p-adic Newton slopes.

:func:`classify` runs the first and, with ``verify=True``, asserts agreement
with the second.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .fields import PrimeSpec, Poly, is_squarefree, format_poly, poly_power_coeffs
from .semilinear import SigmaLinearMap, inverse_twist, mat_frob, mat_rank, stable_rank
from .strata import INF, CaseType, case_type, height_from_p_rank


class CurveError(ValueError):
    pass


class OracleDisagreement(AssertionError):
    """The Cartier-Manin route and the point-count route gave different answers."""

    def __init__(self, curve, cartier: dict, slopes: dict):
        self.curve = curve
        self.cartier = cartier
        self.slopes = slopes
        super().__init__(f"oracle disagreement on {curve}: cartier-manin {cartier} vs slopes {slopes}")


@dataclass(frozen=True)
class Genus2Curve:
    spec: PrimeSpec
    f: Poly

    def __post_init__(self):
        if self.f.ring != self.spec:
            raise CurveError("f must have coefficients in the curve's field")
        if self.f.degree not in (5, 6):
            raise CurveError(f"genus-2 model needs deg f in {{5, 6}}, got {self.f.degree}")
        if not is_squarefree(self.f):
            raise CurveError(f"{format_poly(self.f)} is not squarefree")

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def q(self) -> int:
        return self.spec.q

    def __str__(self) -> str:
        return f"y^2 = {format_poly(self.f)} over F_{self.q}"


@dataclass(frozen=True)
class EllipticCurve:
    spec: PrimeSpec
    a: int
    b: int

    def __post_init__(self):
        F = self.spec
        disc = F.add(F.mul(F.scalar(4), F.pow(self.a, 3)), F.mul(F.scalar(27), F.pow(self.b, 2)))
        if disc == 0:
            raise CurveError(f"y^2 = x^3 + {self.a}x + {self.b} is singular")

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def f(self) -> Poly:
        return Poly(self.spec, [self.b, self.a, 0, 1])

    def __str__(self) -> str:
        return f"y^2 = {format_poly(self.f)} over F_{self.q}"


# --- Cartier-Manin -----------------------------------------------------------

def cartier_manin_matrix(C) -> tuple:
    """M[i-1][j-1] = coefficient of x^(i p - j) in f^((p-1)/2), i, j in {1, 2}.

    In the basis dx/y, x dx/y the Cartier operator is v -> sigma^-1(M v).
    Accepts a curve or a bare polynomial f.
    """
    f = C if isinstance(C, Poly) else C.f
    p = f.ring.p
    h = poly_power_coeffs(f, (p - 1) // 2)
    return tuple(tuple(h.coeff(i * p - j) for j in (1, 2)) for i in (1, 2))


def cartier_operator(C: Genus2Curve) -> SigmaLinearMap:
    """The Cartier operator as a sigma^-1-linear map: v -> M^(sigma^-1) v^(sigma^-1)."""
    F = C.spec
    M = cartier_manin_matrix(C)
    return SigmaLinearMap(F, mat_frob(F, M, -1), inverse_twist(F))


def p_rank(C: Genus2Curve) -> int:
    return stable_rank(cartier_operator(C))


def a_number(C: Genus2Curve) -> int:
    return 2 - mat_rank(C.spec, cartier_manin_matrix(C))


def hasse_invariant(E: EllipticCurve) -> int:
    """Coefficient of x^(p-1) in (x^3 + a x + b)^((p-1)/2)."""
    return poly_power_coeffs(E.f, (E.p - 1) // 2).coeff(E.p - 1)


# --- point counting ----------------------------------------------------------

@lru_cache(maxsize=None)
def _extension(spec: PrimeSpec, m: int):
    if m == 1:
        return spec, list(spec.elements())
    return spec.extension(m)


def count_points(C, m: int = 1) -> int:
    """Projective points of the smooth model over F_{q^m}, by exhaustive enumeration."""
    big, emb = _extension(C.spec, m)
    coeffs = [emb[c] for c in C.f.coeffs]
    add, mul, is_sq = big.add, big.mul, big.is_square
    affine = 0
    for x in big.elements():
        v = 0
        for c in reversed(coeffs):
            v = add(mul(v, x), c)
        if v == 0:
            affine += 1
        elif is_sq(v):
            affine += 2
    deg = C.f.degree
    if deg % 2 == 1:
        infinity = 1
    else:
        infinity = 2 if is_sq(coeffs[-1]) else 0
    return affine + infinity


@dataclass(frozen=True)
class LPolynomial:
    """L(T) = prod (1 - alpha_i T); coefficients constant term first."""

    coeffs: tuple
    q: int
    genus: int

    def check_functional_equation(self) -> bool:
        g, q, c = self.genus, self.q, self.coeffs
        return len(c) == 2 * g + 1 and all(c[2 * g - i] == q ** (g - i) * c[i] for i in range(g + 1))

    def reciprocal_roots(self) -> np.ndarray:
        # roots of T^(2g) L(1/T)
        return np.roots([float(x) for x in self.coeffs])

    def check_weil(self, tol: float = 1e-6) -> bool:
        r = np.abs(self.reciprocal_roots())
        return bool(np.all(np.abs(r - np.sqrt(self.q)) < tol * max(1.0, np.sqrt(self.q))))


def l_polynomial(C) -> LPolynomial:
    q = C.q
    N1 = count_points(C, 1)
    if isinstance(C, EllipticCurve):
        return LPolynomial((1, N1 - q - 1, q), q, 1)
    N2 = count_points(C, 2)
    a1 = N1 - (q + 1)
    num = N2 - q * q - 1 + a1 * a1
    if num % 2:
        raise AssertionError(f"non-integral a2 for {C}: N1={N1}, N2={N2}")
    a2 = num // 2
    return LPolynomial((1, a1, a2, q * a1, q * q), q, 2)


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def newton_slopes(L: LPolynomial, p: int | None = None) -> list[Fraction]:
    """Slopes of the p-adic Newton polygon of L, normalized so that they lie in [0, 1]."""
    q = L.q
    if p is None:
        p = next(k for k in range(2, q + 1) if q % k == 0)
    d = round(np.log(q) / np.log(p))
    pts = [(i, _vp(c, p)) for i, c in enumerate(L.coeffs) if c != 0]
    hull = [pts[0]]
    while hull[-1][0] < pts[-1][0]:
        x0, y0 = hull[-1]
        best = None
        for x, y in pts:
            if x <= x0:
                continue
            s = Fraction(y - y0, x - x0)
            # steepest-descent vertex; ties resolved toward the farthest point
            if best is None or s < best[0] or (s == best[0] and x > best[1][0]):
                best = (s, (x, y))
        hull.append(best[1])
    slopes: list[Fraction] = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        s = Fraction(y1 - y0, x1 - x0) / d
        slopes.extend([s] * (x1 - x0))
    return sorted(slopes)


# --- classification ----------------------------------------------------------

@dataclass
class ClassificationRecord:
    p_rank: int
    a_number: int
    height: object
    case_type: CaseType
    cartier_manin: tuple
    l_poly: LPolynomial | None = None
    slopes: list | None = None

    def check_invariants(self) -> None:
        r, a, h = self.p_rank, self.a_number, self.height
        assert (r == 2) == (a == 0) == (h == 1), self
        assert r != 1 or h == 2, self
        assert (r == 0) == (h == INF), self
        assert self.case_type != CaseType.SUPERSPECIAL or a == 2, self

    def to_dict(self) -> dict:
        out = {
            "p_rank": self.p_rank,
            "a_number": self.a_number,
            "height": None if self.height == INF else int(self.height),
            "height_is_infinite": self.height == INF,
            "case": self.case_type.value,
            "cartier_manin": [list(r) for r in self.cartier_manin],
        }
        if self.l_poly is not None:
            out["l_poly"] = list(self.l_poly.coeffs)
            out["a1"], out["a2"] = self.l_poly.coeffs[1], self.l_poly.coeffs[2]
        if self.slopes is not None:
            out["slopes"] = [str(s) for s in self.slopes]
        return out


def classify(C: Genus2Curve, verify: bool = False) -> ClassificationRecord:
    M = cartier_manin_matrix(C)
    r = p_rank(C)
    a = 2 - mat_rank(C.spec, M)
    rec = ClassificationRecord(r, a, height_from_p_rank(r), case_type(r, a), M)
    if verify:
        L = l_polynomial(C)
        slopes = newton_slopes(L, C.p)
        rec.l_poly, rec.slopes = L, slopes
        zero = sum(1 for s in slopes if s == 0)
        all_half = all(s == Fraction(1, 2) for s in slopes)
        if zero != r or all_half != (r == 0) or not L.check_functional_equation():
            raise OracleDisagreement(str(C), {"p_rank": r}, {"zero_slopes": zero, "all_half": all_half,
                                                             "l_poly": L.coeffs})
    rec.check_invariants()
    return rec


@dataclass
class EllipticRecord:
    hasse_invariant: int
    p_rank: int
    a_number: int
    height: int
    a1: int | None = None
    fg_height: object = None
    extra: dict = field(default_factory=dict)

    @property
    def supersingular(self) -> bool:
        return self.p_rank == 0

    def to_dict(self) -> dict:
        return {
            "hasse_invariant": self.hasse_invariant,
            "p_rank": self.p_rank,
            "a_number": self.a_number,
            "height": self.height,
            "height_is_infinite": False,
            "case": "supersingular" if self.supersingular else "ordinary",
            "a1": self.a1,
            "formal_group_height": self.fg_height,
        }


def classify_elliptic(E: EllipticCurve, verify: bool = False) -> EllipticRecord:
    """Hasse invariant route; with ``verify``, cross-checked against a_p and the formal group."""
    H = hasse_invariant(E)
    r = 1 if H else 0
    rec = EllipticRecord(H, r, 1 - r, 1 if r else 2)
    if verify:
        from .formalgroup import elliptic_fgl, height_of, p_series

        L = l_polynomial(E)
        rec.a1 = L.coeffs[1]
        rec.fg_height = height_of(p_series(elliptic_fgl(E)))
        ss_count = L.coeffs[1] % E.p == 0
        if ss_count != (H == 0) or rec.fg_height != rec.height:
            raise OracleDisagreement(str(E), {"hasse": H}, {"a1": L.coeffs[1], "fg_height": rec.fg_height})
    return rec
