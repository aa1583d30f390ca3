"""Graded model of H^2(A, W_i(O_A)) for a formal Brauer group of height h.

The module D/V^i D has basis e_j = V^j(omega), j < i.  F acts as the
sigma-linear shift e_j -> e_{j+h-1} (zero when h is infinite), V as the
sigma^-1-linear shift e_j -> e_{j+1}, and R is the projection onto the
length-(i-1) quotient.  F is normalized with unit coefficient 1: kernel
dimensions, vanishing and the first length where F is nonzero do not see
the unit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import PrimeSpec, prime_field
from .semilinear import SigmaLinearMap, compose, inverse_twist, kernel_dim, mat_mul, mat_rank
from .strata import INF, format_height


class DieudonneError(ValueError):
    pass


def _shift(n: int, k: int) -> tuple:
    """n x n matrix of e_j -> e_{j+k} (columns are images)."""
    return tuple(tuple(1 if r == c + k else 0 for c in range(n)) for r in range(n))


@dataclass(frozen=True)
class TruncatedDieudonne:
    height: object  # int >= 1 or INF
    length: int
    base: PrimeSpec

    @property
    def F(self) -> SigmaLinearMap:
        n = self.length
        if self.height == INF:
            M = tuple((0,) * n for _ in range(n))
        else:
            M = _shift(n, int(self.height) - 1)
        return SigmaLinearMap(self.base, M, 1)

    @property
    def V(self) -> SigmaLinearMap:
        return SigmaLinearMap(self.base, _shift(self.length, 1), inverse_twist(self.base))

    @property
    def p_action(self) -> SigmaLinearMap:
        """Multiplication by p = V F (a linear map)."""
        return compose(self.V, self.F)

    def restriction(self) -> tuple:
        """R: length i -> length i-1, as an (i-1) x i matrix."""
        n = self.length
        if n < 2:
            raise DieudonneError("restriction needs length >= 2")
        return tuple(tuple(1 if r == c else 0 for c in range(n)) for r in range(n - 1))

    def inclusion_V(self) -> tuple:
        """V: H^2(W_{i-1}) -> H^2(W_i), an i x (i-1) matrix."""
        n = self.length
        return tuple(tuple(1 if r == c + 1 else 0 for c in range(n - 1)) for r in range(n))

    def top_projection(self) -> tuple:
        """R^(i-1): H^2(W_i) -> H^2(O_A), a 1 x i matrix."""
        return (tuple(1 if c == 0 else 0 for c in range(self.length)),)

    def restrict(self) -> "TruncatedDieudonne":
        return TruncatedDieudonne(self.height, self.length - 1, self.base)

    def to_dict(self) -> dict:
        return {
            "height": format_height(self.height),
            "length": self.length,
            "F": [list(r) for r in self.F.matrix],
            "F_twist": self.F.twist,
            "V": [list(r) for r in self.V.matrix],
            "V_twist": self.V.twist,
            "ker_F": {str(i): ker_F_dim(h2_model(self.height, i, self.base))
                      for i in range(1, self.length + 1)},
        }


def h2_model(h, i: int, base: PrimeSpec | None = None) -> TruncatedDieudonne:
    if i < 1:
        raise DieudonneError("length must be >= 1")
    if h != INF and (int(h) != h or h < 1):
        raise DieudonneError(f"height must be a positive integer or infinite, got {h}")
    return TruncatedDieudonne(h if h == INF else int(h), i, base or prime_field(3))


def ker_F_dim(m: TruncatedDieudonne) -> int:
    return kernel_dim(m.F)


def height_from_models(h_true, i_max: int, base: PrimeSpec | None = None):
    """min{i >= 1 : F != 0 on the length-i model}, or INF if F vanishes up to i_max."""
    if h_true != INF and i_max < h_true:
        raise DieudonneError("i_max must reach the height")
    for i in range(1, i_max + 1):
        if not h2_model(h_true, i, base).F.is_zero():
            return i
    return INF


def phi2(m: TruncatedDieudonne) -> SigmaLinearMap:
    """The sigma^2-linear map H^2(O) = H^2(W_2)/V H^2(O) -> V H^2(O) = H^2(O) induced by F."""
    if m.length != 2:
        raise DieudonneError("phi_2 is defined on the length-2 model")
    if not m.restrict().F.is_zero():
        raise DieudonneError("phi_2 needs F = 0 on H^2(O_A), i.e. height >= 2")
    M = m.F.matrix
    # F kills the V-part and lands in it
    assert M[0][0] == 0 and M[0][1] == 0 and M[1][1] == 0
    return SigmaLinearMap(m.base, ((M[1][0],),), 2)


def phi2_vanishes(m: TruncatedDieudonne) -> bool:
    return phi2(m).is_zero()


def exact_sequence_holds(m: TruncatedDieudonne) -> bool:
    """0 -> H^2(W_{i-1}) -V-> H^2(W_i) -R^{i-1}-> H^2(O_A) -> 0 on the model."""
    F, n = m.base, m.length
    if n < 2:
        return True
    Vin, top = m.inclusion_V(), m.top_projection()
    injective = mat_rank(F, Vin) == n - 1
    surjective = mat_rank(F, top) == 1
    composite_zero = not any(any(r) for r in mat_mul(F, top, Vin))
    # exactness in the middle: dim ker(top) = n - 1 = dim im(Vin)
    return injective and surjective and composite_zero and n - mat_rank(F, top) == mat_rank(F, Vin)


def F_commutes_with_transitions(m: TruncatedDieudonne) -> bool:
    """F . V_in = V_in . F and R . F = F . R between lengths i-1 and i."""
    if m.length < 2:
        return True
    F = m.base
    small = m.restrict()
    Fi, Fs = m.F.matrix, small.F.matrix
    Vin, R = m.inclusion_V(), m.restriction()
    ok_v = mat_mul(F, Fi, Vin) == mat_mul(F, Vin, Fs)
    ok_r = mat_mul(F, R, Fi) == mat_mul(F, Fs, R)
    return ok_v and ok_r
