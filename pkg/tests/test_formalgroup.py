import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brauerheight.curves import CurveError, EllipticCurve, hasse_invariant
from brauerheight.fields import prime_field
from brauerheight.formalgroup import (FormalGroupError, FormalGroupLaw, PSeries, additive_fgl,
                                      default_precision, elliptic_fgl, height_of, multiplicative_fgl,
                                      multiplication_iterates, p_series, weierstrass_w)
from brauerheight.strata import INF

from oracles import count_points_prime


def test_multiplicative_and_additive():
    for p in (3, 5, 7):
        F = prime_field(p)
        s = p_series(multiplicative_fgl(F, p + 3))
        assert s.valuation == p and height_of(s) == 1
        assert height_of(p_series(additive_fgl(F, p + 3))) == INF
    s = p_series(multiplicative_fgl(prime_field(3), 10))
    want = np.zeros(11, dtype=int)
    want[3] = 1
    assert np.array_equal(s.coeffs[:, 0], want)


def test_precision_guard():
    with pytest.raises(FormalGroupError):
        multiplicative_fgl(prime_field(5), 4)
    with pytest.raises(FormalGroupError):
        elliptic_fgl(EllipticCurve(prime_field(3), 1, 0), 9)


def test_weierstrass_w_series_leading_terms():
    # w = z^3 + a z^7 + b z^9 + ...
    F = prime_field(7)
    w = weierstrass_w(EllipticCurve(F, 2, 3), 12)[:, 0]
    assert list(w[:10]) == [0, 0, 0, 1, 0, 0, 0, 2, 0, 3]


def test_elliptic_law_shape():
    F = prime_field(5)
    G = elliptic_fgl(EllipticCurve(F, 1, 1))
    assert G.precision == default_precision(5) == 29
    C = G.coeffs[..., 0]
    assert C[0, 0] == 0 and C[1, 0] == 1 and C[0, 1] == 1
    assert C[1, 1] == 0  # a1 = 0 kills the degree-2 cross term
    assert G.check_associative(exact_degree=29)


def test_height_two_example_f3():
    E = EllipticCurve(prime_field(3), 1, 0)
    assert count_points_prime([0, 1, 0, 1], 3) == 4  # a_3 = 0
    s = p_series(elliptic_fgl(E))
    assert s.valuation == 9 and height_of(s) == 2


def test_height_one_iff_trace_unit_f3():
    F = prime_field(3)
    for a in range(3):
        for b in range(3):
            try:
                E = EllipticCurve(F, a, b)
            except CurveError:
                continue
            ap = 4 - count_points_prime([b, a, 0, 1], 3)
            h = height_of(p_series(elliptic_fgl(E)))
            assert (h == 1) == (ap % 3 != 0)


def test_supersingular_f7_valuation_49():
    F = prime_field(7)
    E = EllipticCurve(F, 1, 0)  # y^2 = x^3 + x is supersingular for p = 3 mod 4
    assert (8 - count_points_prime([0, 1, 0, 1], 7)) % 7 == 0
    s = p_series(elliptic_fgl(E))
    assert s.valuation == 49 and height_of(s) == 2


def test_height_of_rejects_non_power():
    F = prime_field(5)
    G = additive_fgl(F, 12)
    coeffs = np.zeros((13, 1), dtype=np.int64)
    coeffs[6] = 1
    with pytest.raises(FormalGroupError):
        height_of(PSeries(G, coeffs))
    coeffs = np.zeros((13, 1), dtype=np.int64)
    coeffs[1] = 1
    with pytest.raises(FormalGroupError):
        PSeries(G, coeffs)


def test_broken_law_is_rejected():
    F = prime_field(5)
    N = 8
    C = np.zeros((N + 1, N + 1, 1), dtype=np.int64)
    C[1, 0] = C[0, 1] = 1
    C[2, 1] = C[1, 2] = 1  # X + Y + X^2 Y + X Y^2 is not associative
    with pytest.raises(FormalGroupError):
        FormalGroupLaw(F, N, C, "broken")


def test_broken_law_beyond_exact_window_is_caught_randomly():
    F = prime_field(5)
    N = 12
    C = np.zeros((N + 1, N + 1, 1), dtype=np.int64)
    C[1, 0] = C[0, 1] = 1
    C[6, 5] = C[5, 6] = 1
    G = FormalGroupLaw(F, N, C, "broken", verify=False)
    assert not G.check_associative(np.random.default_rng(0), exact_degree=4, trials=6)


@st.composite
def elliptic(draw):
    p, d = draw(st.sampled_from([(3, 1), (5, 1), (7, 1), (3, 2)]))
    F = prime_field(p, d)
    a, b = draw(st.integers(0, F.q - 1)), draw(st.integers(0, F.q - 1))
    try:
        return EllipticCurve(F, a, b)
    except CurveError:
        return EllipticCurve(F, 1, 0) if p != 3 or d != 1 else EllipticCurve(F, 1, 0)


@settings(max_examples=15)
@given(elliptic())
def test_elliptic_law_invariants(E):
    G = elliptic_fgl(E)
    iota = G.inverse_series()
    assert not G.add_to_t(iota).any()
    s = p_series(G)
    h = height_of(s)
    assert h in (1, 2)
    assert (h == 2) == (hasse_invariant(E) == 0)
    its = multiplication_iterates(G, E.p)
    for m in range(1, E.p + 1):
        assert np.array_equal(G.multiplication_series(m), its[m - 1])


@settings(max_examples=10)
@given(st.sampled_from([(3, 1), (5, 1), (3, 2)]), st.sampled_from(["gm", "ga"]))
def test_builtin_inverse(field, kind):
    F = prime_field(*field)
    G = (multiplicative_fgl if kind == "gm" else additive_fgl)(F, 10)
    iota = G.inverse_series()
    assert not G.add_to_t(iota).any()
