import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from brauerheight.fields import (FieldError, FieldElement, Poly, PrimeSpec, TruncatedRing, field_arith,
                                 format_poly, formal_derivative, fq_convolve, frobenius, is_irreducible_fp,
                                 is_squarefree, parse_poly, poly_power_coeffs, prime_field)

from oracles import frob_fq, poly_power_mod_p

FIELDS = [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (7, 2), (11, 1), (13, 1), (3, 3)]


@st.composite
def field_triples(draw):
    p, d = draw(st.sampled_from(FIELDS))
    F = prime_field(p, d)
    codes = st.integers(0, F.q - 1)
    return F, FieldElement(F, draw(codes)), FieldElement(F, draw(codes)), FieldElement(F, draw(codes))


def test_prime_field_examples():
    F3 = prime_field(3)
    assert field_arith(F3.elem(2), F3.elem(2), "add") == F3.elem(1)
    F9 = prime_field(3, 2)
    assert F9.modulus == (1, 0, 1)  # t^2 + 1
    t = F9.gen()
    assert (t * t).coeffs == (2, 0)
    assert field_arith(t + 1, t + 1, "div") == F9.elem(1)


def test_field_errors():
    F9 = prime_field(3, 2)
    with pytest.raises(ZeroDivisionError):
        field_arith(F9.elem(1), F9.elem(0), "div")
    with pytest.raises(FieldError):
        field_arith(F9.elem(1), prime_field(3).elem(1), "add")
    with pytest.raises(FieldError):
        PrimeSpec(2)
    with pytest.raises(FieldError):
        PrimeSpec(9)
    with pytest.raises(FieldError):
        PrimeSpec(17)
    with pytest.raises(FieldError):
        PrimeSpec(3, 2, modulus=(2, 0, 1))  # t^2 + 2 = (t-1)(t+1)


def test_frobenius_examples():
    F9 = prime_field(3, 2)
    t = F9.gen()
    # a^(p^r) by sympy polynomial arithmetic
    assert frob_fq([0, 1], 1, 3, [1, 0, 1]) == [0, 2]
    assert frobenius(t, 1).coeffs == (0, 2)
    assert frobenius(t, 0) == t
    assert frobenius(prime_field(3).elem(2), 5) == 2


@pytest.mark.parametrize("p,d", [(3, 2), (5, 2), (3, 3)])
def test_frobenius_matches_oracle(p, d):
    F = prime_field(p, d)
    for code in F.elements():
        vec = list(F.to_vec(code))
        assert list(F.to_vec(F.frob(code, 1))) == frob_fq(vec, 1, p, list(F.modulus))


@given(field_triples())
def test_field_axioms(tr):
    F, a, b, c = tr
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0
    if a:
        assert a * (FieldElement(F, 1) / a) == 1


@given(field_triples(), st.integers(-5, 5))
def test_frobenius_homomorphism(tr, r):
    F, a, b, _ = tr
    assert frobenius(a * b, r) == frobenius(a, r) * frobenius(b, r)
    assert frobenius(a + b, r) == frobenius(a, r) + frobenius(b, r)
    assert frobenius(a, F.d) == a
    assert frobenius(frobenius(a, r), -r) == a


def test_default_modulus_is_first_irreducible():
    for p, d in [(3, 2), (5, 2), (7, 2), (3, 3)]:
        F = prime_field(p, d)
        assert is_irreducible_fp(F.modulus, p)
        # lexicographically earlier monic polynomials are all reducible
        for n in range(sum(c * p**k for k, c in enumerate(F.modulus[:-1]))):
            low = [(n // p**k) % p for k in range(d)]
            assert not is_irreducible_fp(low + [1], p)


def test_poly_power_examples():
    F3, F5 = prime_field(3), prime_field(5)
    assert poly_power_coeffs(Poly(F3, [1, 1]), 2).coeffs == (1, 2, 1)
    f = Poly(F3, [1, 0, 0, 0, 0, 1])
    assert poly_power_coeffs(f, 1) == f
    g = Poly(F5, [0, 1, 0, 1])
    assert poly_power_mod_p([1, 0, 1, 0], 2, 5) == [1, 0, 2, 0, 1, 0, 0]
    assert poly_power_coeffs(g, 2).coeffs == (0, 0, 1, 0, 2, 0, 1)


@given(st.sampled_from([3, 5, 7]), st.lists(st.integers(0, 12), min_size=1, max_size=7), st.integers(0, 4))
def test_poly_power_matches_sympy(p, coeffs, e):
    F = prime_field(p)
    f = Poly(F, [c % p for c in coeffs])
    if f.is_zero:
        return
    got = poly_power_coeffs(f, e)
    want = poly_power_mod_p(list(reversed(f.coeffs)), e, p)
    assert list(reversed(got.coeffs)) == want


def test_poly_degree_sentinel_and_format():
    F = prime_field(3)
    assert Poly(F, []).degree == -1
    assert Poly(F, [0, 0]).degree == -1
    f = parse_poly("x^5+x^2+1", F)
    assert f.coeffs == (1, 0, 1, 0, 0, 1)
    assert format_poly(f) == "x^5+x^2+1"
    assert format_poly(parse_poly("2*x^3 - x + 4", F)) == "2*x^3+2*x+1"


@given(st.sampled_from([3, 5, 7]), st.lists(st.integers(0, 6), min_size=1, max_size=8))
def test_format_parse_roundtrip(p, coeffs):
    F = prime_field(p)
    f = Poly(F, [c % p for c in coeffs])
    assert parse_poly(format_poly(f), F) == f


def test_squarefree():
    F = prime_field(5)
    assert not is_squarefree(parse_poly("x^5+1", F))  # (x+1)^5
    assert is_squarefree(parse_poly("x^5+x+1", F))


def test_formal_derivative_examples():
    R = TruncatedRing(prime_field(3), 9)
    assert formal_derivative(R.elem([0, 0, 0, 1])).value == (0,) * 8
    assert formal_derivative(R.elem([0, 0, 1])).value == (0, 2) + (0,) * 6
    assert formal_derivative(R.elem([0, 1, 0, 0, 1])).value == (1, 0, 0, 1) + (0,) * 4


@st.composite
def trunc_pairs(draw):
    p, d = draw(st.sampled_from([(3, 1), (5, 1), (3, 2)]))
    m = draw(st.integers(2, 12))
    R = TruncatedRing(prime_field(p, d), m)
    rng = random.Random(draw(st.integers(0, 2**32)))
    return R, R.random(rng), R.random(rng)


@given(trunc_pairs())
def test_leibniz_rule(pair):
    R, a, b = pair
    S = TruncatedRing(R.field, R.m - 1)
    trim = lambda v: v[: R.m - 1]  # noqa: E731
    lhs = R.derivative(R.mul(a, b))
    rhs = S.add(S.mul(trim(a), R.derivative(b)), S.mul(R.derivative(a), trim(b)))
    assert lhs == rhs


@given(trunc_pairs())
def test_derivative_kills_exactly_pth_powers(pair):
    R, a, _ = pair
    p = R.p
    da = R.derivative(a)
    # kernel of d is spanned by monomials x^k with p | k
    assert (not any(da)) == all(c == 0 for k, c in enumerate(a) if k % p)
    assert not any(R.derivative(R.frob(a, 1)))


@pytest.mark.parametrize("p,d", [(3, 1), (5, 2), (7, 2)])
def test_fq_convolve_matches_schoolbook(p, d):
    F = prime_field(p, d)
    rng = np.random.default_rng(p * d)
    a = rng.integers(0, p, (5, d))
    b = rng.integers(0, p, (4, d))
    got = fq_convolve(a, b, F, (8,))
    for k in range(8):
        acc = 0
        for i in range(5):
            if 0 <= k - i < 4:
                acc = F.add(acc, F.mul(F.from_vec(a[i]), F.from_vec(b[k - i])))
        assert F.from_vec(got[k]) == acc


def test_extension_embedding_is_a_homomorphism():
    F = prime_field(3, 2)
    big, emb = F.extension(2)
    assert big.q == 81
    for a in F.elements():
        for b in F.elements():
            assert emb[F.mul(a, b)] == big.mul(emb[a], emb[b])
            assert emb[F.add(a, b)] == big.add(emb[a], emb[b])
