import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from brauerheight.fields import TruncatedRing, prime_field
from brauerheight.ghost import ghost_oracle
from brauerheight.selfcheck import witt_selfcheck
from brauerheight.witt import (WittError, WittVec, build_witt_table, random_witt, serre_D, table_available,
                               teichmuller, witt_add, witt_F, witt_mul, witt_one, witt_R, witt_scalar,
                               witt_V, witt_zero)

from oracles import witt_sum_ghost_symbolic


def to_sympy(f, variables):
    return sum(c * sympy.Mul(*[v**e for v, e in zip(variables, exps)]) for exps, c in f.items())


def test_length_one_table():
    T = build_witt_table(3, 1)
    a0, b0 = sympy.symbols("a0 b0")
    assert sympy.expand(to_sympy(T.sum_polys[0], [a0, b0]) - (a0 + b0)) == 0
    assert sympy.expand(to_sympy(T.prod_polys[0], [a0, b0]) - a0 * b0) == 0


@pytest.mark.parametrize("p,n", [(3, 2), (3, 3), (5, 2)])
def test_sum_polys_match_symbolic_ghost_solve(p, n):
    T = build_witt_table(p, n)
    a, b, S = witt_sum_ghost_symbolic(p, n)
    for k in range(n):
        assert sympy.expand(to_sympy(T.sum_polys[k], list(a) + list(b)) - S[k]) == 0


def test_s1_closed_form_p3():
    T = build_witt_table(3, 2)
    a0, a1, b0, b1 = sympy.symbols("a0 a1 b0 b1")
    want = a1 + b1 + (a0**3 + b0**3 - (a0 + b0) ** 3) / 3
    assert sympy.expand(to_sympy(T.sum_polys[1], [a0, a1, b0, b1]) - want) == 0


@pytest.mark.parametrize("p,n", [(5, 2), (3, 4), (7, 2), (7, 3)])
def test_ghost_identity_random_points(p, n):
    assert build_witt_table(p, n).check_ghost(random.Random(7), points=100, symbolic=False)


def test_table_size_limit():
    assert not table_available(7, 4)
    with pytest.raises(WittError):
        build_witt_table(7, 4)
    with pytest.raises(WittError):
        build_witt_table(3, 0)


def test_table_cache_returns_same_object():
    assert build_witt_table(5, 3) is build_witt_table(5, 3)


F3 = prime_field(3)


def W(*coords, ring=F3):
    return WittVec.of(coords, ring)


def test_witt_examples_f3():
    # values frozen from the ghost-component oracle over Z/9
    assert ghost_oracle(W(1, 0), W(1, 0), "add") == W(2, 1)
    assert witt_add(W(1, 0), W(1, 0)) == W(2, 1)
    for a0 in range(3):
        for a1 in range(3):
            assert witt_mul(W(1, 0), W(a0, a1)) == W(a0, a1)
    three = witt_add(witt_add(W(1, 0), W(1, 0)), W(1, 0))
    assert ghost_oracle(ghost_oracle(W(1, 0), W(1, 0), "add"), W(1, 0), "add") == W(0, 1)
    assert three == W(0, 1)
    assert three == witt_R(witt_V(witt_F(W(1, 0))))


def test_operator_examples():
    assert witt_F(W(1, 2)) == W(1, 2)
    assert witt_V(W(2)) == W(0, 2)
    assert witt_R(W(1, 2, 0)) == W(1, 2)
    with pytest.raises(WittError):
        witt_R(W(1))


def test_mismatched_shapes():
    with pytest.raises(WittError):
        witt_add(W(1, 0), W(1, 0, 0))
    with pytest.raises(WittError):
        witt_add(W(1, 0), W(1, 0, ring=prime_field(5)))


def test_wn_fp_is_z_mod_pn():
    # W_n(F_p) = Z/p^n: 1 has additive order exactly p^n
    for p, n in [(3, 3), (5, 2), (7, 2)]:
        F = prime_field(p)
        one = witt_one(F, n)
        assert witt_scalar(p**n, one) == witt_zero(F, n)
        assert witt_scalar(p ** (n - 1), one) != witt_zero(F, n)


def test_teichmuller_is_multiplicative():
    F = prime_field(5, 2)
    for a in range(0, 25, 3):
        for b in range(0, 25, 4):
            assert witt_mul(teichmuller(F, a, 3), teichmuller(F, b, 3)) == teichmuller(F, F.mul(a, b), 3)


@st.composite
def witt_pairs(draw, fields=((3, 1), (5, 1), (7, 1), (3, 2), (5, 2)), nmax=4):
    p, d = draw(st.sampled_from(fields))
    n = draw(st.integers(1, nmax))
    rng = random.Random(draw(st.integers(0, 2**32)))
    F = prime_field(p, d)
    return random_witt(F, n, rng), random_witt(F, n, rng)


@given(witt_pairs())
def test_backends_agree_with_ghost_oracle(pair):
    a, b = pair
    assert witt_add(a, b) == ghost_oracle(a, b, "add")
    assert witt_mul(a, b) == ghost_oracle(a, b, "mul")
    if table_available(a.p, a.n):
        assert witt_add(a, b, method="table") == witt_add(a, b, method="galois")
        assert witt_mul(a, b, method="table") == witt_mul(a, b, method="galois")


@given(witt_pairs())
def test_operator_relations(pair):
    a, b = pair
    p = a.p
    pa = witt_scalar(p, a)
    assert witt_R(witt_V(witt_F(a))) == pa
    assert witt_F(witt_R(witt_V(a))) == pa
    assert witt_R(witt_F(witt_V(a))) == pa
    ext = WittVec(a.ring, a.coords + (b.coords[0],))
    assert witt_F(witt_V(a)) == witt_V(witt_F(a)) == witt_scalar(p, ext)
    assert witt_F(witt_mul(a, b)) == witt_mul(witt_F(a), witt_F(b))
    assert witt_V(witt_add(a, b)) == witt_add(witt_V(a), witt_V(b))
    assert witt_V(witt_mul(witt_F(a), b)) == witt_mul(ext, witt_V(b))


def test_selfcheck_passes():
    res = witt_selfcheck(5, 2, 3, samples=60, seed=3)
    assert res.ok, res.lines()
    assert "ghost oracle: mul" in res.failures and "table route: add" in res.failures


# --- Serre's map ---------------------------------------------------------------

R3 = TruncatedRing(F3, 9)


def test_serre_examples():
    x = R3.x()
    assert serre_D(WittVec(R3, (x,))).coeffs == R3.derivative(x)
    assert serre_D(WittVec(R3, (x, R3.zero))).coeffs == (0, 0, 1) + (0,) * 5
    s = witt_add(WittVec(R3, (x, R3.zero)), WittVec(R3, (x, R3.zero)))
    assert s.coords == (R3.from_poly([0, 2]), R3.from_poly([0, 0, 0, 1]))
    d = serre_D(s)
    assert d.coeffs == (0, 0, 2) + (0,) * 5
    assert d == serre_D(WittVec(R3, (x, R3.zero))) + serre_D(WittVec(R3, (x, R3.zero)))


def test_serre_length_mismatch():
    with pytest.raises(WittError):
        serre_D(WittVec(R3, (R3.x(),)), 2)
    with pytest.raises(WittError):
        serre_D(W(1, 2))


@st.composite
def trunc_witt_pairs(draw):
    p = draw(st.sampled_from([3, 5]))
    d = draw(st.sampled_from([1, 2])) if p == 3 else 1
    i = draw(st.integers(1, 3))
    R = TruncatedRing(prime_field(p, d), p * p + 1)
    rng = random.Random(draw(st.integers(0, 2**32)))
    return random_witt(R, i, rng), random_witt(R, i, rng)


@given(trunc_witt_pairs())
def test_serre_map_properties(pair):
    a, b = pair
    assert serre_D(witt_add(a, b)) == serre_D(a) + serre_D(b)
    assert serre_D(witt_V(a)) == serre_D(a)
    assert serre_D(witt_F(a)).is_zero()
