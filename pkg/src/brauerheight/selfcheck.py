"""Randomized property suite for W_n(F_q), shared by the CLI and the tests."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .fields import prime_field
from .ghost import ghost_oracle
from .witt import (WittVec, random_witt, table_available, witt_add, witt_F, witt_mul, witt_one,
                   witt_R, witt_scalar, witt_V, witt_zero)


@dataclass
class SelfCheckResult:
    p: int
    d: int
    n: int
    samples: int
    seed: int
    failures: dict = field(default_factory=dict)  # relation -> failure count
    first_failure: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def lines(self) -> list[str]:
        return [f"{'PASS' if not k else 'FAIL'} {name} ({k} failures / {self.samples} samples)"
                for name, k in self.failures.items()]

    def to_dict(self) -> dict:
        return {"p": self.p, "d": self.d, "n": self.n, "samples": self.samples, "seed": self.seed,
                "ok": self.ok, "failures": dict(self.failures),
                "first_failure": {k: str(v) for k, v in self.first_failure.items()}}


def _extend(a: WittVec, rng: random.Random) -> WittVec:
    return WittVec(a.ring, a.coords + (a.ring.random(rng),))


def witt_selfcheck(p: int, d: int = 1, n: int = 3, samples: int = 1000, seed: int = 0,
                   ghost: bool = True, table: bool = True) -> SelfCheckResult:
    """Check the operator relations, ring axioms and oracle agreement on random samples."""
    F = prime_field(p, d)
    rng = random.Random(seed)
    res = SelfCheckResult(p, d, n, samples, seed)
    use_table = table and table_available(p, n)
    zero, one = witt_zero(F, n), witt_one(F, n)

    def record(name: str, ok: bool, sample) -> None:
        res.failures.setdefault(name, 0)
        if not ok:
            res.failures[name] += 1
            res.first_failure.setdefault(name, sample)

    for _ in range(samples):
        a, b, c = (random_witt(F, n, rng) for _ in range(3))
        pa = witt_scalar(p, a)
        record("RVF = p", witt_R(witt_V(witt_F(a))) == pa, a)
        record("FRV = p", witt_F(witt_R(witt_V(a))) == pa, a)
        record("RFV = p", witt_R(witt_F(witt_V(a))) == pa, a)
        pext = witt_scalar(p, _extend(a, rng))
        record("FV = p", witt_F(witt_V(a)) == pext, a)
        record("VF = p", witt_V(witt_F(a)) == pext, a)

        ab = witt_add(a, b)
        record("add commutative", ab == witt_add(b, a), (a, b))
        record("add associative", witt_add(ab, c) == witt_add(a, witt_add(b, c)), (a, b, c))
        record("add identity", witt_add(a, zero) == a, a)
        record("add inverse", witt_add(a, -a) == zero, a)
        m = witt_mul(a, b)
        record("mul commutative", m == witt_mul(b, a), (a, b))
        record("mul associative", witt_mul(m, c) == witt_mul(a, witt_mul(b, c)), (a, b, c))
        record("mul identity", witt_mul(a, one) == a, a)
        record("distributive", witt_mul(a, witt_add(b, c)) == witt_add(m, witt_mul(a, c)), (a, b, c))

        record("F additive", witt_F(ab) == witt_add(witt_F(a), witt_F(b)), (a, b))
        record("F multiplicative", witt_F(m) == witt_mul(witt_F(a), witt_F(b)), (a, b))
        record("V additive", witt_V(ab) == witt_add(witt_V(a), witt_V(b)), (a, b))
        big = _extend(a, rng)
        record("V(F(a) b) = a V(b)", witt_V(witt_mul(witt_F(witt_R(big)), b)) == witt_mul(big, witt_V(b)),
               (big, b))

        if ghost:
            record("ghost oracle: add", ab == ghost_oracle(a, b, "add"), (a, b))
            record("ghost oracle: mul", m == ghost_oracle(a, b, "mul"), (a, b))
        if use_table:
            record("table route: add", ab == witt_add(a, b, method="table"), (a, b))
            record("table route: mul", m == witt_mul(a, b, method="table"), (a, b))
    return res
