"""sigma^r-linear endomorphisms of F_q^n: v -> M . v^(p^r)."""

from __future__ import annotations

from dataclasses import dataclass

from .fields import PrimeSpec

Matrix = tuple  # tuple of row tuples of field codes


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_zero(n: int) -> Matrix:
    return tuple((0,) * n for _ in range(n))


def mat_mul(F: PrimeSpec, A: Matrix, B: Matrix) -> Matrix:
    n, k = len(A), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = 0
            for t, a in enumerate(A[i]):
                if a:
                    acc = F.add(acc, F.mul(a, B[t][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_frob(F: PrimeSpec, A: Matrix, r: int) -> Matrix:
    return tuple(tuple(F.frob(x, r) for x in row) for row in A)


def mat_vec(F: PrimeSpec, A: Matrix, v) -> tuple:
    return tuple(_dot(F, row, v) for row in A)


def _dot(F: PrimeSpec, row, v) -> int:
    acc = 0
    for a, b in zip(row, v):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


def mat_rank(F: PrimeSpec, A: Matrix) -> int:
    """Row reduction over F_q (exact; no fractions arise in a finite field)."""
    rows = [list(r) for r in A]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = F.inv(rows[rank][col])
        rows[rank] = [F.mul(inv, x) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                c = rows[i][col]
                rows[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def inverse_twist(spec: PrimeSpec) -> int:
    """A positive r with sigma^r = sigma^(-1) on F_{p^d} (valid for d = 1 too)."""
    return 2 * spec.d - 1


class SemilinearError(ValueError):
    pass


@dataclass(frozen=True)
class SigmaLinearMap:
    spec: PrimeSpec
    matrix: Matrix
    twist: int = 1

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise SemilinearError("matrix must be square")
        if self.twist < 1:
            raise SemilinearError("twist must be >= 1")

    @classmethod
    def from_ints(cls, spec: PrimeSpec, rows, twist: int = 1) -> "SigmaLinearMap":
        return cls(spec, tuple(tuple(spec.scalar(x) if spec.d == 1 else x for x in r) for r in rows), twist)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def __call__(self, v) -> tuple:
        F = self.spec
        return mat_vec(F, self.matrix, [F.frob(x, self.twist) for x in v])

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.matrix)

    def rank(self) -> int:
        return mat_rank(self.spec, self.matrix)


def compose(f: SigmaLinearMap, g: SigmaLinearMap) -> SigmaLinearMap:
    """f after g: v -> M_f (M_g v^(r_g))^(r_f) = M_f M_g^(r_f) v^(r_f + r_g)."""
    if f.spec != g.spec:
        raise SemilinearError("maps over different fields")
    if f.dim != g.dim:
        raise SemilinearError(f"dimension mismatch: {f.dim} vs {g.dim}")
    F = f.spec
    M = mat_mul(F, f.matrix, mat_frob(F, g.matrix, f.twist))
    return SigmaLinearMap(F, M, f.twist + g.twist)


def iterate(f: SigmaLinearMap, k: int) -> SigmaLinearMap:
    if k < 1:
        raise SemilinearError("iterate count must be >= 1")
    out = f
    for _ in range(k - 1):
        out = compose(f, out)
    return out


def kernel_dim(f: SigmaLinearMap) -> int:
    # Frobenius is bijective on F_q, so Ker f = Frob^-1(Ker M)
    return f.dim - f.rank()


def stable_rank(f: SigmaLinearMap) -> int:
    if f.dim == 0:
        return 0
    return iterate(f, f.dim).rank()


def base_change(f: SigmaLinearMap, e: int) -> SigmaLinearMap:
    """The same map over F_{q^e}."""
    big, emb = f.spec.extension(e)
    return SigmaLinearMap(big, tuple(tuple(emb[x] for x in row) for row in f.matrix), f.twist)
