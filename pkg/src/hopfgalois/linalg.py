"""Exact linear algebra over Q and F_p.

Matrices are lists of rows; entries are ``Fraction`` (over Q) or ``int``
(over F_p).  Row-vector convention throughout: a vector ``y`` acts on a
matrix ``M`` as ``y M``.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Matrix = list[list[Fraction]]


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[frac(x) for x in row] for row in rows]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    M = zeros(n, n)
    for i in range(n):
        M[i][i] = Fraction(1)
    return M


def transpose(M: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in Bt] for row in A]


def vecmat(v: Sequence, M: Sequence[Sequence]) -> list[Fraction]:
    if not M:
        return []
    out = [Fraction(0)] * len(M[0])
    for c, row in zip(v, M):
        if c:
            for j, x in enumerate(row):
                if x:
                    out[j] += c * x
    return out


def denominator_lcm(rows: Sequence[Sequence[Fraction]]) -> int:
    d = 1
    for row in rows:
        for x in row:
            d = lcm(d, Fraction(x).denominator)
    return d


def rref(M: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (zero rows dropped)."""
    A = [[frac(x) for x in row] for row in M]
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M: Sequence[Sequence]) -> int:
    return len(rref(M)[1])


def nullspace(M: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis of {v : M v = 0} as rows."""
    if not M:
        n = ncols or 0
        return identity(n)
    n = len(M[0])
    R, pivots = rref(M)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def left_nullspace(M: Sequence[Sequence]) -> Matrix:
    """Basis of {y : y M = 0} as rows."""
    if not M:
        return []
    if not M[0]:
        return identity(len(M))
    return nullspace(transpose(M))


def solve_left(B: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    """Return y with ``y B = v``, or None when v is outside the row space.

    B must have linearly independent rows, so the answer is unique.
    """
    k = len(B)
    if k == 0:
        return [] if all(x == 0 for x in v) else None
    # augmented system B^T y = v
    aug = [[frac(B[i][j]) for i in range(k)] + [frac(v[j])] for j in range(len(v))]
    R, pivots = rref(aug)
    if k in pivots:
        return None
    if len(pivots) != k:
        raise ValueError("rows of B are linearly dependent")
    y = [Fraction(0)] * k
    for row, pc in zip(R, pivots):
        y[pc] = row[k]
    return y


def solve_left_many(B: Sequence[Sequence], V: Sequence[Sequence]) -> list[list[Fraction] | None]:
    """``solve_left`` for several right-hand sides sharing one elimination."""
    k = len(B)
    if not V:
        return []
    m = len(V)
    aug = [[frac(B[i][j]) for i in range(k)] + [frac(V[t][j]) for t in range(m)]
           for j in range(len(V[0]))]
    R, pivots = rref(aug)
    bpiv = [p for p in pivots if p < k]
    if len(bpiv) != k:
        raise ValueError("rows of B are linearly dependent")
    out: list[list[Fraction] | None] = []
    for t in range(m):
        col = k + t
        # a pivot in an augmented column means that system is inconsistent
        bad = any(p == col for p in pivots)
        if bad:
            out.append(None)
            continue
        y = [Fraction(0)] * k
        for row, pc in zip(R, pivots):
            if pc < k:
                y[pc] = row[col]
        out.append(y)
    return out


def det(M: Sequence[Sequence]) -> Fraction:
    A = [[frac(x) for x in row] for row in M]
    n = len(A)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d *= A[c][c]
        inv = 1 / A[c][c]
        for i in range(c + 1, n):
            if A[i][c] != 0:
                f = A[i][c] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return d


def inverse(M: Sequence[Sequence]) -> Matrix:
    n = len(M)
    aug = [[frac(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


# --- F_p -----------------------------------------------------------------

def _reduce_mod_p(M: Sequence[Sequence], p: int) -> list[list[int]]:
    out = []
    for row in M:
        r = []
        for x in row:
            x = frac(x)
            if x.denominator % p == 0:
                raise ValueError(f"entry {x} is not {p}-integral")
            r.append(x.numerator * pow(x.denominator, -1, p) % p)
        out.append(r)
    return out


def rref_mod_p(M: Sequence[Sequence], p: int) -> tuple[list[list[int]], list[int]]:
    A = _reduce_mod_p(M, p)
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_mod_p(M: Sequence[Sequence], p: int) -> int:
    return len(rref_mod_p(M, p)[1])


def left_nullspace_mod_p(M: Sequence[Sequence], p: int) -> list[list[int]]:
    """Basis of {y in F_p^m : y M = 0}."""
    if not M:
        return []
    m, n = len(M), len(M[0])
    Mt = transpose(_reduce_mod_p(M, p)) if n else []
    if not Mt:
        return [[int(i == j) for j in range(m)] for i in range(m)]
    R, pivots = rref_mod_p(Mt, p)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * m
        v[f] = 1
        for row, pc in zip(R, pivots):
            v[pc] = (-row[f]) % p
        basis.append(v)
    return basis
