"""Integer lattices: Hermite and Smith normal forms, and rational lattices.

HNF here is row-style: the nonzero rows of ``hnf(A)`` generate the same
Z-module as the rows of ``A``, are in upper echelon form with positive
pivots, and every entry above a pivot lies in ``[0, pivot)``.  That form
is unique, so it is used as the canonical basis of every lattice.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from . import linalg
from .errors import NotASublatticeError


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf_with_transform(A: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], int]:
    """Return ``(H, U, r)`` with ``U A = H``, U unimodular, r = rank.

    The first r rows of H are the HNF; the remaining rows are zero, so the
    last ``m - r`` rows of U span the integer left kernel of A.
    """
    H = [list(map(int, row)) for row in A]
    m = len(H)
    n = len(H[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, x, y = _egcd(a, b)
            ag, bg = a // g, b // g
            H[r], H[i] = ([x * s + y * t for s, t in zip(H[r], H[i])],
                          [-bg * s + ag * t for s, t in zip(H[r], H[i])])
            U[r], U[i] = ([x * s + y * t for s, t in zip(U[r], U[i])],
                          [-bg * s + ag * t for s, t in zip(U[r], U[i])])
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-v for v in H[r]]
            U[r] = [-v for v in U[r]]
        piv = H[r][c]
        for i in range(r):
            q = H[i][c] // piv
            if q:
                H[i] = [s - q * t for s, t in zip(H[i], H[r])]
                U[i] = [s - q * t for s, t in zip(U[i], U[r])]
        r += 1
    return H, U, r


def hnf(A: Sequence[Sequence[int]]) -> list[list[int]]:
    H, _, r = hnf_with_transform(A)
    return H[:r]


def snf(A: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form: ``(S, U, V)`` with ``U A V = S`` diagonal, d1 | d2 | ...."""
    S = [list(map(int, row)) for row in A]
    m = len(S)
    n = len(S[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    S[i] = [a - q * b for a, b in zip(S[i], S[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                    if S[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    for row in S:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                    if S[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility: fold any offending entry into row t and repeat
                bad = next((i for i in range(t + 1, m)
                            for j in range(t + 1, n) if S[i][j] % S[t][t]), None)
                if bad is not None:
                    S[t] = [a + b for a, b in zip(S[t], S[bad])]
                    U[t] = [a + b for a, b in zip(U[t], U[bad])]
                    done = False
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return S, U, V


def elementary_divisors(A: Sequence[Sequence[int]]) -> list[int]:
    S, _, _ = snf(A)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


def _scale(rows: Sequence[Sequence]) -> tuple[list[list[int]], int]:
    F = [[linalg.frac(x) for x in row] for row in rows]
    D = linalg.denominator_lcm(F)
    return [[int(x * D) for x in row] for row in F], D


def integer_left_kernel(M: Sequence[Sequence]) -> list[list[int]]:
    """HNF basis of {a in Z^m : a M = 0} for a rational m x n matrix M."""
    m = len(M)
    if m == 0:
        return []
    if not M[0]:
        return [[int(i == j) for j in range(m)] for i in range(m)]
    Mi, _ = _scale(M)
    _, U, r = hnf_with_transform(Mi)
    return hnf(U[r:]) if r < m else []


class Lattice:
    """A Z-lattice in Q^d, stored by its canonical HNF basis."""

    __slots__ = ("basis", "dim")

    def __init__(self, generators: Iterable[Sequence], dim: int | None = None):
        gens = [[linalg.frac(x) for x in g] for g in generators]
        if dim is None:
            if not gens:
                raise ValueError("dimension needed for an empty generating set")
            dim = len(gens[0])
        self.dim = dim
        if gens:
            Ai, D = _scale(gens)
            H = hnf(Ai)
            self.basis = tuple(tuple(Fraction(x, D) for x in row) for row in H)
        else:
            self.basis = ()

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> linalg.Matrix:
        return [list(r) for r in self.basis]

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.basis == other.basis

    def __hash__(self) -> int:
        return hash(self.basis)

    def __repr__(self) -> str:
        rows = ", ".join("[" + " ".join(str(x) for x in r) + "]" for r in self.basis)
        return f"Lattice(rank={self.rank}, [{rows}])"

    def coords(self, v: Sequence) -> list[Fraction] | None:
        return linalg.solve_left(self.basis, v)

    def contains(self, v: Sequence) -> bool:
        y = self.coords(v)
        return y is not None and all(c.denominator == 1 for c in y)

    def contains_lattice(self, other: "Lattice") -> bool:
        if other.rank == 0:
            return True
        ys = linalg.solve_left_many(self.basis, other.basis)
        return all(y is not None and all(c.denominator == 1 for c in y) for y in ys)

    def relative_matrix(self, other: "Lattice") -> linalg.Matrix:
        """Coordinates of this basis in ``other``'s basis (same Q-span needed)."""
        ys = linalg.solve_left_many(other.basis, self.basis)
        if any(y is None for y in ys):
            raise NotASublatticeError("lattices do not span the same space")
        return ys  # type: ignore[return-value]

    def index_in(self, other: "Lattice") -> int:
        """``[other : self]`` for ``self`` a finite-index sublattice of ``other``."""
        if self.rank != other.rank:
            raise NotASublatticeError("ranks differ")
        if not other.contains_lattice(self):
            raise NotASublatticeError("not a sublattice")
        return int(abs(linalg.det(self.relative_matrix(other))))

    def relative_index(self, other: "Lattice") -> Fraction:
        """Generalised index ``[other : self]`` as a positive rational (no inclusion needed)."""
        return abs(linalg.det(self.relative_matrix(other)))

    def volume(self) -> Fraction:
        if self.rank != self.dim:
            raise ValueError("volume needs a full-rank lattice")
        return abs(linalg.det(self.basis))

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice(list(self.basis) + list(other.basis), self.dim)

    def scale(self, c) -> "Lattice":
        c = linalg.frac(c)
        return Lattice([[c * x for x in row] for row in self.basis], self.dim)

    def intersect(self, other: "Lattice") -> "Lattice":
        if self.rank == 0 or other.rank == 0:
            return Lattice([], self.dim)
        stacked = list(self.basis) + list(other.basis)
        K = integer_left_kernel(stacked)
        gens = [linalg.vecmat(k[: self.rank], self.basis) for k in K]
        return Lattice(gens, self.dim)

    def dual(self) -> "Lattice":
        if self.rank != self.dim:
            raise ValueError("dual needs a full-rank lattice")
        return Lattice(linalg.transpose(linalg.inverse(self.basis)), self.dim)

    def restrict(self, conditions: Sequence[Sequence]) -> "Lattice":
        """Sublattice of vectors x with ``x C = 0`` (C given as d x k rows)."""
        if not conditions or not conditions[0]:
            return self
        BC = linalg.matmul(self.basis, conditions)
        K = integer_left_kernel(BC)
        return Lattice([linalg.vecmat(k, self.basis) for k in K], self.dim)


def integral_preimage(M: Sequence[Sequence]) -> Lattice:
    """The lattice {y in Q^n : y M in Z^m} for a rational n x m matrix of rank n.

    y M is integral iff y pairs integrally with every column of M, so the
    answer is the dual of the lattice spanned by the columns.
    """
    cols = linalg.transpose([[linalg.frac(x) for x in row] for row in M])
    C = Lattice(cols, len(M))
    if C.rank != len(M):
        raise ValueError("matrix does not have full row rank")
    return C.dual()
