"""Exact arithmetic in E = Q[x]/(f), its automorphisms, and subfields.

Field elements are tuples of ``Fraction`` giving coordinates in the power
basis ``1, a, ..., a^(d-1)`` where ``a`` is the class of x.  Everything is
exact; there is no floating point anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import linalg
from .errors import (InvalidAutomorphismError, InvalidIntegralBasisError,
                     MalformedInputError, NotGaloisError, ReducibilityError)
from .lattice import Lattice

Elem = tuple[Fraction, ...]


def prime_factors(n: int) -> list[int]:
    n = abs(int(n))
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def valuation(n, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    n = Fraction(n)
    if n == 0:
        raise ValueError("valuation of zero")
    v, a, b = 0, abs(n.numerator), n.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


# --- polynomial helpers over Q (ascending coefficient lists) ---------------

def _trim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _trim(list(a))
    b = _trim(list(b))
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        k = len(a) - len(b)
        q[k] = c
        for i, x in enumerate(b):
            a[i + k] -= c * x
        _trim(a)
    return _trim(q), a


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


class NumberField:
    """E = Q[x]/(f) for a monic integer polynomial f (ascending coefficients)."""

    def __init__(self, min_poly: Sequence[int]):
        coeffs = []
        for c in min_poly:
            q = linalg.frac(c)
            if q.denominator != 1:
                raise MalformedInputError("minimal polynomial must have integer coefficients")
            coeffs.append(int(q))
        if not coeffs or coeffs[-1] != 1:
            raise MalformedInputError(f"minimal polynomial {coeffs} is not monic")
        self.min_poly = tuple(coeffs)
        self.degree = len(coeffs) - 1
        if self.degree < 1:
            raise MalformedInputError("degree must be positive")
        d = self.degree
        # x^k mod f for k < 2d - 1
        powers: list[Elem] = []
        cur = [Fraction(0)] * d
        cur[0] = Fraction(1)
        for _ in range(2 * d - 1):
            powers.append(tuple(cur))
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            if top:
                cur = [c - top * f for c, f in zip(cur, coeffs)]
        self._powers = powers

    def __repr__(self) -> str:
        return f"NumberField({list(self.min_poly)})"

    # construction
    def elem(self, coeffs: Sequence) -> Elem:
        c = [linalg.frac(x) for x in coeffs]
        if len(c) > self.degree:
            if any(c[self.degree:]):
                return self.reduce(c)
            c = c[: self.degree]
        return tuple(c + [Fraction(0)] * (self.degree - len(c)))

    def one(self) -> Elem:
        return self.elem([1])

    def zero(self) -> Elem:
        return self.elem([])

    def gen(self) -> Elem:
        return self.elem([0, 1]) if self.degree > 1 else self.elem([-self.min_poly[0]])

    def rational(self, q) -> Elem:
        return self.elem([q])

    def reduce(self, poly: Sequence[Fraction]) -> Elem:
        poly = [linalg.frac(x) for x in poly]
        if len(poly) <= len(self._powers):
            out = [Fraction(0)] * self.degree
            for k, c in enumerate(poly):
                if c:
                    for i, x in enumerate(self._powers[k]):
                        if x:
                            out[i] += c * x
            return tuple(out)
        _, r = _poly_divmod(poly, [Fraction(c) for c in self.min_poly])
        return self.elem(r)

    # arithmetic
    def add(self, a: Elem, b: Elem) -> Elem:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: Elem, b: Elem) -> Elem:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a: Elem) -> Elem:
        return tuple(-x for x in a)

    def scale(self, c, a: Elem) -> Elem:
        c = linalg.frac(c)
        return tuple(c * x for x in a)

    def mul(self, a: Elem, b: Elem) -> Elem:
        return self.reduce(_poly_mul(a, b))

    def inv(self, a: Elem) -> Elem:
        """Inverse via the extended Euclidean algorithm with the minimal polynomial."""
        if not any(a):
            raise ZeroDivisionError("inverse of zero in a number field")
        f = [Fraction(c) for c in self.min_poly]
        r0, r1 = f, _trim(list(a))
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if len(r0) != 1:
            raise ReducibilityError(
                f"gcd of {list(a)} with the minimal polynomial has degree {len(r0) - 1}; "
                f"{list(self.min_poly)} is reducible")
        return self.elem(self.reduce([c / r0[0] for c in s0]))

    def pow(self, a: Elem, k: int) -> Elem:
        if k < 0:
            a, k = self.inv(a), -k
        out, base = self.one(), a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def eval_poly(self, coeffs: Sequence, x: Elem) -> Elem:
        out = self.zero()
        for c in reversed(coeffs):
            out = self.add(self.mul(out, x), self.rational(c))
        return out

    def mult_matrix(self, a: Elem) -> linalg.Matrix:
        """Row i holds the coordinates of ``a * gen^i``."""
        return [list(self.mul(a, self._powers[i])) for i in range(self.degree)]

    def trace(self, a: Elem) -> Fraction:
        M = self.mult_matrix(a)
        return sum((M[i][i] for i in range(self.degree)), Fraction(0))

    def is_rational(self, a: Elem) -> bool:
        return all(x == 0 for x in a[1:])

    def format(self, a: Elem, var: str = "a") -> str:
        terms = []
        for i, c in enumerate(a):
            if c == 0:
                continue
            mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if mon and c == 1:
                terms.append(mon)
            elif mon and c == -1:
                terms.append("-" + mon)
            else:
                terms.append(f"{c}{'*' + mon if mon else ''}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


# --- automorphisms ----------------------------------------------------------

@dataclass(frozen=True)
class Automorphism:
    gen_image: Elem
    matrix: tuple[tuple[Fraction, ...], ...] = field(compare=False, repr=False)

    @classmethod
    def from_image(cls, E: NumberField, image: Sequence) -> "Automorphism":
        img = E.elem(image)
        rows, cur = [], E.one()
        for _ in range(E.degree):
            rows.append(cur)
            cur = E.mul(cur, img)
        return cls(img, tuple(rows))

    def __call__(self, x: Elem) -> Elem:
        return apply_automorphism(self, x)


def apply_automorphism(sigma: Automorphism, x: Elem) -> Elem:
    return tuple(linalg.vecmat(x, sigma.matrix))


def is_root(E: NumberField, x: Elem) -> bool:
    return not any(E.eval_poly(E.min_poly, x))


@dataclass
class GaloisGroup:
    field: NumberField
    elements: list[Automorphism]
    mult_table: list[list[int]]
    identity: int

    @property
    def order(self) -> int:
        return len(self.elements)

    def inverse(self, i: int) -> int:
        return next(j for j in range(self.order) if self.mult_table[i][j] == self.identity)

    def is_abelian(self) -> bool:
        T = self.mult_table
        return all(T[i][j] == T[j][i] for i in range(self.order) for j in range(self.order))

    def index_of(self, sigma: Automorphism) -> int:
        return next(i for i, s in enumerate(self.elements) if s.gen_image == sigma.gen_image)


def build_galois_group(E: NumberField, gens: Sequence[Automorphism | Sequence]) -> GaloisGroup:
    """Close the generators under composition and check the result has order deg E.

    Canonical element order: identity first, then by image coordinates.
    """
    autos = [g if isinstance(g, Automorphism) else Automorphism.from_image(E, g) for g in gens]
    for k, s in enumerate(autos):
        if not is_root(E, s.gen_image):
            raise InvalidAutomorphismError(
                f"generator {k}: image {E.format(s.gen_image)} is not a root of the minimal polynomial")
    ident = Automorphism.from_image(E, E.gen())
    found = {ident.gen_image: ident}
    frontier = [ident]
    while frontier:
        new = []
        for a in frontier:
            for g in autos:
                img = g(a.gen_image)  # (g o a)(gen) = g(a(gen))
                if img not in found:
                    found[img] = Automorphism.from_image(E, img)
                    new.append(found[img])
                    if len(found) > E.degree:
                        raise NotGaloisError(
                            f"automorphism closure exceeds degree {E.degree}: bad generator data")
        frontier = new
    if len(found) != E.degree:
        raise NotGaloisError(
            f"automorphism closure has size {len(found)} but degree is {E.degree}")
    rest = sorted((s for s in found.values() if s.gen_image != ident.gen_image),
                  key=lambda s: s.gen_image)
    elements = [ident] + rest
    pos = {s.gen_image: i for i, s in enumerate(elements)}
    table = [[pos[a(b.gen_image)] for b in elements] for a in elements]
    n = len(elements)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if table[table[i][j]][k] != table[i][table[j][k]]:
                    raise NotGaloisError("composition table is not associative")
    return GaloisGroup(E, elements, table, 0)


def orbit_matrix(E: NumberField, group: GaloisGroup, idx: Sequence[int]) -> linalg.Matrix:
    """Stacked ``(M_s - I)`` over the given group elements, as a d x (d*k) matrix.

    A vector x satisfies ``x C = 0`` iff it is fixed by each listed element.
    """
    d = E.degree
    C = [[Fraction(0)] * (d * len(idx)) for _ in range(d)]
    for t, i in enumerate(idx):
        M = group.elements[i].matrix
        for r in range(d):
            for c in range(d):
                C[r][t * d + c] = M[r][c] - (1 if r == c else 0)
    return C


# --- integral bases and subfields -------------------------------------------

def trace_form_disc(lat: Lattice, E: NumberField, relative_degree: int = 1) -> int:
    """det(Tr(b_i b_j)) with Tr the trace of the subfield spanned by ``lat``.

    For a lattice in a subfield L of E, Tr_L = Tr_E / [E:L]; pass that index
    as ``relative_degree``.
    """
    B = [E.elem(r) for r in lat.basis]
    G = [[E.trace(E.mul(a, b)) / relative_degree for b in B] for a in B]
    D = linalg.det(G)
    if D.denominator != 1:
        raise InvalidIntegralBasisError(f"trace form determinant {D} is not an integer")
    return int(D)


def check_ring_lattice(E: NumberField, lat: Lattice) -> list[str]:
    problems = []
    if not lat.contains(E.one()):
        problems.append("integral basis does not contain 1")
    B = [E.elem(r) for r in lat.basis]
    for i, a in enumerate(B):
        for j in range(i, len(B)):
            if not lat.contains(E.mul(a, B[j])):
                problems.append(f"product of basis elements {i},{j} leaves the lattice")
                return problems
    return problems


def validate_integral_basis(E: NumberField, OE: Lattice, declared_disc: int | None) -> list[str]:
    """Checks: full rank, ring containing 1 and Z[a], discriminant matches."""
    problems = []
    if OE.rank != E.degree:
        return [f"integral basis has rank {OE.rank}, expected {E.degree}"]
    problems += check_ring_lattice(E, OE)
    g = E.gen()
    if not OE.contains(g):
        problems.append("integral basis does not contain the power-basis generator")
    if declared_disc is not None and not problems:
        D = trace_form_disc(OE, E)
        if D != declared_disc:
            problems.append(f"trace-form discriminant {D} differs from declared {declared_disc}")
    return problems


@dataclass
class SubfieldData:
    """L = E^{G'} inside E with its ring of integers."""

    qbasis: linalg.Matrix
    OL: Lattice
    disc: int
    subgroup: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.qbasis)


def fixed_field(E: NumberField, group: GaloisGroup, subgroup: Sequence[int], OE: Lattice) -> SubfieldData:
    """Fixed field of the subgroup and O_L = O_E meet L."""
    idx = sorted(set(subgroup)) or [group.identity]
    T = group.mult_table
    if group.identity not in idx or any(T[a][b] not in idx for a in idx for b in idx):
        raise MalformedInputError(f"G' = {idx} is not a subgroup")
    problems = check_ring_lattice(E, OE)
    if problems:
        raise InvalidIntegralBasisError("; ".join(problems))
    C = orbit_matrix(E, group, idx)
    qbasis = linalg.rref(linalg.left_nullspace(C))[0] if any(any(r) for r in C) else linalg.identity(E.degree)
    if len(qbasis) * len(idx) != E.degree:
        raise NotGaloisError(f"fixed space has dimension {len(qbasis)}, expected {E.degree // len(idx)}")
    OL = OE.restrict(C) if any(any(r) for r in C) else OE
    disc = trace_form_disc(OL, E, len(idx))
    return SubfieldData(qbasis, OL, disc, tuple(idx))


def is_unramified(p: int, L: SubfieldData) -> bool:
    """p is unramified in O_L iff p does not divide disc(O_L) (O_L is maximal)."""
    return L.disc % p != 0


def is_domestic(L: SubfieldData, n: int) -> bool:
    return all(is_unramified(p, L) for p in prime_factors(n))
