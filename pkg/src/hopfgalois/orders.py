"""Orders in H as Z-lattices of H-coordinates.

An order is stored by the canonical HNF basis of its lattice in Q^n, where
Q^n are coordinates with respect to the descended basis b_1..b_n of H.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .descent import ActionTable, HopfAlgebra, ga_blocks, ga_flat
from .errors import InternalInconsistencyError, UnsupportedCaseError
from .lattice import Lattice, integral_preimage
from .numfield import Elem, NumberField, orbit_matrix, prime_factors


@dataclass
class ZOrder:
    H: HopfAlgebra = field(repr=False)
    lattice: Lattice
    name: str = ""
    is_ring: bool = False
    contains_unit: bool = False
    is_hopf: bool | None = None  # None = unchecked
    disc: int | None = None

    @property
    def basis(self) -> tuple[tuple[Fraction, ...], ...]:
        return self.lattice.basis

    def __eq__(self, other) -> bool:
        return isinstance(other, ZOrder) and self.lattice == other.lattice

    def contains(self, x: Sequence) -> bool:
        return self.lattice.contains(x)


def _integral(xs, p: int | None) -> bool:
    if p is None:
        return all(Fraction(x).denominator == 1 for x in xs)
    return all(Fraction(x).denominator % p != 0 for x in xs)


def ring_failures(H: HopfAlgebra, lat: Lattice) -> list[str]:
    fails = []
    if not lat.contains(H.unit):
        fails.append("does not contain 1")
    B = lat.basis
    for a in range(len(B)):
        for b in range(len(B)):
            if not lat.contains(H.multiply(B[a], B[b])):
                fails.append(f"product of basis rows {a},{b} leaves the lattice")
                return fails
    return fails


def make_order(H: HopfAlgebra, lat: Lattice, name: str = "") -> ZOrder:
    if lat.rank != H.n:
        raise InternalInconsistencyError(f"{name or 'order'} has rank {lat.rank}, expected {H.n}")
    fails = ring_failures(H, lat)
    order = ZOrder(H, lat, name, is_ring=not fails, contains_unit=lat.contains(H.unit))
    if order.is_ring:
        order.disc = disc_order(order)
    return order


def associated_order(H: HopfAlgebra, A: ActionTable) -> ZOrder:
    """{h in H : h . O_L in O_L}: coordinates y with sum y_i T_i integral."""
    M = [[x for row in T for x in row] for T in A.T]
    lat = integral_preimage(M)
    order = make_order(H, lat, "associated")
    if not (order.is_ring and order.contains_unit):
        raise InternalInconsistencyError("associated order is not a ring containing 1")
    return order


def fixed_point_order(H: HopfAlgebra, OB: Lattice | None = None) -> ZOrder:
    """O[N]^G = H meet O[N] for O the ring of integers of E (or the lattice ``OB``)."""
    S = H.setting
    OB = S.OE if OB is None else OB
    inv = linalg.inverse(OB.basis)
    d = S.d
    M = []
    for b in H.basis:
        row = []
        for blk in ga_blocks(b, d):
            row.extend(linalg.vecmat(blk, inv))
        M.append(row)
    return make_order(H, integral_preimage(M), "fixed-point")


def group_ring_order(H: HopfAlgebra) -> ZOrder | None:
    """Z[N] when every element of N lies in H (the classical situation), else None."""
    elems = [H.group_element(a) for a in range(H.nd.order)]
    if any(e is None for e in elems):
        return None
    return make_order(H, Lattice(elems), "group-ring")


# --- orbit sums ----------------------------------------------------------------

def elem_det(E: NumberField, M: list[list[Elem]]) -> Elem:
    """Determinant of a square matrix with entries in E."""
    A = [list(r) for r in M]
    n = len(A)
    d = E.one()
    for c in range(n):
        piv = next((i for i in range(c, n) if any(A[i][c])), None)
        if piv is None:
            return E.zero()
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = E.neg(d)
        d = E.mul(d, A[c][c])
        inv = E.inv(A[c][c])
        for i in range(c + 1, n):
            if any(A[i][c]):
                f = E.mul(A[i][c], inv)
                A[i] = [E.sub(x, E.mul(f, y)) for x, y in zip(A[i], A[c])]
    return d


@dataclass
class OrbitSums:
    elements: list[list[Fraction]]  # H-coordinates
    orbits: list[dict]

    def lattice(self) -> Lattice:
        return Lattice(self.elements)


def orbit_sums(H: HopfAlgebra, point: int, require_regular: bool = False) -> tuple[list[list[Fraction]], dict]:
    """Orbit sums ``sum_{g in G/Stab} g(a_i) (^g x)`` for one G-orbit of N.

    ``a_i`` runs over a Z-basis of the integers fixed by the stabilizer of
    ``x``, so the sums span exactly the fixed points of O_E[orbit].  The
    returned record includes det(g(a_i))^2, the discriminant of that fixed
    ring, which is a p-unit for every unramified p.
    """
    S, nd = H.setting, H.nd
    E, G = S.E, S.G
    stab = [g for g in range(G.order) if nd.conj[g][point] == point]
    if require_regular and len(stab) > 1:
        raise UnsupportedCaseError(f"G does not act regularly on the orbit of element {point}")
    orbit: dict[int, int] = {}
    for g in range(G.order):
        orbit.setdefault(nd.conj[g][point], g)
    Ofix = S.OE.restrict(orbit_matrix(E, G, stab)) if len(stab) > 1 else S.OE
    elems = []
    for a in Ofix.basis:
        z = [E.zero()] * nd.order
        for y, g in orbit.items():
            z[y] = G.elements[g](E.elem(a))
        c = H.coords(z)
        if c is None:
            raise InternalInconsistencyError("orbit sum is not in H")
        elems.append(c)
    reps = sorted(orbit.values())
    Mdet = [[G.elements[g](E.elem(a)) for g in reps] for a in Ofix.basis]
    det = elem_det(E, Mdet)
    dsq = E.mul(det, det)
    if not E.is_rational(dsq):
        raise InternalInconsistencyError("squared orbit determinant is not rational")
    info = {"point": point, "orbit": sorted(orbit), "stabilizer": stab,
            "regular": len(stab) == 1, "det_squared": dsq[0]}
    return elems, info


def orbit_sum_basis(H: HopfAlgebra, require_regular: bool = False) -> OrbitSums:
    seen: set[int] = set()
    elems, infos = [], []
    for x in range(H.nd.order):
        if x in seen:
            continue
        e, info = orbit_sums(H, x, require_regular)
        seen.update(info["orbit"])
        elems.extend(e)
        infos.append(info)
    return OrbitSums(elems, infos)


# --- Hopf orders -------------------------------------------------------------

def hopf_order_failures(order: ZOrder, p: int | None = None) -> list[str]:
    """Delta(L) in L (x) L, eps(L) in Z, S(L) in L; with ``p`` only p-integrally."""
    H = order.H
    B = [list(r) for r in order.basis]
    Binv = linalg.inverse(B)
    BinvT = linalg.transpose(Binv)
    fails = []
    if not order.is_ring:
        fails.append("not a ring")
    for a, row in enumerate(B):
        C = H.coproduct(row)
        Z = linalg.matmul(linalg.matmul(BinvT, C), Binv)
        if not all(_integral(r, p) for r in Z):
            fails.append(f"Delta(row {a}) not in the tensor square")
        if not _integral([H.apply_counit(row)], p):
            fails.append(f"eps(row {a}) not integral")
        if not _integral(linalg.vecmat(H.apply_antipode(row), Binv), p):
            fails.append(f"S(row {a}) leaves the order")
    return fails


def is_hopf_order(order: ZOrder) -> bool:
    ok = not hopf_order_failures(order)
    order.is_hopf = ok
    return ok


def p_is_hopf_order(order: ZOrder, p: int) -> bool:
    return not hopf_order_failures(order, p)


# --- discriminants and maximality ---------------------------------------------

def disc_order(order: ZOrder) -> int:
    """det of Tr(x y) on the basis, Tr the trace of the regular representation."""
    H = order.H
    n = H.n
    tr = [sum((H.mult[i][k][k] for k in range(n)), Fraction(0)) for i in range(n)]
    B = order.basis
    G = [[sum((c * t for c, t in zip(H.multiply(a, b), tr)), Fraction(0)) for b in B] for a in B]
    D = linalg.det(G)
    if D.denominator != 1:
        raise InternalInconsistencyError(f"discriminant {D} of a ring is not an integer")
    return int(D)


def _coords_int(lat: Lattice, v) -> list[int]:
    y = lat.coords(v)
    if y is None or any(c.denominator != 1 for c in y):
        raise InternalInconsistencyError("element expected in the order is missing")
    return [int(c) for c in y]


def p_radical(order: ZOrder, p: int) -> Lattice:
    """Lift of the nilradical of L/pL, as a lattice containing pL.

    In characteristic p the Frobenius x -> x^p is linear on a commutative
    algebra; the nilradical is the kernel of its iterates, which stabilizes.
    """
    H = order.H
    n = H.n
    B = [list(r) for r in order.basis]
    frob = []
    for row in B:
        x = H.unit
        for _ in range(p):
            x = H.multiply(x, row)
        frob.append([c % p for c in _coords_int(order.lattice, x)])
    Fk = [r[:] for r in frob]
    kernel = linalg.left_nullspace_mod_p(Fk, p)
    while True:
        Fk = [[sum(a * b for a, b in zip(r, col)) % p for col in zip(*frob)] for r in Fk]
        nxt = linalg.left_nullspace_mod_p(Fk, p)
        if len(nxt) == len(kernel):
            break
        kernel = nxt
    gens = [linalg.vecmat(k, B) for k in kernel] + [[p * x for x in r] for r in B]
    return Lattice(gens, n)


def multiplier_ring(order: ZOrder, ideal: Lattice) -> Lattice:
    """(I : I) = {x in H : x I in I}."""
    H = order.H
    n = H.n
    inv = linalg.inverse(ideal.basis)
    M = []
    for i in range(n):
        e = [Fraction(int(i == j)) for j in range(n)]
        row = []
        for iota in ideal.basis:
            row.extend(linalg.vecmat(H.multiply(e, iota), inv))
        M.append(row)
    return integral_preimage(M)


def p_maximal(order: ZOrder, p: int) -> tuple[bool, ZOrder | None]:
    """Radical-multiplier test; returns ``(True, None)`` or ``(False, enlargement)``."""
    if not order.H.commutative:
        raise UnsupportedCaseError("p-maximality test is implemented for commutative H only")
    if not order.is_ring:
        raise InternalInconsistencyError("p-maximality needs a ring")
    disc = order.disc if order.disc is not None else disc_order(order)
    if disc % p:
        return True, None
    I = p_radical(order, p)
    O2 = multiplier_ring(order, I)
    if O2 == order.lattice:
        return True, None
    bigger = make_order(order.H, O2, order.name + "+")
    if not bigger.is_ring or not O2.contains_lattice(order.lattice):
        raise InternalInconsistencyError("multiplier ring is not an over-ring")
    return False, bigger


def p_maximal_overorder(order: ZOrder, p: int) -> ZOrder:
    cur = order
    while True:
        ok, nxt = p_maximal(cur, p)
        if ok:
            return cur
        cur = nxt  # type: ignore[assignment]


def is_maximal(order: ZOrder) -> bool:
    """p-maximal at every p with p^2 | disc; other primes are automatic."""
    disc = order.disc if order.disc is not None else disc_order(order)
    for p in prime_factors(disc):
        if disc % (p * p) == 0 and not p_maximal(order, p)[0]:
            return False
    return True


def maximal_order(order: ZOrder) -> ZOrder:
    cur = order
    for p in prime_factors(order.disc if order.disc is not None else disc_order(order)):
        cur = p_maximal_overorder(cur, p)
    return cur


def inclusion_and_index(small: ZOrder | Lattice, big: ZOrder | Lattice) -> tuple[bool, int | Fraction]:
    """``(small <= big, [big : small])``; the index is rational when not included."""
    a = small.lattice if isinstance(small, ZOrder) else small
    b = big.lattice if isinstance(big, ZOrder) else big
    if b.contains_lattice(a):
        return True, a.index_in(b)
    return False, a.relative_index(b)
