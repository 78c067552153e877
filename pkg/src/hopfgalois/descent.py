"""The Hopf algebra H = E[N]^G and its action on L.

G acts on the group algebra E[N] semilinearly: on coefficients through the
Galois action and on N by conjugation through left translation.  The fixed
points form a Q-form H of E[N]; its structure maps are inherited from E[N]
and re-expressed in a Q-basis of H.

Elements of E[N] are stored flat: block ``a`` (of length [E:Q]) holds the
coefficient of the a-th element of N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import linalg
from .errors import DescentFailureError, MalformedInputError
from .lattice import Lattice
from .numfield import Elem, GaloisGroup, NumberField, SubfieldData
from .permcore import CosetSpace, Perm, PermGroup, compose

Tensor3 = list[list[list[Fraction]]]


@dataclass
class Setting:
    """Everything about the extension that does not depend on N."""

    E: NumberField
    G: GaloisGroup
    OE: Lattice
    X: CosetSpace
    lam: list[Perm]
    L: SubfieldData

    @property
    def n(self) -> int:
        return self.X.n

    @property
    def d(self) -> int:
        return self.E.degree

    @property
    def base_coset(self) -> int:
        return self.X.lookup[self.G.identity]

    def in_L(self, x: Elem) -> bool:
        return all(self.G.elements[s](x) == tuple(x) for s in self.L.subgroup)


@dataclass
class NData:
    """Index tables for a regular subgroup N."""

    group: PermGroup
    mul: list[list[int]]
    inv: list[int]
    identity: int
    conj: list[list[int]]  # conj[g][a] = index of lam(g) n_a lam(g)^-1

    @classmethod
    def build(cls, N: PermGroup, lam: Sequence[Perm]) -> "NData":
        elems = list(N.elements)
        pos = {p: i for i, p in enumerate(elems)}
        mul = [[pos[compose(a, b)] for b in elems] for a in elems]
        inv = [pos[a.inverse()] for a in elems]
        ident = pos[Perm.identity(N.n)]
        conj = []
        for g in lam:
            gi = g.inverse()
            try:
                conj.append([pos[compose(compose(g, a), gi)] for a in elems])
            except KeyError:
                raise MalformedInputError("N is not normalized by lambda(G)") from None
        return cls(N, mul, inv, ident, conj)

    @property
    def order(self) -> int:
        return len(self.mul)


# --- group-algebra elements ------------------------------------------------

def ga_blocks(vec: Sequence[Fraction], d: int) -> list[Elem]:
    return [tuple(vec[a * d:(a + 1) * d]) for a in range(len(vec) // d)]


def ga_flat(blocks: Sequence[Elem]) -> list[Fraction]:
    return [x for b in blocks for x in b]


def semilinear_act(S: Setting, nd: NData, g: int, z: Sequence[Elem]) -> list[Elem]:
    """``^g z``: coefficients through sigma_g, group elements by conjugation."""
    sigma = S.G.elements[g]
    out: list[Elem] = [S.E.zero()] * nd.order
    for a, c in enumerate(z):
        out[nd.conj[g][a]] = sigma(c)
    return out


def ga_mul(E: NumberField, nd: NData, x: Sequence[Elem], y: Sequence[Elem]) -> list[Elem]:
    out = [E.zero()] * nd.order
    for a, c in enumerate(x):
        if not any(c):
            continue
        for b, e in enumerate(y):
            if any(e):
                k = nd.mul[a][b]
                out[k] = E.add(out[k], E.mul(c, e))
    return out


# --- the Hopf algebra --------------------------------------------------------

@dataclass
class HopfAlgebra:
    """H = E[N]^G with structure constants in a Q-basis b_1..b_n.

    ``mult[i][j][k]``: coefficient of b_k in b_i b_j.
    ``comult[i][j][k]``: coefficient of b_j (x) b_k in Delta(b_i).
    ``antipode[i]``: coordinates of S(b_i).
    """

    setting: Setting
    nd: NData
    basis: list[list[Fraction]]
    mult: Tensor3 = field(default_factory=list)
    comult: Tensor3 = field(default_factory=list)
    counit: list[Fraction] = field(default_factory=list)
    antipode: linalg.Matrix = field(default_factory=list)
    unit: list[Fraction] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.basis)

    @property
    def commutative(self) -> bool:
        return all(self.nd.mul[a][b] == self.nd.mul[b][a]
                   for a in range(self.nd.order) for b in range(self.nd.order))

    def element(self, coords: Sequence) -> list[Elem]:
        """The E[N] element with the given H-coordinates, as blocks."""
        v = linalg.vecmat([linalg.frac(c) for c in coords], self.basis)
        return ga_blocks(v, self.setting.d)

    def coords(self, z: Sequence[Elem]) -> list[Fraction] | None:
        return linalg.solve_left(self.basis, ga_flat(z))

    def multiply(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> list[Fraction]:
        n = self.n
        out = [Fraction(0)] * n
        for i in range(n):
            if x[i]:
                for j in range(n):
                    if y[j]:
                        c = x[i] * y[j]
                        row = self.mult[i][j]
                        for k in range(n):
                            if row[k]:
                                out[k] += c * row[k]
        return out

    def coproduct(self, x: Sequence[Fraction]) -> list[list[Fraction]]:
        n = self.n
        out = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            if x[i]:
                for j in range(n):
                    for k in range(n):
                        if self.comult[i][j][k]:
                            out[j][k] += x[i] * self.comult[i][j][k]
        return out

    def apply_counit(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * b for a, b in zip(x, self.counit)), Fraction(0))

    def apply_antipode(self, x: Sequence[Fraction]) -> list[Fraction]:
        return linalg.vecmat(x, self.antipode)

    def theta(self) -> list[Fraction]:
        """Coordinates of the trace element, the sum of all elements of N."""
        E = self.setting.E
        y = self.coords([E.one()] * self.nd.order)
        if y is None:
            raise DescentFailureError("sum of N is not in H")
        return y

    def group_element(self, a: int) -> list[Fraction] | None:
        """Coordinates of 1*n_a when it lies in H, else None."""
        E = self.setting.E
        z = [E.zero()] * self.nd.order
        z[a] = E.one()
        return self.coords(z)


def _primitive(row: Sequence[Fraction]) -> list[Fraction]:
    D = linalg.denominator_lcm([row])
    ints = [int(x * D) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [Fraction(v, g) for v in ints]


def fixed_algebra(S: Setting, N: PermGroup) -> HopfAlgebra:
    """Q-basis of E[N]^G: RREF of the fixed space, rows scaled to primitive integers."""
    nd = NData.build(N, S.lam)
    d, n = S.d, nd.order
    dn = d * n
    blocks = []
    for g in range(S.G.order):
        if g == S.G.identity:
            continue
        M = S.G.elements[g].matrix
        A = linalg.zeros(dn, dn)
        for a in range(n):
            b = nd.conj[g][a]
            for r in range(d):
                for c in range(d):
                    A[a * d + r][b * d + c] = M[r][c]
        for i in range(dn):
            A[i][i] -= 1
        blocks.append(A)
    if blocks:
        C = [sum((blk[i] for blk in blocks), []) for i in range(dn)]
        fixed = linalg.left_nullspace(C)
    else:
        fixed = linalg.identity(dn)
    R, _ = linalg.rref(fixed)
    if len(R) != n:
        raise DescentFailureError(f"fixed space has dimension {len(R)}, expected {n}")
    basis = [_primitive(r) for r in R]
    return HopfAlgebra(S, nd, basis)


def structure_constants(H: HopfAlgebra) -> HopfAlgebra:
    """Fill in multiplication, comultiplication, counit, antipode and unit."""
    S, nd = H.setting, H.nd
    E, d, n = S.E, S.d, H.n
    B = [ga_blocks(b, d) for b in H.basis]

    prods = [ga_flat(ga_mul(E, nd, B[i], B[j])) for i in range(n) for j in range(n)]
    sols = linalg.solve_left_many(H.basis, prods)
    if any(s is None for s in sols):
        raise DescentFailureError("a product of basis elements left H")
    H.mult = [[sols[i * n + j] for j in range(n)] for i in range(n)]  # type: ignore[misc]

    # E[N] (x)_E E[N] flattened as block (a, b) of length d
    m = nd.order
    tens_basis = []
    for j in range(n):
        for k in range(n):
            v = []
            for a in range(m):
                for b in range(m):
                    v.extend(E.mul(B[j][a], B[k][b]))
            tens_basis.append(v)
    deltas = []
    for i in range(n):
        v = []
        for a in range(m):
            for b in range(m):
                v.extend(B[i][a] if a == b else E.zero())
        deltas.append(v)
    sols = linalg.solve_left_many(tens_basis, deltas)
    if any(s is None for s in sols):
        raise DescentFailureError("comultiplication does not descend to H (x) H")
    H.comult = [[sols[i][j * n:(j + 1) * n] for j in range(n)] for i in range(n)]  # type: ignore[index]

    counit = []
    for i in range(n):
        e = E.zero()
        for c in B[i]:
            e = E.add(e, c)
        if not E.is_rational(e):
            raise DescentFailureError(f"counit of basis element {i} is not rational")
        counit.append(e[0])
    H.counit = counit

    anti = []
    for i in range(n):
        z = [E.zero()] * m
        for a, c in enumerate(B[i]):
            z[nd.inv[a]] = c
        anti.append(ga_flat(z))
    sols = linalg.solve_left_many(H.basis, anti)
    if any(s is None for s in sols):
        raise DescentFailureError("antipode does not preserve H")
    H.antipode = sols  # type: ignore[assignment]

    one = [E.zero()] * m
    one[nd.identity] = E.one()
    u = H.coords(one)
    if u is None:
        raise DescentFailureError("identity of N is not in H")
    H.unit = u
    return H


def build_hopf_algebra(S: Setting, N: PermGroup) -> HopfAlgebra:
    return structure_constants(fixed_algebra(S, N))


# --- Hopf axioms --------------------------------------------------------------

def hopf_axiom_failures(H: HopfAlgebra) -> list[str]:
    """Every Hopf algebra identity checked exactly on basis elements."""
    n = H.n
    e = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    fails = []
    for i in range(n):
        if H.multiply(H.unit, e[i]) != e[i] or H.multiply(e[i], H.unit) != e[i]:
            fails.append(f"unit law fails on b{i}")
        for j in range(n):
            bij = H.mult[i][j]
            for k in range(n):
                if H.multiply(bij, e[k]) != H.multiply(e[i], H.mult[j][k]):
                    fails.append(f"associativity fails on (b{i},b{j},b{k})")
    D = H.comult
    for i in range(n):
        left = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        right = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for j in range(n):
            for k in range(n):
                c = D[i][j][k]
                if not c:
                    continue
                for a in range(n):
                    for b in range(n):
                        left[a][b][k] += c * D[j][a][b]
                        right[j][a][b] += c * D[k][a][b]
        if left != right:
            fails.append(f"coassociativity fails on b{i}")
        for k in range(n):
            if sum((D[i][j][k] * H.counit[j] for j in range(n)), Fraction(0)) != e[i][k]:
                fails.append(f"left counit law fails on b{i}")
                break
        for j in range(n):
            if sum((D[i][j][k] * H.counit[k] for k in range(n)), Fraction(0)) != e[i][j]:
                fails.append(f"right counit law fails on b{i}")
                break
        target = [H.counit[i] * u for u in H.unit]
        sl = [Fraction(0)] * n
        sr = [Fraction(0)] * n
        for j in range(n):
            for k in range(n):
                c = D[i][j][k]
                if c:
                    pl = H.multiply(H.antipode[j], e[k])
                    pr = H.multiply(e[j], H.antipode[k])
                    sl = [x + c * y for x, y in zip(sl, pl)]
                    sr = [x + c * y for x, y in zip(sr, pr)]
        if sl != target or sr != target:
            fails.append(f"antipode law fails on b{i}")
    # bialgebra compatibility
    for i in range(n):
        for j in range(n):
            lhs = H.coproduct(H.mult[i][j])
            rhs = [[Fraction(0)] * n for _ in range(n)]
            for a1 in range(n):
                for b1 in range(n):
                    c1 = D[i][a1][b1]
                    if not c1:
                        continue
                    for a2 in range(n):
                        for b2 in range(n):
                            c2 = D[j][a2][b2]
                            if not c2:
                                continue
                            left = H.mult[a1][a2]
                            right = H.mult[b1][b2]
                            for a in range(n):
                                if left[a]:
                                    for b in range(n):
                                        if right[b]:
                                            rhs[a][b] += c1 * c2 * left[a] * right[b]
            if lhs != rhs:
                fails.append(f"comultiplication not multiplicative on (b{i},b{j})")
            if H.apply_counit(H.mult[i][j]) != H.counit[i] * H.counit[j]:
                fails.append(f"counit not multiplicative on (b{i},b{j})")
    if H.apply_counit(H.unit) != 1:
        fails.append("counit of the unit is not 1")
    du = H.coproduct(H.unit)
    if du != [[H.unit[a] * H.unit[b] for b in range(n)] for a in range(n)]:
        fails.append("Delta(1) != 1 (x) 1")
    return fails


# --- action on L ----------------------------------------------------------------

def act_on_L(H: HopfAlgebra, h: Sequence, x: Elem, reps: Sequence[int] | None = None) -> Elem:
    """``(sum c_n n) . x = sum c_n (n^-1(1G'))(x)``.

    ``reps`` picks the group element used for each coset (defaults to the
    coset space's own representatives); the result must not depend on it.
    """
    S = H.setting
    E = S.E
    x = E.elem(x)
    if not S.in_L(x):
        raise ValueError("argument is not in L")
    reps = S.X.reps if reps is None else reps
    z = H.element(h)
    base = S.base_coset
    out = E.zero()
    for a, c in enumerate(z):
        if not any(c):
            continue
        j = H.nd.group.elements[H.nd.inv[a]](base)
        out = E.add(out, E.mul(c, S.G.elements[reps[j]](x)))
    if not S.in_L(out):
        raise DescentFailureError("action produced an element outside L")
    return out


@dataclass
class ActionTable:
    """``T[i][k]``: coordinates of b_i . w_k in the basis w of L."""

    T: list[linalg.Matrix]
    lattice: Lattice
    mu: Tensor3  # mu[s][t]: coordinates of w_s w_t
    one: list[Fraction]  # coordinates of 1


def action_table(H: HopfAlgebra, OL: Lattice | None = None) -> ActionTable:
    S = H.setting
    E = S.E
    OL = S.L.OL if OL is None else OL
    W = [E.elem(r) for r in OL.basis]
    n = H.n
    basis_rows = list(OL.basis)
    images = []
    for i in range(n):
        e = [Fraction(int(i == j)) for j in range(n)]
        for w in W:
            images.append(act_on_L(H, e, w))
    sols = linalg.solve_left_many(basis_rows, images)
    T = [[sols[i * len(W) + k] for k in range(len(W))] for i in range(n)]
    prods = [E.mul(a, b) for a in W for b in W]
    msol = linalg.solve_left_many(basis_rows, prods)
    mu = [[msol[s * len(W) + t] for t in range(len(W))] for s in range(len(W))]
    one = OL.coords(E.one())
    return ActionTable(T, OL, mu, one)  # type: ignore[arg-type]


def _l_mul(A: ActionTable, x: Sequence[Fraction], y: Sequence[Fraction]) -> list[Fraction]:
    m = len(x)
    out = [Fraction(0)] * m
    for s in range(m):
        if x[s]:
            for t in range(m):
                if y[t]:
                    c = x[s] * y[t]
                    out = [o + c * v for o, v in zip(out, A.mu[s][t])]
    return out


def apply_table(A: ActionTable, h: Sequence[Fraction], x: Sequence[Fraction]) -> list[Fraction]:
    """Coordinates of h . x from H-coordinates h and L-coordinates x."""
    M = linalg.zeros(len(x), len(x))
    for i, c in enumerate(h):
        if c:
            for r in range(len(x)):
                for k in range(len(x)):
                    M[r][k] += c * A.T[i][r][k]
    return linalg.vecmat(x, M)


def galois_map_bijective(H: HopfAlgebra, A: ActionTable) -> tuple[bool, Fraction]:
    """Determinant of ``j: L (x) H -> End(L)``, ``j(s (x) h)(t) = s (h . t)``."""
    m = len(A.mu)
    rows = []
    for s in range(m):
        ws = [Fraction(int(s == t)) for t in range(m)]
        for h in range(H.n):
            M = []
            for k in range(m):
                ht = A.T[h][k]
                M.extend(_l_mul(A, ws, ht))
            rows.append(M)
    D = linalg.det(rows)
    return D != 0, D


def module_algebra_failures(H: HopfAlgebra, A: ActionTable) -> list[str]:
    n, m = H.n, len(A.mu)
    fails = []
    for h in range(n):
        eh = [Fraction(int(h == j)) for j in range(n)]
        if apply_table(A, eh, A.one) != [H.counit[h] * c for c in A.one]:
            fails.append(f"b{h} . 1 != eps(b{h})")
        for s in range(m):
            for t in range(m):
                lhs = linalg.vecmat(A.mu[s][t], A.T[h])
                rhs = [Fraction(0)] * m
                for j in range(n):
                    for k in range(n):
                        c = H.comult[h][j][k]
                        if c:
                            p = _l_mul(A, A.T[j][s], A.T[k][t])
                            rhs = [r + c * v for r, v in zip(rhs, p)]
                if lhs != rhs:
                    fails.append(f"b{h} . (w{s} w{t}) breaks the module-algebra identity")
    return fails
