"""Permutations of a coset space and the search for regular subgroups.

Points are ``0..n-1``.  A Hopf-Galois structure on L/K corresponds to a
subgroup N of Perm(X) that is regular on X and normalized by the image of
left translation ``lambda: G -> Perm(X)``; this module finds all of them.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .errors import InvalidSubgroupError, MalformedInputError, ResourceLimitError

DEFAULT_MAX_POINTS = 8


@dataclass(frozen=True, order=True)
class Perm:
    """Permutation of ``{0..n-1}``; ``images[i]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise MalformedInputError(f"not a bijection: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Perm":
        imgs = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                imgs[a] = b
        return cls(tuple(imgs))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def inverse(self) -> "Perm":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.images) if i == j]

    def order(self) -> int:
        k = 1
        for c in self.cycles():
            k = k * len(c) // gcd(k, len(c))
        return k

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(self.n):
            if i in seen:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = [c for c in self.cycles() if len(c) > 1]
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


def compose(p: Perm, q: Perm) -> Perm:
    """``p o q``: apply q first, then p."""
    if p.n != q.n:
        raise MalformedInputError(f"size mismatch: {p.n} vs {q.n}")
    return Perm(tuple(p.images[i] for i in q.images))


def _closure(elements: Iterable[Perm], n: int, limit: int | None = None,
             fpf_only: bool = False) -> frozenset[Perm] | None:
    """Subgroup generated by ``elements``; None once it exceeds ``limit`` or,
    with ``fpf_only``, as soon as a non-identity element has a fixed point."""
    ident = Perm.identity(n)
    group = {ident}
    gens = [g for g in elements if not g.is_identity()]
    frontier = [ident]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = compose(g, a)
                if b in group:
                    continue
                if fpf_only and b.fixed_points():
                    return None
                group.add(b)
                if limit is not None and len(group) > limit:
                    return None
                new.append(b)
        frontier = new
    return frozenset(group)


@dataclass(frozen=True)
class PermGroup:
    n: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...] = field(compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return p in self._set

    @property
    def _set(self) -> frozenset[Perm]:
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.elements)
            object.__setattr__(self, "_cached_set", s)
        return s

    def is_abelian(self) -> bool:
        return all(compose(a, b) == compose(b, a) for a in self.generators for b in self.generators)

    def index(self, p: Perm) -> int:
        return self.elements.index(p)

    def key(self) -> tuple:
        return tuple(e.images for e in self.elements)

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.generators) + ">"


def generate(gens: Sequence[Perm], n: int | None = None) -> PermGroup:
    """Closure of ``gens`` under composition, elements sorted by image tuple."""
    if n is None:
        if not gens:
            raise MalformedInputError("point count needed when there are no generators")
        n = gens[0].n
    for g in gens:
        if g.n != n:
            raise MalformedInputError(f"generator {g} acts on {g.n} points, expected {n}")
    elems = _closure(gens, n)
    assert elems is not None
    return PermGroup(n, tuple(gens), tuple(sorted(elems)))


def _from_elements(elems: Iterable[Perm], n: int) -> PermGroup:
    elems = tuple(sorted(elems))
    gens: list[Perm] = []
    span: frozenset[Perm] = frozenset([Perm.identity(n)])
    for e in elems:
        if e not in span:
            gens.append(e)
            span = _closure(gens, n)  # type: ignore[assignment]
    return PermGroup(n, tuple(gens), elems)


# --- abstract groups via Cayley tables ------------------------------------

def identity_index(table: Sequence[Sequence[int]]) -> int:
    for e, row in enumerate(table):
        if list(row) == list(range(len(table))):
            return e
    raise MalformedInputError("Cayley table has no identity")


def cayley_table(elements: Sequence[Perm]) -> list[list[int]]:
    pos = {p: i for i, p in enumerate(elements)}
    return [[pos[compose(a, b)] for b in elements] for a in elements]


@dataclass(frozen=True)
class CosetSpace:
    """Left cosets ``g G'`` of a subgroup, indexed 0..|G|/|G'|-1."""

    group_order: int
    subgroup_elements: tuple[int, ...]
    reps: tuple[int, ...]
    lookup: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.reps)

    def coset(self, i: int, table: Sequence[Sequence[int]]) -> list[int]:
        return [table[self.reps[i]][h] for h in self.subgroup_elements]


def coset_space(table: Sequence[Sequence[int]], subgroup: Iterable[int]) -> CosetSpace:
    """Left coset space of the subgroup with the given element indices.

    Each coset is represented by its smallest element index.
    """
    if isinstance(table, PermGroup):
        table = cayley_table(table.elements)
    order = len(table)
    H = sorted(set(int(h) for h in subgroup))
    e = identity_index(table)
    if not H:
        H = [e]
    hs = set(H)
    if e not in hs or any(table[a][b] not in hs for a in H for b in H):
        raise InvalidSubgroupError(f"element indices {H} are not closed under the group law")
    lookup = [-1] * order
    reps = []
    for g in range(order):
        if lookup[g] >= 0:
            continue
        idx = len(reps)
        reps.append(g)
        for h in H:
            lookup[table[g][h]] = idx
    return CosetSpace(order, tuple(H), tuple(reps), tuple(lookup))


def lambda_embedding(table: Sequence[Sequence[int]], X: CosetSpace) -> list[Perm]:
    """Left translation ``lambda(g)(xG') = gxG'``, one permutation per element."""
    if isinstance(table, PermGroup):
        table = cayley_table(table.elements)
    return [Perm(tuple(X.lookup[table[g][r]] for r in X.reps)) for g in range(len(table))]


# --- regular subgroups -----------------------------------------------------

def orbit_of_point(N: PermGroup | Iterable[Perm], point: int = 0) -> set[int]:
    elems = N.elements if isinstance(N, PermGroup) else N
    return {p(point) for p in elems}


def is_regular(N: PermGroup, n: int) -> bool:
    return N.order == n and len(orbit_of_point(N, 0)) == n


def is_normalized(N: PermGroup, lambdaG: Sequence[Perm]) -> bool:
    for g in lambdaG:
        if g.n != N.n:
            raise MalformedInputError("point counts differ")
        gi = g.inverse()
        for v in N.elements:
            if compose(compose(g, v), gi) not in N:
                return False
    return True


def _conjugation_orbits(pool: Sequence[Perm], G: Sequence[Perm]) -> list[tuple[Perm, ...]]:
    seen: set[Perm] = set()
    orbits = []
    for c in pool:
        if c in seen:
            continue
        orb = {compose(compose(g, c), g.inverse()) for g in G}
        seen |= orb
        orbits.append(tuple(sorted(orb)))
    return orbits


def derangements(n: int) -> list[Perm]:
    return [Perm(p) for p in itertools.permutations(range(n))
            if all(i != j for i, j in enumerate(p))]


def enumerate_regular_normalized(X: CosetSpace | int, lambdaG: Sequence[Perm],
                                 max_points: int = DEFAULT_MAX_POINTS,
                                 threads: int = 1) -> list[PermGroup]:
    """All regular subgroups of Perm(X) normalized by ``lambdaG``.

    Backtracks over unions of lambda(G)-conjugacy orbits of fixed-point-free
    permutations; a branch dies as soon as its closure outgrows |X| or picks
    up a non-identity element with a fixed point.
    """
    n = X if isinstance(X, int) else X.n
    if n < 1:
        raise MalformedInputError("coset space is empty")
    if n > max_points:
        raise ResourceLimitError(f"|X| = {n} exceeds the point bound {max_points}")
    if n == 1:
        return [generate([], 1)]
    G = list(_closure(lambdaG, n) or [])
    orbits = [o for o in _conjugation_orbits(derangements(n), G) if len(o) < n]

    def explore(start: frozenset[Perm], seen: set[frozenset[Perm]]) -> set[frozenset[Perm]]:
        found: set[frozenset[Perm]] = set()
        stack = [start]
        while stack:
            S = stack.pop()
            for orb in orbits:
                if orb[0] in S:
                    continue
                T = _closure(list(S) + list(orb), n, limit=n, fpf_only=True)
                if T is None or n % len(T) or T in seen:
                    continue
                seen.add(T)
                if len(T) == n:
                    found.add(T)
                else:
                    stack.append(T)
        return found

    trivial = frozenset([Perm.identity(n)])
    if threads > 1:
        # one branch per first orbit; branches may overlap, the union is what counts
        firsts = []
        for orb in orbits:
            T = _closure(list(orb), n, limit=n, fpf_only=True)
            if T is not None and n % len(T) == 0 and T not in firsts:
                firsts.append(T)

        def branch(T):
            if len(T) == n:
                return {T}
            return explore(T, {T})

        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(branch, firsts))
        found = set().union(*parts) if parts else set()
    else:
        found = explore(trivial, {trivial})
    groups = [_from_elements(T, n) for T in found]
    return sorted(groups, key=PermGroup.key)


def group_fingerprint(N: PermGroup) -> tuple[int, bool, tuple[int, ...]]:
    """(order, abelian, sorted element orders).

    Separates all isomorphism classes of order at most 15; the first
    collisions occur at order 16.
    """
    elems = N.elements
    abelian = all(compose(a, b) == compose(b, a) for a in elems for b in elems)
    return (N.order, abelian, tuple(sorted(p.order() for p in elems)))
