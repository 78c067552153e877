"""Local freeness of O_L over orders in H, tameness data, and verdicts.

Freeness at p is decided with Nakayama's lemma: theta generates O_L over
the p-completion of an order iff its reduction generates O_L/p over the
order mod p.  Scanning every residue class therefore proves non-freeness
when no generator turns up.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

from . import linalg
from .descent import ActionTable, HopfAlgebra, apply_table
from .errors import InconclusiveError, ResourceLimitError
from .lattice import _egcd, integer_left_kernel
from .numfield import prime_factors

DEFAULT_SCAN_BUDGET = 10 ** 6
DEFAULT_SWEEP_BOUND = 2


# --- action of an order on O_L ----------------------------------------------

def order_action(rows: Sequence[Sequence[Fraction]], A: ActionTable) -> list[list[list[int]]]:
    """Integer matrices of each order basis row acting on the O_L basis."""
    mats = []
    m = len(A.mu)
    for row in rows:
        M = linalg.zeros(m, m)
        for i, c in enumerate(row):
            if c:
                for r in range(m):
                    for k in range(m):
                        M[r][k] += c * A.T[i][r][k]
        if any(x.denominator != 1 for r in M for x in r):
            raise ValueError("order does not preserve O_L")
        mats.append([[int(x) for x in r] for r in M])
    return mats


def _images(theta: Sequence[int], mats) -> list[list[int]]:
    m = len(theta)
    return [[sum(theta[r] * M[r][k] for r in range(m)) for k in range(m)] for M in mats]


def generated_index(theta: Sequence[int], mats) -> int:
    """[O_L : Lambda theta], or 0 when Lambda theta has smaller rank."""
    return int(abs(linalg.det(_images(theta, mats))))


# --- deterministic sweeps ---------------------------------------------------

def _value_rank(v: int) -> int:
    # 0, 1, -1, 2, -2, ...
    return 2 * v - 1 if v > 0 else -2 * v


def sweep(m: int, bound: int) -> Iterator[tuple[int, ...]]:
    """Coefficient vectors of height <= bound: smallest height first, then
    smallest L1 norm, then colexicographic in the order 0, 1, -1, 2, -2, ..."""
    for h in range(bound + 1):
        shell = [v for v in itertools.product(range(-h, h + 1), repeat=m)
                 if max((abs(x) for x in v), default=0) == h]
        shell.sort(key=lambda v: (sum(abs(x) for x in v), tuple(_value_rank(x) for x in reversed(v))))
        yield from shell


def residues(m: int, p: int) -> Iterator[tuple[int, ...]]:
    """All of (Z/p)^m as digit vectors in 0..p-1, first coordinate fastest."""
    for v in itertools.product(range(p), repeat=m):
        yield tuple(reversed(v))


# --- critical primes --------------------------------------------------------

@dataclass
class CriticalPrimes:
    theta0: tuple[int, ...]
    index: int
    primes: list[tuple[int, list[str]]]

    def list(self) -> list[int]:
        return [p for p, _ in self.primes]


def critical_primes(mats, degree: int, disc: int, bound: int = DEFAULT_SWEEP_BOUND) -> CriticalPrimes:
    """Primes where local freeness is not automatic.

    If [O_L : Lambda theta0] = m is finite then theta0 generates locally at
    every p not dividing m, so only primes of m (plus, for the record, those
    of the degree and discriminant) need checking.
    """
    m = len(mats[0]) if mats else 0
    for theta in sweep(m, bound):
        idx = generated_index(theta, mats)
        if idx:
            break
    else:
        raise InconclusiveError(f"no element of height <= {bound} generates a finite-index submodule")
    reasons: dict[int, list[str]] = {}
    for label, value in (("divides index", idx), ("divides degree", degree), ("divides disc", disc)):
        for p in prime_factors(value):
            reasons.setdefault(p, []).append(label)
    return CriticalPrimes(theta, idx, sorted(reasons.items()))


# --- local freeness -----------------------------------------------------------

@dataclass
class LocalFreeness:
    p: int
    free: bool | None  # None = inconclusive
    witness: tuple[int, ...] | None = None
    witness_index: int | None = None
    proven: bool = False
    scanned: int = 0
    note: str = ""


def local_free(mats, p: int, budget: int = DEFAULT_SCAN_BUDGET) -> LocalFreeness:
    """Exhaustive Nakayama scan of O_L/p for a generator over the order mod p."""
    m = len(mats[0]) if mats else 0
    if m == 0:
        return LocalFreeness(p, True, (), 1, True)
    total = p ** m
    if total > budget:
        raise ResourceLimitError(f"{p}^{m} = {total} residue classes exceed the scan budget {budget}")
    count = 0
    for theta in residues(m, p):
        count += 1
        if linalg.rank_mod_p(_images(theta, mats), p) == m:
            idx = generated_index(theta, mats)
            return LocalFreeness(p, True, theta, idx, True, count)
    return LocalFreeness(p, False, None, None, True, count, "no residue class generates: not free")


def local_free_checked(mats, p: int, budget: int = DEFAULT_SCAN_BUDGET) -> LocalFreeness:
    """``local_free`` that reports an exceeded budget as inconclusive instead of raising."""
    try:
        return local_free(mats, p, budget)
    except ResourceLimitError as exc:
        return LocalFreeness(p, None, note=str(exc))


def global_generator_search(mats, bound: int) -> tuple[int, ...] | None:
    """First theta in the sweep with Lambda theta = O_L; None proves nothing."""
    m = len(mats[0]) if mats else 0
    for theta in sweep(m, bound):
        if generated_index(theta, mats) == 1:
            return theta
    return None


# --- tameness -----------------------------------------------------------------

@dataclass
class Tameness:
    p: int
    fixed_points_are_Z: bool
    rank_equal: bool
    faithful: bool
    trace_generator: int  # theta . O_L = (trace_generator) Z
    theta_unit: bool
    t_witness: list[int] | None
    left_integral: bool

    @property
    def conditions(self) -> dict[str, bool]:
        return {"fixed_points": self.fixed_points_are_Z, "rank": self.rank_equal,
                "faithful": self.faithful, "trace_surjective": self.theta_unit}


def left_integral_failures(H: HopfAlgebra, theta: Sequence[Fraction]) -> list[int]:
    """Basis indices h where h theta != eps(h) theta."""
    bad = []
    for h in range(H.n):
        e = [Fraction(int(h == j)) for j in range(H.n)]
        if H.multiply(e, theta) != [H.counit[h] * c for c in theta]:
            bad.append(h)
    return bad


def left_integral_and_tameness(H: HopfAlgebra, A: ActionTable, p: int) -> Tameness:
    """The four tameness conditions at p for O_L over H, with theta = sum of N."""
    n, m = H.n, len(A.mu)
    # fixed points: x with x (T_i - eps_i I) = 0 for every i
    C = [[Fraction(0)] * (n * m) for _ in range(m)]
    for i in range(n):
        for r in range(m):
            for k in range(m):
                C[r][i * m + k] = A.T[i][r][k] - (H.counit[i] if r == k else 0)
    K = integer_left_kernel(C)
    one = [int(c) for c in A.one]
    fixed_ok = len(K) == 1 and (K[0] == one or K[0] == [-c for c in one])
    faithful = linalg.rank([[x for row in T for x in row] for T in A.T]) == n
    theta = H.theta()
    values = []
    lead = next(i for i, x in enumerate(A.one) if x)
    for k in range(m):
        e = [Fraction(int(k == j)) for j in range(m)]
        img = apply_table(A, theta, e)
        c = img[lead] / A.one[lead]
        if img != [c * x for x in A.one] or c.denominator != 1:
            raise ValueError("theta does not map O_L into Z")
        values.append(int(c))
    g = 0
    for v in values:
        g = gcd(g, v)
    unit = g != 0 and g % p != 0
    witness = None
    if unit:
        # Bezout combination t with theta . t = g, a p-adic unit
        coeffs, acc = [0] * m, 0
        for k, v in enumerate(values):
            if v == 0:
                continue
            if acc == 0:
                coeffs[k], acc = (1 if v > 0 else -1), abs(v)
                continue
            d, x, y = _egcd(acc, v)
            coeffs = [c * x for c in coeffs]
            coeffs[k] += y
            acc = d
        witness = coeffs
    return Tameness(p, fixed_ok, m == n, faithful, g, unit, witness,
                    not left_integral_failures(H, theta))


# --- verdicts ------------------------------------------------------------------

PASS, FAIL, NA, INCONCLUSIVE = "pass", "fail", "not-applicable", "inconclusive"


@dataclass
class Verdict:
    tag: str
    prime: int | None
    hypotheses: dict[str, bool]
    conclusions: dict[str, bool | None] = field(default_factory=dict)

    @property
    def applicable(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def status(self) -> str:
        if not self.applicable:
            return NA
        if any(v is False for v in self.conclusions.values()):
            return FAIL
        if any(v is None for v in self.conclusions.values()):
            return INCONCLUSIVE
        return PASS


def _prime_power_base(n: int) -> int | None:
    ps = prime_factors(n)
    return ps[0] if len(ps) == 1 else None


def theorem_verdicts(facts: dict) -> list[Verdict]:
    """Evaluate hypotheses and, where they hold, conclusions from computed data.

    ``facts`` keys: galois, abelian, commutative, degree, domestic,
    unramified (p -> bool), primes (checked primes), critical (primes),
    index_p (p -> bool, p divides [A_H : fixed-point order]), index (int),
    hopf_p (p -> bool), tame4 (p -> bool), pmax (p -> bool | None),
    free (p -> bool | None).
    """
    out: list[Verdict] = []
    galois_abelian = facts["galois"] and facts["abelian"]
    for p in facts["primes"]:
        unram = facts["unramified"][p]
        v = Verdict("unramified-free", p, {"galois_abelian": galois_abelian, "p_unramified": unram})
        if v.applicable:
            v.conclusions = {
                "p_coprime_index": not facts["index_p"][p],
                "fixed_point_order_p_hopf": facts["hopf_p"][p],
                "tame_trace_surjective": facts["tame4"][p],
                "locally_free": facts["free"][p],
            }
        out.append(v)
        v = Verdict("tame-maximal", p, {"commutative_H": facts["commutative"],
                                        "p_coprime_degree": facts["degree"] % p != 0})
        if v.applicable:
            v.conclusions = {
                "p_coprime_index": not facts["index_p"][p],
                "associated_p_maximal": facts["pmax"][p],
                "locally_free": facts["free"][p],
            }
        out.append(v)
    crit = facts["critical"]
    all_free = _all_true(facts["free"][p] for p in crit) if crit is not None else None
    v = Verdict("domestic-locally-free", None, {"galois_abelian": galois_abelian,
                                                "domestic": facts["domestic"],
                                                "commutative_H": facts["commutative"]})
    if v.applicable:
        v.conclusions = {"index_one": facts["index"] == 1, "locally_free_at_critical": all_free}
    out.append(v)
    ell = _prime_power_base(facts["degree"])
    v = Verdict("prime-power-tame", None, {
        "galois_abelian": galois_abelian,
        "prime_power_degree": ell is not None,
        "tame": ell is not None and facts["unramified"].get(ell, False),
        "commutative_H": facts["commutative"]})
    if v.applicable:
        v.conclusions = {"locally_free_at_critical": all_free}
    out.append(v)
    return out


def _all_true(values) -> bool | None:
    vals = list(values)
    if any(v is False for v in vals):
        return False
    if any(v is None for v in vals):
        return None
    return True
