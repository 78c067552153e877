import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hopfgalois import freeness as fr
from hopfgalois.errors import ResourceLimitError
from hopfgalois.orders import group_ring_order

from conftest import all_structures, built


def mats_of(name, i, order="AH"):
    b = built(name, i)
    o = b.AH if order == "AH" else group_ring_order(b.H)
    return fr.order_action(o.basis, b.A)


def sympy_free_at(mats, p):
    """Independent route: some residue theta gives det(images) nonzero mod p (sympy det)."""
    m = len(mats[0])
    for theta in itertools.product(range(p), repeat=m):
        rows = [[sum(theta[r] * M[r][k] for r in range(m)) for k in range(m)] for M in mats]
        if sympy.Matrix(rows).det() % p:
            return True
    return False


# --- sweeps ---------------------------------------------------------------------

@pytest.mark.parametrize("m,b", [(1, 3), (2, 2), (3, 1), (4, 1)])
def test_sweep_is_a_complete_ordered_enumeration(m, b):
    vs = list(fr.sweep(m, b))
    assert len(vs) == len(set(vs)) == (2 * b + 1) ** m
    keys = [(max(map(abs, v), default=0), sum(map(abs, v))) for v in vs]
    assert keys == sorted(keys)
    assert vs[0] == (0,) * m


def test_sweep_prefix():
    assert list(fr.sweep(2, 1))[:5] == [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]


@pytest.mark.parametrize("m,p", [(1, 5), (2, 3), (3, 2)])
def test_residues_cover_and_order(m, p):
    rs = list(fr.residues(m, p))
    assert len(set(rs)) == p ** m
    assert rs[1] == (1,) + (0,) * (m - 1)


# --- critical primes and local freeness -------------------------------------------

def test_cyclo5_critical_primes():
    cp = fr.critical_primes(mats_of("cyclo5", 0), 4, 125)
    assert cp.theta0 == (0, 1, 0, 0) and cp.index == 1
    assert cp.list() == [2, 5]


def test_biquad_index_prime_becomes_critical():
    cp = fr.critical_primes(mats_of("biquad", 1), 4, 225)
    assert cp.index == 11 and 11 in cp.list()
    assert dict(cp.primes)[11] == ["divides index"]


def test_critical_primes_inconclusive_when_nothing_generates():
    zero = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    with pytest.raises(fr.InconclusiveError):
        fr.critical_primes(zero, 2, -4, bound=1)


@pytest.mark.parametrize("name,i", all_structures() + [("cyclic3", 0)])
def test_local_free_matches_sympy_route(name, i):
    mats = mats_of(name, i)
    S = built(name, i).spec.setting
    for p in sorted(set(fr.critical_primes(mats, S.L.degree, S.L.disc).list()) | {2, 3}):
        lf = fr.local_free(mats, p)
        assert lf.proven and lf.free == sympy_free_at(mats, p)
        if lf.free:
            assert lf.witness_index % p != 0
            assert fr.generated_index(lf.witness, mats) == lf.witness_index


def test_quadi_not_free_over_group_ring_at_two():
    mats = mats_of("quadi", 0, order="ZG")
    lf = fr.local_free(mats, 2)
    assert lf.free is False and lf.scanned == 4 and lf.witness is None
    assert sympy_free_at(mats, 2) is False
    assert fr.local_free(mats, 3).free is True
    assert fr.local_free(mats_of("quadi", 0), 2).witness == (1, 1)


def test_scan_budget():
    mats = mats_of("cyclo5", 0)
    with pytest.raises(ResourceLimitError):
        fr.local_free(mats, 7, budget=7 ** 4 - 1)
    lf = fr.local_free_checked(mats, 7, budget=10)
    assert lf.free is None and "budget" in lf.note


def test_global_generator():
    assert fr.global_generator_search(mats_of("cyclo5", 0), 1) == (0, 1, 0, 0)
    theta = fr.global_generator_search(mats_of("biquad", 0), 1)
    assert fr.generated_index(theta, mats_of("biquad", 0)) == 1
    assert fr.global_generator_search(mats_of("biquad", 3), 1) is None
    assert fr.global_generator_search(mats_of("quadi", 0, "ZG"), 2) is None


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_global_generator_implies_local_freeness(data):
    name, i = data.draw(st.sampled_from(all_structures()))
    mats = mats_of(name, i)
    theta = tuple(data.draw(st.lists(st.integers(-3, 3), min_size=len(mats[0]), max_size=len(mats[0]))))
    idx = fr.generated_index(theta, mats)
    p = data.draw(st.sampled_from([2, 3, 5, 7]))
    if idx and idx % p:
        assert fr.local_free(mats, p).free is True


# --- tameness ------------------------------------------------------------------------

def test_cubic_trace_ideal():
    b = built("cubic2", 0)
    t3 = fr.left_integral_and_tameness(b.H, b.A, 3)
    t2 = fr.left_integral_and_tameness(b.H, b.A, 2)
    assert t3.trace_generator == t2.trace_generator == 3
    assert t3.conditions == {"fixed_points": True, "rank": True, "faithful": True, "trace_surjective": False}
    assert t2.conditions["trace_surjective"] and t2.t_witness is not None


@pytest.mark.parametrize("name,i", all_structures() + [("cyclic3", 0)])
def test_theta_is_left_integral_and_witness_hits_generator(name, i):
    b = built(name, i)
    for p in (2, 3, 5):
        t = fr.left_integral_and_tameness(b.H, b.A, p)
        assert t.left_integral and not fr.left_integral_failures(b.H, b.H.theta())
        assert t.fixed_points_are_Z and t.rank_equal and t.faithful
        if t.theta_unit:
            from hopfgalois.descent import apply_table
            m = len(b.A.mu)
            x = [Fraction(0)] * m
            for k, c in enumerate(t.t_witness):
                x = [a + c * Fraction(int(j == k)) for j, a in enumerate(x)]
            img = apply_table(b.A, b.H.theta(), x)
            assert img == [t.trace_generator * c for c in b.A.one]


def test_non_integral_element_detected():
    b = built("quadi", 0)
    # the unit is not a left integral: sigma * 1 = sigma differs from eps(sigma) * 1
    assert fr.left_integral_failures(b.H, b.H.unit) != []


# --- verdicts --------------------------------------------------------------------------

def _facts(**kw):
    base = dict(galois=True, abelian=True, commutative=True, degree=4, domestic=True,
                unramified={2: True, 3: True}, index_p={3: False}, hopf_p={3: True}, tame4={3: True},
                pmax={3: True}, free={3: True}, primes=[3], critical=[3], index=1)
    base.update(kw)
    return base


def test_all_verdicts_pass_on_good_facts():
    vs = fr.theorem_verdicts(_facts())
    assert [v.status for v in vs] == [fr.PASS] * 4
    assert [v.tag for v in vs] == ["unramified-free", "tame-maximal", "domestic-locally-free",
                                   "prime-power-tame"]


def test_hypotheses_gate_applicability():
    vs = {(v.tag, v.prime): v for v in fr.theorem_verdicts(_facts(abelian=False, commutative=False))}
    assert all(v.status == fr.NA and not v.conclusions for v in vs.values())
    v = {v.tag: v for v in fr.theorem_verdicts(_facts(degree=6))}
    assert v["tame-maximal"].status == fr.NA and v["prime-power-tame"].status == fr.NA


@settings(max_examples=200)
@given(st.fixed_dictionaries({k: st.booleans() for k in
                              ("galois", "abelian", "commutative", "domestic", "unram", "idx", "hopf",
                               "tame", "pmax")}),
       st.sampled_from([True, False, None]), st.sampled_from([2, 3, 4, 6, 8, 9]))
def test_verdict_status_logic(f, free, degree):
    facts = _facts(galois=f["galois"], abelian=f["abelian"], commutative=f["commutative"],
                   domestic=f["domestic"], degree=degree, unramified={2: f["unram"], 3: f["unram"]},
                   index_p={3: f["idx"]}, hopf_p={3: f["hopf"]}, tame4={3: f["tame"]},
                   pmax={3: f["pmax"]}, free={3: free}, index=3 if f["idx"] else 1)
    for v in fr.theorem_verdicts(facts):
        if not v.applicable:
            assert v.status == fr.NA
            continue
        vals = list(v.conclusions.values())
        if False in vals:
            assert v.status == fr.FAIL
        elif None in vals:
            assert v.status == fr.INCONCLUSIVE
        else:
            assert v.status == fr.PASS
        if v.tag == "unramified-free":
            assert f["galois"] and f["abelian"] and f["unram"]
        if v.tag == "tame-maximal":
            assert f["commutative"] and degree % 3
        if v.tag == "prime-power-tame":
            assert degree in (2, 3, 4, 8, 9) and f["unram"]


def test_monotone_in_freeness():
    # turning a free prime into a non-free one can only move pass to fail
    good = fr.theorem_verdicts(_facts())
    bad = fr.theorem_verdicts(_facts(free={3: False}))
    for g, b in zip(good, bad):
        assert g.status == fr.PASS and b.status == fr.FAIL
