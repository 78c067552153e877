import copy
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hopfgalois.descent import (NData, act_on_L, action_table, build_hopf_algebra, fixed_algebra,
                                galois_map_bijective, hopf_axiom_failures, module_algebra_failures,
                                semilinear_act)
from hopfgalois.instance import parse_instance
from hopfgalois.permcore import enumerate_regular_normalized, group_fingerprint
from hopfgalois import linalg

from conftest import CATALOG, all_structures, built, classical_index, instance, structures

TRIVIAL = """{"schema": "hopfgalois-instance/1", "name": "rationals", "min_poly": [0, 1],
 "automorphism_gens": [], "integral_basis_E": [["1"]], "declared_disc_E": 1, "subgroup_Gprime": []}"""


def test_semilinear_examples():
    S = instance("cyclo5").setting
    i = classical_index("cyclo5")
    nd = NData.build(structures("cyclo5")[i], S.lam)
    E = S.E
    z = [E.elem([k, 1]) for k in range(4)]
    assert semilinear_act(S, nd, S.G.identity, z) == z
    unit = [E.zero()] * 4
    unit[1] = E.one()
    for g in range(4):
        moved = semilinear_act(S, nd, g, unit)
        assert moved[nd.conj[g][1]] == E.one()
    # N = lambda(G), G abelian: conjugation is trivial, so only coefficients move
    zeta_n = [E.zero()] * 4
    zeta_n[2] = E.gen()
    for g in range(4):
        assert nd.conj[g] == list(range(4))
        expect = [E.zero()] * 4
        expect[2] = S.G.elements[g](E.gen())
        assert semilinear_act(S, nd, g, zeta_n) == expect


@pytest.mark.parametrize("name", CATALOG)
def test_semilinear_is_group_action(name):
    S = instance(name).setting
    E = S.E
    for N in structures(name):
        nd = NData.build(N, S.lam)
        z = [E.elem([a + 1, -a, Fraction(1, a + 2)]) for a in range(nd.order)]
        T = S.G.mult_table
        for g in range(S.G.order):
            for h in range(S.G.order):
                lhs = semilinear_act(S, nd, g, semilinear_act(S, nd, h, z))
                assert lhs == semilinear_act(S, nd, T[g][h], z)


@pytest.mark.parametrize("name,i", all_structures())
def test_descent_suite(name, i):
    b = built(name, i)
    S = b.spec.setting
    assert b.H.n == S.L.degree == S.n
    assert hopf_axiom_failures(b.H) == []
    ok, det = galois_map_bijective(b.H, b.A)
    assert ok and det != 0
    assert module_algebra_failures(b.H, b.A) == []
    assert b.H.commutative == group_fingerprint(b.N)[1]


def test_cubic_dimension():
    assert fixed_algebra(instance("cubic2").setting, structures("cubic2")[0]).n == 3


def test_trivial_extension():
    spec = parse_instance(TRIVIAL)
    S = spec.setting
    Ns = enumerate_regular_normalized(S.X, S.lam)
    assert len(Ns) == 1
    H = build_hopf_algebra(S, Ns[0])
    A = action_table(H)
    ok, det = galois_map_bijective(H, A)
    assert H.n == 1 and ok and abs(det) == 1
    assert H.mult == [[[1]]]


@pytest.mark.parametrize("name,i", all_structures())
def test_unit_and_trace_element(name, i):
    b = built(name, i)
    H, S = b.H, b.spec.setting
    E = S.E
    assert H.apply_counit(H.unit) == 1
    # the unit acts as the identity and theta as the trace to Q
    theta = H.theta()
    for w in S.L.OL.basis:
        x = E.elem(w)
        assert act_on_L(H, H.unit, x) == x
        tr = E.trace(x) / len(S.L.subgroup)
        assert act_on_L(H, theta, x) == E.rational(tr)


@pytest.mark.parametrize("name,i", all_structures())
def test_coproduct_of_theta_by_expansion(name, i):
    b = built(name, i)
    H, E = b.H, b.spec.setting.E
    C = H.coproduct(H.theta())
    n = H.n
    els = [H.element([Fraction(int(k == j)) for j in range(n)]) for k in range(n)]
    expanded = {}
    for j in range(n):
        for k in range(n):
            if C[j][k]:
                for a, ca in enumerate(els[j]):
                    for c, cc in enumerate(els[k]):
                        v = E.scale(C[j][k], E.mul(ca, cc))
                        expanded[(a, c)] = E.add(expanded.get((a, c), E.zero()), v)
    for (a, c), v in expanded.items():
        assert v == (E.one() if a == c else E.zero())
    assert all((a, a) in expanded for a in range(n))


@pytest.mark.parametrize("name,i", all_structures())
def test_action_independent_of_representatives(name, i):
    b = built(name, i)
    S = b.spec.setting
    T = S.G.mult_table
    # pick the largest element of each coset instead of the smallest
    alt = [max(g for g in range(S.G.order) if S.X.lookup[g] == c) for c in range(S.n)]
    for h in range(b.H.n):
        e = [Fraction(int(h == j)) for j in range(b.H.n)]
        for w in S.L.OL.basis:
            x = S.E.elem(w)
            assert act_on_L(b.H, e, x) == act_on_L(b.H, e, x, reps=alt)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_action_is_bilinear(data):
    name, i = data.draw(st.sampled_from(all_structures()))
    b = built(name, i)
    S = b.spec.setting
    q = st.fractions(min_value=-3, max_value=3, max_denominator=3)
    h1 = data.draw(st.lists(q, min_size=b.H.n, max_size=b.H.n))
    h2 = data.draw(st.lists(q, min_size=b.H.n, max_size=b.H.n))
    cs = data.draw(st.lists(q, min_size=S.L.degree, max_size=S.L.degree))
    x = [sum((c * w[k] for c, w in zip(cs, S.L.OL.basis)), Fraction(0)) for k in range(S.d)]
    E = S.E
    a = data.draw(q)
    hs = [u + a * v for u, v in zip(h1, h2)]
    assert act_on_L(b.H, hs, x) == E.add(act_on_L(b.H, h1, x), E.scale(a, act_on_L(b.H, h2, x)))
    x2 = E.scale(a, x)
    assert act_on_L(b.H, h1, x2) == E.scale(a, act_on_L(b.H, h1, x))


@pytest.mark.parametrize("name", ["cyclo5", "biquad", "quadi"])
def test_classical_action_commutes_with_galois(name):
    i = classical_index(name)
    b = built(name, i)
    S = b.spec.setting
    for s in S.G.elements:
        M = [S.L.OL.coords(s(S.E.elem(w))) for w in S.L.OL.basis]
        for T in b.A.T:
            assert linalg.matmul(T, M) == linalg.matmul(M, T)


def test_corrupted_action_table_is_not_bijective():
    b = built("cyclo5", 0)
    A = copy.deepcopy(b.A)
    A.T[1] = linalg.zeros(len(A.T[1]), len(A.T[1]))
    ok, det = galois_map_bijective(b.H, A)
    assert not ok and det == 0
