"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Every check is exact (integers and rationals); there is no numeric tolerance.
"""

import json
import time

import pytest

from hopfgalois import cli
from hopfgalois import report as rp
from hopfgalois.descent import action_table, build_hopf_algebra
from hopfgalois.freeness import order_action, local_free
from hopfgalois.instance import load_catalog
from hopfgalois.numfield import is_unramified, valuation
from hopfgalois.orders import (associated_order, fixed_point_order, inclusion_and_index,
                               p_is_hopf_order, p_maximal)
from hopfgalois.permcore import enumerate_regular_normalized
from hopfgalois.pipeline import Options, run_pipeline

from conftest import CATALOG, classical_index
from oracles import regular_normalized_bruteforce


@pytest.fixture(scope="module")
def reports():
    return {n: run_pipeline(load_catalog(n)) for n in CATALOG}


def verdict(capsys, k, title, failures, t0):
    line = (f"{'PASS' if not failures else 'FAIL'} criterion {k}: {title}"
            f" ({time.perf_counter() - t0:.1f}s)")
    if failures:
        line += " -- " + "; ".join(failures[:5])
    with capsys.disabled():
        print("\n" + line)
    assert not failures, line


def test_criterion_1_enumeration_matches_bruteforce(capsys):
    t0, bad = time.perf_counter(), []
    for name in ("cyclo5", "biquad", "cubic2"):
        code = cli.main(["enumerate", name, "--format", "json"])
        rep = json.loads(capsys.readouterr().out)
        got = {frozenset(tuple(e) for e in s["elements"]) for s in rep["structures"]}
        S = load_catalog(name).setting
        want = regular_normalized_bruteforce(S.n, [p.images for p in S.lam])
        if code != 0 or got != want:
            bad.append(f"{name}: {len(got)} enumerated vs {len(want)} by brute force")
        if name == "cubic2" and len(got) != 1:
            bad.append(f"cubic2 has {len(got)} structures, expected exactly 1")
    verdict(capsys, 1, "enumerate agrees with the brute-force subgroup scan", bad, t0)


def test_criterion_2_descent(capsys, reports):
    t0, bad = time.perf_counter(), []
    for name, r in reports.items():
        for s in r["structures"]:
            tag = f"{name}#{s['index']}"
            if s["dimension"] != r["instance"]["degree_L"]:
                bad.append(f"{tag}: dim H = {s['dimension']}")
            if s["hopf_axiom_failures"]:
                bad.append(f"{tag}: axioms {s['hopf_axiom_failures'][:2]}")
            if not s["galois_map"]["bijective"] or rp.parse_rational(s["galois_map"]["det"]) == 0:
                bad.append(f"{tag}: Galois map determinant {s['galois_map']['det']}")
            if s["module_algebra_failures"]:
                bad.append(f"{tag}: module algebra {s['module_algebra_failures'][:2]}")
    verdict(capsys, 2, "dimension, Hopf axioms, bijective Galois map, module algebra", bad, t0)


def test_criterion_3_fixed_point_inside_associated(capsys):
    t0, bad = time.perf_counter(), []
    for name in CATALOG:
        S = load_catalog(name).setting
        for i, N in enumerate(enumerate_regular_normalized(S.X, S.lam)):
            H = build_hopf_algebra(S, N)
            AH, F0 = associated_order(H, action_table(H, S.L.OL)), fixed_point_order(H)
            inside, idx = inclusion_and_index(F0, AH)
            if not (inside and isinstance(idx, int) and idx >= 1):
                bad.append(f"{name}#{i}: inside={inside} index={idx}")
    verdict(capsys, 3, "fixed-point order inside associated order with positive integer index", bad, t0)


def test_criterion_4_unramified_primes(capsys, reports):
    t0, bad, checked = time.perf_counter(), [], 0
    for name in ("cyclo5", "biquad"):
        spec = load_catalog(name)
        S = spec.setting
        for i, N in enumerate(enumerate_regular_normalized(S.X, S.lam)):
            H = build_hopf_algebra(S, N)
            A = action_table(H, S.L.OL)
            AH, F0 = associated_order(H, A), fixed_point_order(H)
            _, idx = inclusion_and_index(F0, AH)
            rec = reports[name]["structures"][i]["primes"]
            mats = order_action(AH.basis, A)
            for p in (2, 3, 7):
                if not is_unramified(p, S.L):
                    continue
                checked += 1
                tag = f"{name}#{i} p={p}"
                if idx % p == 0:
                    bad.append(f"{tag}: p divides index {idx}")
                if not p_is_hopf_order(F0, p):
                    bad.append(f"{tag}: fixed-point order not p-Hopf")
                if not rec[str(p)]["tameness"]["trace_surjective"]:
                    bad.append(f"{tag}: trace ideal not a p-unit")
                if local_free(mats, p).free is not True or rec[str(p)]["local_free"]["free"] is not True:
                    bad.append(f"{tag}: not locally free")
    if not checked:
        bad.append("no unramified prime was checked")
    verdict(capsys, 4, f"unramified primes: index, p-Hopf, tame, free ({checked} cases)", bad, t0)


def test_criterion_5_ramified_tame_prime(capsys, reports):
    t0, bad = time.perf_counter(), []
    spec = load_catalog("cubic2")
    S = spec.setting
    (N,) = enumerate_regular_normalized(S.X, S.lam)
    H = build_hopf_algebra(S, N)
    A = action_table(H, S.L.OL)
    AH, F0 = associated_order(H, A), fixed_point_order(H)
    _, idx = inclusion_and_index(F0, AH)
    if not H.commutative or N.order != 3 or S.L.degree != 3:
        bad.append("setup: expected commutative H, |N| = 3, [L:Q] = 3")
    if is_unramified(2, S.L):
        bad.append("2 should ramify in Q(cbrt 2)")
    if valuation(idx, 2) != 0:
        bad.append(f"index {idx} has positive 2-valuation")
    if p_maximal(AH, 2) != (True, None):
        bad.append("associated order not 2-maximal")
    if local_free(order_action(AH.basis, A), 2).free is not True:
        bad.append("not free at 2")
    (s,) = reports["cubic2"]["structures"]
    if {v["prime"]: v["status"] for v in s["verdicts"] if v["tag"] == "tame-maximal"}.get(2) != "pass":
        bad.append("tame-maximal verdict at 2 did not pass")
    verdict(capsys, 5, f"cubic2 at p=2: v_2([A:F]={idx})=0, 2-maximal, free", bad, t0)


def test_criterion_6_domestic(capsys, reports):
    t0, bad = time.perf_counter(), []
    for name in ("cyclo5", "biquad"):
        r = reports[name]
        if not r["instance"]["domestic"]:
            bad.append(f"{name} not flagged domestic")
        for s in r["structures"]:
            if not s["commutative"]:
                continue
            if s["inclusion"]["index"] != "1":
                bad.append(f"{name}#{s['index']}: index {s['inclusion']['index']}")
            for p in (c["p"] for c in s["critical_primes"]["primes"]):
                if s["primes"][str(p)]["local_free"]["free"] is not True:
                    bad.append(f"{name}#{s['index']}: not free at critical prime {p}")
    for s in reports["cyclo5"]["structures"]:
        v = next(v for v in s["verdicts"] if v["tag"] == "prime-power-tame")
        if v["status"] != "pass":
            bad.append(f"cyclo5#{s['index']}: prime-power-tame {v['status']}")
    verdict(capsys, 6, "domestic: index one, free at every critical prime, prime-power verdict", bad, t0)


def test_criterion_7_classical_cross_check(capsys, reports):
    t0, bad = time.perf_counter(), []
    s = reports["cyclo5"]["structures"][classical_index("cyclo5")]
    if s["orders"].get("group_ring_index") != "1":
        bad.append(f"cyclo5 classical [A:Z[G]] = {s['orders'].get('group_ring_index')}")
    theta = s["global_generator"]["theta"]
    if theta is None or max(map(abs, theta)) > 1:
        bad.append(f"cyclo5 classical generator at height 1: {theta}")
    q = reports["quadi"]
    (sq,) = q["structures"]
    if sq["orders"].get("group_ring_index") != "2":
        bad.append(f"quadi [A:Z[G]] = {sq['orders'].get('group_ring_index')}")
    applicable = [v["tag"] for v in sq["verdicts"] if v["status"] != "not-applicable"]
    if applicable:
        bad.append(f"quadi has applicable verdicts {applicable}")
    if q["summary"]["exit_code"] != 0:
        bad.append(f"quadi exit code {q['summary']['exit_code']}")
    verdict(capsys, 7, "tame classical order is Z[G]; wild quadi strict and not applicable", bad, t0)


def test_criterion_8_internal_consistency(capsys, reports):
    t0, bad = time.perf_counter(), []
    for name, r in reports.items():
        for s in r["structures"]:
            for c in s["disc_chains"]:
                idx = rp.parse_rational(c["index"])
                if not c["included"] or c["disc_big"] * idx * idx != c["disc_small"]:
                    bad.append(f"{name}#{s['index']}: chain {c['chain']}")
            for p, rec in s["primes"].items():
                lf = rec["local_free"]
                if lf["witness"] is not None and lf["witness_index"] % int(p) == 0:
                    bad.append(f"{name}#{s['index']}: witness index {lf['witness_index']} at {p}")
        one = rp.to_json(r)
        many = rp.to_json(run_pipeline(load_catalog(name), Options(threads=4)))
        if one != many:
            bad.append(f"{name}: report bytes differ between 1 and 4 threads")
    verdict(capsys, 8, "disc chains, coprime witnesses, thread-independent bytes", bad, t0)
