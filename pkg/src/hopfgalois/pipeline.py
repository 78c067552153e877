"""End-to-end run over one instance: enumerate, descend, build orders, test freeness.

The result is a plain JSON-ready dict.  Rationals are strings ``"a/b"`` and
nothing depends on wall-clock time unless ``timings`` is requested, so two
runs with the same inputs produce identical bytes regardless of threading.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import freeness as fr
from .descent import (HopfAlgebra, Setting, action_table, build_hopf_algebra,
                      galois_map_bijective, hopf_axiom_failures,
                      module_algebra_failures)
from .errors import InconclusiveError
from .instance import InstanceSpec
from .numfield import is_domestic, is_unramified, prime_factors, valuation
from .orders import (ZOrder, associated_order, fixed_point_order,
                     group_ring_order, inclusion_and_index, is_hopf_order,
                     is_maximal, orbit_sum_basis, p_is_hopf_order, p_maximal,
                     p_maximal_overorder)
from .permcore import (DEFAULT_MAX_POINTS, PermGroup,
                       enumerate_regular_normalized, group_fingerprint)

REPORT_SCHEMA = "hopfgalois-report/1"


@dataclass
class Options:
    primes: list[int] | None = None  # None = take the instance's own list
    global_search: int | None = None
    sweep_bound: int | None = None  # None = instance option, then the default
    scan_budget: int = fr.DEFAULT_SCAN_BUDGET
    max_points: int = DEFAULT_MAX_POINTS
    threads: int = 1
    timings: bool = False
    extra: dict[str, Any] = field(default_factory=dict)


def q(x) -> str:
    return str(Fraction(x))


def qrows(rows) -> list[list[str]]:
    return [[q(c) for c in r] for r in rows]


# --- enumeration and construction ----------------------------------------------

def structures(S: Setting, opts: Options) -> list[PermGroup]:
    return enumerate_regular_normalized(S.X, S.lam, max_points=opts.max_points,
                                        threads=opts.threads)


def fingerprint_record(N: PermGroup) -> dict:
    order, abelian, orders = group_fingerprint(N)
    return {"order": order, "abelian": abelian, "element_orders": list(orders),
            "generators": [str(g) for g in N.generators],
            "elements": [list(e.images) for e in N.elements]}


def enumerate_report(spec: InstanceSpec, opts: Options) -> dict:
    S = spec.setting
    Ns = structures(S, opts)
    return {"schema": REPORT_SCHEMA, "instance": spec.name, "points": S.n,
            "structures": [dict(index=i, **fingerprint_record(N)) for i, N in enumerate(Ns)]}


def hopf_record(H: HopfAlgebra) -> dict:
    return {
        "dimension": H.n,
        "commutative": H.commutative,
        "basis": qrows(H.basis),
        "unit": [q(c) for c in H.unit],
        "counit": [q(c) for c in H.counit],
        "antipode": qrows(H.antipode),
        "mult": [qrows(m) for m in H.mult],
        "comult": [qrows(m) for m in H.comult],
    }


def build_report(spec: InstanceSpec, index: int, opts: Options) -> dict:
    S = spec.setting
    Ns = structures(S, opts)
    if not 0 <= index < len(Ns):
        raise IndexError(f"structure {index} out of range; {len(Ns)} structures")
    H = build_hopf_algebra(S, Ns[index])
    return {"schema": REPORT_SCHEMA, "instance": spec.name, "structure": index,
            "fingerprint": fingerprint_record(Ns[index]), "hopf_algebra": hopf_record(H)}


# --- full check ------------------------------------------------------------------

def order_record(o: ZOrder) -> dict:
    return {"basis": qrows(o.basis), "disc": o.disc, "is_ring": o.is_ring,
            "is_hopf": is_hopf_order(o)}


def _chain(label: str, small: ZOrder, big: ZOrder) -> dict:
    inside, idx = inclusion_and_index(small, big)
    ok = inside and small.disc == big.disc * idx * idx
    return {"chain": label, "included": inside, "index": q(idx), "disc_small": small.disc,
            "disc_big": big.disc, "consistent": ok}


def check_structure(spec: InstanceSpec, i: int, N: PermGroup, primes_opt: list[int],
                    opts: Options) -> dict:
    t0 = time.perf_counter()
    S = spec.setting
    L = S.L
    H = build_hopf_algebra(S, N)
    A = action_table(H, L.OL)
    axiom_fails = hopf_axiom_failures(H)
    bij, jdet = galois_map_bijective(H, A)
    ma_fails = module_algebra_failures(H, A)

    AH = associated_order(H, A)
    F0 = fixed_point_order(H)
    orbits = orbit_sum_basis(H)
    inside, idx = inclusion_and_index(F0, AH)
    chains = [_chain("fixed-point in associated", F0, AH)]
    ZN = group_ring_order(H)
    if ZN is not None:
        chains.append(_chain("group-ring in fixed-point", ZN, F0))
        chains.append(_chain("group-ring in associated", ZN, AH))
    orders = {"associated": order_record(AH), "fixed_point": order_record(F0)}
    if ZN is not None:
        orders["group_ring"] = order_record(ZN)
        orders["group_ring_index"] = q(inclusion_and_index(ZN, AH)[1])
    orders["orbit_sums_span_fixed_point"] = orbits.lattice() == F0.lattice
    orders["orbit_det_squared"] = [q(o["det_squared"]) for o in orbits.orbits]
    if H.commutative:
        orders["associated_maximal"] = is_maximal(AH)
        for p in prime_factors(AH.disc):
            top = p_maximal_overorder(AH, p)
            if top.lattice != AH.lattice:
                chains.append(_chain(f"associated in {p}-maximal", AH, top))
    else:
        orders["associated_maximal"] = None

    mats = fr.order_action(AH.basis, A)
    try:
        sweep = opts.sweep_bound if opts.sweep_bound is not None else \
            spec.options.get("sweep_bound", fr.DEFAULT_SWEEP_BOUND)
        crit = fr.critical_primes(mats, L.degree, L.disc, sweep)
        crit_list = crit.list()
        crit_rec = {"theta0": list(crit.theta0), "index": crit.index,
                    "primes": [{"p": p, "reasons": r} for p, r in crit.primes]}
    except InconclusiveError as exc:
        crit_list, crit_rec = None, {"error": str(exc)}

    checked = sorted(set(primes_opt) | set(crit_list or []))
    per_prime, facts_p = {}, {k: {} for k in ("unramified", "index_p", "hopf_p", "tame4", "pmax", "free")}
    witness_ok = True
    for p in checked:
        lf = fr.local_free_checked(mats, p, opts.scan_budget)
        if lf.witness is not None and (lf.witness_index == 0 or lf.witness_index % p == 0):
            witness_ok = False
        tm = fr.left_integral_and_tameness(H, A, p)
        pmax = p_maximal(AH, p)[0] if H.commutative else None
        unram = is_unramified(p, L)
        rec = {
            "unramified": unram,
            "index_valuation": valuation(idx, p) if inside else None,
            "fixed_point_p_hopf": p_is_hopf_order(F0, p),
            "associated_p_maximal": pmax,
            "local_free": {"free": lf.free, "proven": lf.proven, "scanned": lf.scanned,
                           "witness": list(lf.witness) if lf.witness is not None else None,
                           "witness_index": lf.witness_index, "note": lf.note},
            "tameness": {**tm.conditions, "left_integral": tm.left_integral,
                         "trace_ideal_generator": tm.trace_generator, "t_witness": tm.t_witness},
        }
        per_prime[str(p)] = rec
        facts_p["unramified"][p] = unram
        facts_p["index_p"][p] = not inside or valuation(idx, p) > 0
        facts_p["hopf_p"][p] = rec["fixed_point_p_hopf"]
        facts_p["tame4"][p] = tm.theta_unit
        facts_p["pmax"][p] = pmax
        facts_p["free"][p] = lf.free

    bound = opts.global_search if opts.global_search is not None else spec.options.get("global_search", 1)
    gg = fr.global_generator_search(mats, bound)

    facts = dict(facts_p, galois=S.G.order == L.degree, abelian=S.G.is_abelian(),
                 commutative=H.commutative, degree=L.degree, domestic=is_domestic(L, L.degree),
                 primes=checked, critical=crit_list, index=idx if inside else None)
    verdicts = fr.theorem_verdicts(facts)

    consistency = {
        "dimension_matches_degree": H.n == L.degree,
        "hopf_axioms": not axiom_fails,
        "galois_map_bijective": bij,
        "module_algebra": not ma_fails,
        "fixed_point_in_associated": inside,
        "disc_chains": all(c["consistent"] for c in chains),
        "witnesses_coprime": witness_ok,
        "global_implies_local": gg is None or all(v is not False for v in facts_p["free"].values()),
    }
    rec = {
        "index": i,
        "fingerprint": fingerprint_record(N),
        "commutative": H.commutative,
        "dimension": H.n,
        "hopf_axiom_failures": axiom_fails,
        "galois_map": {"bijective": bij, "det": q(jdet)},
        "module_algebra_failures": ma_fails,
        "orders": orders,
        "inclusion": {"included": inside, "index": q(idx)},
        "disc_chains": chains,
        "critical_primes": crit_rec,
        "primes": per_prime,
        "global_generator": {"bound": bound, "theta": list(gg) if gg is not None else None},
        "verdicts": [{"tag": v.tag, "prime": v.prime, "hypotheses": v.hypotheses,
                      "conclusions": v.conclusions, "status": v.status} for v in verdicts],
        "consistency": consistency,
    }
    if opts.timings:
        rec["seconds"] = round(time.perf_counter() - t0, 3)
    return rec


def run_pipeline(spec: InstanceSpec, opts: Options | None = None) -> dict:
    opts = opts or Options()
    t0 = time.perf_counter()
    S = spec.setting
    L = S.L
    primes = opts.primes if opts.primes is not None else list(spec.options.get("primes", []))
    Ns = structures(S, opts)
    if opts.threads > 1 and len(Ns) > 1:
        with ThreadPoolExecutor(opts.threads) as ex:
            recs = list(ex.map(lambda a: check_structure(spec, a[0], a[1], primes, opts),
                               enumerate(Ns)))
    else:
        recs = [check_structure(spec, i, N, primes, opts) for i, N in enumerate(Ns)]
    report = {
        "schema": REPORT_SCHEMA,
        "instance": {
            "name": spec.name,
            "degree_E": S.d,
            "degree_L": L.degree,
            "group_order": S.G.order,
            "group_abelian": S.G.is_abelian(),
            "L_galois": S.G.order == L.degree,
            "disc_OE": spec.declared_disc_E,
            "disc_OL": L.disc,
            "OL_basis": qrows(L.OL.basis),
            "domestic": is_domestic(L, L.degree),
            "ramified_primes": prime_factors(L.disc),
            "primes_requested": sorted(set(primes)),
        },
        "structures": recs,
    }
    report["summary"] = summarize(report)
    if opts.timings:
        report["seconds"] = round(time.perf_counter() - t0, 3)
    return report


def summarize(report: dict) -> dict:
    counts = {fr.PASS: 0, fr.FAIL: 0, fr.NA: 0, fr.INCONCLUSIVE: 0}
    broken = []
    for s in report["structures"]:
        for v in s["verdicts"]:
            counts[v["status"]] += 1
        broken += [f"structure {s['index']}: {k}" for k, ok in s["consistency"].items() if not ok]
    return {"verdicts": counts, "consistency_failures": broken, "exit_code": exit_code(counts, broken)}


def exit_code(counts: dict, broken: list) -> int:
    if counts[fr.FAIL] or broken:
        return 1
    if counts[fr.INCONCLUSIVE]:
        return 2
    return 0
