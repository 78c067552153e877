"""Rendering of pipeline reports: JSON, aligned text tables, and PNG figures."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Sequence

STATUS_CODE = {"pass": 1.0, "not-applicable": 0.5, "inconclusive": 0.25, "fail": 0.0}


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def from_json(text: str) -> dict:
    return json.loads(text)


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


def table(headers: Sequence[str], rows: Sequence[Sequence], indent: str = "") -> str:
    cells = [[str(h) for h in headers]] + [["-" if c is None else str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(headers))]
    lines = []
    for n, r in enumerate(cells):
        lines.append(indent + "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if n == 0:
            lines.append(indent + "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _yn(v) -> str:
    return {True: "yes", False: "no", None: "-"}[v]


def render_text(report: dict) -> str:
    inst = report["instance"]
    out = [f"instance {inst['name']}",
           table(["key", "value"], [
               ["[E:Q]", inst["degree_E"]], ["[L:Q]", inst["degree_L"]],
               ["|G|", inst["group_order"]], ["G abelian", _yn(inst["group_abelian"])],
               ["L/Q Galois", _yn(inst["L_galois"])], ["disc O_E", inst["disc_OE"]],
               ["disc O_L", inst["disc_OL"]], ["domestic", _yn(inst["domestic"])],
               ["ramified", ",".join(map(str, inst["ramified_primes"])) or "none"]]),
           ""]
    rows = []
    for s in report["structures"]:
        fp = s["fingerprint"]
        rows.append([s["index"], fp["order"], "abelian" if fp["abelian"] else "nonabelian",
                     _yn(s["commutative"]), s["inclusion"]["index"],
                     s["orders"]["associated"]["disc"], s["orders"]["fixed_point"]["disc"],
                     _yn(s["orders"]["associated"]["is_hopf"]),
                     _yn(s["orders"]["associated_maximal"]),
                     "none" if s["global_generator"]["theta"] is None
                     else " ".join(map(str, s["global_generator"]["theta"]))])
    out += ["structures", table(["#", "|N|", "N", "comm", "[A:F]", "disc A", "disc F", "A hopf",
                                 "A maximal", "global generator"], rows), ""]
    for s in report["structures"]:
        out.append(f"structure {s['index']}  N = {' '.join(s['fingerprint']['generators'])}")
        prow = []
        for p, r in sorted(s["primes"].items(), key=lambda kv: int(kv[0])):
            lf = r["local_free"]
            prow.append([p, _yn(r["unramified"]), r["index_valuation"], _yn(r["fixed_point_p_hopf"]),
                         _yn(r["associated_p_maximal"]), _yn(r["tameness"]["trace_surjective"]),
                         _yn(lf["free"]), "-" if lf["witness"] is None else " ".join(map(str, lf["witness"]))])
        out.append(table(["p", "unram", "v_p[A:F]", "F p-hopf", "A p-max", "tame(4)", "free", "witness"],
                         prow, "  "))
        vrow = [[v["tag"], "-" if v["prime"] is None else v["prime"], v["status"]] for v in s["verdicts"]]
        out.append(table(["verdict", "p", "status"], vrow, "  "))
        bad = [k for k, ok in s["consistency"].items() if not ok]
        out.append("  consistency: " + ("ok" if not bad else "FAILED " + ", ".join(bad)))
        out.append("")
    summ = report["summary"]
    c = summ["verdicts"]
    out.append(f"verdicts: pass {c['pass']}  fail {c['fail']}  not-applicable {c['not-applicable']}"
               f"  inconclusive {c['inconclusive']}  -> exit {summ['exit_code']}")
    return "\n".join(out) + "\n"


def render_enumeration(rep: dict) -> str:
    rows = [[s["index"], s["order"], "yes" if s["abelian"] else "no",
             " ".join(map(str, s["element_orders"])), ", ".join(s["generators"])] for s in rep["structures"]]
    return (f"instance {rep['instance']}: {len(rows)} structures on {rep['points']} points\n"
            + table(["#", "|N|", "abelian", "element orders", "generators"], rows) + "\n")


def render_figures(report: dict, directory: str | Path) -> list[Path]:
    """Write a verdict grid and an index/discriminant chart as PNG files."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    name = report["instance"]["name"]
    structs = report["structures"]
    written = []

    labels = sorted({(v["tag"], v["prime"] or 0) for s in structs for v in s["verdicts"]},
                    key=lambda t: (t[0], t[1]))
    grid = [[STATUS_CODE.get(next((v["status"] for v in s["verdicts"]
                                   if (v["tag"], v["prime"] or 0) == lab), "not-applicable"), 0.5)
             for lab in labels] for s in structs]
    fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(labels) + 2), max(3.0, 1.5 + 0.5 * len(structs))))
    ax.imshow(grid, cmap="RdYlGn", vmin=0, vmax=1, aspect="auto")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels([f"{t}@{p}" if p else t for t, p in labels], rotation=60, ha="right", fontsize=7)
    ax.set_yticks(range(len(structs)))
    ax.set_yticklabels([f"N{s['index']}" for s in structs])
    ax.set_title(f"{name}: verdicts (green pass, yellow n/a, red fail)")
    fig.tight_layout()
    p = d / f"{name}_verdicts.png"
    fig.savefig(p, dpi=100, metadata={"Software": None})
    plt.close(fig)
    written.append(p)

    idx = [float(Fraction(s["inclusion"]["index"])) for s in structs]
    disc_a = [abs(s["orders"]["associated"]["disc"]) for s in structs]
    disc_f = [abs(s["orders"]["fixed_point"]["disc"]) for s in structs]
    fig, (a1, a2) = plt.subplots(1, 2, figsize=(8, 3))
    xs = list(range(len(structs)))
    a1.bar(xs, idx, color="tab:blue")
    a1.set_xticks(xs)
    a1.set_xticklabels([f"N{i}" for i in xs])
    a1.set_title("[associated : fixed-point]")
    w = 0.4
    a2.bar([x - w / 2 for x in xs], disc_f, w, label="fixed-point", color="tab:orange")
    a2.bar([x + w / 2 for x in xs], disc_a, w, label="associated", color="tab:green")
    a2.set_yscale("log")
    a2.set_xticks(xs)
    a2.set_xticklabels([f"N{i}" for i in xs])
    a2.set_title("|disc| of orders")
    a2.legend(fontsize=7)
    fig.suptitle(name)
    fig.tight_layout()
    p = d / f"{name}_orders.png"
    fig.savefig(p, dpi=100, metadata={"Software": None})
    plt.close(fig)
    written.append(p)
    return written
