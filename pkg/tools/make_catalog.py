"""Regenerate the built-in instance files from an independent CAS.

Integral bases and discriminants come from sympy's round-two
implementation; automorphism images are checked to be roots of the
defining polynomial before anything is written.  Run from the repo root:

    python3 tools/make_catalog.py src/hopfgalois/catalog
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

import sympy as sp
from sympy.polys.numberfields.basis import round_two

x = sp.symbols("x")

INSTANCES = [
    {
        "name": "cyclo5",
        "description": "Q(zeta_5): cyclic of degree 4, tame, domestic",
        "min_poly": [1, 1, 1, 1, 1],
        "automorphism_gens": [["0", "0", "1", "0"]],
        "subgroup_Gprime": [],
        "options": {"primes": [2, 3, 7], "global_search": 1},
    },
    {
        "name": "biquad",
        "description": "Q(sqrt(-3), sqrt(5)) via a = sqrt(5) + sqrt(-3): Klein four, domestic",
        "min_poly": [64, 0, -4, 0, 1],
        "automorphism_gens": [["0", "1/2", "0", "-1/8"], ["0", "-1/2", "0", "1/8"]],
        "subgroup_Gprime": [],
        "options": {"primes": [2, 3, 7], "global_search": 1},
    },
    {
        "name": "cubic2",
        "description": "L = Q(2^(1/3)) inside E = Q(2^(1/3), zeta_3) via a = 2^(1/3) + zeta_3",
        "min_poly": [9, 9, 0, 3, 6, 3, 1],
        "automorphism_gens": [["3", "1", "-4/3", "4/3", "2/3", "4/9"],
                              ["-1", "0", "4/3", "0", "0", "-1/9"]],
        "subgroup_Gprime": [0, 5],
        "options": {"primes": [2], "global_search": 1},
    },
    {
        "name": "quadi",
        "description": "Q(i): wildly ramified at 2",
        "min_poly": [1, 0, 1],
        "automorphism_gens": [["0", "-1"]],
        "subgroup_Gprime": [],
        "options": {"primes": [2], "global_search": 1},
    },
]


def build(inst: dict) -> dict:
    f = sp.Poly(list(reversed(inst["min_poly"])), x)
    if not f.is_irreducible:
        raise SystemExit(f"{inst['name']}: polynomial is reducible")
    for k, img in enumerate(inst["automorphism_gens"]):
        g = sum(sp.Rational(c) * x ** i for i, c in enumerate(img))
        if sp.rem(f.as_expr().subs(x, g).expand(), f.as_expr(), x) != 0:
            raise SystemExit(f"{inst['name']}: generator {k} is not a root")
    ZK, dK = round_two(sp.Poly(f, x, domain="ZZ"))
    M = ZK.QQ_matrix.to_Matrix()  # columns are basis elements in power-basis coordinates
    d = f.degree()
    rows = [[str(Fraction(int(M[i, j].p), int(M[i, j].q))) for i in range(d)] for j in range(d)]
    out = {"schema": "hopfgalois-instance/1"}
    out.update({k: inst[k] for k in ("name", "description", "min_poly", "automorphism_gens")})
    out["integral_basis_E"] = rows
    out["declared_disc_E"] = int(dK)
    out["subgroup_Gprime"] = inst["subgroup_Gprime"]
    out["options"] = inst["options"]
    return out


def main(dest: str) -> None:
    root = Path(dest)
    root.mkdir(parents=True, exist_ok=True)
    for inst in INSTANCES:
        data = build(inst)
        (root / f"{inst['name']}.json").write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
        print(inst["name"], data["declared_disc_E"])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/hopfgalois/catalog")
