from __future__ import annotations

import functools
from dataclasses import dataclass

import pytest

from hopfgalois.descent import action_table, build_hopf_algebra
from hopfgalois.instance import load_catalog, parse_instance
from hopfgalois.orders import associated_order, fixed_point_order
from hopfgalois.permcore import enumerate_regular_normalized

CATALOG = ["cyclo5", "biquad", "cubic2", "quadi"]

# cyclic cubic field Q(zeta_7)^+, a test-only instance; O_E = Z[a], disc 49
CYCLIC3_JSON = """{
  "schema": "hopfgalois-instance/1",
  "name": "cyclic3",
  "min_poly": [-1, -2, 1, 1],
  "automorphism_gens": [["-2", "0", "1"]],
  "integral_basis_E": [["1","0","0"],["0","1","0"],["0","0","1"]],
  "declared_disc_E": 49,
  "subgroup_Gprime": [],
  "options": {"primes": [3]}
}"""


@dataclass
class Built:
    spec: object
    N: object
    H: object
    A: object
    AH: object
    F0: object


@functools.lru_cache(maxsize=None)
def instance(name: str):
    if name == "cyclic3":
        return parse_instance(CYCLIC3_JSON, "cyclic3")
    return load_catalog(name)


@functools.lru_cache(maxsize=None)
def structures(name: str):
    S = instance(name).setting
    return enumerate_regular_normalized(S.X, S.lam)


@functools.lru_cache(maxsize=None)
def built(name: str, i: int) -> Built:
    spec = instance(name)
    S = spec.setting
    N = structures(name)[i]
    H = build_hopf_algebra(S, N)
    A = action_table(H, S.L.OL)
    return Built(spec, N, H, A, associated_order(H, A), fixed_point_order(H))


def all_structures(names=CATALOG):
    return [(n, i) for n in names for i in range(len(structures(n)))]


def classical_index(name: str) -> int:
    """Index of the structure N = rho(G) (the centralizer of lambda(G)); for abelian G it is lambda(G)."""
    from hopfgalois.permcore import compose
    S = instance(name).setting
    for i, N in enumerate(structures(name)):
        if all(compose(a, b) == compose(b, a) for a in N.elements for b in S.lam):
            return i
    raise LookupError(name)


@pytest.fixture(params=CATALOG)
def catalog_name(request):
    return request.param
