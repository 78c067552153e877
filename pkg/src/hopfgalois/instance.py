"""Instance files: JSON description of E, its automorphisms, O_E and G'."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .descent import Setting
from .errors import (HopfGaloisError, MalformedInputError, SchemaError,
                     ValidationError)
from .lattice import Lattice
from .numfield import (NumberField, build_galois_group, fixed_field,
                       validate_integral_basis)
from .permcore import coset_space, lambda_embedding

SCHEMA_VERSION = "hopfgalois-instance/1"

_RATIONAL = {"oneOf": [{"type": "integer"},
                       {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}]}

INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["schema", "name", "min_poly", "automorphism_gens", "integral_basis_E",
                 "declared_disc_E", "subgroup_Gprime"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "name": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
        "min_poly": {"type": "array", "items": {"type": "integer"}, "minItems": 2},
        "automorphism_gens": {"type": "array", "items": {"type": "array", "items": _RATIONAL}},
        "integral_basis_E": {"type": "array", "items": {"type": "array", "items": _RATIONAL}},
        "declared_disc_E": {"type": "integer"},
        "subgroup_Gprime": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "primes": {"type": "array", "items": {"type": "integer", "minimum": 2}},
                "global_search": {"type": "integer", "minimum": 0},
                "sweep_bound": {"type": "integer", "minimum": 0},
            },
        },
    },
}


@dataclass
class InstanceSpec:
    name: str
    min_poly: list[int]
    automorphism_gens: list[list[Fraction]]
    integral_basis_E: list[list[Fraction]]
    declared_disc_E: int
    subgroup_Gprime: list[int]
    description: str = ""
    options: dict[str, Any] = field(default_factory=dict)
    setting: Setting | None = field(default=None, repr=False, compare=False)

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1


def _q(v) -> Fraction:
    return Fraction(v.replace(" ", "")) if isinstance(v, str) else Fraction(v)


def parse_instance(text: str | bytes, source: str = "<instance>") -> InstanceSpec:
    """Parse and fully validate instance JSON."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedInputError(f"{source}: not UTF-8 at byte {exc.start}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[:exc.pos].encode("utf-8"))
        raise MalformedInputError(f"{source}: parse error at byte {offset}: {exc.msg}") from exc
    validator = jsonschema.Draft202012Validator(INSTANCE_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = [f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors]
        raise SchemaError(f"{source}: " + "; ".join(msgs))
    spec = InstanceSpec(
        name=data["name"],
        min_poly=list(data["min_poly"]),
        automorphism_gens=[[_q(c) for c in g] for g in data["automorphism_gens"]],
        integral_basis_E=[[_q(c) for c in r] for r in data["integral_basis_E"]],
        declared_disc_E=data["declared_disc_E"],
        subgroup_Gprime=list(data["subgroup_Gprime"]),
        description=data.get("description", ""),
        options=dict(data.get("options", {})),
    )
    spec.setting = build_setting(spec)
    return spec


def build_setting(spec: InstanceSpec) -> Setting:
    """Validate the mathematical invariants and assemble the extension data."""
    if spec.min_poly[-1] != 1:
        raise ValidationError(["min_poly: leading coefficient must be 1"])
    E = NumberField(spec.min_poly)
    d = E.degree
    bad = [f"automorphism_gens[{k}]: expected {d} coordinates, got {len(g)}"
           for k, g in enumerate(spec.automorphism_gens) if len(g) != d]
    bad += [f"integral_basis_E[{k}]: expected {d} coordinates, got {len(r)}"
            for k, r in enumerate(spec.integral_basis_E) if len(r) != d]
    if bad:
        raise ValidationError(bad)
    G = build_galois_group(E, spec.automorphism_gens)
    OE = Lattice(spec.integral_basis_E, dim=d)
    problems = validate_integral_basis(E, OE, spec.declared_disc_E)
    if problems:
        raise ValidationError([f"integral_basis_E: {p}" for p in problems])
    if any(i >= G.order for i in spec.subgroup_Gprime):
        raise ValidationError([f"subgroup_Gprime: index out of range for |G| = {G.order}"])
    X = coset_space(G.mult_table, spec.subgroup_Gprime)
    lam = lambda_embedding(G.mult_table, X)
    L = fixed_field(E, G, spec.subgroup_Gprime, OE)
    return Setting(E, G, OE, X, lam, L)


def load_instance(path: str | Path) -> InstanceSpec:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise MalformedInputError(f"{path}: {exc.strerror}") from exc
    return parse_instance(raw, str(path))


def catalog_names() -> list[str]:
    root = resources.files("hopfgalois") / "catalog"
    return sorted(e.name[:-5] for e in root.iterdir() if e.name.endswith(".json"))


def load_catalog(name: str) -> InstanceSpec:
    root = resources.files("hopfgalois") / "catalog"
    entry = root / f"{name}.json"
    if not entry.is_file():
        raise MalformedInputError(f"no built-in instance named {name!r}; have {catalog_names()}")
    return parse_instance(entry.read_bytes(), f"catalog:{name}")


def resolve(ref: str) -> InstanceSpec:
    """A path if one exists, otherwise a catalog name."""
    if Path(ref).is_file():
        return load_instance(ref)
    if ref in catalog_names():
        return load_catalog(ref)
    raise MalformedInputError(f"{ref!r} is neither a file nor a built-in instance")


__all__ = ["InstanceSpec", "parse_instance", "load_instance", "load_catalog", "catalog_names",
           "resolve", "build_setting", "SCHEMA_VERSION", "HopfGaloisError"]
