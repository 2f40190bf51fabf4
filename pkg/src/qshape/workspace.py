"""JSON workspaces: named fields, shapes, algebras, modules, Q-shaped
modules, maps, exact structures and test sets, validated on load."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .algebras import (AModule, Algebra, a2_projectives, dual_numbers,
                       field_algebra, path_algebra_a2,
                       simple_module_dual_numbers, validate_algebra_module)
from .errors import ParseError
from .fields import GF, QQ, FieldSpec
from .linalg import Matrix
from .qmods import QMod, QModMap, validate_qmod
from .shapes import (KCategory, QuiverPresentation, build_kcategory,
                     mesh_generator)
from .structures import (ABELIAN, SPLIT, ExactStructureDescriptor,
                         theta_structure)


@dataclass
class Workspace:
    field: FieldSpec
    shapes: dict[str, KCategory] = dc_field(default_factory=dict)
    algebras: dict[str, Algebra] = dc_field(default_factory=dict)
    modules: dict[str, AModule] = dc_field(default_factory=dict)
    qmods: dict[str, QMod] = dc_field(default_factory=dict)
    maps: dict[str, QModMap] = dc_field(default_factory=dict)
    structures: dict[str, ExactStructureDescriptor] = dc_field(default_factory=dict)
    testsets: dict[str, list[AModule]] = dc_field(default_factory=dict)

    def get(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            raise ParseError(f"unknown {kind[:-1]} {name!r}")
        return table[name]


def _parse_field(d: dict) -> FieldSpec:
    if d.get("rationals"):
        return QQ
    p = d.get("p")
    if p is None:
        raise ParseError("field needs 'p' or 'rationals'")
    return GF(int(p))


def _standard_algebra(field: FieldSpec, name: str) -> Algebra:
    if name in ("k", "field"):
        return field_algebra(field)
    if name in ("dual_numbers", "k[x]/(x^2)"):
        return dual_numbers(field)
    if name in ("a2", "path_a2", "kA2"):
        return path_algebra_a2(field)
    raise ParseError(f"unknown standard algebra {name!r}")


def _standard_module(A: Algebra, name: str) -> AModule:
    if name == "regular":
        return A.regular_module()
    if name == "simple" and A.labels == ["1", "x"]:
        return simple_module_dual_numbers(A)
    if name in ("p1", "p2") and A.labels == ["e1", "e2", "a"]:
        P1, P2 = a2_projectives(A)
        return P1 if name == "p1" else P2
    raise ParseError(f"unknown standard module {name!r} for this algebra")


def load_workspace(data: dict | str) -> Workspace:
    """Build and validate a workspace from its JSON dict (or text)."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "field" not in data:
        raise ParseError("workspace must be an object with a 'field' entry")
    field = _parse_field(data["field"])
    ws = Workspace(field)
    for name, spec in data.get("presentations", {}).items():
        try:
            if "family" in spec:
                lo, hi = spec["window"]
                pres = mesh_generator(spec["family"], (int(lo), int(hi)),
                                      n=spec.get("n"))
            else:
                pres = QuiverPresentation.from_json(spec)
            ws.shapes[name] = build_kcategory(pres, field)
        except ParseError:
            raise
        except Exception as exc:
            raise ParseError(f"presentation {name!r}: {exc}") from exc
    for name, spec in data.get("algebras", {}).items():
        if "standard" in spec:
            ws.algebras[name] = _standard_algebra(field, spec["standard"])
        else:
            ws.algebras[name] = Algebra.from_json(field, spec)
        ok, witness = ws.algebras[name].check_associative_unital()
        if not ok:
            raise ParseError(f"algebra {name!r} invalid: {witness}")
    for name, spec in data.get("modules", {}).items():
        A = ws.get("algebras", spec["algebra"])
        if "standard" in spec:
            mod = _standard_module(A, spec["standard"])
        else:
            mod = AModule.from_json(A, spec, name=name)
        rep = validate_algebra_module(A, mod)
        if not rep["ok"]:
            raise ParseError(f"module {name!r} invalid: {rep['witness']}")
        mod.name = name
        ws.modules[name] = mod
    for name, spec in data.get("qmods", {}).items():
        shape = ws.get("shapes", spec["shape"])
        A = ws.get("algebras", spec["algebra"])
        values = {q: ws.get("modules", mname)
                  for q, mname in spec.get("values", {}).items()}
        arrows = {aname: Matrix.from_rows(field, mat)
                  for aname, mat in spec.get("arrows", {}).items()}
        try:
            X = QMod(shape, A, values, arrows, name=name)
        except Exception as exc:
            raise ParseError(f"qmod {name!r}: {exc}") from exc
        rep = validate_qmod(X)
        if not rep["ok"]:
            raise ParseError(f"qmod {name!r} invalid: {rep['witness']}")
        ws.qmods[name] = X
    for name, spec in data.get("maps", {}).items():
        X = ws.get("qmods", spec["source"])
        Y = ws.get("qmods", spec["target"])
        comps = {q: Matrix.from_rows(field, mat)
                 for q, mat in spec.get("components", {}).items()}
        phi = QModMap(X, Y, comps, name=name)
        ok, witness = phi.is_natural_a_linear()
        if not ok:
            raise ParseError(f"map {name!r} invalid: {witness}")
        ws.maps[name] = phi
    for name, spec in data.get("structures", {}).items():
        kind = spec.get("kind", spec)
        if kind == "abelian":
            ws.structures[name] = ABELIAN
        elif kind == "split":
            ws.structures[name] = SPLIT
        elif isinstance(spec, dict) and "theta" in spec:
            mods = [ws.get("modules", m) for m in spec["theta"]]
            ws.structures[name] = theta_structure(mods)
        else:
            raise ParseError(f"structure {name!r}: unknown kind")
    for name, names in data.get("testsets", {}).items():
        ws.testsets[name] = [ws.get("modules", m) for m in names]
    return ws


def standard_workspace(p: int = 101) -> dict:
    """The shipped example: complex and 3-complex windows, the A2 mesh, the
    standard algebras and a few named objects."""
    return {
        "field": {"p": p},
        "presentations": {
            "cpx": {"family": "complex", "window": [-6, 7]},
            "cpx3": {"family": "ncomplex", "window": [-6, 7], "n": 3},
            "mesh_a2": {"family": "mesh_a2", "window": [-6, 7]},
        },
        "algebras": {
            "k": {"standard": "k"},
            "D": {"standard": "dual_numbers"},
            "A2": {"standard": "a2"},
        },
        "modules": {
            "k1": {"algebra": "k", "standard": "regular"},
            "DA": {"algebra": "D", "standard": "regular"},
            "Dk": {"algebra": "D", "standard": "simple"},
            "P1": {"algebra": "A2", "standard": "p1"},
            "P2": {"algebra": "A2", "standard": "p2"},
        },
        "qmods": {
            "disc0": {"shape": "cpx", "algebra": "k",
                      "values": {"0": "k1", "1": "k1"},
                      "arrows": {"d0": [[1]]}},
            "stalk0": {"shape": "cpx", "algebra": "k", "values": {"0": "k1"}},
            "W": {"shape": "cpx", "algebra": "D",
                  "values": {"0": "Dk", "1": "DA", "2": "Dk"},
                  "arrows": {"d0": [[0], [1]], "d1": [[1, 0]]}},
        },
        "maps": {
            "counit0": {"source": "disc0", "target": "stalk0",
                        "components": {"0": [[1]]}},
        },
        "structures": {
            "abelian": {"kind": "abelian"},
            "split": {"kind": "split"},
            "theta_Dk": {"kind": "theta", "theta": ["DA", "Dk"]},
        },
        "testsets": {
            "k": ["k1"],
            "D": ["DA"],
            "Dfull": ["DA", "Dk"],
        },
    }
