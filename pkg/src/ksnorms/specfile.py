"""JSON measure-spec files: one measure, named functions, a family, candidates.

Numbers may be JSON numbers, decimal strings or integer ratios such as
``"3/8"``.  Validation errors name the offending field, e.g.
``atoms[1].value``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .measures import DenseFamily, VectorMeasure, build_family, mset
from .spaces import DualCandidateSet, NormTag, Provenance, SpaceDesc, build_candidates, \
    explicit_candidates

__all__ = ["SCHEMA_VERSION", "SpecError", "MeasureSpec", "parse_spec", "load_spec",
           "dumps_spec", "default_family_kind", "default_candidates"]

SCHEMA_VERSION = 1
DEFAULT_SPHERE_SIZE = 64


class SpecError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool):
        raise SpecError(where, "expected a number, got a boolean")
    if isinstance(value, (int, float)):
        out = float(value)
    elif isinstance(value, str):
        try:
            out = float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            raise SpecError(where, f"cannot read {value!r} as a decimal or ratio") from None
    else:
        raise SpecError(where, f"expected a number, got {type(value).__name__}")
    if not np.isfinite(out):
        raise SpecError(where, "number must be finite")
    return out


def _vector(value: Any, where: str, length: int | None = None) -> list[float]:
    if not isinstance(value, list):
        raise SpecError(where, "expected a list of numbers")
    if length is not None and len(value) != length:
        raise SpecError(where, f"expected {length} numbers, got {len(value)}")
    return [_number(x, f"{where}[{i}]") for i, x in enumerate(value)]


def _mapping(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise SpecError(where, "expected an object")
    return value


def default_family_kind(m: int) -> str:
    return "all_subsets" if m <= 8 else "dyadic"


def default_candidates(space: SpaceDesc) -> dict:
    if space.norm is NormTag.ELL2 and space.dim > 1:
        return {"strategy": "sphere_sample", "size": DEFAULT_SPHERE_SIZE, "seed": 0}
    return {"strategy": "extreme_points"}


@dataclass
class MeasureSpec:
    mu: VectorMeasure
    functions: dict[str, np.ndarray]
    family_doc: dict
    candidates_doc: dict
    family: DenseFamily
    candidates: DualCandidateSet

    @property
    def space(self) -> SpaceDesc:
        return self.mu.space

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "space": {"dim": self.space.dim, "norm": self.space.norm.value},
            "atoms": [
                {"id": a, "value": [float(x) for x in v]}
                for a, v in zip(self.mu.atom_ids, self.mu.values)
            ],
            "functions": {k: [float(x) for x in v] for k, v in self.functions.items()},
            "family": self.family_doc,
            "candidates": self.candidates_doc,
        }

    def function(self, name: str) -> np.ndarray:
        try:
            return self.functions[name]
        except KeyError:
            raise SpecError("functions", f"no function named {name!r}; have "
                            f"{sorted(self.functions)}") from None


def _parse_family(doc: dict, mu: VectorMeasure, where: str = "family"):
    kind = doc.get("kind", default_family_kind(mu.m))
    weighting = doc.get("weighting", "geometric")
    out = {"kind": kind}
    if weighting != "geometric":
        out["weighting"] = weighting
    payload = None
    if kind == "explicit":
        sets = doc.get("sets")
        if not isinstance(sets, list) or not sets:
            raise SpecError(f"{where}.sets", "explicit family needs a non-empty list of sets")
        index = {a: i for i, a in enumerate(mu.atom_ids)}
        payload = []
        for k, s in enumerate(sets):
            if not isinstance(s, list):
                raise SpecError(f"{where}.sets[{k}]", "expected a list of atom ids")
            for j, a in enumerate(s):
                if a not in index:
                    raise SpecError(f"{where}.sets[{k}][{j}]", f"unknown atom id {a!r}")
            payload.append(mset(index[a] for a in s))
        out["sets"] = [list(s) for s in sets]
    elif kind not in ("all_subsets", "dyadic"):
        raise SpecError(f"{where}.kind", f"unknown family kind {kind!r}")
    try:
        fam = build_family(mu, kind, payload, weighting=weighting)
    except ValueError as exc:
        raise SpecError(where, str(exc)) from None
    if "weights" in doc:
        w = _vector(doc["weights"], f"{where}.weights", len(fam))
        try:
            fam = DenseFamily(fam.m, fam.sets, np.array(w), fam.kind)
        except ValueError as exc:
            raise SpecError(f"{where}.weights", str(exc)) from None
        out["weights"] = w
    return fam, out


def _parse_candidates(doc: dict, space: SpaceDesc, where: str = "candidates"):
    doc = doc or default_candidates(space)
    strategy = doc.get("strategy", default_candidates(space)["strategy"])
    out: dict = {"strategy": strategy}
    try:
        if strategy == "explicit":
            vectors = doc.get("vectors")
            if not isinstance(vectors, list) or not vectors:
                raise SpecError(f"{where}.vectors", "explicit candidates need a list of vectors")
            members = [_vector(v, f"{where}.vectors[{h}]", space.dim)
                       for h, v in enumerate(vectors)]
            weights = None
            if "weights" in doc:
                weights = _vector(doc["weights"], f"{where}.weights", len(members))
                out["weights"] = weights
            out["vectors"] = members
            D = explicit_candidates(space, members, weights)
        elif strategy in ("extreme_points", "sphere_sample"):
            size = doc.get("size", DEFAULT_SPHERE_SIZE)
            seed = doc.get("seed", 0)
            for key, val in (("size", size), ("seed", seed)):
                if isinstance(val, bool) or not isinstance(val, int):
                    raise SpecError(f"{where}.{key}", "expected an integer")
            if strategy == "sphere_sample" or (space.norm is NormTag.ELL2 and space.dim > 1):
                out["size"], out["seed"] = size, seed
            D = build_candidates(space, Provenance(strategy), size, seed)
            if "weights" in doc:
                w = _vector(doc["weights"], f"{where}.weights", len(D))
                D = DualCandidateSet(space, D.members, np.array(w), D.separating,
                                     D.provenance, D.seed, D.notice)
                out["weights"] = w
        else:
            raise SpecError(f"{where}.strategy", f"unknown candidate strategy {strategy!r}")
    except SpecError:
        raise
    except ValueError as exc:
        raise SpecError(where, str(exc)) from None
    return D, out


def parse_spec(doc: Any, *, family_kind: str | None = None,
               strategy: str | None = None, seed: int | None = None) -> MeasureSpec:
    """Validate a decoded JSON document into a :class:`MeasureSpec`.

    ``family_kind``, ``strategy`` and ``seed`` override the file's choices.
    """
    doc = _mapping(doc, "")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SpecError("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")
    space_doc = _mapping(doc.get("space"), "space")
    dim, norm = space_doc.get("dim"), space_doc.get("norm")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise SpecError("space.dim", f"expected a positive integer, got {dim!r}")
    try:
        space = SpaceDesc(dim, NormTag(norm))
    except ValueError:
        raise SpecError("space.norm", f"expected one of ell1, ell2, ellinf, got {norm!r}") \
            from None

    atoms = doc.get("atoms")
    if not isinstance(atoms, list) or not atoms:
        raise SpecError("atoms", "expected a non-empty list")
    ids, values = [], []
    for i, atom in enumerate(atoms):
        atom = _mapping(atom, f"atoms[{i}]")
        aid = atom.get("id")
        if not isinstance(aid, str) or not aid:
            raise SpecError(f"atoms[{i}].id", "expected a non-empty string")
        if aid in ids:
            raise SpecError(f"atoms[{i}].id", f"duplicate atom id {aid!r}")
        ids.append(aid)
        values.append(_vector(atom.get("value"), f"atoms[{i}].value", dim))
    mu = VectorMeasure(space, tuple(ids), np.array(values))

    functions = {}
    fdoc = _mapping(doc.get("functions", {}), "functions")
    for name, vals in fdoc.items():
        functions[name] = np.array(_vector(vals, f"functions.{name}", mu.m))

    family_doc = dict(_mapping(doc.get("family", {}), "family"))
    if family_kind is not None:
        family_doc = {"kind": family_kind}
    fam, family_out = _parse_family(family_doc, mu)

    cand_doc = dict(_mapping(doc.get("candidates", {}), "candidates"))
    if strategy is not None and strategy != cand_doc.get("strategy"):
        cand_doc = {"strategy": strategy}
    if seed is not None:
        cand_doc["seed"] = seed
    D, cand_out = _parse_candidates(cand_doc, space)
    return MeasureSpec(mu, functions, family_out, cand_out, fam, D)


def load_spec(path: str | Path, **overrides) -> MeasureSpec:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return parse_spec(doc, **overrides)


def dumps_spec(spec: MeasureSpec | dict) -> str:
    doc = spec.to_dict() if isinstance(spec, MeasureSpec) else spec
    return json.dumps(doc, indent=2) + "\n"
