"""Named fixture documents in the measure-spec format."""

from __future__ import annotations

import copy

__all__ = ["FIXTURES", "fixture_doc"]


def _doc(dim, norm, atoms, functions, family=None, candidates=None, note=""):
    doc = {
        "schema_version": 1,
        "space": {"dim": dim, "norm": norm},
        "atoms": [{"id": a, "value": v} for a, v in atoms],
        "functions": functions,
    }
    if family is not None:
        doc["family"] = family
    if candidates is not None:
        doc["candidates"] = candidates
    return doc, note


FIXTURES = {
    # Two atoms of mass 1/2; KS^1 of f = (1, 1) over all subsets is 4/15, KS^∞ is 1.
    "ks_quarter_fifteen": _doc(
        1, "ell2", [("t1", ["1/2"]), ("t2", ["1/2"])],
        {"f": [1, 1], "g": [1, -1], "zero": [0, 0]},
        {"kind": "all_subsets"}, {"strategy": "extreme_points"},
        "scalar measure with two atoms of mass 1/2",
    ),
    "ks_quarter_fifteen_singleton": _doc(
        1, "ell2", [("t1", ["1/2"]), ("t2", ["1/2"])],
        {"f": [1, 1], "g": [1, -1], "zero": [0, 0]},
        {"kind": "all_subsets"}, {"strategy": "explicit", "vectors": [[1]], "weights": [1]},
        "the same measure with the single candidate x' = 1",
    ),
    "ellinf_pair": _doc(
        2, "ellinf", [("e1", [1, 0]), ("e2", [0, 1])],
        {"f": [2, -3], "zero": [0, 0]},
        {"kind": "all_subsets"}, {"strategy": "extreme_points"},
        "unit vectors in the plane with the max norm; semivariation 1, variation 2",
    ),
    "alexiewicz_quarters": _doc(
        1, "ell2", [(f"t{i}", ["1/4"]) for i in range(1, 5)],
        {"f": [1, -1, 1, -1]},
        {"kind": "all_subsets"}, {"strategy": "explicit", "vectors": [[1]], "weights": [1]},
        "four atoms of mass 1/4 and an alternating function",
    ),
    "zero_measure": _doc(
        2, "ell1", [("z1", [0, 0]), ("z2", [0, 0]), ("z3", [0, 0])],
        {"f": [1, -2, 3]},
        {"kind": "all_subsets"}, {"strategy": "extreme_points"},
        "every atom is the zero vector",
    ),
}


def fixture_doc(name: str) -> dict:
    try:
        doc, _ = FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
    return copy.deepcopy(doc)
