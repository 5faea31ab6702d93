import json

import numpy as np
import pytest
from hypothesis import given

from ksnorms.fixtures import FIXTURES, fixture_doc
from ksnorms.specfile import SpecError, dumps_spec, load_spec, parse_spec

from conftest import measures


def base_doc():
    return fixture_doc("ks_quarter_fifteen")


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixtures_parse_and_round_trip(name):
    spec = parse_spec(fixture_doc(name))
    again = parse_spec(json.loads(dumps_spec(spec)))
    assert again.to_dict() == spec.to_dict()
    assert np.array_equal(again.mu.values, spec.mu.values)
    assert again.family.sets == spec.family.sets
    assert np.array_equal(again.candidates.members, spec.candidates.members)


@given(measures(max_atoms=9))
def test_round_trip_random_measures(mu):
    doc = {
        "schema_version": 1,
        "space": {"dim": mu.space.dim, "norm": mu.space.norm.value},
        "atoms": [{"id": a, "value": v.tolist()} for a, v in zip(mu.atom_ids, mu.values)],
        "functions": {"f": [1.0] * mu.m},
    }
    spec = parse_spec(doc)
    again = parse_spec(json.loads(dumps_spec(spec)))
    assert again.to_dict() == spec.to_dict()
    assert np.array_equal(again.mu.values, mu.values)


def test_ratio_strings_are_exact():
    spec = parse_spec(base_doc())
    assert spec.mu.values.ravel().tolist() == [0.5, 0.5]


def test_defaults():
    doc = base_doc()
    del doc["family"], doc["candidates"]
    spec = parse_spec(doc)
    assert spec.family.kind == "all_subsets"
    assert spec.candidates_doc == {"strategy": "extreme_points"}
    doc = base_doc()
    doc["space"] = {"dim": 2, "norm": "ell2"}
    doc["atoms"] = [{"id": f"a{i}", "value": [1, 0]} for i in range(9)]
    doc["functions"] = {}
    del doc["family"], doc["candidates"]
    spec = parse_spec(doc)
    assert spec.family.kind == "dyadic"
    assert spec.candidates_doc["strategy"] == "sphere_sample"
    assert len(spec.candidates) == 64


def test_overrides():
    spec = parse_spec(base_doc(), family_kind="dyadic", strategy="sphere_sample", seed=7)
    assert spec.family.kind == "dyadic"
    assert spec.candidates.seed == 7


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d.update(schema_version=2), "schema_version"),
    (lambda d: d["space"].update(norm="ell3"), "space.norm"),
    (lambda d: d["space"].update(dim=0), "space.dim"),
    (lambda d: d["atoms"][1].update(value=["x"]), "atoms[1].value[0]"),
    (lambda d: d["atoms"][1].update(value=[1, 2]), "atoms[1].value"),
    (lambda d: d["atoms"][1].update(id="t1"), "atoms[1].id"),
    (lambda d: d["functions"].update(f=[1]), "functions.f"),
    (lambda d: d["functions"].update(f=[1, True]), "functions.f[1]"),
    (lambda d: d.update(family={"kind": "explicit", "sets": [["t1", "zz"]]}),
     "family.sets[0][1]"),
    (lambda d: d.update(family={"kind": "weird"}), "family.kind"),
    (lambda d: d.update(candidates={"strategy": "explicit", "vectors": [[2]]}), "candidates"),
    (lambda d: d.update(candidates={"strategy": "explicit", "vectors": [[1, 0]]}),
     "candidates.vectors[0]"),
    (lambda d: d.update(candidates={"strategy": "psychic"}), "candidates.strategy"),
    (lambda d: d.update(candidates={"strategy": "sphere_sample", "size": "8"}),
     "candidates.size"),
])
def test_diagnostics_name_the_field(mutate, field):
    doc = base_doc()
    mutate(doc)
    with pytest.raises(SpecError) as info:
        parse_spec(doc)
    assert info.value.field == field
    assert str(info.value).startswith(field)


def test_json_syntax_error_has_line_and_column(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "schema_version": 1,\n  "space": {"dim": 1,}\n}\n')
    with pytest.raises(SpecError, match="line 3 column"):
        load_spec(path)


def test_unknown_function_name():
    spec = parse_spec(base_doc())
    with pytest.raises(SpecError, match="no function named"):
        spec.function("h")
