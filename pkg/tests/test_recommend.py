import random

import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_neighbors, brute_recommend, random_taxonomy
from modelacq.recommend import (FieldSaturated, PreferenceList, SchemaError, TechniqueEntry, UnknownFeature,
                                build_theory, greedy_check, load_preferences, load_taxonomy,
                                nearest_techniques, parse_report_json, recommend, recommend_iterated_sat,
                                render_text, report_json, taxonomy_from_dict, taxonomy_to_dict,
                                validate_registry)
from modelacq.recommend.schema import merge


@pytest.fixture(scope="module")
def tax():
    return load_taxonomy()


def test_shipped_taxonomy_shape(tax):
    assert len(tax.schema.features) == 23
    assert len(tax.entries) == 10
    assert validate_registry(tax.schema, tax.entries).valid


def test_shipped_recommendation_properties(tax):
    rec = recommend(tax.schema, tax.entries, tax.preferences)
    a = rec.assignment
    assert all(tax.schema.holds(c, a) for c in tax.schema.constraints)
    assert not any(e.matches(a) for e in tax.entries)
    assert greedy_check(tax.schema, tax.entries, tax.preferences, rec)
    assert rec == recommend_iterated_sat(tax.schema, tax.entries, tax.preferences)


def test_shipped_matches_brute_force(tax):
    got = recommend(tax.schema, tax.entries, tax.preferences)
    # 2^23 is too many to enumerate; the SAT-based pass is the independent check here
    ref = recommend_iterated_sat(tax.schema, tax.entries, tax.preferences)
    assert (got.assignment, got.enforced, got.skipped) == (ref.assignment, ref.enforced, ref.skipped)


def test_preference_order_matters(tax):
    a = recommend(tax.schema, tax.entries, tax.preferences)
    b = recommend(tax.schema, tax.entries, tax.preferences.reversed())
    assert a.assignment != b.assignment


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_random_schemas_match_oracle(seed):
    rng = random.Random(seed)
    t = random_taxonomy(rng, rng.randint(2, 9), rng.randint(0, 8), rng.randint(1, 6))
    ref = brute_recommend(t)
    if ref is None:
        with pytest.raises(FieldSaturated):
            recommend(t.schema, t.entries, t.preferences)
        return
    rec = recommend(t.schema, t.entries, t.preferences)
    assert (rec.assignment, rec.enforced, rec.skipped) == ref
    assert rec == recommend_iterated_sat(t.schema, t.entries, t.preferences)
    assert greedy_check(t.schema, t.entries, t.preferences, rec)
    assert [nb.entry.id for nb in nearest_techniques(rec.assignment, t.entries, 3)] == \
        brute_neighbors(rec.assignment, t.entries, 3)


def test_neighbor_tags(tax):
    rec = recommend(tax.schema, tax.entries, tax.preferences)
    nbs = nearest_techniques(rec.assignment, tax.entries, 3)
    assert len(nbs) == 3
    for nb in nbs:
        assert nb.distance == len(nb.diff) >= 1
        for name, value, tag in nb.diff:
            assert rec.assignment[name] != value
            assert tag == ("relax" if value else "extend")


def test_validate_names_minimal_violation():
    t = taxonomy_from_dict({
        "features": ["a", "b", "c"],
        "constraints": [{"name": "a_b", "clause": ["-a", "b"]}, {"name": "b_c", "clause": ["-b", "c"]},
                        {"name": "loose", "clause": ["a", "b", "c"]}],
        "entries": [{"id": "bad", "cube": ["a", "-c"]}, {"id": "ok", "cube": ["a", "b", "c"]}],
    })
    rep = validate_registry(t.schema, t.entries)
    assert not rep.valid
    bad = rep.invalid()[0]
    assert bad.id == "bad" and sorted(bad.violated) == ["a_b", "b_c"]


def test_field_saturated():
    t = taxonomy_from_dict({"features": ["a"], "entries": [{"id": "x", "cube": ["a"]}, {"id": "y", "cube": ["-a"]}]})
    with pytest.raises(FieldSaturated):
        recommend(t.schema, t.entries, t.preferences)


def test_unknown_feature_errors():
    with pytest.raises(UnknownFeature):
        taxonomy_from_dict({"features": ["a"], "constraints": [{"name": "c", "clause": ["b"]}]})
    with pytest.raises(UnknownFeature):
        taxonomy_from_dict({"features": ["a"], "entries": [{"id": "x", "cube": ["z"]}]})
    with pytest.raises(UnknownFeature):
        taxonomy_from_dict({"features": ["a"], "preferences": ["-q"]})
    with pytest.raises(SchemaError):
        PreferenceList((("a", True), ("a", False)))


def test_theory_has_one_clause_per_entry(tax):
    cnf = build_theory(tax.schema, tax.entries)
    assert len(cnf.clauses) == len(tax.schema.constraints) + len(tax.entries)


def test_taxonomy_dict_round_trip(tax):
    again = taxonomy_from_dict(yaml.safe_load(yaml.safe_dump(taxonomy_to_dict(tax))))
    assert again == tax


def test_report_round_trip(tax):
    rec = recommend(tax.schema, tax.entries, tax.preferences)
    nbs = nearest_techniques(rec.assignment, tax.entries, 3)
    back = parse_report_json(report_json(tax.schema, rec, nbs), tax.schema)
    assert back == rec
    text = render_text(tax.schema, rec, nbs)
    assert all(nb.entry.id in text for nb in nbs)


def test_adding_recommendation_as_entry_changes_answer(tax):
    rec = recommend(tax.schema, tax.entries, tax.preferences)
    new = TechniqueEntry("new", cube=tuple(rec.assignment.items()))
    t2 = merge(tax, entries=tax.entries + (new,))
    assert recommend(t2.schema, t2.entries, t2.preferences).assignment != rec.assignment


def test_load_preferences_file(tmp_path):
    p = tmp_path / "prefs.yaml"
    p.write_text("- -deterministic\n- probabilistic\n")
    assert list(load_preferences(p)) == [("deterministic", False), ("probabilistic", True)]
    p.write_text("preferences: [optimal]\n")
    assert list(load_preferences(p)) == [("optimal", True)]
