import json

import pytest

from ksnorms import verify
from ksnorms.measures import BudgetError
from ksnorms.verify import CHECKS, SUITES, SuiteConfig, run_suite

SMALL = dict(instances=12, sequences=40, dual_samples=500, hk_splits=4)

# One check per stated invariant or fixture; the registry must not drift silently.
EXPECTED = {
    "spaces": {"dual_involution", "norming_functional", "extreme_point_duality",
               "candidate_sets"},
    "measures": {"scalarization", "dominance", "monotone", "subadditive", "variation_bound",
                 "extreme_point_agreement", "sampled_lower_bound", "finite", "family_bound",
                 "mu_dense", "ellinf_fixture"},
    "integration": {"kl_restriction", "linearity", "alexiewicz_closed_form",
                    "hk_lebesgue_agreement", "hk_builtins", "hk_additivity", "hk_polynomials",
                    "tagged_partition"},
    "norms": {"weighted_power_bound", "weighted_minkowski", "p_monotone", "p_monotone_weak",
              "embedding", "weak_le_strong", "hkl_domination", "homogeneity", "triangle",
              "definiteness", "inner_product_norm", "inner_product_bilinear",
              "cauchy_schwarz", "parallelogram", "modulus_monotone", "weak_order_unit",
              "quarter_fifteen_fixture", "truncation_bracket"},
    "corpus": {"signed_lattice_monotonicity", "zero_measure_norms",
               "zero_measure_definiteness"},
}


def test_registry_matches_expected_checks():
    got = {}
    for check_id, chk in CHECKS.items():
        got.setdefault(chk.suite, set()).add(check_id.split(".", 1)[1])
        assert chk.anchor
    assert got == EXPECTED


def test_small_run_is_green_and_sorted():
    report = run_suite(SuiteConfig(**SMALL))
    ids = [r.check_id for r in report.records]
    assert ids == sorted(ids)
    assert report.exit_code == 0, report.to_text()
    assert report.counts() == {"pass": len(ids) - 2, "skip": 1, "xfail": 1}


def test_same_seed_same_report():
    one = run_suite(SuiteConfig(seed=3, **SMALL)).to_json()
    two = run_suite(SuiteConfig(seed=3, **SMALL)).to_json()
    assert one == two
    doc = json.loads(one)
    assert doc["seed"] == 3
    assert "timestamp" not in one
    assert set(doc["fixtures"]) >= {"ks_quarter_fifteen", "zero_measure"}


def test_suite_selection():
    report = run_suite(SuiteConfig(suites=("spaces",), **SMALL))
    assert {r.suite for r in report.records} == {"spaces"}


def test_unknown_suite_and_budget():
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite(SuiteConfig(suites=("nope",)))
    with pytest.raises(BudgetError):
        run_suite(SuiteConfig(max_atoms=20))


def test_crashing_check_is_reported_as_failure(monkeypatch):
    def boom(ctx):
        raise RuntimeError("kaput")

    broken = verify._Check("spaces.broken", "spaces", "a claim", None, boom)
    monkeypatch.setitem(CHECKS, "spaces.broken", broken)
    report = run_suite(SuiteConfig(suites=("spaces",), **SMALL))
    rec = next(r for r in report.records if r.check_id == "spaces.broken")
    assert rec.status == "fail" and "kaput" in rec.detail
    assert report.exit_code == 1


def test_unexpected_pass_counts_as_failure(monkeypatch):
    def surprise(ctx):
        return verify.Outcome("xpass", None, "x")

    monkeypatch.setitem(CHECKS, "corpus.surprise",
                        verify._Check("corpus.surprise", "corpus", "a claim", None, surprise))
    report = run_suite(SuiteConfig(suites=("corpus",), **SMALL))
    assert report.exit_code == 1


def test_text_report_lists_every_check():
    report = run_suite(SuiteConfig(suites=("corpus",), **SMALL))
    text = report.to_text()
    for r in report.records:
        assert r.check_id in text
    assert text.rstrip().endswith("pass 1, skip 1, xfail 1")


def test_all_suites_known():
    assert set(SUITES) == set(EXPECTED)
