import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ksnorms.measures import (
    EXACT_ATOM_BUDGET,
    ApproximationWarning,
    BudgetError,
    DenseFamily,
    VectorMeasure,
    build_family,
    check_mu_dense,
    members,
    mset,
    scalarize,
    semivariation,
    semivariation_estimate,
    validate_mask,
    variation,
)
from ksnorms.spaces import NormTag, Provenance, SpaceDesc, build_candidates, dual_norm

from conftest import measures, subsets


def pair():
    return VectorMeasure(SpaceDesc(2, "ellinf"), ("e1", "e2"), np.eye(2))


def test_bitmask_helpers():
    assert mset([0, 2]) == 0b101
    assert members(0b101) == [0, 2]
    assert validate_mask(3, 2) == 3
    with pytest.raises(ValueError):
        validate_mask(4, 2)
    with pytest.raises(ValueError):
        validate_mask(-1, 2)


def test_measure_evaluation():
    mu = pair()
    assert mu(mu.full).tolist() == [1, 1]
    assert mu(0).tolist() == [0, 0]
    assert mu.m == 2


def test_measure_validation():
    with pytest.raises(ValueError, match="unique"):
        VectorMeasure(SpaceDesc(1, "ell2"), ("a", "a"), [[1], [2]])
    with pytest.raises(ValueError):
        VectorMeasure(SpaceDesc(2, "ell2"), ("a",), [[1, 2, 3]])
    with pytest.raises(ValueError, match="finite"):
        VectorMeasure(SpaceDesc(1, "ell2"), ("a",), [[np.inf]])


def test_ellinf_pair_semivariation_below_variation():
    mu = pair()
    assert semivariation(mu, mu.full) == 1.0
    assert mu.atom_norms().sum() == 2.0


def test_ell1_pair_semivariation_equals_variation():
    mu = VectorMeasure(SpaceDesc(2, "ell1"), ("e1", "e2"), np.eye(2))
    assert semivariation(mu, mu.full) == 2.0


def test_scalarization_and_variation():
    mu = pair()
    nu = scalarize(mu, [1.0, -1.0])
    assert nu(mu.full) == 0.0
    assert variation(nu, mu.full) == 2.0
    assert nu.masses.tolist() == [1.0, 1.0]


@given(measures(), st.data())
def test_semivariation_is_sup_over_extreme_points(mu, data):
    if mu.space.norm is NormTag.ELL2 and mu.space.dim > 1:
        return
    A = data.draw(subsets(mu.m))
    E = build_candidates(mu.space, Provenance.EXTREME_POINTS).members
    mask = np.array([(A >> i) & 1 for i in range(mu.m)], dtype=float)
    brute = (np.abs(E @ mu.values.T) @ mask).max()
    assert semivariation(mu, A) == pytest.approx(brute, abs=1e-12)


@given(measures(), st.data())
def test_semivariation_dominates_sampled_functionals(mu, data):
    A = data.draw(subsets(mu.m))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    X = rng.standard_normal((200, mu.space.dim))
    X /= np.atleast_1d(dual_norm(X, mu.space.norm))[:, None]
    mask = np.array([(A >> i) & 1 for i in range(mu.m)], dtype=float)
    assert (np.abs(X @ mu.values.T) @ mask).max() <= semivariation(mu, A) + 1e-12


@given(measures(), st.data())
def test_attaining_functional(mu, data):
    A = data.draw(subsets(mu.m))
    est = semivariation_estimate(mu, A)
    assert est.exact
    assert dual_norm(est.functional, mu.space.norm) <= 1 + 1e-12
    mask = np.array([(A >> i) & 1 for i in range(mu.m)], dtype=float)
    assert np.abs(mu.values @ est.functional) @ mask == pytest.approx(est.value, abs=1e-12)


@given(measures(), st.data())
def test_monotone_and_subadditive(mu, data):
    A = data.draw(subsets(mu.m))
    B = data.draw(subsets(mu.m))
    assert semivariation(mu, A & B) <= semivariation(mu, A) + 1e-12
    C = B & ~A
    assert semivariation(mu, A | C) <= semivariation(mu, A) + semivariation(mu, C) + 1e-12


@given(measures(), st.data())
def test_bounded_by_variation(mu, data):
    A = data.draw(subsets(mu.m))
    assert semivariation(mu, A) <= mu.atom_norms()[members(A)].sum() + 1e-12
    assert np.isfinite(semivariation(mu, A))


def test_zero_atoms_ignored():
    mu = VectorMeasure(SpaceDesc(2, "ell1"), ("z1", "z2"), np.zeros((2, 2)))
    est = semivariation_estimate(mu, mu.full)
    assert est.value == 0.0 and est.exact


def test_large_measure_warns_and_bounds_from_below():
    rng = np.random.default_rng(3)
    m = EXACT_ATOM_BUDGET + 2
    mu = VectorMeasure(SpaceDesc(2, "ell2"), tuple(map(str, range(m))),
                       rng.integers(-8, 9, (m, 2)) / 4)
    with pytest.warns(ApproximationWarning):
        low = semivariation(mu, mu.full)
    exact = semivariation_estimate(mu, mu.full, budget=m).value
    assert low <= exact + 1e-12
    assert low >= 0.99 * exact


def test_exact_budget_is_fast_enough():
    rng = np.random.default_rng(0)
    m = EXACT_ATOM_BUDGET
    mu = VectorMeasure(SpaceDesc(3, "ellinf"), tuple(map(str, range(m))),
                       rng.integers(-8, 9, (m, 3)) / 4)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert semivariation(mu, mu.full) > 0


def test_all_subsets_family_order_and_weights():
    mu = VectorMeasure(SpaceDesc(1, "ell2"), ("a", "b"), [[0.5], [0.5]])
    fam = build_family(mu, "all_subsets")
    assert fam.sets == (0, 0b01, 0b10, 0b11)
    assert (fam.weights * 15).tolist() == [8, 4, 2, 1]


def test_dyadic_family():
    mu = VectorMeasure(SpaceDesc(1, "ell2"), tuple("abcd"), np.ones((4, 1)))
    fam = build_family(mu, "dyadic")
    assert fam.sets == (15, 3, 12, 1, 2, 4, 8)


def test_family_uniform_weighting_and_caps():
    mu = VectorMeasure(SpaceDesc(1, "ell2"), tuple("abc"), np.ones((3, 1)))
    fam = build_family(mu, "all_subsets", weighting="uniform")
    assert np.allclose(fam.weights, 1 / 8)
    big = VectorMeasure(SpaceDesc(1, "ell2"), tuple(map(str, range(17))), np.ones((17, 1)))
    with pytest.raises(BudgetError):
        build_family(big, "all_subsets")
    with pytest.raises(ValueError, match="unknown"):
        build_family(mu, "fractal")


def test_family_validation():
    with pytest.raises(ValueError, match="sum to 1"):
        DenseFamily(2, (0, 3), np.array([0.5, 0.4]))
    with pytest.raises(ValueError, match="family set 1"):
        DenseFamily(2, (0, 8), np.array([0.5, 0.5]))


@given(measures(max_atoms=5))
def test_family_bound(mu):
    for kind in ("all_subsets", "dyadic"):
        fam = build_family(mu, kind, check=False)
        assert fam.check_bound(mu) <= semivariation(mu, mu.full) + 1 + 1e-12


def test_explicit_family_rejects_foreign_atoms():
    mu = pair()
    with pytest.raises(ValueError):
        build_family(mu, "explicit", [0b100])


@given(measures(max_atoms=5))
def test_all_subsets_is_dense(mu):
    assert check_mu_dense(mu, build_family(mu, "all_subsets", check=False), 0.0).dense


def test_dense_check_finds_witness():
    mu = pair()
    res = check_mu_dense(mu, build_family(mu, "explicit", [0, mu.full]), 0.5)
    assert not res.dense
    assert res.witness == 0b01
    assert res.worst_distance == 1.0


def test_dense_check_budget():
    m = 17
    mu = VectorMeasure(SpaceDesc(1, "ell2"), tuple(map(str, range(m))), np.ones((m, 1)))
    fam = build_family(mu, "dyadic")
    with pytest.raises(BudgetError):
        check_mu_dense(mu, fam, 0.1)
    res = check_mu_dense(mu, fam, 100.0, samples=20, seed=1)
    assert res.dense and res.sets_checked == 20


def test_dense_check_exhaustive_count():
    mu = VectorMeasure(SpaceDesc(1, "ell2"), tuple("abc"), np.ones((3, 1)))
    res = check_mu_dense(mu, build_family(mu, "all_subsets"), 0.0)
    assert res.sets_checked == 8
