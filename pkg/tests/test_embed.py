import numpy as np
import pytest

from pickspace.embed import (a_xi, a_xi_commutation, build_counterexample, embedding_check,
                             embedding_data, evaluate_candidate, example52_beta,
                             example52_report, intertwining_check)
from pickspace.errors import DimMismatch, NotNormalized, SearchFailed
from pickspace.pick import decompose
from pickspace.realize import b_star_restricted, complementary_from_conditions
from pickspace.rkhs import make_kernel
from pickspace.sampling import random_closed_coinvariant, random_realization, random_xi
from pickspace.subspace import RangeSpace

GAMMA_HALF = 1 / (1 - 1 / (16 * np.sqrt(2)))   # 1.0462376066...


def test_embedding_residuals(szego_pick, da_pick):
    assert embedding_check(szego_pick) < 1e-12
    assert embedding_check(da_pick) < 1e-12
    p = decompose(make_kernel("szego", [0.1, 0.3, -0.4j]), base_index=2)
    assert embedding_check(p) < 1e-12


def test_szego_feature_map_is_the_point():
    pts = np.array([0, 0.3, -0.4j, 0.5])
    e = embedding_data(decompose(make_kernel("szego", pts)))
    # beta_bar(lam) = lam up to one unimodular constant
    ratio = e.beta_bar[0, 1:] / pts[1:]
    assert np.allclose(np.abs(ratio), 1) and np.allclose(ratio, ratio[0])
    assert np.allclose(e.da_gram, 1 / (1 - pts[:, None] * pts.conj()[None, :]))


def test_example52_stated_beta_embeds():
    p = decompose(make_kernel("example52", [0, 0.5])).with_beta(example52_beta([0, 0.5]))
    assert embedding_check(p) < 1e-12


def test_intertwining(szego_pick, da_pick, rng):
    assert intertwining_check(szego_pick, [0]) < 1e-14
    assert intertwining_check(szego_pick, [0.5]) < 1e-10
    for _ in range(5):
        assert intertwining_check(da_pick, random_xi(2, rng)) < 1e-10
    with pytest.raises(DimMismatch):
        intertwining_check(da_pick, [0.1])


def test_commutators_one_dimensional_state(szego_pick, rng):
    r = random_realization(szego_pick, 1, 1, rng)
    assert a_xi_commutation(r, [[0.3], [0.2j]]).max_commutator == 0


def test_commutators_vanish_on_coinvariant_subspace(da_pick, rng):
    c = random_closed_coinvariant(da_pick, 2, rng)
    t, _ = b_star_restricted(da_pick, c, 2)
    out = complementary_from_conditions(RangeSpace(da_pick.kernel.space(2), c), t, da_pick)
    xis = [random_xi(2, rng) for _ in range(4)]
    rep = a_xi_commutation(out.realization, xis)
    assert rep.invariant
    assert rep.max_commutator < 1e-10


def test_commutators_random_a_reported(da_pick, rng):
    r = random_realization(da_pick, 3, 1, rng)
    rep = a_xi_commutation(r, [[1, 0], [0, 1]])
    assert rep.max_commutator > 1e-6
    a = r.a
    assert np.allclose(a_xi(a, [1, 0]), a[:3])


def test_candidate_in_span_rejected(szego_two):
    p = decompose(szego_two)
    rep = evaluate_candidate(p, p.beta[:, 1])
    assert rep.distance_to_span < 1e-7
    assert not rep.accepted


def test_candidate_zero_is_degenerate(szego_two):
    rep = evaluate_candidate(decompose(szego_two), [0.0])
    assert np.allclose(rep.f0_values, 1)
    assert rep.invariance_defect < 1e-12
    assert not rep.accepted


def test_new_coordinate_gives_constant_f0(szego_two):
    # orthogonal to every beta(lam): f0 is constant and B^* f0 = 0
    p = decompose(szego_two).enlarged(1)
    rep = evaluate_candidate(p, [0, 0.5])
    assert rep.distance_to_span > 0.1
    assert rep.invariance_defect < 1e-12
    assert not rep.accepted


def test_counterexample_minimal_b(szego_two):
    rep = evaluate_candidate(decompose(szego_two), [-0.5])
    assert rep.accepted
    assert rep.distance_to_span > 1e-6 and rep.invariance_defect > 1e-6
    assert rep.max_commutator == 0
    assert rep.identity_residual < 1e-10
    # f0 = sqrt(1 - |xi|^2) / (1 - <xi, beta(lam)>)
    beta = decompose(szego_two).beta[0]
    expected = np.sqrt(0.75) / (1 - np.conj(beta) * -0.5)
    assert np.allclose(rep.f0_values, expected)


@pytest.mark.parametrize("seed", [0, 1, 2, 42])
def test_counterexample_search_enlarged(szego_two, seed):
    rep = build_counterexample(decompose(szego_two), seed, enlarge=True)
    assert rep.accepted
    assert rep.distance_to_span >= 1e-6
    assert rep.invariance_defect >= 1e-6
    assert rep.max_commutator == 0
    assert np.linalg.norm(rep.xi) == pytest.approx(0.5)


def test_counterexample_needs_normalized_and_can_fail():
    p = decompose(make_kernel("szego", [0.25, 0.5]))
    with pytest.raises(NotNormalized):
        build_counterexample(p)
    q = decompose(make_kernel("szego", [0, 0.5]))
    with pytest.raises(SearchFailed):
        build_counterexample(q, floor=10.0, budget=3)


def test_example52_report_values():
    rep = example52_report()
    assert rep["pass"]
    assert rep["kernel_half_half"] == pytest.approx(32 / 27, rel=1e-12)
    assert rep["gamma1"][0] == pytest.approx(1)
    assert rep["gamma1"][1] == pytest.approx(GAMMA_HALF, abs=1e-12)
    assert rep["gamma_equality_residual"] <= 1e-12
    assert rep["gamma_gram_gap"] <= 1e-12
    assert rep["kappa_min"] == pytest.approx(np.sqrt(1 / 64 + 1 / 16))
    assert rep["kappa_min"] >= 0.1
    assert rep["printed_closed_forms"][0][0] == pytest.approx(1 / np.sqrt(2))
    assert rep["contractive_variant_ok"]
