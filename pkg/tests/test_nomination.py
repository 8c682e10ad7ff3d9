"""
Tests for mixture fitting, the distance score and the nomination pipeline.
"""

import pytest
import numpy as np
from unittest.mock import patch
from sklearn.mixture import GaussianMixture

from graphs import Obfuscation
from models import make_nominatable_pair, sample_sbm
from nomination import (
    NominationError,
    GmmError,
    NominationConfig,
    NominationList,
    FittedPipeline,
    covariance_floor,
    em_trace,
    fit_gmm,
    mahalanobis_delta,
    nominate,
    NominationPipeline,
    chance_rank_distribution,
    chance_curve,
)

SEEDS = tuple(range(1, 11))

def _two_clouds(seed, n=400):
    rng = np.random.default_rng(seed)
    half = n // 2
    left = rng.normal(size=(half, 2)) + np.array([-5.0, 0.0])
    right = rng.normal(size=(n - half, 2)) + np.array([5.0, 0.0])
    return np.vstack([left, right])

class TestFitGmm:
    """Test suite for fit_gmm."""

    def test_two_separated_clouds(self):
        """Test that BIC picks two components near the true centers."""
        model = fit_gmm(_two_clouds(1), k_range=range(1, 6))

        assert model.k == 2
        means = model.means[np.argsort(model.means[:, 0])]
        assert np.allclose(means, [[-5.0, 0.0], [5.0, 0.0]], atol=0.2)
        assert model.weights.sum() == pytest.approx(1.0)
        assert set(model.assignment) == {0, 1}

    def test_single_cloud(self):
        """Test that one Gaussian cloud selects a single component."""
        points = np.random.default_rng(3).normal(size=(300, 2))

        assert fit_gmm(points, k_range=range(1, 4)).k == 1

    @pytest.mark.slow
    def test_single_cloud_repeated(self):
        """Test the single-component selection rate over 100 clouds."""
        hits = sum(
            fit_gmm(np.random.default_rng(seed).normal(size=(300, 2)), k_range=range(1, 4)).k == 1
            for seed in range(100)
        )

        assert hits >= 95

    def test_saturated_fit_at_floor(self):
        """Test one component per point."""
        points = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])

        model = fit_gmm(points, k_range=(3,))

        assert model.k == 3
        assert np.isfinite(model.log_likelihood)
        for cov in model.covariances:
            assert np.min(np.linalg.eigvalsh(cov)) >= model.covariance_floor * (1 - 1e-6)

    def test_every_k_skipped(self):
        """Test that an unusable k range is reported."""
        with pytest.raises(GmmError):
            fit_gmm(np.zeros((3, 2)) + np.arange(3)[:, None], k_range=(5, 6))

    def test_collapsed_k_skipped(self, caplog):
        """Test that a k whose covariance collapses is skipped and the rest still compete."""
        original_fit = GaussianMixture.fit

        def collapsing_fit(model, points, y=None):
            if model.n_components == 2:
                raise ValueError("Fitting the mixture model failed because some components have ill-defined empirical covariance")
            return original_fit(model, points, y)

        with patch.object(GaussianMixture, 'fit', autospec=True, side_effect=collapsing_fit):
            model = fit_gmm(_two_clouds(3), k_range=(1, 2, 3))

        assert model.k in (1, 3)
        assert 'k=2 collapsed' in caplog.text

    def test_non_finite_bic_skipped(self):
        """Test that a k with a non-finite BIC never wins."""
        original_bic = GaussianMixture.bic

        def bic(model, points):
            return np.nan if model.n_components == 2 else original_bic(model, points)

        with patch.object(GaussianMixture, 'bic', autospec=True, side_effect=bic):
            model = fit_gmm(_two_clouds(4), k_range=(1, 2))

        assert model.k == 1

    def test_empty_points(self):
        """Test that no points is an error."""
        with pytest.raises(GmmError):
            fit_gmm(np.zeros((0, 2)))

    def test_covariance_floor_scales_with_spread(self):
        """Test that the floor follows trace(cov) / d."""
        points = np.random.default_rng(0).normal(size=(500, 2)) * 10

        assert covariance_floor(points) == pytest.approx(1e-4, rel=0.2)
        assert covariance_floor(np.zeros((1, 2))) == 1e-6

    def test_em_trace_monotone(self):
        """Test that the EM log-likelihood never decreases."""
        points = _two_clouds(2, n=200)
        trace = em_trace(points, 2, covariance_floor(points), random_state=0, max_iter=50)

        assert len(trace) >= 1
        assert all(b >= a - 1e-6 * abs(a) for a, b in zip(trace, trace[1:]))

class TestMahalanobisDelta:
    """Test suite for mahalanobis_delta."""

    def test_identity_covariances(self):
        """Test that identity covariances give the Euclidean distance."""
        delta = mahalanobis_delta(np.array([3.0, 4.0]), np.zeros(2), np.eye(2), np.eye(2))

        assert delta == pytest.approx(5.0)

    def test_same_point(self):
        """Test that a point is at distance zero from itself."""
        x = np.array([1.0, 2.0])

        assert mahalanobis_delta(x, x, np.eye(2) * 3, np.eye(2)) == 0.0

    def test_max_of_both_distances(self):
        """Test that the larger of the two distances is returned."""
        delta = mahalanobis_delta(np.array([1.0, 0.0]), np.zeros(2), np.diag([4.0, 1.0]), np.eye(2))

        assert delta == pytest.approx(1.0)

    def test_not_positive_definite(self):
        """Test that a singular covariance is rejected."""
        with pytest.raises(NominationError):
            mahalanobis_delta(np.ones(2), np.zeros(2), np.zeros((2, 2)), np.eye(2))

class TestNominationList:
    """Test suite for NominationList."""

    def test_ranks(self):
        """Test 1-based ranks."""
        ranked = NominationList(('b', 'a', 'c'), (0.1, 0.2, 0.2))

        assert ranked.rank_of('b') == 1
        assert ranked.rank_of('c') == 3
        assert ranked.rank_of('z') is None
        assert len(ranked) == 3

    def test_repeated_vertex(self):
        """Test that a vertex cannot appear twice."""
        with pytest.raises(NominationError):
            NominationList(('a', 'a'), (0.0, 1.0))

    def test_decreasing_scores(self):
        """Test that scores must be nondecreasing."""
        with pytest.raises(NominationError):
            NominationList(('a', 'b'), (1.0, 0.5))

    def test_write_csv(self, tmp_path):
        """Test the CSV export."""
        path = tmp_path / 'nomination.csv'
        NominationList(('b', 'a'), (0.0, 1.5)).write_csv(str(path))

        assert path.read_text().splitlines() == ['rank,g2_label,score', '1,b,0', '2,a,1.5']

class TestPipeline:
    """Test suite for the nomination pipeline."""

    def test_identical_graphs(self, separated_params):
        """Test that on identical graphs the counterpart scores zero and ranks first."""
        g, blocks = sample_sbm(separated_params, 3)
        pair = make_nominatable_pair(g, g, blocks, voi_spec=[50])

        ranked = nominate(pair, SEEDS, NominationConfig(d=2))

        assert ranked.order[0] == 50
        assert ranked.scores[0] == pytest.approx(0.0, abs=1e-8)

    def test_seeds_excluded(self, correlated_pair):
        """Test that seed counterparts are not candidates."""
        ranked = nominate(correlated_pair, SEEDS, NominationConfig(d=2))

        assert len(ranked) == correlated_pair.g2.n - len(SEEDS)
        assert all(ranked.rank_of(s) is None for s in SEEDS)

    def test_seeds_kept(self, correlated_pair):
        """Test nomination over every g2 vertex."""
        cfg = NominationConfig(d=2, exclude_seeds=False)

        ranked = nominate(correlated_pair, SEEDS, cfg)

        assert len(ranked) == correlated_pair.g2.n

    def test_counterparts_rank_high(self, correlated_pair):
        """Test that correlated graphs put most counterparts near the top."""
        fitted = NominationPipeline(NominationConfig(d=2)).fit(correlated_pair, SEEDS)
        voi = [v for v in correlated_pair.core if v not in SEEDS]

        ranks = fitted.lone_ranks(voi)

        hits = sum(1 for r in ranks.values() if r is not None and r <= 20)
        assert hits / len(voi) >= 0.5
        assert hits / len(voi) > chance_rank_distribution(len(voi), 20)

    def test_single_voi_matches_lone_rank(self, correlated_pair):
        """Test that one vertex of interest reduces to its own ranking."""
        fitted = NominationPipeline(NominationConfig(d=2)).fit(correlated_pair, SEEDS)

        ranked = fitted.nominate([40])

        assert ranked.rank_of(40) == fitted.lone_ranks([40])[40]

    def test_lone_ranks_ties_use_obfuscated_labels(self, correlated_pair, rng):
        """Test that equal scores are ordered by obfuscated label."""
        fitted = NominationPipeline(NominationConfig(d=2)).fit(correlated_pair, SEEDS)
        o = Obfuscation.fresh(correlated_pair.g2.labels, rng, forbidden=correlated_pair.g1.labels)
        listed = sorted(str(o[u]) for u in fitted.candidates())

        def all_tied(self, voi, candidates):
            return np.zeros((len(voi), len(candidates)))

        with patch.object(FittedPipeline, 'score_matrix', autospec=True, side_effect=all_tied):
            ranks = fitted.lone_ranks([40, 77], obfuscation=o)
            joint = fitted.nominate([40], obfuscation=o)

        for v in (40, 77):
            assert ranks[v] == listed.index(o[v]) + 1
        assert joint.rank_of(o[40]) == ranks[40]

    def test_min_aggregation(self, correlated_pair):
        """Test that the multi-vertex score is the minimum over vertices of interest."""
        fitted = NominationPipeline(NominationConfig(d=2)).fit(correlated_pair, SEEDS)
        candidates = fitted.candidates()

        matrix = fitted.score_matrix([30, 90], candidates)
        ranked = fitted.nominate([30, 90])

        assert ranked.scores[0] == pytest.approx(matrix.min())

    def test_score_matches_delta(self, correlated_pair):
        """Test the score matrix against mahalanobis_delta."""
        fitted = NominationPipeline(NominationConfig(d=2)).fit(correlated_pair, SEEDS)
        v, u = 30, 77

        entry = fitted.score_matrix([v], [u])[0, 0]
        expected = mahalanobis_delta(
            fitted.x1.rows([v])[0],
            fitted.x2.rows([u])[0],
            fitted.gmm1.covariances[fitted.assignment1[v]],
            fitted.gmm2.covariances[fitted.assignment2[u]],
        )

        assert entry == pytest.approx(expected)

    def test_separate_mixtures(self, correlated_pair):
        """Test fitting one mixture per graph."""
        fitted = NominationPipeline(NominationConfig(d=2, pooled=False)).fit(correlated_pair, SEEDS)

        assert isinstance(fitted, FittedPipeline)
        assert fitted.gmm1 is not fitted.gmm2

    def test_selected_dimension(self, correlated_pair):
        """Test that the dimension is chosen from the scree plots when unset."""
        fitted = NominationPipeline().fit(correlated_pair, SEEDS)

        assert fitted.d >= 1
        assert fitted.x1.d == fitted.x2.d == fitted.d

    def test_obfuscated_labels(self, correlated_pair, rng):
        """Test that the list carries obfuscated labels."""
        o = Obfuscation.fresh(correlated_pair.g2.labels, rng, forbidden=correlated_pair.g1.labels)

        ranked = nominate(correlated_pair, SEEDS, NominationConfig(d=2), obfuscation=o)

        assert all(isinstance(w, str) and w.startswith('w') for w in ranked.order)

    def test_deterministic(self, correlated_pair):
        """Test that repeated runs give the same list."""
        cfg = NominationConfig(d=2, random_state=4)

        assert nominate(correlated_pair, SEEDS, cfg).order == nominate(correlated_pair, SEEDS, cfg).order

    def test_seed_outside_core(self, correlated_pair):
        """Test that unknown seeds are rejected."""
        with pytest.raises(NominationError):
            nominate(correlated_pair, [999], NominationConfig(d=2))

    def test_no_seeds(self, correlated_pair):
        """Test that at least one seed is required."""
        with pytest.raises(NominationError):
            nominate(correlated_pair, [], NominationConfig(d=2))

    def test_every_voi_is_a_seed(self, correlated_pair):
        """Test that excluding seeds can leave nothing to nominate."""
        pair = correlated_pair.with_voi([1, 2])

        with pytest.raises(NominationError):
            nominate(pair, [1, 2, 3], NominationConfig(d=2))

    def test_invalid_config(self):
        """Test configuration validation."""
        with pytest.raises(NominationError):
            NominationConfig(d=0)
        with pytest.raises(NominationError):
            NominationConfig(k_range=())

class TestChance:
    """Test suite for the chance baseline."""

    def test_rank_distribution(self):
        """Test x / m."""
        assert chance_rank_distribution(10, 3) == pytest.approx(0.3)
        assert chance_rank_distribution(10, 10) == 1.0

    def test_rank_distribution_out_of_range(self):
        """Test that x must lie in 1..m."""
        with pytest.raises(NominationError):
            chance_rank_distribution(10, 0)

    def test_curve_flat_past_m(self):
        """Test the expected-count curve."""
        curve = chance_curve(4, 2, 6)

        assert np.allclose(curve, [0.5, 1.0, 1.5, 2.0, 2.0, 2.0])
