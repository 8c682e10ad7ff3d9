"""
Tests for spectral embedding, elbow selection and Procrustes alignment.
"""

import pytest
import numpy as np
from scipy.stats import ortho_group
from sklearn.cluster import KMeans
from sklearn.metrics import adjusted_rand_score

from embedding import (
    EmbeddingError,
    Embedding,
    ase,
    scree,
    elbows,
    select_dim,
    select_pair_dim,
    procrustes,
    align,
)
from graphs import Graph
from models import SbmParams, sample_sbm
from tests.conftest import SIM_B, SIM_PI

def _columns_match_up_to_sign(a, b, atol=1e-8):
    return all(
        np.allclose(a[:, j], b[:, j], atol=atol) or np.allclose(a[:, j], -b[:, j], atol=atol)
        for j in range(a.shape[1])
    )

class TestAse:
    """Test suite for ase."""

    def test_empty_graph_zero(self):
        """Test that an edgeless graph embeds at the origin."""
        emb = ase(Graph.empty(4), 2)

        assert np.allclose(emb.points, 0.0)
        assert emb.d == 2

    def test_triangle_one_dimension(self):
        """Test the triangle's leading eigenpair."""
        triangle = Graph.from_edges([1, 2, 3], [(1, 2), (2, 3), (1, 3)])

        emb = ase(triangle, 1)

        assert np.allclose(emb.points[:, 0], np.sqrt(2 / 3))

    def test_largest_entry_positive(self, sim_params):
        """Test the sign convention on every column."""
        g, _ = sample_sbm(sim_params, 2)
        emb = ase(g, 3)

        for j in range(3):
            column = emb.points[:, j]
            assert column[np.argmax(np.abs(column))] > 0

    def test_vertex_order(self, path_graph):
        """Test that rows follow the graph's labels."""
        emb = ase(path_graph, 2)

        assert emb.vertex_order == (1, 2, 3)
        assert emb.rows([2]).shape == (1, 2)

    @pytest.mark.parametrize('d', [0, 4])
    def test_dimension_out_of_range(self, path_graph, d):
        """Test that d must lie in 1..n."""
        with pytest.raises(EmbeddingError):
            ase(path_graph, d)

    def test_permutation_equivariance(self, rng):
        """Test that permuting vertices permutes rows."""
        upper = np.triu(rng.random((30, 30)) < 0.3, k=1)
        adjacency = (upper | upper.T).astype(float)
        permutation = rng.permutation(30)
        g = Graph(adjacency)
        h = Graph(adjacency[np.ix_(permutation, permutation)])

        x = ase(g, 3).points
        y = ase(h, 3).points

        assert _columns_match_up_to_sign(x[permutation], y)

    def test_energy_matches_eigenvalues(self, two_triangles):
        """Test that ||XX^T||_F^2 equals the sum of squared top |eigenvalues|."""
        emb = ase(two_triangles, 2)
        gram = emb.points @ emb.points.T

        assert np.linalg.norm(gram) ** 2 == pytest.approx(8.0)

    def test_recovers_blocks(self, separated_params):
        """Test that k-means on a two-block embedding recovers the blocks."""
        g, blocks = sample_sbm(separated_params, 13)
        emb = ase(g, 2)

        labels = KMeans(n_clusters=2, n_init=10, random_state=0).fit_predict(emb.points)

        assert adjusted_rand_score(blocks, labels) >= 0.95

    @pytest.mark.slow
    def test_recovers_blocks_simulation_model(self):
        """Test block recovery on the standard simulation model at n = 1000."""
        g, blocks = sample_sbm(SbmParams(1000, SIM_B, SIM_PI), 31)
        emb = ase(g, 2)

        labels = KMeans(n_clusters=2, n_init=10, random_state=0).fit_predict(emb.points)

        assert adjusted_rand_score(blocks, labels) >= 0.95

    def test_to_frame(self, path_graph):
        """Test the CSV-ready frame."""
        frame = ase(path_graph, 2).to_frame()

        assert list(frame.columns) == ['vertex', 'x1', 'x2']
        assert list(frame['vertex']) == [1, 2, 3]

    def test_embedding_rejects_non_finite(self):
        """Test that non-finite rows are rejected."""
        with pytest.raises(EmbeddingError):
            Embedding(np.array([[np.nan]]), (1,))

class TestElbows:
    """Test suite for scree and elbow selection."""

    def test_step_scree(self):
        """Test a scree with a clean gap after three values."""
        values = [10, 10, 10, 0.1, 0.1, 0.1, 0.1]

        first, second = elbows(values)

        assert first == 3
        assert second >= first
        assert select_dim(values) >= 3

    def test_constant_scree(self):
        """Test that equal values give an elbow of one."""
        assert elbows([2.0] * 6) == (1, 1)
        assert select_dim([2.0] * 6) == 1

    def test_geometric_decay_with_gap(self):
        """Test a decaying scree with a dominant gap after the second value."""
        values = [50, 40, 2, 1.6, 1.28, 1.02, 0.82, 0.66]

        assert select_dim(values) >= 2

    def test_second_elbow_on_tail(self):
        """Test that a two-step scree reports the later step."""
        values = [100, 100, 10, 10, 10, 1, 1, 1, 1]

        first, second = elbows(values)

        assert (first, second) == (2, 5)
        assert select_dim(values) == 5

    def test_too_few_values(self):
        """Test that fewer than three values are rejected."""
        with pytest.raises(EmbeddingError):
            elbows([3.0, 1.0])

    def test_not_descending(self):
        """Test that ascending values are rejected."""
        with pytest.raises(EmbeddingError):
            elbows([1.0, 2.0, 3.0])

    def test_scree_cap(self, sim_params):
        """Test that the scree is capped and descending."""
        g, _ = sample_sbm(sim_params, 1)
        values = scree(g, max_values=50)

        assert values.size == 50
        assert np.all(np.diff(values) <= 0)

    def test_pair_dimension_candidates(self, correlated_pair):
        """Test that the pair dimension is the maximum candidate."""
        choice = select_pair_dim(correlated_pair.g1, correlated_pair.g2)

        assert set(choice.candidates) == {'g1_first', 'g1_second', 'g2_first', 'g2_second'}
        assert choice.d == max(choice.candidates.values())
        assert choice.d >= 1

    def test_select_pair_dim_tiny_graphs(self):
        """Test that graphs with fewer than 3 vertices embed in one dimension."""
        edge = Graph.from_edges(['a', 'b'], [('a', 'b')])
        single = Graph.from_edges(['a'], [])

        choice = select_pair_dim(edge, single)

        assert choice.d == 1
        assert set(choice.candidates.values()) == {1}

class TestProcrustes:
    """Test suite for procrustes and align."""

    def test_identity(self, rng):
        """Test that equal seed rows need no rotation."""
        xs = rng.normal(size=(6, 3))

        result = procrustes(xs, xs)

        assert np.allclose(result.rotation, np.eye(3))
        assert result.residual == pytest.approx(0.0, abs=1e-10)

    def test_planted_rotation(self):
        """Test recovery of a planted orthogonal transform."""
        for trial in range(100):
            q = ortho_group.rvs(3, random_state=trial)
            xs = np.random.default_rng(trial).normal(size=(5, 3))
            ys = xs @ q

            result = procrustes(xs, ys)

            assert np.allclose(result.rotation, q.T, atol=1e-8)
            assert result.residual <= 1e-8

    def test_quarter_turn(self):
        """Test a 90 degree rotation on three points."""
        q = np.array([[0.0, -1.0], [1.0, 0.0]])
        xs = np.array([[1.0, 0.0], [0.0, 2.0], [3.0, 1.0]])

        result = procrustes(xs, xs @ q)

        assert np.allclose(result.rotation, q.T, atol=1e-10)

    def test_rotation_optimal(self, rng):
        """Test that no random orthogonal matrix beats the solution."""
        xs = rng.normal(size=(8, 3))
        ys = rng.normal(size=(8, 3))
        result = procrustes(xs, ys)

        for o in ortho_group.rvs(3, size=200, random_state=5):
            assert result.residual <= np.linalg.norm(xs - ys @ o) + 1e-12

    def test_shape_mismatch(self, rng):
        """Test that seed matrices must agree in shape."""
        with pytest.raises(EmbeddingError):
            procrustes(rng.normal(size=(4, 2)), rng.normal(size=(4, 3)))

    def test_no_seeds(self):
        """Test that an empty seed set is rejected."""
        with pytest.raises(EmbeddingError):
            procrustes(np.zeros((0, 2)), np.zeros((0, 2)))

    def test_align_roundtrip(self, path_graph):
        """Test that R followed by R^T restores the embedding."""
        emb = ase(path_graph, 2)
        q = ortho_group.rvs(2, random_state=1)

        restored = align(align(emb, q), q.T)

        assert np.allclose(restored.points, emb.points, atol=1e-12)
        assert restored.vertex_order == emb.vertex_order

    def test_align_planted(self, rng):
        """Test that aligning a rotated embedding recovers the original."""
        x = Embedding(rng.normal(size=(10, 3)), tuple(range(10)))
        q = ortho_group.rvs(3, random_state=2)
        y = Embedding(x.points @ q, x.vertex_order)
        result = procrustes(x.rows(range(4)), y.rows(range(4)))

        aligned = align(y, result.rotation)

        assert np.linalg.norm(aligned.points - x.points) <= 1e-8

    def test_align_non_orthogonal(self, path_graph):
        """Test that a non-orthogonal matrix is rejected."""
        with pytest.raises(EmbeddingError):
            align(ase(path_graph, 2), np.array([[2.0, 0.0], [0.0, 1.0]]))
