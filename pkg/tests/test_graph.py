"""
Tests for the Graph and Obfuscation classes and edge-list I/O.
"""

import pytest
import numpy as np

from graphs import (
    Graph,
    Obfuscation,
    GraphError,
    UnknownVertexError,
    ObfuscationError,
    EdgeListError,
    load_edge_list,
    write_edge_list,
)

class TestGraph:
    """Test suite for the Graph class."""

    def test_init_default_labels(self):
        """Test that labels default to 1..n."""
        g = Graph(np.zeros((3, 3)))

        assert g.labels == (1, 2, 3)
        assert g.n == 3
        assert g.edge_count == 0

    def test_init_rejects_asymmetric(self):
        """Test that an asymmetric matrix is rejected."""
        with pytest.raises(GraphError):
            Graph([[0, 1], [0, 0]])

    def test_init_rejects_self_loop(self):
        """Test that a nonzero diagonal is rejected."""
        with pytest.raises(GraphError):
            Graph([[1, 0], [0, 0]])

    def test_init_rejects_negative_weight(self):
        """Test that negative weights are rejected."""
        with pytest.raises(GraphError):
            Graph([[0, -1], [-1, 0]])

    def test_init_rejects_duplicate_labels(self):
        """Test that repeated labels are rejected."""
        with pytest.raises(GraphError):
            Graph(np.zeros((2, 2)), ['a', 'a'])

    def test_adjacency_read_only(self, path_graph):
        """Test that the stored adjacency cannot be modified."""
        with pytest.raises(ValueError):
            path_graph.adjacency[0, 1] = 5

    def test_degree_and_neighbors(self, path_graph):
        """Test degree and neighbor queries."""
        assert path_graph.degree(2) == 2
        assert path_graph.degree(1) == 1
        assert path_graph.neighbors(2) == [1, 3]
        assert list(path_graph.degrees()) == [1, 2, 1]

    def test_weighted_degree(self):
        """Test that degrees sum edge weights."""
        g = Graph.from_edges(['a', 'b', 'c'], [('a', 'b', 2.0), ('a', 'c', 0.5)])

        assert g.weighted
        assert g.degree('a') == 2.5

    def test_index_of_unknown_vertex(self, path_graph):
        """Test lookup of a missing label."""
        with pytest.raises(UnknownVertexError):
            path_graph.index_of(9)

    def test_from_edges_unknown_endpoint(self):
        """Test that an edge to a missing vertex is rejected."""
        with pytest.raises(UnknownVertexError):
            Graph.from_edges([1, 2], [(1, 3)])

    def test_edges_iteration(self, path_graph):
        """Test edge iteration order and weights."""
        assert list(path_graph.edges()) == [(1, 2, 1.0), (2, 3, 1.0)]

    def test_induced_subgraph_keeps_row_order(self, two_triangles):
        """Test that induced subgraphs keep the parent's row order."""
        sub = two_triangles.induced_subgraph([5, 1, 4, 2])

        assert sub.labels == (1, 2, 4, 5)
        assert sub.edge_count == 2
        assert sub.has_edge(1, 2)
        assert sub.has_edge(4, 5)
        assert not sub.has_edge(2, 4)

    def test_induced_subgraph_unknown_vertex(self, path_graph):
        """Test induced subgraph with a missing vertex."""
        with pytest.raises(UnknownVertexError):
            path_graph.induced_subgraph([1, 7])

    def test_equality_ignores_label_order(self):
        """Test that equality compares structure under labels, not row order."""
        g = Graph.from_edges(['a', 'b', 'c'], [('a', 'b')])
        h = Graph.from_edges(['c', 'b', 'a'], [('b', 'a')])
        k = Graph.from_edges(['c', 'b', 'a'], [('b', 'c')])

        assert g == h
        assert g != k

    def test_to_networkx(self, two_triangles):
        """Test conversion to networkx."""
        nx_graph = two_triangles.to_networkx()

        assert nx_graph.number_of_nodes() == 6
        assert nx_graph.number_of_edges() == 6
        assert nx_graph[1][2]['weight'] == 1.0

class TestObfuscation:
    """Test suite for the Obfuscation class."""

    def test_relabel_preserves_structure(self, path_graph, rng):
        """Test that relabeling keeps every edge under the new names."""
        o = Obfuscation.fresh(path_graph.labels, rng)
        h = path_graph.relabel(o)

        assert set(h.labels).isdisjoint(path_graph.labels)
        for u, v, _ in path_graph.edges():
            assert h.has_edge(o[u], o[v])
        assert h.edge_count == path_graph.edge_count

    def test_fresh_avoids_forbidden(self, rng):
        """Test that fresh labels skip the forbidden set."""
        o = Obfuscation.fresh([1, 2, 3], rng, forbidden=['w0', 'w2'])

        assert set(w for _, w in o.items()) == {'w1', 'w3', 'w4'}

    def test_inverse_and_preimage(self, rng):
        """Test the inverse mapping."""
        o = Obfuscation.fresh(['a', 'b'], rng)
        inverse = o.inverse()

        for v, w in o.items():
            assert inverse[w] == v
            assert o.preimage(w) == v

    def test_not_injective(self):
        """Test that a non-injective mapping is rejected."""
        with pytest.raises(ObfuscationError):
            Obfuscation({1: 'x', 2: 'x'})

    def test_forbidden_collision(self):
        """Test that images overlapping the forbidden labels are rejected."""
        with pytest.raises(ObfuscationError):
            Obfuscation({1: 'x', 2: 'y'}, forbidden=['y'])

    def test_relabel_partial_mapping(self, path_graph):
        """Test relabeling with a mapping that misses a vertex."""
        with pytest.raises(ObfuscationError):
            path_graph.relabel(Obfuscation({1: 'x', 2: 'y'}))

class TestEdgeListIO:
    """Test suite for edge-list reading and writing."""

    def test_load_edge_list(self, edge_list_file):
        """Test loading labels, edges and weights."""
        g = load_edge_list(edge_list_file)

        assert g.labels == ('a', 'b', 'c', 'd')
        assert g.edge_count == 3
        assert g.weight('c', 'd') == 2.5

    def test_load_edge_list_bad_line(self, tmp_path):
        """Test that malformed lines report path and line number."""
        path = tmp_path / 'bad.edgelist'
        path.write_text("a b\nc\n")

        with pytest.raises(EdgeListError, match=r'bad\.edgelist:2'):
            load_edge_list(str(path))

    def test_load_edge_list_self_loop(self, tmp_path):
        """Test that self-loops are rejected."""
        path = tmp_path / 'loop.edgelist'
        path.write_text("a a\n")

        with pytest.raises(EdgeListError, match='self-loop'):
            load_edge_list(str(path))

    def test_load_edge_list_conflicting_duplicate(self, tmp_path):
        """Test that a duplicate edge with another weight is rejected."""
        path = tmp_path / 'dup.edgelist'
        path.write_text("a b 1\nb a 2\n")

        with pytest.raises(EdgeListError, match=':2'):
            load_edge_list(str(path))

    def test_write_then_load(self, two_triangles, tmp_path):
        """Test that a written edge list loads back to the same graph."""
        path = tmp_path / 'out' / 'g.edgelist'
        write_edge_list(two_triangles, str(path))

        loaded = load_edge_list(str(path))

        assert loaded.edge_count == 6
        assert loaded.has_edge('1', '2')
        assert not loaded.has_edge('3', '4')
