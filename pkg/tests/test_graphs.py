"""Graph construction, edge-list parsing, datasets, and Laplacians."""
import numpy as np
import pytest

from agssl import (Graph, GraphParseError, RegularizerKind, builtin_dataset,
                   custom_regularizer, is_connected, laplacian,
                   load_edge_list, load_labels, normalized_laplacian)

from conftest import random_connected_graph


class TestGraphValidation:
    """Graph construction enforces its own invariants."""

    def test_basic_construction(self):
        g = Graph(n=3, edges=((0, 1, 1.0), (1, 2, 2.0)))
        assert g.num_edges == 2
        np.testing.assert_allclose(g.degrees(), [1.0, 3.0, 2.0])

    def test_adjacency_symmetric(self):
        g = Graph(n=3, edges=((0, 1, 1.0), (1, 2, 2.0)))
        a = g.adjacency()
        np.testing.assert_array_equal(a, a.T)
        assert a[0, 1] == 1.0 and a[2, 1] == 2.0

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            Graph(n=2, edges=((1, 1, 1.0),))

    def test_rejects_duplicate_edge(self):
        with pytest.raises(ValueError, match="duplicate"):
            Graph(n=2, edges=((0, 1, 1.0), (0, 1, 2.0)))

    def test_rejects_nonpositive_weight(self):
        with pytest.raises(ValueError, match="non-positive"):
            Graph(n=2, edges=((0, 1, 0.0),))

    def test_rejects_out_of_range_index(self):
        with pytest.raises(ValueError, match="out of range"):
            Graph(n=2, edges=((0, 5, 1.0),))

    def test_rejects_bad_labels(self):
        with pytest.raises(ValueError, match="\\+1 or -1"):
            Graph(n=2, edges=((0, 1, 1.0),), node_labels=np.array([1, 2]))

    def test_labels_are_read_only(self):
        g = Graph(n=2, edges=((0, 1, 1.0),), node_labels=np.array([1, -1]))
        with pytest.raises(ValueError):
            g.node_labels[0] = -1


class TestLoadEdgeList:
    """Text parsing: format, defaults, and error reporting by line."""

    def test_two_column_lines(self):
        g = load_edge_list("0 1\n1 2")
        assert g.n == 3
        assert g.edges == ((0, 1, 1.0), (1, 2, 1.0))

    def test_explicit_weight(self):
        g = load_edge_list("0 1 2.5")
        assert g.edges == ((0, 1, 2.5),)

    def test_self_loop_names_line(self):
        with pytest.raises(GraphParseError, match="line 1"):
            load_edge_list("0 0")

    def test_comments_and_blank_lines_skipped(self):
        g = load_edge_list("# header\n\n0 1  # trailing\n")
        assert g.num_edges == 1

    def test_duplicate_reversed_edge_rejected(self):
        with pytest.raises(GraphParseError, match="line 2.*duplicate"):
            load_edge_list("0 1\n1 0")

    def test_malformed_line_number_reported(self):
        with pytest.raises(GraphParseError, match="line 3"):
            load_edge_list("0 1\n1 2\n1 2 3 4")

    def test_non_integer_index(self):
        with pytest.raises(GraphParseError, match="integers"):
            load_edge_list("0 x")

    def test_negative_weight(self):
        with pytest.raises(GraphParseError, match="non-positive"):
            load_edge_list("0 1 -2")

    def test_n_hint_grows_graph(self):
        g = load_edge_list("0 1", n_hint=5)
        assert g.n == 5

    def test_n_hint_never_truncates(self):
        g = load_edge_list("0 9", n_hint=3)
        assert g.n == 10

    def test_one_indexed_files(self):
        g = load_edge_list("1 2\n2 3", one_indexed=True)
        assert g.edges == ((0, 1, 1.0), (1, 2, 1.0))

    def test_empty_input_rejected(self):
        with pytest.raises(GraphParseError, match="empty"):
            load_edge_list("# nothing here\n")


class TestLoadLabels:
    def test_reads_signs(self):
        labels = load_labels("+1\n-1\n1\n", 3)
        np.testing.assert_array_equal(labels, [1, -1, 1])

    def test_count_mismatch(self):
        with pytest.raises(GraphParseError, match="expected 3"):
            load_labels("+1\n-1\n", 3)

    def test_bad_value(self):
        with pytest.raises(GraphParseError, match="line 2"):
            load_labels("+1\n0\n-1\n", 3)


class TestBuiltinDatasets:
    """Bundled benchmarks: sizes, labels, connectivity."""

    def test_karate_shape(self):
        g = builtin_dataset("karate")
        assert g.n == 34
        assert g.num_edges == 78

    def test_dolphin_shape(self):
        g = builtin_dataset("dolphin")
        assert g.n == 62
        assert g.num_edges == 159

    def test_both_connected(self):
        assert is_connected(builtin_dataset("karate"))
        assert is_connected(builtin_dataset("dolphin"))

    def test_labels_are_two_valued(self):
        for name in ("karate", "dolphin"):
            labels = builtin_dataset(name).node_labels
            assert set(np.unique(labels)) == {-1, 1}

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown dataset"):
            builtin_dataset("petster")


class TestLaplacian:
    def test_two_node_path(self):
        g = Graph(n=2, edges=((0, 1, 1.0),))
        np.testing.assert_array_equal(laplacian(g).matrix,
                                      [[1.0, -1.0], [-1.0, 1.0]])

    def test_nullspace_is_all_ones(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            g = random_connected_graph(rng)
            L = laplacian(g).matrix
            np.testing.assert_allclose(L @ np.ones(g.n), 0.0, atol=1e-10)

    def test_trace_is_twice_total_weight(self):
        # for unit weights this is 2x the edge count (156 on unweighted karate)
        karate = builtin_dataset("karate")
        unweighted = Graph(
            n=karate.n, edges=tuple((i, j, 1.0) for i, j, _ in karate.edges))
        assert np.trace(laplacian(unweighted).matrix) == 156.0
        total_w = sum(w for _, _, w in karate.edges)
        assert np.trace(laplacian(karate).matrix) == 2.0 * total_w

    def test_kind_and_nullity(self):
        g = builtin_dataset("karate")
        reg = laplacian(g)
        assert reg.kind is RegularizerKind.LAPLACIAN
        assert reg.nullity == 1

    def test_disconnected_rejected(self):
        g = Graph(n=4, edges=((0, 1, 1.0), (2, 3, 1.0)))
        with pytest.raises(ValueError, match="connected"):
            laplacian(g)

    def test_connectivity_matches_nullity(self):
        """Zero-eigenvalue multiplicity 1 exactly when connected."""
        rng = np.random.default_rng(11)
        for _ in range(30):
            n = int(rng.integers(4, 13))
            edges = tuple((i, j, 1.0) for i in range(n)
                          for j in range(i + 1, n) if rng.random() < 0.3)
            try:
                g = Graph(n=n, edges=edges)
            except ValueError:
                continue
            from agssl import laplacian_matrix
            w = np.linalg.eigvalsh(laplacian_matrix(g))
            nullity = int(np.sum(np.abs(w) < 1e-8 * max(w[-1], 1.0)))
            assert is_connected(g) == (nullity == 1)


class TestNormalizedLaplacian:
    def test_two_node_path(self):
        g = Graph(n=2, edges=((0, 1, 1.0),))
        np.testing.assert_array_equal(normalized_laplacian(g).matrix,
                                      [[1.0, -1.0], [-1.0, 1.0]])

    def test_triangle(self):
        g = Graph(n=3, edges=((0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)))
        m = normalized_laplacian(g).matrix
        np.testing.assert_allclose(np.diag(m), 1.0)
        off = m[~np.eye(3, dtype=bool)]
        np.testing.assert_allclose(off, -0.5)

    def test_trace_is_n(self):
        for name in ("karate", "dolphin"):
            g = builtin_dataset(name)
            assert np.trace(normalized_laplacian(g).matrix) == g.n

    def test_eigenvalues_in_zero_two(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            g = random_connected_graph(rng)
            w = np.linalg.eigvalsh(normalized_laplacian(g).matrix)
            assert w[0] >= -1e-8 and w[-1] <= 2.0 + 1e-8

    def test_isolated_node_rejected(self):
        g = Graph(n=3, edges=((0, 1, 1.0),))
        with pytest.raises(ValueError, match="isolated"):
            normalized_laplacian(g)


class TestCustomRegularizer:
    def test_accepts_stieltjes(self):
        reg = custom_regularizer([[2.0, -1.0], [-1.0, 2.0]])
        assert reg.kind is RegularizerKind.CUSTOM
        assert reg.nullity == 0

    def test_rejects_positive_offdiagonal(self):
        with pytest.raises(ValueError, match="off-diagonal"):
            custom_regularizer([[1.0, 0.5], [0.5, 1.0]])

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            custom_regularizer([[1.0, -0.5], [-0.2, 1.0]])

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError, match="PSD"):
            custom_regularizer([[1.0, -2.0], [-2.0, 1.0]])


class TestIsConnected:
    def test_path_connected(self):
        g = Graph(n=3, edges=((0, 1, 1.0), (1, 2, 1.0)))
        assert is_connected(g)

    def test_two_components(self):
        g = Graph(n=4, edges=((0, 1, 1.0), (2, 3, 1.0)))
        assert not is_connected(g)

    def test_single_node(self):
        assert is_connected(Graph(n=1, edges=()))
