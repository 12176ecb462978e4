"""
Tests for edge-list ingestion, serialization and edge removal.
"""

import numpy as np
import pytest

from layerrecon.core.exceptions import ParseError, RegistryMismatchError
from layerrecon.models.network import Layer, MultilayerNetwork, NodeRegistry
from layerrecon.models.responses import RemovalPlan
from layerrecon.services.edge_list_parser import EdgeListParser
from layerrecon.services.graph_core import (
    edge_count,
    format_multiplex,
    load_multiplex,
    remove_edges,
    removal_count,
    rng_for,
    write_multiplex,
)
from tests.conftest import directed, undirected


# =============================================================================
# Parsing
# =============================================================================

class TestEdgeListParser:
    def test_comments_and_blank_lines_are_ignored(self):
        parsed = EdgeListParser.parse_text("# header\n\n1 a b  # trailing\n   \n1 b c 2.5\n")
        assert [(e.layer_id, e.source, e.target, e.weight) for e in parsed.edges] == [
            ("1", "a", "b", 1.0),
            ("1", "b", "c", 2.5),
        ]
        assert parsed.edges[1].line_number == 5

    def test_pragmas_declare_nodes_and_layers(self):
        parsed = EdgeListParser.parse_text("#! nodes z y x\n#! layers L2 L1\nL1 x y\n")
        assert parsed.declared_nodes == ["z", "y", "x"]
        assert parsed.declared_layers == ["L2", "L1"]

    def test_node_declared_twice(self):
        with pytest.raises(ParseError, match="declared twice") as err:
            EdgeListParser.parse_text("#! nodes a b\n#! nodes b c\n1 a c\n")
        assert err.value.line_number == 2

    @pytest.mark.parametrize(
        "line, fragment",
        [
            ("1 a", "fields"),
            ("1 a b c d", "fields"),
            ("1 a b heavy", "non-numeric"),
            ("1 a b -1", "negative"),
            ("1 a b inf", "non-finite"),
            ("1 a a", "self-loop"),
        ],
    )
    def test_malformed_lines_name_the_line(self, line, fragment):
        with pytest.raises(ParseError) as err:
            EdgeListParser.parse_text(f"1 x y\n{line}\n")
        assert err.value.line_number == 2
        assert fragment in str(err.value)

    def test_parse_error_carries_path(self, edge_file):
        path = edge_file("1 a a\n")
        with pytest.raises(ParseError, match=r"net\.edges:1:"):
            EdgeListParser.parse_file(path)


# =============================================================================
# Loading
# =============================================================================

class TestLoadMultiplex:
    def test_two_edge_file_builds_symmetric_layer(self, edge_file):
        network = load_multiplex(edge_file("1 a b\n1 b c\n"))
        assert network.n == 3
        assert network.layer_ids == ["1"]
        expected = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)
        np.testing.assert_array_equal(network.layer("1").adjacency, expected)

    def test_registry_is_union_in_first_appearance_order(self, edge_file):
        network = load_multiplex(edge_file("x c d\ny a b\nx b c\n"))
        assert network.nodes.labels == ("c", "d", "a", "b")
        assert network.layer_ids == ["x", "y"]
        assert network.layer("y").adjacency[2, 3] == 1.0

    def test_duplicates_binarize_by_default(self, edge_file):
        path = edge_file("1 a b 3\n1 a b 2\n")
        assert load_multiplex(path).layer("1").adjacency[0, 1] == 1.0
        assert load_multiplex(path, binarize=False).layer("1").adjacency[0, 1] == 5.0

    def test_directed_keeps_orientation(self, edge_file):
        layer = load_multiplex(edge_file("1 a b\n"), directed=True).layer("1")
        assert layer.adjacency[0, 1] == 1.0
        assert layer.adjacency[1, 0] == 0.0

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_multiplex(str(tmp_path / "absent.edges"))


class TestRoundTrip:
    def test_write_then_load_reproduces_adjacency(self, tmp_path, toy_network):
        path = str(tmp_path / "toy.edges")
        write_multiplex(toy_network, path)
        again = load_multiplex(path)
        assert again.nodes.labels == toy_network.nodes.labels
        assert again.layer_ids == toy_network.layer_ids
        for a, b in zip(toy_network.layers, again.layers):
            np.testing.assert_array_equal(a.adjacency, b.adjacency)

    def test_empty_layers_and_isolated_nodes_survive(self, tmp_path):
        n = 4
        network = MultilayerNetwork(
            NodeRegistry(("p", "q", "r", "s")),
            (undirected("full", n, [(0, 1)]), Layer("empty", False, np.zeros((n, n)))),
        )
        path = str(tmp_path / "sparse.edges")
        write_multiplex(network, path)
        again = load_multiplex(path)
        assert again.nodes.labels == ("p", "q", "r", "s")
        assert again.layer_ids == ["full", "empty"]
        assert edge_count(again.layer("empty")) == 0

    def test_weights_written_only_when_not_one(self):
        adj = np.zeros((3, 3))
        adj[0, 1] = adj[1, 0] = 1.0
        adj[1, 2] = adj[2, 1] = 2.5
        network = MultilayerNetwork(NodeRegistry(("a", "b", "c")), (Layer("w", False, adj),))
        lines = format_multiplex(network).splitlines()
        assert lines[2:] == ["w a b", "w b c 2.5"]

    def test_weighted_round_trip(self, tmp_path):
        adj = np.zeros((3, 3))
        adj[0, 2] = 0.1
        adj[2, 1] = 7.0
        network = MultilayerNetwork(NodeRegistry(("a", "b", "c")), (Layer("w", True, adj),))
        path = str(tmp_path / "weighted.edges")
        write_multiplex(network, path)
        again = load_multiplex(path, directed=True, binarize=False)
        np.testing.assert_array_equal(again.layer("w").adjacency, adj)


# =============================================================================
# Model Validation
# =============================================================================

class TestNetworkModel:
    def test_layer_rejects_self_loops(self):
        with pytest.raises(ValueError, match="self-loops"):
            Layer("x", True, np.eye(2))

    def test_undirected_layer_must_be_symmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            Layer("x", False, np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_layer_adjacency_is_read_only(self, triangle):
        with pytest.raises(ValueError):
            triangle.adjacency[0, 1] = 5.0

    def test_registry_mismatch(self, triangle):
        with pytest.raises(RegistryMismatchError):
            MultilayerNetwork(NodeRegistry(("a", "b")), (triangle,))

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError):
            NodeRegistry(("a", "a"))

    def test_replace_and_subnetwork(self, toy_network):
        empty = toy_network.layer("A").with_adjacency(np.zeros((6, 6)))
        replaced = toy_network.replace_layer(empty)
        assert edge_count(replaced.layer("A")) == 0
        assert edge_count(toy_network.layer("A")) == 7
        sub = toy_network.subnetwork(["D", "B"])
        assert sub.layer_ids == ["D", "B"]
        assert sub.nodes is toy_network.nodes

    def test_unknown_layer(self, toy_network):
        with pytest.raises(KeyError):
            toy_network.layer("Z")


# =============================================================================
# Edge Removal
# =============================================================================

class TestEdgeCount:
    def test_empty(self):
        assert edge_count(Layer("e", False, np.zeros((3, 3)))) == 0

    def test_triangle_undirected_and_directed(self, triangle):
        assert edge_count(triangle) == 3
        both_ways = directed("t", 3, [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)])
        assert edge_count(both_ways) == 6


class TestRemoveEdges:
    @pytest.fixture
    def ten_edges(self) -> Layer:
        return undirected("ten", 6, [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)])

    def test_zero_fraction_is_identity(self, ten_edges):
        reduced, plan = remove_edges(ten_edges, 0.0, seed=1)
        np.testing.assert_array_equal(reduced.adjacency, ten_edges.adjacency)
        assert plan.removed_edges == []

    def test_full_removal(self, ten_edges):
        reduced, plan = remove_edges(ten_edges, 1.0, seed=1)
        assert edge_count(reduced) == 0
        assert len(plan.removed_edges) == 10

    def test_fraction_matches_seeded_permutation(self, ten_edges):
        reduced, plan = remove_edges(ten_edges, 0.4, seed=7)
        assert len(plan.removed_edges) == 4
        edges = ten_edges.edge_pairs()
        chosen = np.sort(rng_for(7).permutation(10)[:4])
        assert plan.removed_edges == [tuple(map(int, e)) for e in edges[chosen]]
        again, plan_again = remove_edges(ten_edges, 0.4, seed=7)
        assert plan_again == plan
        np.testing.assert_array_equal(again.adjacency, reduced.adjacency)

    def test_undirected_stays_symmetric_and_original_untouched(self, ten_edges):
        before = ten_edges.adjacency.copy()
        reduced, plan = remove_edges(ten_edges, 0.5, seed=3)
        np.testing.assert_array_equal(reduced.adjacency, reduced.adjacency.T)
        np.testing.assert_array_equal(ten_edges.adjacency, before)
        for i, j in plan.removed_edges:
            assert reduced.adjacency[i, j] == reduced.adjacency[j, i] == 0.0

    def test_directed_removes_one_direction(self):
        layer = directed("d", 3, [(0, 1), (1, 0)])
        reduced, plan = remove_edges(layer, 0.5, seed=0)
        assert edge_count(reduced) == 1
        i, j = plan.removed_edges[0]
        assert reduced.adjacency[j, i] == 1.0

    @pytest.mark.parametrize("fraction", [-0.1, 1.5])
    def test_fraction_out_of_range(self, ten_edges, fraction):
        with pytest.raises(ValueError, match="fraction"):
            remove_edges(ten_edges, fraction, seed=0)

    def test_rounding_is_half_up(self):
        assert removal_count(0.25, 10) == 3
        assert removal_count(0.5, 3) == 2
        assert removal_count(0.2, 10) == 2

    def test_survivors_are_uniform(self, ten_edges):
        counts = np.zeros(10)
        trials = 2000
        for seed in range(trials):
            _, plan = remove_edges(ten_edges, 0.3, seed)
            for i, j in plan.removed_edges:
                row = np.where((ten_edges.edge_pairs() == (i, j)).all(axis=1))[0][0]
                counts[row] += 1
        expected = trials * 3 / 10
        chi2 = ((counts - expected) ** 2 / expected).sum()
        # 9 degrees of freedom, p = 0.001
        assert chi2 < 27.88


class TestRemovalPlan:
    def test_json_shape(self):
        plan = RemovalPlan(fraction=0.5, seed=3, removed_edges=[(0, 1), (2, 4)])
        assert plan.to_json() == '{"fraction": 0.5, "removed": [[0, 1], [2, 4]], "seed": 3}'
        assert RemovalPlan.from_json(plan.to_json()) == plan
