"""
Tests for temporal network aggregation, densities and memory graphs
"""

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.errors import InvalidInputError
from app.models.network import AggregationScheme, RawEventLog, Snapshot, TemporalNetwork
from app.services.tempnet import aggregate, density_profile, memory_graph, sort_labels, unique_links


# ============================================================================
# TEST: SNAPSHOT / TEMPORAL NETWORK MODELS
# ============================================================================

class TestNetworkModels:
    """Structural invariants of snapshots and temporal networks"""

    def test_from_pairs_canonicalizes_and_drops_self_loops(self):
        snap = Snapshot.from_pairs(3, [(2, 1), (1, 2), (0, 0)])
        assert snap.edges == frozenset({(1, 2)})

    def test_self_loop_rejected(self):
        with pytest.raises(ValidationError):
            Snapshot(n=3, edges=frozenset({(1, 1)}))

    def test_out_of_range_edge_rejected(self):
        with pytest.raises(ValidationError):
            Snapshot(n=2, edges=frozenset({(0, 2)}))

    def test_mismatched_node_count_rejected(self):
        with pytest.raises(ValidationError):
            TemporalNetwork(n=3, snapshots=(Snapshot(n=3), Snapshot(n=4)))

    def test_split_must_be_before_horizon(self, path_graph):
        assert path_graph.with_split(1).split == 1
        with pytest.raises(ValidationError):
            path_graph.with_split(2)

    def test_split_partitions_observed_and_future(self, make_network):
        net = make_network(3, [[(0, 1)], [(1, 2)], [(0, 2)]]).with_split(2)
        assert net.observed().snapshots == net.snapshots[:2]
        assert net.future().snapshots == net.snapshots[2:]

    def test_unsplit_network_has_no_future(self, path_graph):
        with pytest.raises(ValueError):
            path_graph.future()

    def test_window_and_snapshot_indices_are_one_based(self, make_network):
        net = make_network(3, [[(0, 1)], [(1, 2)], [(0, 2)]])
        assert net.snapshot(1).edges == frozenset({(0, 1)})
        sub = net.window(2, 3)
        assert sub.T == 2
        assert sub.snapshot(1).edges == frozenset({(1, 2)})
        with pytest.raises(IndexError):
            net.snapshot(0)

    def test_active_nodes(self, make_network):
        net = make_network(5, [[(0, 1)], [], [(1, 3)]])
        assert net.active_nodes() == frozenset({0, 1, 3})

    def test_adjacency_is_symmetric(self, path_graph):
        adj = path_graph.snapshot(1).adjacency().toarray()
        assert (adj == adj.T).all()
        assert adj.sum() == 4


# ============================================================================
# TEST: AGGREGATE
# ============================================================================

class TestAggregate:
    """Binning raw events into snapshots"""

    def test_equal_time_closing_bin(self):
        log = RawEventLog.from_events([(0, "a", "b"), (5, "a", "b"), (10, "b", "c")])
        net = aggregate(log, 2)
        assert net.labels == ("a", "b", "c")
        assert net.snapshot(1).edges == frozenset({(0, 1)})
        # t=5 opens the second bin [5, 10]; t=10 falls in the closing bin
        assert net.snapshot(2).edges == frozenset({(0, 1), (1, 2)})

    def test_single_event_leaves_later_bins_empty(self):
        net = aggregate(RawEventLog.from_events([(0, "a", "b")]), 2)
        assert net.T == 2
        assert net.snapshot(1).edges == frozenset({(0, 1)})
        assert net.snapshot(2).m == 0

    def test_duplicate_and_reversed_events_collapse(self):
        log = RawEventLog.from_events([(1, "x", "y"), (1, "y", "x"), (2, "x", "y")])
        net = aggregate(log, 1)
        assert net.snapshot(1).edges == frozenset({(0, 1)})

    def test_self_loop_endpoint_kept_in_node_set(self):
        log = RawEventLog.from_events([(0, "a", "b"), (1, "c", "c")])
        net = aggregate(log, 1)
        assert net.n == 3
        assert net.snapshot(1).m == 1

    def test_numeric_labels_sorted_numerically(self):
        assert sort_labels(["10", "2", "1"]) == ["1", "2", "10"]
        assert sort_labels(["b", "10", "a"]) == ["10", "a", "b"]

    def test_equal_count_bins(self):
        log = RawEventLog.from_events([(0, 0, 1), (1, 1, 2), (2, 2, 3), (3, 0, 3)])
        net = aggregate(log, 2, AggregationScheme.EQUAL_COUNT)
        assert net.snapshot(1).edges == frozenset({(0, 1), (1, 2)})
        assert net.snapshot(2).edges == frozenset({(2, 3), (0, 3)})

    def test_equal_count_needs_enough_timestamps(self):
        log = RawEventLog.from_events([(0, 0, 1), (0, 1, 2)])
        with pytest.raises(InvalidInputError):
            aggregate(log, 2, AggregationScheme.EQUAL_COUNT)

    def test_identical_timestamps_go_to_first_bin(self):
        log = RawEventLog.from_events([(4, 0, 1), (4, 1, 2)])
        net = aggregate(log, 3)
        assert net.snapshot(1).m == 2
        assert net.snapshot(2).m == net.snapshot(3).m == 0

    def test_empty_log_rejected(self):
        with pytest.raises(InvalidInputError):
            aggregate(RawEventLog.from_events([]), 2)

    def test_nonfinite_timestamp_rejected(self):
        with pytest.raises(ValidationError):
            RawEventLog.from_events([(float("nan"), "a", "b")])


# ============================================================================
# TEST: DENSITY PROFILE
# ============================================================================

class TestDensityProfile:
    """Recency-weighted mean density"""

    @pytest.fixture
    def two_step(self, make_network):
        # n=5 -> 10 pairs; densities 0.1 and 0.2
        return make_network(5, [[(0, 1)], [(0, 1), (2, 3)]])

    def test_weighted_mean(self, two_step):
        profile = density_profile(two_step, 2, 0.5)
        assert profile.per_snapshot == pytest.approx((0.1, 0.2))
        assert profile.weighted == pytest.approx(0.25 / 1.5)

    def test_xi_one_is_unweighted_mean(self, two_step):
        assert density_profile(two_step, 2, 1.0).weighted == pytest.approx(0.15)

    def test_xi_zero_keeps_last_snapshot(self, two_step):
        assert density_profile(two_step, 2, 0.0).weighted == pytest.approx(0.2)

    def test_upto_limits_window(self, two_step):
        assert density_profile(two_step, 1, 0.5).weighted == pytest.approx(0.1)

    def test_invalid_arguments(self, two_step, make_network):
        with pytest.raises(InvalidInputError):
            density_profile(two_step, 3, 0.5)
        with pytest.raises(InvalidInputError):
            density_profile(two_step, 2, 1.5)
        with pytest.raises(InvalidInputError):
            density_profile(make_network(1, [[]]), 1, 0.5)


# ============================================================================
# TEST: MEMORY GRAPH / UNIQUE LINKS
# ============================================================================

class TestMemoryGraph:
    """Union of observed edge sets"""

    def test_union(self, make_network):
        net = make_network(3, [[(0, 1)], [(1, 2)]])
        assert memory_graph(net, 2).edges == frozenset({(0, 1), (1, 2)})
        assert memory_graph(net, 1).edges == frozenset({(0, 1)})

    def test_identical_snapshots(self, path_graph):
        assert memory_graph(path_graph, 2) == path_graph.snapshot(1)

    def test_empty(self, make_network):
        assert memory_graph(make_network(3, [[], []]), 2).m == 0

    def test_grows_with_the_observed_prefix(self, random_network):
        rng = np.random.default_rng(8)
        for _ in range(50):
            net = random_network(rng, int(rng.integers(2, 10)), int(rng.integers(2, 7)), density=0.3)
            graphs = [memory_graph(net, p) for p in range(1, net.T + 1)]
            assert all(a.edges <= b.edges for a, b in zip(graphs, graphs[1:]))

    def test_unique_links_counts_distinct_pairs(self, make_network):
        net = make_network(8, [[(0, 1)], [(2, 3)], [(4, 5)], [(0, 1)]])
        assert unique_links(net) == 3
        assert unique_links(make_network(3, [[]])) == 0
