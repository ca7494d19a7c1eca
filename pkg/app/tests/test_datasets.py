"""
Tests for dataset readers, the canonical snapshot format and dataset statistics
"""

import gzip

import pytest

from app.core.errors import DatasetParseError, InvalidInputError
from app.models.experiment import DatasetFormat, DatasetRef
from app.services.datasets import (
    dataset_stats,
    format_snapshots,
    generate_stable_hub,
    load_temporal_network,
    parse_snapshots,
    read_event_log,
    read_snapshots,
    temporal_measures,
    write_snapshots,
)


# ============================================================================
# TEST: EVENT FILES
# ============================================================================

class TestReadEventLog:
    """Whitespace/comma separated event files"""

    def test_mixed_separators_comments_and_extra_columns(self, event_file):
        log = read_event_log(event_file)
        assert len(log) == 3
        assert log.timestamps.tolist() == [0.0, 5.0, 10.0]
        assert log.sources.tolist() == ["a", "a", "b"]
        assert log.targets.tolist() == ["b", "b", "c"]

    def test_ragged_rows(self, tmp_path):
        path = tmp_path / "ragged.txt"
        path.write_text("0 a b\n5 a b 1\n10,b,c,1,extra\n12 c\n", encoding="utf-8")
        log = read_event_log(path)
        assert log.timestamps.tolist() == [0.0, 5.0, 10.0]
        assert log.sources.tolist() == ["a", "a", "b"]
        assert log.targets.tolist() == ["b", "b", "c"]

    def test_gzip_is_transparent(self, tmp_path):
        path = tmp_path / "events.txt.gz"
        with gzip.open(path, "wt", encoding="utf-8") as fh:
            fh.write("1 u v\n2 v w\n")
        assert len(read_event_log(path)) == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_event_log(tmp_path / "nope.txt")

    def test_too_few_columns(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1 a\n2 b\n", encoding="utf-8")
        with pytest.raises(DatasetParseError):
            read_event_log(path)

    def test_non_numeric_timestamp(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("noon a b\n", encoding="utf-8")
        with pytest.raises(DatasetParseError):
            read_event_log(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("# nothing here\n", encoding="utf-8")
        with pytest.raises(DatasetParseError):
            read_event_log(path)


# ============================================================================
# TEST: SNAPSHOT FILES
# ============================================================================

class TestSnapshotFormat:
    """Canonical ``n T`` / ``t i j i j`` snapshot files"""

    def test_format_is_sorted_and_stable(self, make_network):
        net = make_network(4, [[(2, 3), (0, 1)], []])
        assert format_snapshots(net) == "4 2\n1 0 1 2 3\n2\n"

    def test_write_then_read(self, tmp_path, synthetic_network):
        path = write_snapshots(synthetic_network, tmp_path / "net.txt")
        loaded = read_snapshots(path)
        assert loaded.snapshots == synthetic_network.snapshots
        assert loaded.n == synthetic_network.n

    def test_parse_accepts_omitted_empty_snapshots(self):
        net = parse_snapshots("3 3\n2 0 1\n")
        assert [s.m for s in net.snapshots] == [0, 1, 0]

    @pytest.mark.parametrize("text", [
        "",
        "3\n",
        "3 2\n5 0 1\n",
        "3 2\n1 0\n",
        "3 2\n1 0 x\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(DatasetParseError):
            parse_snapshots(text)

    def test_load_reference_checks_bin_count(self, synthetic_file):
        ref = DatasetRef(path=str(synthetic_file), format=DatasetFormat.SNAPSHOTS, n_bins=3)
        with pytest.raises(InvalidInputError):
            load_temporal_network(ref)

    def test_event_reference_requires_bins(self, event_file):
        with pytest.raises(ValueError):
            DatasetRef(path=str(event_file))


# ============================================================================
# TEST: DATASET STATS
# ============================================================================

class TestDatasetStats:
    """n, unique links, mean density and temporal measures"""

    def test_single_edge_file(self, tmp_path):
        path = tmp_path / "one.txt"
        path.write_text("2 1\n1 0 1\n", encoding="utf-8")
        stats = dataset_stats(DatasetRef(path=str(path), format=DatasetFormat.SNAPSHOTS))
        assert (stats.n, stats.m, stats.T) == (2, 1, 1)
        assert stats.mean_density == pytest.approx(1.0)
        assert stats.degree_assortativity is None

    def test_event_file(self, event_file):
        stats = dataset_stats(DatasetRef(path=str(event_file), n_bins=2))
        assert (stats.n, stats.m, stats.T) == (3, 2, 2)
        assert stats.mean_density == pytest.approx((1 / 3 + 2 / 3) / 2)
        # a and b appear at t=0 <= 5; c only at t=10
        assert stats.fNT == pytest.approx(2 / 3)
        assert stats.fLT == pytest.approx(1 / 2)
        # Only b is present both in [0, 0.5] and [9.5, 10]
        assert stats.FNT == pytest.approx(1 / 3)
        assert stats.FLT == pytest.approx(0.0)

    def test_temporal_measures_empty(self):
        import pandas as pd
        assert temporal_measures(pd.DataFrame(columns=["time", "i", "j"]), 3) == {}


# ============================================================================
# TEST: SYNTHETIC GENERATOR
# ============================================================================

class TestStableHubGenerator:
    """Planted stable-hub networks"""

    def test_deterministic(self):
        a = generate_stable_hub(n=20, T=4, n_hubs=2, followers=5, churn=5, seed=11)
        b = generate_stable_hub(n=20, T=4, n_hubs=2, followers=5, churn=5, seed=11)
        assert format_snapshots(a) == format_snapshots(b)

    def test_seed_changes_output(self):
        a = generate_stable_hub(n=20, T=4, n_hubs=2, followers=5, churn=5, seed=1)
        b = generate_stable_hub(n=20, T=4, n_hubs=2, followers=5, churn=5, seed=2)
        assert format_snapshots(a) != format_snapshots(b)

    def test_shape(self, synthetic_network):
        assert synthetic_network.n == 30
        assert synthetic_network.T == 8
        assert all(s.m > 0 for s in synthetic_network.snapshots)

    def test_impossible_plant_rejected(self):
        with pytest.raises(InvalidInputError):
            generate_stable_hub(n=10, n_hubs=5, followers=8)
