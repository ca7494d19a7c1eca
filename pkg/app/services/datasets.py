"""
Dataset ingestion, persistence and summary statistics
"""
import gzip
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

import networkx as nx
import numpy as np
import pandas as pd

from app.core.errors import DatasetParseError, InvalidInputError
from app.core.rng import Stream, derive_seed
from app.models.experiment import DatasetFormat, DatasetRef, DatasetStats
from app.models.network import RawEventLog, Snapshot, TemporalNetwork
from app.services.tempnet import aggregate, label_index, memory_graph, unique_links

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# Share of the sampling time treated as the "first" and "last" window
EDGE_WINDOW = 0.05


def _open_text(path: Path, mode: str = "rt"):
    if path.suffix == ".gz":
        return gzip.open(path, mode, encoding="utf-8")
    return open(path, mode, encoding="utf-8")


# ============================================================================
# EVENT FILES
# ============================================================================

def read_event_log(path: PathLike) -> RawEventLog:
    """
    Read ``timestamp u v`` lines separated by whitespace or commas

    ``#`` starts a comment, columns after the third are ignored (rows may
    carry different numbers of them) and gzip files are opened transparently.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Event file not found: {path}")
    try:
        with _open_text(path) as fh:
            lines = pd.Series(fh.read().splitlines(), dtype=object)
    except (UnicodeDecodeError, OSError, EOFError) as e:
        raise DatasetParseError(f"Could not parse {path}: {e}") from e

    lines = lines.str.split("#", n=1).str[0].str.strip()
    lines = lines[lines != ""]
    if lines.empty:
        raise DatasetParseError(f"{path} contains no events")

    # Ragged rows are padded with None, so the width is that of the longest row
    fields = lines.str.split(r"[\s,]+", regex=True, expand=True)
    if fields.shape[1] < 3:
        raise DatasetParseError(f"{path}: expected at least 3 columns (timestamp u v), got {fields.shape[1]}")
    df = fields.iloc[:, :3].dropna()
    if df.empty:
        raise DatasetParseError(f"{path} contains no events")

    try:
        timestamps = pd.to_numeric(df.iloc[:, 0]).to_numpy(dtype=np.float64)
    except (ValueError, TypeError) as e:
        raise DatasetParseError(f"{path}: non-numeric timestamp ({e})") from e

    log = RawEventLog(
        timestamps=timestamps,
        sources=df.iloc[:, 1].str.strip().to_numpy(),
        targets=df.iloc[:, 2].str.strip().to_numpy(),
    )
    logger.info(f"Read {len(log)} events from {path}")
    return log


# ============================================================================
# CANONICAL SNAPSHOT FILES
# ============================================================================

def format_snapshots(net: TemporalNetwork) -> str:
    """Header ``n T`` then one ``t i j i j ...`` line per snapshot with sorted edges"""
    lines = [f"{net.n} {net.T}"]
    for t, snap in enumerate(net.snapshots, start=1):
        flat = " ".join(f"{i} {j}" for i, j in snap.sorted_edges())
        lines.append(f"{t} {flat}".rstrip())
    return "\n".join(lines) + "\n"


def write_snapshots(net: TemporalNetwork, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with _open_text(path, "wt") as fh:
        fh.write(format_snapshots(net))
    return path


def parse_snapshots(text: str, source: str = "<string>") -> TemporalNetwork:
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise DatasetParseError(f"{source}: empty snapshot file")
    try:
        header = [int(x) for x in rows[0]]
        if len(header) != 2:
            raise ValueError("header must be 'n T'")
        n, T = header
        edges: List[List[Tuple[int, int]]] = [[] for _ in range(T)]
        for row in rows[1:]:
            values = [int(x) for x in row]
            t, flat = values[0], values[1:]
            if not 1 <= t <= T:
                raise ValueError(f"snapshot index {t} outside [1, {T}]")
            if len(flat) % 2:
                raise ValueError(f"snapshot {t} has an odd number of endpoints")
            edges[t - 1].extend(zip(flat[0::2], flat[1::2]))
        snapshots = tuple(Snapshot.from_pairs(n, pairs) for pairs in edges)
        return TemporalNetwork(n=n, snapshots=snapshots)
    except ValueError as e:
        raise DatasetParseError(f"{source}: {e}") from e


def read_snapshots(path: PathLike) -> TemporalNetwork:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Snapshot file not found: {path}")
    try:
        with _open_text(path) as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as e:
        raise DatasetParseError(f"Could not read {path}: {e}") from e
    net = parse_snapshots(text, source=str(path))
    logger.info(f"Read {net.T} snapshots over {net.n} nodes from {path}")
    return net


def load_temporal_network(ref: DatasetRef) -> TemporalNetwork:
    """Load a dataset reference as a temporal network"""
    if ref.format == DatasetFormat.SNAPSHOTS:
        net = read_snapshots(ref.path)
        if ref.n_bins is not None and ref.n_bins != net.T:
            raise InvalidInputError(f"{ref.path} holds {net.T} snapshots, n_bins={ref.n_bins} requested")
        return net
    return aggregate(read_event_log(ref.path), ref.n_bins, ref.scheme)


# ============================================================================
# STATISTICS
# ============================================================================

def _occurrences(ref: DatasetRef, net: TemporalNetwork) -> pd.DataFrame:
    """One row (time, i, j) per contact, on raw timestamps for event files"""
    if ref.format == DatasetFormat.SNAPSHOTS:
        rows = [(t, i, j) for t, snap in enumerate(net.snapshots, start=1) for i, j in snap.sorted_edges()]
        return pd.DataFrame(rows, columns=["time", "i", "j"], dtype=np.float64)

    log = read_event_log(ref.path)
    index = label_index(net.labels)
    u = np.array([index[s] for s in log.sources])
    v = np.array([index[s] for s in log.targets])
    return pd.DataFrame({
        "time": log.timestamps,
        "i": np.minimum(u, v),
        "j": np.maximum(u, v),
    })


def temporal_measures(occ: pd.DataFrame, n: int) -> dict:
    """
    Fraction of nodes and links that have appeared by half the sampling time
    (fNT, fLT) and that are present in both the first and last 5% (FNT, FLT)
    """
    if occ.empty or n == 0:
        return {}
    tmin, tmax = occ["time"].min(), occ["time"].max()
    span = tmax - tmin
    half = tmin + 0.5 * span
    early_cut = tmin + EDGE_WINDOW * span
    late_cut = tmax - EDGE_WINDOW * span
    early = occ["time"] <= early_cut
    late = occ["time"] >= late_cut

    nodes = pd.concat([
        occ[["time", "i"]].rename(columns={"i": "node"}),
        occ[["time", "j"]].rename(columns={"j": "node"}),
    ])
    node_early = pd.concat([occ.loc[early, "i"], occ.loc[early, "j"]]).unique()
    node_late = pd.concat([occ.loc[late, "i"], occ.loc[late, "j"]]).unique()

    links = occ[occ["i"] != occ["j"]]
    link_first = links.groupby(["i", "j"])["time"].min()
    link_early = set(map(tuple, links.loc[links["time"] <= early_cut, ["i", "j"]].to_numpy().tolist()))
    link_late = set(map(tuple, links.loc[links["time"] >= late_cut, ["i", "j"]].to_numpy().tolist()))
    m = len(link_first)

    return {
        "fNT": float((nodes.groupby("node")["time"].min() <= half).sum() / n),
        "fLT": float((link_first <= half).sum() / m) if m else None,
        "FNT": float(len(np.intersect1d(node_early, node_late)) / n),
        "FLT": float(len(link_early & link_late) / m) if m else None,
    }


def degree_assortativity(g: Snapshot) -> Optional[float]:
    """Degree assortativity of a graph, None when undefined"""
    if g.m == 0:
        return None
    graph = nx.Graph()
    graph.add_nodes_from(range(g.n))
    graph.add_edges_from(g.sorted_edges())
    with np.errstate(divide="ignore", invalid="ignore"):
        try:
            r = nx.degree_assortativity_coefficient(graph)
        except (ZeroDivisionError, ValueError):
            return None
    return None if not np.isfinite(r) else float(r)


def dataset_stats(ref: DatasetRef) -> DatasetStats:
    """n, unique links, mean density, T plus temporal measures of a dataset"""
    net = load_temporal_network(ref)
    densities = [snap.density for snap in net.snapshots]
    measures = temporal_measures(_occurrences(ref, net), net.n)
    return DatasetStats(
        n=net.n,
        m=unique_links(net),
        mean_density=float(np.mean(densities)),
        T=net.T,
        degree_assortativity=degree_assortativity(memory_graph(net, net.T)),
        **measures,
    )


# ============================================================================
# SYNTHETIC DATA
# ============================================================================

def generate_stable_hub(
    n: int = 100,
    T: int = 20,
    n_hubs: int = 10,
    followers: int = 12,
    presence: float = 0.6,
    churn: int = 40,
    seed: int = 0,
) -> TemporalNetwork:
    """
    Planted stable-hub temporal network

    ``n_hubs`` hubs each keep a fixed follower set; every hub-follower edge
    is present in a snapshot with probability ``presence``. On top of that,
    ``churn`` uniformly random pairs appear in each snapshot.
    """
    if not 0 < n_hubs < n or followers > n - n_hubs:
        raise InvalidInputError(f"Cannot plant {n_hubs} hubs with {followers} followers in n={n}")
    if T < 1:
        raise InvalidInputError(f"T must be positive, got {T}")
    rng = np.random.default_rng(derive_seed(seed, Stream.SYNTHETIC))

    hubs = np.sort(rng.choice(n, size=n_hubs, replace=False))
    others = np.setdiff1d(np.arange(n), hubs)
    planted = [(int(h), int(f)) for h in hubs for f in rng.choice(others, size=followers, replace=False)]

    snapshots = []
    for _ in range(T):
        keep = rng.random(len(planted)) < presence
        pairs: Iterable = [e for e, k in zip(planted, keep) if k]
        u = rng.integers(0, n, size=churn)
        v = rng.integers(0, n, size=churn)
        pairs = list(pairs) + list(zip(u.tolist(), v.tolist()))
        snapshots.append(Snapshot.from_pairs(n, pairs))

    logger.info(f"Generated stable-hub network: n={n}, T={T}, hubs={hubs.tolist()}")
    return TemporalNetwork(n=n, snapshots=tuple(snapshots), labels=tuple(str(i) for i in range(n)))
