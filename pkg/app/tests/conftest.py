"""
Test Configuration for the Ex-Ante IM toolkit
"""

import os
import sys

import pytest

# Add project root to Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))


@pytest.fixture
async def client():
    """Create test client for API testing"""
    from httpx import AsyncClient, ASGITransport
    from app.main import app

    # Use ASGITransport to wrap the FastAPI app
    transport = ASGITransport(app=app)

    async with AsyncClient(transport=transport, base_url="http://test") as ac:
        yield ac


@pytest.fixture
def data_dir(tmp_path, monkeypatch):
    """Temporary data directory the HTTP surface reads datasets from"""
    from app.config import settings

    root = tmp_path / "data"
    root.mkdir()
    monkeypatch.setattr(settings, "DATA_DIR", str(root))
    return root


@pytest.fixture
def make_network():
    """Build a TemporalNetwork from per-snapshot edge lists"""
    from app.models.network import Snapshot, TemporalNetwork

    def build(n, edge_lists):
        snapshots = tuple(Snapshot.from_pairs(n, edges) for edges in edge_lists)
        return TemporalNetwork(n=n, snapshots=snapshots)

    return build


@pytest.fixture
def random_network():
    """Draw a TemporalNetwork with independent edges of the given density per snapshot"""
    import numpy as np
    from app.models.network import Snapshot, TemporalNetwork

    def build(rng, n, T, density=0.4):
        snapshots = []
        for _ in range(T):
            mask = np.triu(rng.random((n, n)) < density, 1)
            snapshots.append(Snapshot.from_pairs(n, [(int(i), int(j)) for i, j in zip(*np.nonzero(mask))]))
        return TemporalNetwork(n=n, snapshots=tuple(snapshots))

    return build


@pytest.fixture
def path_graph(make_network):
    """Static path 0-1-2 repeated over two snapshots"""
    return make_network(3, [[(0, 1), (1, 2)], [(0, 1), (1, 2)]])


@pytest.fixture
def synthetic_network():
    """Small planted stable-hub network used by the pipeline tests"""
    from app.services.datasets import generate_stable_hub

    return generate_stable_hub(n=30, T=8, n_hubs=3, followers=6, presence=0.7, churn=8, seed=3)


@pytest.fixture
def synthetic_file(data_dir, synthetic_network):
    """The synthetic network written in canonical snapshot format"""
    from app.services.datasets import write_snapshots

    return write_snapshots(synthetic_network, data_dir / "synthetic.txt")


@pytest.fixture
def event_file(data_dir):
    """Small whitespace/comma separated event file with a comment and an extra column"""
    path = data_dir / "events.txt"
    path.write_text(
        "# t u v weight\n"
        "0 a b 1\n"
        "5,a,b,1\n"
        "10 b c 1\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture
def fast_hyper():
    """Reduced-cost link-prediction settings"""
    from app.models.experiment import Hyperparameters

    return Hyperparameters(alpha_grid=(0.01, 0.1), nmf_restarts=2, nmf_max_iter=50, q=2)
