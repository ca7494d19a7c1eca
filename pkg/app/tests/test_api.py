"""
HTTP surface tests
Run against the ASGI app with datasets in a temporary data directory
"""

import pytest


FAST_HYPER = {"alpha_grid": [0.01, 0.1], "nmf_restarts": 2, "nmf_max_iter": 30, "q": 2}


# ============================================================================
# TEST: INFO ENDPOINTS
# ============================================================================

class TestInfoEndpoints:
    """Root, health and API info"""

    async def test_root(self, client):
        response = await client.get("/")
        assert response.status_code == 200
        assert response.json()["status"] == "active"

    async def test_health(self, client, data_dir):
        response = await client.get("/health")
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "healthy"
        assert body["data_dir"] == "available"

    async def test_api_info_lists_routes(self, client):
        response = await client.get("/api/v1")
        assert response.status_code == 200
        assert response.json()["endpoints"]["run"] == "/api/v1/experiments/run"


# ============================================================================
# TEST: DATASET STATS (POST /api/v1/datasets/stats)
# ============================================================================

class TestDatasetStats:
    """Dataset statistics endpoint"""

    async def test_event_file(self, client, event_file):
        response = await client.post(
            "/api/v1/datasets/stats",
            json={"path": "events.txt", "format": "events", "n_bins": 2}
        )
        assert response.status_code == 200
        body = response.json()
        assert (body["n"], body["m"], body["T"]) == (3, 2, 2)

    async def test_snapshot_file(self, client, synthetic_file):
        response = await client.post(
            "/api/v1/datasets/stats",
            json={"path": "synthetic.txt", "format": "snapshots"}
        )
        assert response.status_code == 200
        assert response.json()["n"] == 30

    async def test_path_outside_data_dir(self, client, data_dir):
        response = await client.post(
            "/api/v1/datasets/stats",
            json={"path": "../secret.txt", "format": "snapshots"}
        )
        assert response.status_code == 400

    async def test_missing_file(self, client, data_dir):
        response = await client.post(
            "/api/v1/datasets/stats",
            json={"path": "nope.txt", "format": "snapshots"}
        )
        assert response.status_code == 404

    async def test_unparsable_file(self, client, data_dir):
        (data_dir / "bad.txt").write_text("1 a\n2 b\n", encoding="utf-8")
        response = await client.post(
            "/api/v1/datasets/stats",
            json={"path": "bad.txt", "format": "events", "n_bins": 2}
        )
        assert response.status_code == 422

    async def test_request_validation(self, client, data_dir):
        response = await client.post("/api/v1/datasets/stats", json={"path": "", "n_bins": 0})
        assert response.status_code == 422


# ============================================================================
# TEST: EXPERIMENTS (POST /api/v1/experiments/*)
# ============================================================================

class TestExperiments:
    """Single runs and sweeps"""

    @pytest.fixture
    def spec_body(self):
        return {
            "dataset": {"path": "synthetic.txt", "format": "snapshots"},
            "p": 6,
            "lam": 0.2,
            "k": 2,
            "method": "static-mem",
            "mc_runs": 30,
            "rng_seed": 1,
            "hyper": FAST_HYPER
        }

    async def test_run(self, client, synthetic_file, spec_body):
        response = await client.post("/api/v1/experiments/run", json=spec_body)
        assert response.status_code == 200
        record = response.json()
        assert record["method"] == "static-mem"
        assert record["selector"] == "greedy"
        assert len(record["seeds"]) == 2
        assert 2 <= record["mean_spread"] <= 30

    async def test_run_is_deterministic(self, client, synthetic_file, spec_body):
        first = (await client.post("/api/v1/experiments/run", json=spec_body)).json()
        second = (await client.post("/api/v1/experiments/run", json=spec_body)).json()
        assert first["per_run_final_counts"] == second["per_run_final_counts"]

    async def test_incompatible_spec(self, client, synthetic_file, spec_body):
        spec_body["k"] = 31
        response = await client.post("/api/v1/experiments/run", json=spec_body)
        assert response.status_code == 400
        assert "k=31" in response.json()["detail"]

    async def test_invalid_spec(self, client, synthetic_file, spec_body):
        spec_body["T"] = 5
        spec_body["p"] = 6
        response = await client.post("/api/v1/experiments/run", json=spec_body)
        assert response.status_code == 422

    async def test_missing_dataset(self, client, data_dir, spec_body):
        response = await client.post("/api/v1/experiments/run", json=spec_body)
        assert response.status_code == 404

    async def test_sweep(self, client, synthetic_file):
        response = await client.post("/api/v1/experiments/sweep", json={
            "dataset": {"path": "synthetic.txt", "format": "snapshots"},
            "ks": [1, 2],
            "methods": ["oracle", "static-last"],
            "lams": [0.2],
            "ps": [6],
            "mc_runs": 20,
            "hyper": FAST_HYPER
        })
        assert response.status_code == 200
        body = response.json()
        assert body["ok"] is True
        assert body["failures"] == []
        assert len(body["rows"]) == 4
        oracle = [r for r in body["rows"] if r["method"] == "oracle"]
        assert all(r["ratio_to_oracle"] == 1.0 for r in oracle)
