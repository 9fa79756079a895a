import pytest
from fastapi.testclient import TestClient

from fracbound.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


class TestHealthAndRegistry:
    def test_health(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json()["status"] == "ok"

    def test_registry_lists_functions(self, client):
        resp = client.get("/registry")
        assert resp.status_code == 200
        body = resp.json()
        assert {e["name"] for e in body["h_functions"]} == {
            "identity", "power", "one", "godunova"}
        assert "square" in {e["name"] for e in body["f_functions"]}


class TestCheckProps:
    def test_h_props(self, client):
        resp = client.post("/check-props", json={"h": "power:s=0.5"})
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "pass"
        assert body["checks"]["supermultiplicative"]["holds"] is True
        assert body["checks"]["superadditive"]["holds"] is False

    def test_f_props_with_class_check(self, client):
        resp = client.post("/check-props",
                           json={"f": "square:a=0,b=1", "h": "identity", "q": 2.0})
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "pass"
        assert any(key.startswith("derivative_class_hconvex") for key in body["checks"])

    def test_needs_target(self, client):
        resp = client.post("/check-props", json={})
        assert resp.status_code == 422

    def test_bad_spec_rejected(self, client):
        resp = client.post("/check-props", json={"h": "power:s=9"})
        assert resp.status_code == 422
        assert "s in (0, 1]" in resp.json()["detail"]


class TestSweepEndpoint:
    def test_passing_sweep(self, client):
        resp = client.post("/sweep", json={
            "f": "square:a=0,b=1", "h": "identity", "theorem": 1,
            "variant": "first", "alphas": [1.0], "x_count": 11,
        })
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "pass"
        assert body["violations"] == 0
        assert len(body["reports"]) == 11
        assert body["hypothesis_flags"]["h_nonneg"] is True

    def test_divergent_sweep(self, client):
        resp = client.post("/sweep", json={
            "f": "square:a=0,b=1", "h": "godunova", "theorem": 1,
            "variant": "first", "alphas": [1.0], "x_count": 5,
        })
        assert resp.status_code == 200
        assert resp.json()["status"] == "divergent"

    def test_uncertified_sweep(self, client):
        resp = client.post("/sweep", json={
            "f": "square:a=0,b=1", "h": "power:s=0.5", "theorem": 2,
            "variant": "second", "alphas": [1.0], "x_count": 5, "ps": [2.0],
        })
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "uncertified"
        assert "superadditive" in body["error"]

    def test_invalid_theorem_rejected(self, client):
        resp = client.post("/sweep", json={
            "f": "square:a=0,b=1", "h": "identity", "theorem": 4,
            "alphas": [1.0], "x_count": 5,
        })
        assert resp.status_code == 422


class TestOtherEndpoints:
    def test_identity(self, client):
        resp = client.post("/identity", json={
            "f": ["square:a=0,b=1"], "alphas": [0.5, 1.0], "x_count": 5,
        })
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "pass"
        assert body["max_residual"] <= body["tolerance"]

    def test_tightness(self, client):
        resp = client.post("/tightness", json={
            "f": "square:a=0,b=1", "h": "identity", "theorem": 1,
            "variant": "first", "alpha": 1.0,
        })
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "pass"
        assert body["min_slack"] >= -1e-8

    def test_compare_classical(self, client):
        resp = client.post("/compare-classical", json={"h": "identity", "p": 2.0})
        assert resp.status_code == 200
        body = resp.json()
        assert body["thm1_factor"] == pytest.approx(0.5, abs=1e-10)
        assert body["thm1_better"] is False

    def test_corollary(self, client):
        resp = client.post("/corollary", json={
            "s_values": [0.5, 1.0], "alphas": [0.5, 1.0],
        })
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "pass"
        assert all(row["ok"] for row in body["rows"])

    def test_corollary_family2_second_present_for_small_s(self, client):
        # the closed-form cross-check bypasses hypothesis gating, so the
        # family-2 second variant appears even where it is not superadditive
        resp = client.post("/corollary", json={
            "theorems": [2], "s_values": [0.5], "alphas": [1.0],
        })
        rows = resp.json()["rows"]
        assert {row["variant"] for row in rows} == {"first", "second"}
