import json

import pytest
from fastapi.testclient import TestClient

from discreteqm.scenarios import get_scenario
from discreteqm.service import create_app
from discreteqm.session import SessionCore, replay


@pytest.fixture
def client():
    with TestClient(create_app(reveal_state=False)) as c:
        yield c


@pytest.fixture
def reveal_client():
    with TestClient(create_app(reveal_state=True)) as c:
        yield c


def make_session(client, scenario="spin-zx", seed=7, **extra):
    resp = client.post("/api/sessions", json={"scenario": scenario, "seed": seed, **extra})
    assert resp.status_code == 201
    return resp.json()


class TestSessionLifecycle:
    def test_create_returns_measurements_and_predictions(self, client):
        view = make_session(client)
        names = {m["name"] for m in view["measurements"]}
        assert names == {"Z", "X"}
        for m in view["measurements"]:
            assert len(m["outcomes"]) == 2
            assert sum(m["predicted"].values()) == pytest.approx(1.0, abs=1e-9)

    def test_same_seed_gives_identical_initial_predictions(self, client):
        v1 = make_session(client, scenario="table1-pair", seed=11)
        v2 = make_session(client, scenario="table1-pair", seed=11)
        assert v1["measurements"] == v2["measurements"]

    def test_unknown_scenario_404(self, client):
        resp = client.post("/api/sessions", json={"scenario": "nope"})
        assert resp.status_code == 404
        assert "error" in resp.json()

    def test_malformed_body_400(self, client):
        resp = client.post("/api/sessions", json={"seed": 3})
        assert resp.status_code == 400
        assert "error" in resp.json()

    def test_list_scenarios(self, client):
        names = {s["name"] for s in client.get("/api/scenarios").json()["scenarios"]}
        assert {"table1-pair", "spin-zx", "fourier-n"} <= names

    def test_fourier_dim_parameter(self, client):
        view = make_session(client, scenario="fourier-n", dim=4)
        assert view["dim"] == 4

    def test_delete_then_get_404(self, client):
        sid = make_session(client)["id"]
        assert client.delete(f"/api/sessions/{sid}").status_code == 200
        assert client.delete(f"/api/sessions/{sid}").status_code == 404
        assert client.get(f"/api/sessions/{sid}").status_code == 404


class TestMeasurements:
    def measure(self, client, sid, name):
        resp = client.post(f"/api/sessions/{sid}/measurements",
                           json={"measurement": name})
        assert resp.status_code == 200
        return resp.json()

    def test_repeat_measurement_same_outcome_and_point_mass(self, client):
        sid = make_session(client)["id"]
        first = self.measure(client, sid, "Z")
        predicted = next(m["predicted"] for m in first["session"]["measurements"]
                         if m["name"] == "Z")
        assert predicted[first["event"]["outcome_label"]] == pytest.approx(1.0)
        second = self.measure(client, sid, "Z")
        assert second["event"]["outcome_label"] == first["event"]["outcome_label"]
        assert second["event"]["invalidated"] == []

    def test_z_x_z_flips_in_about_half_of_sessions(self, client):
        flips = 0
        for seed in range(60):
            sid = make_session(client, seed=seed)["id"]
            e1 = self.measure(client, sid, "Z")["event"]
            self.measure(client, sid, "X")
            e3 = self.measure(client, sid, "Z")["event"]
            flips += e3["outcome_label"] != e1["outcome_label"]
        assert 15 <= flips <= 45

    def test_history_grows_in_order(self, client):
        sid = make_session(client)["id"]
        self.measure(client, sid, "Z")
        self.measure(client, sid, "X")
        hist = client.get(f"/api/sessions/{sid}").json()["history"]
        assert [e["measurement"] for e in hist] == ["Z", "X"]
        assert [e["step_index"] for e in hist] == [0, 1]

    def test_unknown_measurement_422(self, client):
        sid = make_session(client)["id"]
        resp = client.post(f"/api/sessions/{sid}/measurements",
                           json={"measurement": "Q"})
        assert resp.status_code == 422

    def test_get_is_side_effect_free(self, client):
        sid = make_session(client)["id"]
        self.measure(client, sid, "Z")
        b1 = client.get(f"/api/sessions/{sid}").content
        b2 = client.get(f"/api/sessions/{sid}").content
        assert b1 == b2


class TestStateVisibility:
    def test_hidden_mode_never_exposes_amplitudes(self, client):
        view = make_session(client)
        assert "state" not in view
        sid = view["id"]
        resp = client.post(f"/api/sessions/{sid}/measurements",
                           json={"measurement": "Z"})
        assert "state" not in resp.json()["session"]

    def test_reveal_mode_exposes_pairs(self, reveal_client):
        view = make_session(reveal_client)
        assert "state" in view
        assert all(len(pair) == 2 for pair in view["state"])


class TestReplay:
    def test_service_history_matches_library_replay(self, client):
        actions = ["Z", "X", "Z", "X", "X", "Z"]
        view = make_session(client, seed=123)
        sid = view["id"]
        for name in actions:
            client.post(f"/api/sessions/{sid}/measurements",
                        json={"measurement": name})
        service_history = json.dumps(
            client.get(f"/api/sessions/{sid}").json()["history"], sort_keys=True)
        core = replay(get_scenario("spin-zx"), 123, actions)
        assert service_history == json.dumps(
            [e.to_dict() for e in core.history], sort_keys=True)

    def test_library_replay_is_deterministic(self):
        sc = get_scenario("table1-pair")
        h1 = replay(sc, 99, ["A", "B", "A"]).history_json()
        h2 = replay(sc, 99, ["A", "B", "A"]).history_json()
        assert h1 == h2


class TestSnapshot:
    def test_snapshot_round_trip(self, tmp_path):
        path = tmp_path / "snap.json"
        with TestClient(create_app(snapshot_path=str(path))) as c:
            view = make_session(c, scenario="table1-pair", seed=5)
            sid = view["id"]
            c.post(f"/api/sessions/{sid}/measurements", json={"measurement": "A"})
            before = c.get(f"/api/sessions/{sid}").json()
        assert path.exists()
        with TestClient(create_app(snapshot_path=str(path))) as c:
            after = c.get(f"/api/sessions/{sid}").json()
        assert after["history"] == before["history"]


class TestCoreInvariants:
    def test_current_state_is_collapse_fold_of_history(self):
        import numpy as np
        from discreteqm import measurement as ma

        sc = get_scenario("spin-zx")
        core = SessionCore(scenario=sc, seed=4)
        for name in ["Z", "X", "Z"]:
            core.perform(name)
        state = core.initial_state
        for event in core.history:
            m = sc.measurements[event.measurement]
            idx = m.labels.index(event.outcome_label)
            state = ma.collapse(state, m, idx)
        np.testing.assert_allclose(state, core.current_state, atol=1e-12)
