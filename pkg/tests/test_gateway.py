"""Gateway: auth, persistence, HTTP surface, jobs and previews."""

import json
import threading
import time

import pytest
from fastapi.testclient import TestClient

from pacsbridge.gateway.auth import (
    AuthError,
    ConflictError,
    SessionStore,
    UserStore,
    hash_password,
)
from pacsbridge.gateway.core import Gateway
from pacsbridge.gateway.jobs import JobManager
from pacsbridge.gateway.service import create_app
from pacsbridge.engine import RetrieveReport

SHA256_PASSWORD = "5e884898da28047151d0e56f8dc6292773603d0d6aabbdd62a11ef721d1542d8"


class TestPasswordHashing:
    def test_known_vector(self):
        assert hash_password("password") == SHA256_PASSWORD

    def test_user_store_never_persists_plaintext(self, tmp_path):
        store = UserStore(tmp_path / "users.json")
        store.create("alice", "s3cret-Pa55word", "user")
        raw = (tmp_path / "users.json").read_text()
        assert "s3cret-Pa55word" not in raw
        doc = json.loads(raw)
        for user in doc["users"]:
            assert len(user["password_hash"]) == 64
            assert set(user["password_hash"]) <= set("0123456789abcdef")

    def test_verify_accepts_correct_password(self, tmp_path):
        store = UserStore(tmp_path / "users.json")
        store.create("alice", "correct horse", "user")
        assert store.verify("alice", "correct horse").username == "alice"

    def test_wrong_password_and_ghost_user_same_error(self, tmp_path):
        store = UserStore(tmp_path / "users.json")
        store.create("alice", "pw", "user")
        with pytest.raises(AuthError) as err1:
            store.verify("alice", "nope")
        with pytest.raises(AuthError) as err2:
            store.verify("ghost", "nope")
        assert str(err1.value) == str(err2.value)

    def test_duplicate_username_conflict(self, tmp_path):
        store = UserStore(tmp_path / "users.json")
        store.create("alice", "pw")
        with pytest.raises(ConflictError):
            store.create("alice", "pw2")

    def test_ensure_admin_generates_once(self, tmp_path, capsys):
        store = UserStore(tmp_path / "users.json")
        generated = store.ensure_admin(None)
        assert generated
        assert store.ensure_admin(None) is None
        assert store.verify("admin", generated).role == "admin"

    def test_session_expiry(self, tmp_path):
        store = UserStore(tmp_path / "users.json")
        record = store.create("bob", "pw")
        sessions = SessionStore(ttl_s=1000)
        session = sessions.issue(record)
        assert sessions.resolve(session.token) is not None
        sessions.expire_now(session.token)
        assert sessions.resolve(session.token) is None
        assert sessions.resolve("bogus") is None


class TestJobManager:
    def test_idempotent_inflight_submission(self):
        release = threading.Event()

        def runner(job, on_progress):
            release.wait(timeout=5)
            return RetrieveReport(scope=job.scope, study_uid=job.study_uid,
                                  series_uid=None, expected=1, completed=1)

        manager = JobManager(runner, workers=1)
        first = manager.submit("study", "A", "1.2.3.1", None)
        second = manager.submit("study", "A", "1.2.3.1", None)
        assert first == second
        other = manager.submit("study", "A", "9.9.9", None)
        assert other != first
        release.set()
        deadline = time.time() + 5
        while manager.get(first).state not in ("completed", "failed"):
            assert time.time() < deadline
            time.sleep(0.01)
        # After the terminal state a new submission gets a fresh id.
        third = manager.submit("study", "A", "1.2.3.1", None)
        assert third != first
        manager.stop()

    def test_terminal_states_and_node_memory(self):
        def runner(job, on_progress):
            on_progress(0, 2)
            on_progress(2, 2)
            if job.study_uid == "bad":
                raise RuntimeError("boom")
            report = RetrieveReport(scope=job.scope, study_uid=job.study_uid,
                                    series_uid=None, expected=2, completed=2)
            report.per_series = [("s1", 2)]
            return report

        manager = JobManager(runner, workers=1)
        ok = manager.submit("study", "A", "good", None)
        bad = manager.submit("study", "A", "bad", None)
        deadline = time.time() + 5
        while any(manager.get(j).state in ("queued", "running") for j in (ok, bad)):
            assert time.time() < deadline
            time.sleep(0.01)
        assert manager.get(ok).state == "completed"
        assert manager.get(bad).state == "failed"
        assert manager.node_state("A", "good", None) == "succeeded"
        assert manager.node_state("A", "good", "s1") == "succeeded"
        assert manager.node_state("A", "bad", None) == "failed"
        assert manager.node_state("A", "untouched", None) is None
        manager.stop()


@pytest.fixture
def gateway_env(tmp_path, mock_pacs):
    gw = Gateway(tmp_path / "data", admin_password="password", store_port=0,
                 job_workers=2)
    app = create_app(gw)
    with TestClient(app) as client:
        response = client.post("/login", json={"username": "admin",
                                               "password": "password"})
        token = response.json()["token"]
        headers = {"Authorization": f"Bearer {token}"}
        client.post("/stations",
                    json={"name": "MockA", "ae_title": "MOCKPACS",
                          "host": "127.0.0.1", "port": mock_pacs.port},
                    headers=headers)
        mock_pacs.register_ae(gw.store_ae, "127.0.0.1", gw.bound_store_port)
        yield client, headers, gw, mock_pacs


def _wait_terminal(client, headers, job_id, timeout=15.0):
    deadline = time.time() + timeout
    while True:
        doc = client.get(f"/jobs/{job_id}", headers=headers).json()
        if doc["state"] in ("completed", "failed"):
            return doc
        assert time.time() < deadline, "job did not finish in time"
        time.sleep(0.02)


class TestAuthEndpoints:
    def test_login_success_and_failure_shapes(self, gateway_env):
        client, headers, gw, _ = gateway_env
        ok = client.post("/login", json={"username": "admin",
                                         "password": "password"})
        assert ok.status_code == 200
        assert len(ok.json()["token"]) >= 32

        wrong = client.post("/login", json={"username": "admin",
                                            "password": "wrong"})
        ghost = client.post("/login", json={"username": "ghost",
                                            "password": "x"})
        assert wrong.status_code == ghost.status_code == 401
        assert wrong.json() == ghost.json()

    def test_user_creation_admin_only(self, gateway_env):
        client, headers, gw, _ = gateway_env
        created = client.post("/users", json={"username": "tech1",
                                              "password": "pw1"},
                              headers=headers)
        assert created.status_code == 201
        assert created.json()["role"] == "user"
        record = gw.users.get("tech1")
        assert len(record.password_hash) == 64

        login = client.post("/login", json={"username": "tech1",
                                            "password": "pw1"})
        user_headers = {"Authorization": f"Bearer {login.json()['token']}"}
        refused = client.post("/users", json={"username": "tech2",
                                              "password": "pw"},
                              headers=user_headers)
        assert refused.status_code == 403

        duplicate = client.post("/users", json={"username": "tech1",
                                                "password": "pw"},
                                headers=headers)
        assert duplicate.status_code == 409

    def test_route_audit_requires_session(self, gateway_env):
        client, headers, gw, mock = gateway_env
        exempt = {"/login", "/health"}
        audited = []
        for route in client.app.routes:
            path = getattr(route, "path", None)
            methods = getattr(route, "methods", None)
            if not path or not methods or path in exempt:
                continue
            for method in methods - {"HEAD", "OPTIONS"}:
                url = (path.replace("{job_id}", "x")
                           .replace("{study_uid}", "1.2.3.1")
                           .replace("{series_uid}", "1.2.3.1.1")
                           .replace("{name}", "img_0001.jpg"))
                response = client.request(method, url)
                audited.append((method, path, response.status_code))
                assert response.status_code == 401, (method, path)
                assert response.json()["code"] == "auth_failed"
        assert len(audited) >= 12

    def test_expired_session_rejected(self, gateway_env):
        client, headers, gw, _ = gateway_env
        token = headers["Authorization"].removeprefix("Bearer ")
        gw.sessions.expire_now(token)
        response = client.get("/stations", headers=headers)
        assert response.status_code == 401


class TestStationsAndPreferences:
    def test_station_crud_and_persistence(self, gateway_env, tmp_path, mock_pacs):
        client, headers, gw, _ = gateway_env
        listed = client.get("/stations", headers=headers).json()["stations"]
        assert [s["name"] for s in listed] == ["MockA"]

        dup = client.post("/stations",
                          json={"name": "Again", "ae_title": "MOCKPACS",
                                "host": "127.0.0.1", "port": mock_pacs.port},
                          headers=headers)
        assert dup.status_code == 409

        bad_port = client.post("/stations",
                               json={"name": "Bad", "ae_title": "X",
                                     "host": "h", "port": 0},
                               headers=headers)
        assert bad_port.status_code == 400

        # Restart: a fresh gateway over the same data dir sees the station.
        reborn = Gateway(gw.data_dir, admin_password="password")
        assert [s.name for s in reborn.stations()] == ["MockA"]

        removed = client.delete("/stations", params={"name": "MockA"},
                                headers=headers)
        assert removed.status_code == 200
        assert client.get("/stations", headers=headers).json()["stations"] == []
        missing = client.delete("/stations", params={"name": "MockA"},
                                headers=headers)
        assert missing.status_code == 404

    def test_verify_endpoint(self, gateway_env):
        client, headers, gw, _ = gateway_env
        response = client.post("/stations/verify", json={"station": "all"},
                               headers=headers)
        (status,) = response.json()["statuses"]
        assert status["reachable"] is True
        assert status["latency_ms"] > 0

    def test_preferences_round_trip_and_validation(self, gateway_env, tmp_path):
        client, headers, gw, _ = gateway_env
        new_root = str(tmp_path / "elsewhere")
        response = client.put("/preferences",
                              json={"exact_match": True,
                                    "connect_timeout_s": 3,
                                    "dimse_timeout_s": 9,
                                    "output_root": new_root},
                              headers=headers)
        assert response.status_code == 200
        fetched = client.get("/preferences", headers=headers).json()
        assert fetched["exact_match"] is True
        assert fetched["connect_timeout_s"] == 3
        assert fetched["output_root"] == new_root

        reborn = Gateway(gw.data_dir, admin_password="password")
        assert vars(reborn.preferences) == fetched

        bad = client.put("/preferences",
                         json={"exact_match": False, "connect_timeout_s": 0,
                               "dimse_timeout_s": 9, "output_root": new_root},
                         headers=headers)
        assert bad.status_code == 400


class TestQueryEndpoint:
    def test_fixture_query(self, gateway_env):
        client, headers, gw, _ = gateway_env
        response = client.post("/query", json={"station": "all",
                                               "patient_id": "P001"},
                               headers=headers)
        doc = response.json()
        assert len(doc["studies"]) == 1
        study = doc["studies"][0]
        assert study["station"]["name"] == "MockA"
        assert [s["instance_count"] for s in study["series"]] == [3, 2]
        assert study["actions"] == {"retrieve_enabled": True,
                                    "preview_enabled": False,
                                    "open_enabled": False,
                                    "failed_mark": False}

    def test_custom_field(self, gateway_env, mock_pacs):
        client, headers, gw, _ = gateway_env
        for instance in mock_pacs.fixture.instances:
            instance.set_text("ReferringPhysicianName", "REF^DOC")
        response = client.post(
            "/query",
            json={"station": "all",
                  "custom": [{"tag": "ReferringPhysicianName",
                              "value": "REF^DOC"}]},
            headers=headers)
        study = response.json()["studies"][0]
        assert study["custom_values"] == {"(0008,0090)": "REF^DOC"}

    def test_unknown_station_404(self, gateway_env):
        client, headers, gw, _ = gateway_env
        response = client.post("/query", json={"station": "Nope"},
                               headers=headers)
        assert response.status_code == 404

    def test_unknown_custom_tag_rejected(self, gateway_env):
        client, headers, gw, _ = gateway_env
        response = client.post(
            "/query",
            json={"station": "all",
                  "custom": [{"tag": "NotATag", "value": "x"}]},
            headers=headers)
        assert response.status_code == 400


class TestRetrieveAndPreviews:
    def test_full_cycle(self, gateway_env):
        client, headers, gw, _ = gateway_env

        before = client.get("/previews/1.2.3.1", headers=headers)
        assert before.status_code == 409
        assert before.json()["code"] == "not_retrieved"

        submit = client.post("/retrieve",
                             json={"scope": "study", "station": "MockA",
                                   "study_uid": "1.2.3.1"},
                             headers=headers)
        assert submit.status_code == 202
        job = _wait_terminal(client, headers, submit.json()["job_id"])
        assert job["state"] == "completed"
        assert job["progress"] == {"completed": 5, "expected": 5}
        assert job["report"]["success"] is True

        tree = client.post("/query", json={"station": "all"},
                           headers=headers).json()
        actions = tree["studies"][0]["actions"]
        assert actions == {"retrieve_enabled": False, "preview_enabled": True,
                           "open_enabled": True, "failed_mark": False}
        for series in tree["studies"][0]["series"]:
            assert series["actions"]["preview_enabled"] is True

        study_manifest = client.get("/previews/1.2.3.1", headers=headers).json()
        assert [len(s["entries"]) for s in study_manifest["series"]] == [3, 2]

        series_manifest = client.get("/previews/1.2.3.1/1.2.3.1.1",
                                     headers=headers).json()
        first = series_manifest["entries"][0]
        image = client.get(
            f"/previews/1.2.3.1/1.2.3.1.1/{first['files']['viewer']}",
            headers=headers)
        assert image.status_code == 200
        assert image.headers["content-type"] == "image/jpeg"
        lossless = client.get(
            f"/previews/1.2.3.1/1.2.3.1.1/{first['files']['lossless']}",
            headers=headers)
        assert lossless.content.startswith(b"P5\n")

        again = client.get("/previews/1.2.3.1/1.2.3.1.1",
                           headers=headers).json()
        assert again == series_manifest  # cache hit, identical manifest

    def test_series_scope_job(self, gateway_env):
        client, headers, gw, _ = gateway_env
        submit = client.post("/retrieve",
                             json={"scope": "series", "station": "MockA",
                                   "study_uid": "1.2.3.1",
                                   "series_uid": "1.2.3.1.2"},
                             headers=headers)
        job = _wait_terminal(client, headers, submit.json()["job_id"])
        assert job["state"] == "completed"
        assert job["report"]["per_series"] == [
            {"series_uid": "1.2.3.1.2", "files_written": 2}]

    def test_failed_job_then_retry(self, gateway_env):
        from pacsbridge.mockpacs import FaultPlan

        client, headers, gw, mock = gateway_env
        mock.set_fault_plan(FaultPlan(fail_nth_store=2))
        submit = client.post("/retrieve",
                             json={"scope": "study", "station": "MockA",
                                   "study_uid": "1.2.3.1"},
                             headers=headers)
        job = _wait_terminal(client, headers, submit.json()["job_id"])
        assert job["state"] == "failed"
        assert job["report"]["completed"] == 4
        assert job["report"]["failed"] == 1

        tree = client.post("/query", json={"station": "all"},
                           headers=headers).json()
        actions = tree["studies"][0]["actions"]
        assert actions["retrieve_enabled"] is True
        assert actions["failed_mark"] is True

        mock.set_fault_plan(None)
        retry = client.post("/retrieve",
                            json={"scope": "study", "station": "MockA",
                                  "study_uid": "1.2.3.1"},
                            headers=headers)
        assert retry.json()["job_id"] != submit.json()["job_id"]
        job2 = _wait_terminal(client, headers, retry.json()["job_id"])
        assert job2["state"] == "completed"

    def test_unknown_job(self, gateway_env):
        client, headers, gw, _ = gateway_env
        assert client.get("/jobs/nope", headers=headers).status_code == 404

    def test_bad_retrieve_body(self, gateway_env):
        client, headers, gw, _ = gateway_env
        response = client.post("/retrieve",
                               json={"scope": "series", "station": "MockA",
                                     "study_uid": "1.2.3.1"},
                               headers=headers)
        assert response.status_code == 400


class TestDictionaryEndpoint:
    def test_suggests_keywords(self, gateway_env):
        client, headers, gw, _ = gateway_env
        response = client.get("/dictionary", params={"q": "Referring"},
                              headers=headers)
        keywords = [e["keyword"] for e in response.json()["entries"]]
        assert "ReferringPhysicianName" in keywords
