"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one `[ACCEPTANCE] <name>: PASS|FAIL` line (visible with
pytest -s or in captured output on failure).
"""

import json
import random
import socket
import threading
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

import pacsbridge.net as net
from pacsbridge.dicom import encode_dataset, parse_dataset
from pacsbridge.dicom.uids import (
    CT_IMAGE_STORAGE,
    EXPLICIT_VR_LE,
    IMPLICIT_VR_LE,
    VERIFICATION,
)
from pacsbridge.engine import (
    DestConfig,
    PatientFilters,
    QueryFilters,
    StationConfig,
    echo_all,
    query_stations,
    retrieve_study,
    start_store_sink,
)
from pacsbridge.gateway.auth import hash_password
from pacsbridge.gateway.core import Gateway
from pacsbridge.gateway.service import create_app
from pacsbridge.mockpacs import FaultPlan, Fixture, make_instance, seed, standard_fixture
from pacsbridge.net import messages as m
from pacsbridge.net.association import PresentationContext
from pacsbridge.net.pdu import decode_pdu
from pacsbridge.preview import (
    PixelBuffer,
    WindowParams,
    apply_windowing,
    export_series,
    extract_pixels,
    resolve_window,
)

from conftest import free_port
from datagen import random_dataset
from test_preview import brute_force_window, gradient_instance

GOLDEN_TRACE = Path(__file__).parent / "data" / "golden_c_echo.json"


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"[ACCEPTANCE] {name}: FAIL")
        raise
    print(f"[ACCEPTANCE] {name}: PASS")


# --- 1. codec round-trip ------------------------------------------------------

def test_codec_round_trip_1000_datasets():
    with criterion("codec round-trip (1000 datasets, both syntaxes, <10s)"):
        rng = random.Random(12345)
        started = time.monotonic()
        for _ in range(1000):
            ds = random_dataset(rng)
            for syntax in (EXPLICIT_VR_LE, IMPLICIT_VR_LE):
                encoded = encode_dataset(ds, syntax)
                decoded = parse_dataset(encoded, syntax)
                assert decoded == ds
                assert encode_dataset(decoded, syntax) == encoded
        elapsed = time.monotonic() - started
        assert elapsed < 10.0, f"took {elapsed:.2f}s"


# --- 2. wire conformance ------------------------------------------------------

class _RecordingProxy:
    """TCP proxy that records both directions of a single connection."""

    def __init__(self, target_port: int):
        self.target_port = target_port
        self.to_server = bytearray()   # SCU -> SCP
        self.to_client = bytearray()   # SCP -> SCU
        self._listener = socket.socket()
        self._listener.bind(("127.0.0.1", 0))
        self._listener.listen(1)
        self.port = self._listener.getsockname()[1]
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._thread.start()

    def _run(self):
        client, _ = self._listener.accept()
        server = socket.create_connection(("127.0.0.1", self.target_port))

        def pump(src, dst, sink):
            while True:
                try:
                    chunk = src.recv(65536)
                except OSError:
                    break
                if not chunk:
                    break
                sink += chunk
                try:
                    dst.sendall(chunk)
                except OSError:
                    break
            for sock in (src, dst):
                try:
                    sock.shutdown(socket.SHUT_RDWR)
                except OSError:
                    pass

        up = threading.Thread(target=pump, args=(client, server, self.to_server))
        down = threading.Thread(target=pump, args=(server, client, self.to_client))
        up.start()
        down.start()
        up.join(timeout=10)
        down.join(timeout=10)
        client.close()
        server.close()

    def wait(self):
        self._thread.join(timeout=10)
        self._listener.close()


def _split_frames(stream: bytes) -> list[bytes]:
    frames = []
    pos = 0
    while pos < len(stream):
        length = int.from_bytes(stream[pos + 2:pos + 6], "big")
        frames.append(bytes(stream[pos:pos + 6 + length]))
        pos += 6 + length
    return frames


def test_wire_conformance_against_golden_trace():
    with criterion("wire conformance (golden C-ECHO trace, exact match)"):
        golden = json.loads(GOLDEN_TRACE.read_text())
        params = golden["parameters"]
        expected_scu = [bytes.fromhex(f["hex"]) for f in golden["frames"]
                        if f["dir"] == "scu"]
        expected_scp = [bytes.fromhex(f["hex"]) for f in golden["frames"]
                        if f["dir"] == "scp"]

        # Constants cross-checked against the recorded trace.
        assert expected_scu[0][0] == 0x01 and expected_scp[0][0] == 0x02
        assert expected_scu[1][0] == 0x04 and expected_scu[2][0] == 0x05
        assert expected_scp[2][0] == 0x06
        rq_msg = decode_pdu(expected_scu[1])
        rsp_msg = decode_pdu(expected_scp[1])
        rq_cmd = m.decode_command(rq_msg.pdvs[0].data)
        rsp_cmd = m.decode_command(rsp_msg.pdvs[0].data)
        assert rq_cmd.int_value(m.TAG_COMMAND_FIELD) == m.C_ECHO_RQ == 0x0030
        assert rq_cmd.int_value(m.TAG_DATA_SET_TYPE) == m.NO_DATA_SET == 0x0101
        assert rq_cmd.text(m.TAG_AFFECTED_SOP_CLASS) == VERIFICATION
        assert rsp_cmd.int_value(m.TAG_COMMAND_FIELD) == (m.C_ECHO_RQ | m.RSP_BIT)
        assert rsp_cmd.int_value(m.TAG_STATUS) == m.STATUS_SUCCESS == 0x0000

        # Live exchange through a recording proxy, byte-compared frame by frame.
        scp = net.serve("127.0.0.1", 0, params["called_ae"],
                        net.Handlers(on_echo=lambda ctx: 0x0000),
                        max_pdu_length=params["max_pdu_length"])
        proxy = _RecordingProxy(scp.port)
        try:
            assoc = net.associate(
                "127.0.0.1", proxy.port,
                called_ae=params["called_ae"], calling_ae=params["calling_ae"],
                contexts=[PresentationContext(
                    params["context_id"], params["abstract_syntax"],
                    (params["transfer_syntax"],))],
                connect_timeout=2.0, dimse_timeout=5.0,
                max_pdu_length=params["max_pdu_length"],
                implementation_class_uid=params["implementation_class_uid"],
                implementation_version_name=params["implementation_version_name"])
            status = net.c_echo(assoc)
            assert status.is_success
            assoc.release()
            proxy.wait()
        finally:
            scp.stop()

        got_scu = _split_frames(bytes(proxy.to_server))
        got_scp = _split_frames(bytes(proxy.to_client))
        assert got_scu == expected_scu, "SCU-side frames differ from golden"
        assert got_scp == expected_scp, "SCP-side frames differ from golden"


# --- 3. end-to-end loopback ---------------------------------------------------

def test_end_to_end_loopback(tmp_path):
    with criterion("end-to-end loopback (echo, query, retrieve 5 files, <30s)"):
        started = time.monotonic()
        mock = seed(standard_fixture(), dimse_timeout=5.0)
        sink = start_store_sink(tmp_path / "out", dimse_timeout=5.0)
        try:
            mock.register_ae(sink.ae_title, "127.0.0.1", sink.port)
            station = StationConfig("MockA", mock.ae_title, "127.0.0.1", mock.port)

            (status,) = echo_all([station], connect_timeout=2, dimse_timeout=5)
            assert status.reachable

            tree = query_stations(
                [station], QueryFilters(patient=PatientFilters(patient_id="P001")),
                connect_timeout=2, dimse_timeout=5)
            (study,) = tree.studies
            assert study.study_instance_uid == "1.2.3.1"
            assert [(s.series_instance_uid, s.instance_count)
                    for s in study.series] == [("1.2.3.1.1", 3), ("1.2.3.1.2", 2)]

            report = retrieve_study(
                station, "1.2.3.1",
                DestConfig(output_root=sink.output_root, store_ae=sink.ae_title),
                connect_timeout=2, dimse_timeout=5)
            assert (report.expected, report.completed, report.failed) == (5, 5, 0)

            files = sorted(p.relative_to(sink.output_root).as_posix()
                           for p in sink.output_root.rglob("*.dcm"))
            assert files == [
                "1.2.3.1/1.2.3.1.1/1.2.3.1.1.1.dcm",
                "1.2.3.1/1.2.3.1.1/1.2.3.1.1.2.dcm",
                "1.2.3.1/1.2.3.1.1/1.2.3.1.1.3.dcm",
                "1.2.3.1/1.2.3.1.2/1.2.3.1.2.1.dcm",
                "1.2.3.1/1.2.3.1.2/1.2.3.1.2.2.dcm",
            ]
            assert len(files) == report.completed  # conservation
        finally:
            sink.stop()
            mock.stop()
        elapsed = time.monotonic() - started
        assert elapsed < 30.0, f"took {elapsed:.2f}s"


# --- 4. fault tolerance -------------------------------------------------------

def test_fault_tolerance(tmp_path):
    with criterion("fault tolerance (failed transfer, retry, station down)"):
        mock = seed(standard_fixture(), dimse_timeout=5.0)
        gw = Gateway(tmp_path / "data", admin_password="password", store_port=0)
        app = create_app(gw)
        try:
            with TestClient(app) as client:
                token = client.post("/login", json={
                    "username": "admin", "password": "password"}).json()["token"]
                headers = {"Authorization": f"Bearer {token}"}
                client.post("/stations", json={
                    "name": "MockA", "ae_title": "MOCKPACS",
                    "host": "127.0.0.1", "port": mock.port}, headers=headers)
                mock.register_ae(gw.store_ae, "127.0.0.1", gw.bound_store_port)

                mock.set_fault_plan(FaultPlan(fail_nth_store=2))
                job_id = client.post("/retrieve", json={
                    "scope": "study", "station": "MockA",
                    "study_uid": "1.2.3.1"}, headers=headers).json()["job_id"]
                deadline = time.time() + 20
                while True:
                    doc = client.get(f"/jobs/{job_id}", headers=headers).json()
                    if doc["state"] in ("completed", "failed"):
                        break
                    assert time.time() < deadline
                    time.sleep(0.02)
                assert doc["state"] == "failed"
                assert doc["report"]["completed"] == 4
                assert doc["report"]["failed"] == 1
                files_written = sum(e["files_written"]
                                    for e in doc["report"]["per_series"])
                assert files_written == 4
                assert len(list(gw.output_root.rglob("*.dcm"))) == 4

                mock.set_fault_plan(None)
                retry_id = client.post("/retrieve", json={
                    "scope": "study", "station": "MockA",
                    "study_uid": "1.2.3.1"}, headers=headers).json()["job_id"]
                assert retry_id != job_id
                while True:
                    doc = client.get(f"/jobs/{retry_id}", headers=headers).json()
                    if doc["state"] in ("completed", "failed"):
                        break
                    assert time.time() < deadline
                    time.sleep(0.02)
                assert doc["state"] == "completed"
                assert doc["report"]["completed"] == 5

            # Station down during query-all: partial results + one error.
            station_a = StationConfig("MockA", "MOCKPACS", "127.0.0.1", mock.port)
            station_down = StationConfig("Down", "GONE", "127.0.0.1", free_port())
            tree = query_stations([station_a, station_down], QueryFilters(),
                                  connect_timeout=1.0, dimse_timeout=5.0)
            assert len(tree.studies) == 1
            assert len(tree.errors) == 1
            assert tree.errors[0].station.name == "Down"
        finally:
            mock.stop()


# --- 5. multi-station fan-out ---------------------------------------------------

def test_multi_station_fanout():
    with criterion("multi-station fan-out (provenance, isolation)"):
        from pacsbridge.engine.tree import _study_doc

        mock_a = seed(standard_fixture(), dimse_timeout=5.0)
        fixture_b = Fixture(instances=[make_instance(
            patient_name="ROE^JANE", patient_id="P002", study_uid="4.5.6",
            series_uid="4.5.6.1", sop_uid=f"4.5.6.1.{n}", modality="US",
            instance_number=n, sop_class=CT_IMAGE_STORAGE) for n in (1, 2)])
        mock_b = seed(fixture_b, ae_title="MOCKB", dimse_timeout=5.0)
        try:
            station_a = StationConfig("MockA", "MOCKPACS", "127.0.0.1", mock_a.port)
            station_b = StationConfig("MockB", "MOCKB", "127.0.0.1", mock_b.port)

            tree = query_stations([station_a, station_b], QueryFilters(),
                                  connect_timeout=2.0, dimse_timeout=5.0)
            assert len(tree.studies) == 2 and not tree.errors
            by_uid = {s.study_instance_uid: s for s in tree.studies}
            assert by_uid["1.2.3.1"].station.name == "MockA"
            assert by_uid["4.5.6"].station.name == "MockB"
            subtree_a_before = _study_doc(by_uid["1.2.3.1"])

            mock_b.stop()
            tree2 = query_stations([station_a, station_b], QueryFilters(),
                                   connect_timeout=1.0, dimse_timeout=5.0)
            assert [s.study_instance_uid for s in tree2.studies] == ["1.2.3.1"]
            assert _study_doc(tree2.studies[0]) == subtree_a_before
            assert [e.station.name for e in tree2.errors] == ["MockB"]
        finally:
            mock_a.stop()
            mock_b.stop()


# --- 6. windowing oracle -------------------------------------------------------

def test_windowing_oracle():
    with criterion("windowing oracle (gradient frame, boundaries, monotone 1e5)"):
        # Full-frame equality on the gradient fixture with the default window.
        ds = gradient_instance()
        buf = extract_pixels(ds)
        params = resolve_window(ds, buf)
        out = apply_windowing(buf, params)
        for r in range(16):
            for c in range(16):
                expected = brute_force_window(r * 16 + c, params.center,
                                              params.width)
                assert out[r, c] == expected, (r, c)

        # Stated boundary cases at c=40, w=400.
        boundary = PixelBuffer(1, 3, 1, 16, 16, 1, "MONOCHROME2",
                               np.asarray([[-160, 240, 40]], dtype=np.int16))
        assert apply_windowing(boundary,
                               WindowParams(40, 400)).tolist() == [[0, 255, 128]]

        # Monotonicity over 1e5 random samples.
        rng = np.random.default_rng(2024)
        for _ in range(5):
            center = float(rng.uniform(-2000, 2000))
            width = float(rng.uniform(1, 4000))
            xs = np.sort(rng.uniform(-5000, 5000, size=100_000))
            frame = PixelBuffer(1, xs.size, 1, 16, 16, 1, "MONOCHROME2",
                                xs.reshape(1, -1))
            y = apply_windowing(frame, WindowParams(center, width)).reshape(-1)
            assert np.all(np.diff(y.astype(np.int16)) >= 0)
            assert y.min() >= 0 and y.max() <= 255


# --- 7. preview ordering -------------------------------------------------------

def test_preview_ordering_and_determinism(tmp_path):
    with criterion("preview ordering (shuffled input, deterministic masters)"):
        from pacsbridge.dicom import FileMeta, write_part10_file

        series_dir = tmp_path / "study" / "series"
        series_dir.mkdir(parents=True)
        numbers = [4, 1, 5, 3, 2]
        for i, number in enumerate(numbers):
            sop = f"2.2.{i}"
            inst = gradient_instance(sop=sop, number=number, series="2.2")
            blob = write_part10_file(
                FileMeta(EXPLICIT_VR_LE, CT_IMAGE_STORAGE, sop), inst)
            (series_dir / f"{sop}.dcm").write_bytes(blob)

        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        manifest_a = export_series(series_dir, out_a)
        manifest_b = export_series(series_dir, out_b)

        assert [e["instance_number"] for e in manifest_a["entries"]] == [1, 2, 3, 4, 5]
        assert [e["files"]["lossless"] for e in manifest_a["entries"]] == \
            [f"img_{i:04d}.pgm" for i in range(1, 6)]
        assert manifest_a == manifest_b
        for i in range(1, 6):
            name = f"img_{i:04d}.pgm"
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


# --- 8. auth -------------------------------------------------------------------

def test_auth_criteria(tmp_path, mock_pacs):
    with criterion("auth (SHA-256 oracle, no plaintext, admin-only, route audit)"):
        assert hash_password("password") == \
            "5e884898da28047151d0e56f8dc6292773603d0d6aabbdd62a11ef721d1542d8"

        gw = Gateway(tmp_path / "data", admin_password="password", store_port=0)
        app = create_app(gw)
        with TestClient(app) as client:
            ok = client.post("/login", json={"username": "admin",
                                             "password": "password"})
            assert ok.status_code == 200
            headers = {"Authorization": f"Bearer {ok.json()['token']}"}

            for bad in ({"username": "admin", "password": "wrong"},
                        {"username": "ghost", "password": "password"}):
                response = client.post("/login", json=bad)
                assert response.status_code == 401

            created = client.post("/users", json={"username": "tech1",
                                                  "password": "pw-tech-1"},
                                  headers=headers)
            assert created.status_code == 201
            login = client.post("/login", json={"username": "tech1",
                                                "password": "pw-tech-1"})
            user_headers = {"Authorization": f"Bearer {login.json()['token']}"}
            refused = client.post("/users", json={"username": "x",
                                                  "password": "y"},
                                  headers=user_headers)
            assert refused.status_code == 403

            # Store scan: only 64-hex hashes, no plaintext of any password
            # anywhere among the stored values.
            doc = json.loads((gw.data_dir / "users.json").read_text())
            stored_values = [str(v) for user in doc["users"]
                             for v in user.values()]
            for password in ("password", "pw-tech-1"):
                assert not any(password in value for value in stored_values)
            for user in doc["users"]:
                assert len(user["password_hash"]) == 64
                assert set(user["password_hash"]) <= set("0123456789abcdef")

            # Route audit: everything except login/health rejects anonymous
            # and expired sessions.
            exempt = {"/login", "/health"}
            audited = 0
            for route in app.routes:
                path = getattr(route, "path", None)
                methods = getattr(route, "methods", None)
                if not path or not methods or path in exempt:
                    continue
                url = (path.replace("{job_id}", "x")
                           .replace("{study_uid}", "1.2.3.1")
                           .replace("{series_uid}", "1.2.3.1.1")
                           .replace("{name}", "img_0001.jpg"))
                for method in methods - {"HEAD", "OPTIONS"}:
                    assert client.request(method, url).status_code == 401
                    audited += 1
            assert audited >= 12

            token = headers["Authorization"].removeprefix("Bearer ")
            gw.sessions.expire_now(token)
            assert client.get("/stations", headers=headers).status_code == 401


# --- 9. echo-all latency bound --------------------------------------------------

def test_echo_all_latency_bound(mock_pacs):
    with criterion("echo-all latency (5 stations, 1 live, <= connect+2s)"):
        connect_timeout = 2.0
        stations = [StationConfig("Live", "MOCKPACS", "127.0.0.1", mock_pacs.port)]
        stations += [StationConfig(f"Closed{i}", "GONE", "127.0.0.1", free_port())
                     for i in range(4)]
        started = time.monotonic()
        statuses = echo_all(stations, connect_timeout=connect_timeout,
                            dimse_timeout=5.0)
        elapsed = time.monotonic() - started
        assert [s.reachable for s in statuses] == [True, False, False, False, False]
        assert elapsed <= connect_timeout + 2.0, f"took {elapsed:.2f}s"
