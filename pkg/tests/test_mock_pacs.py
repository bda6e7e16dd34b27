"""Mock PACS: fixture validation, matching semantics, move execution."""

import random
import re

import pytest

import pacsbridge.net as net
from pacsbridge.dicom import DataSet, Tag, uids
from pacsbridge.dicom.uids import CT_IMAGE_STORAGE
from pacsbridge.engine import start_store_sink
from pacsbridge.mockpacs import (
    FaultPlan,
    fixture_from_manifest,
    make_instance,
    match,
    resolve_instances,
    seed,
    standard_fixture,
)

from conftest import TEST_TIMEOUTS, free_port


def study_identifier(**keys) -> DataSet:
    ds = DataSet()
    ds.set_text("QueryRetrieveLevel", "STUDY")
    for keyword, value in keys.items():
        ds.set_text(keyword, value)
    ds.set_empty("StudyInstanceUID")
    return ds


class TestFixture:
    def test_standard_fixture_shape(self):
        fx = standard_fixture()
        assert len(fx.instances) == 5
        sops = [ds.text("SOPInstanceUID") for ds in fx.instances]
        assert sops == ["1.2.3.1.1.1", "1.2.3.1.1.2", "1.2.3.1.1.3",
                        "1.2.3.1.2.1", "1.2.3.1.2.2"]
        pixels = fx.instances[0].get(Tag(0x7FE0, 0x0010)).value
        assert len(pixels) == 256
        assert pixels[0] == 0 and pixels[255] == 255
        assert pixels[16] == 16  # row 1, col 0

    def test_duplicate_sop_rejected_at_seed(self):
        fx = standard_fixture()
        fx.instances.append(fx.instances[0].copy())
        with pytest.raises(ValueError, match="duplicate SOPInstanceUID"):
            seed(fx)

    def test_missing_required_tag_rejected(self):
        fx = standard_fixture()
        fx.instances[0].remove("Modality")
        with pytest.raises(ValueError, match="Modality"):
            fx.validate()

    def test_empty_fixture_serves_zero_matches(self):
        from pacsbridge.mockpacs import Fixture

        mock = seed(Fixture(), dimse_timeout=5.0)
        try:
            assoc = net.associate("127.0.0.1", mock.port, called_ae="MOCKPACS",
                                  calling_ae="TESTSCU",
                                  contexts=net.default_contexts(uids.STUDY_ROOT_QR_FIND),
                                  **TEST_TIMEOUTS)
            matches = []
            status = net.c_find(assoc, study_identifier(), matches.append)
            assert status.is_success and matches == []
            assoc.release()
        finally:
            mock.stop()

    def test_port_in_use_rejected(self, mock_pacs):
        with pytest.raises(OSError):
            seed(standard_fixture(), port=mock_pacs.port)

    def test_manifest_round_trip(self):
        doc = {
            "ae_registry": {"SINK": ["127.0.0.1", 10104]},
            "instances": [{
                "PatientName": "ROE^JANE", "PatientID": "P002",
                "StudyInstanceUID": "9.9.1", "SeriesInstanceUID": "9.9.1.1",
                "SOPInstanceUID": "9.9.1.1.1", "SOPClassUID": CT_IMAGE_STORAGE,
                "Modality": "CT", "InstanceNumber": "1",
                "(0008,0090)": "REF^DOC",
                "pixels": {"rows": 8, "cols": 8},
            }],
        }
        fx = fixture_from_manifest(doc)
        assert fx.ae_registry == {"SINK": ("127.0.0.1", 10104)}
        assert fx.instances[0].text(Tag(0x0008, 0x0090)) == "REF^DOC"
        assert len(fx.instances[0].get(Tag(0x7FE0, 0x0010)).value) == 64


class TestMatching:
    def setup_method(self):
        self.instances = standard_fixture().instances

    def test_empty_fixture_matches_nothing(self):
        assert match([], study_identifier()) == []

    def test_prefix_wildcard(self):
        hits = match(self.instances, study_identifier(PatientName="DOE^*"))
        assert [h.text("StudyInstanceUID") for h in hits] == ["1.2.3.1"]

    def test_wildcard_is_case_sensitive(self):
        assert match(self.instances, study_identifier(PatientName="doe^*")) == []

    def test_question_mark_wildcard(self):
        hits = match(self.instances, study_identifier(PatientID="P0?1"))
        assert len(hits) == 1

    def test_date_range_inclusive(self):
        assert len(match(self.instances,
                         study_identifier(StudyDate="20240101-20240131"))) == 1
        assert len(match(self.instances,
                         study_identifier(StudyDate="20240102-20240102"))) == 1
        assert match(self.instances,
                     study_identifier(StudyDate="20240103-20240131")) == []

    def test_open_ended_ranges(self):
        assert len(match(self.instances, study_identifier(StudyDate="20240101-"))) == 1
        assert len(match(self.instances, study_identifier(StudyDate="-20240101"))) == 0
        assert len(match(self.instances, study_identifier(StudyDate="-20241231"))) == 1

    def test_uid_list(self):
        ds = study_identifier()
        ds.set_text("StudyInstanceUID", "1.2.3.9\\1.2.3.1")
        assert len(match(self.instances, ds)) == 1

    def test_trailing_space_insensitive(self):
        assert len(match(self.instances, study_identifier(PatientID="P001 "))) == 1

    def test_series_level_under_study(self):
        ds = DataSet()
        ds.set_text("QueryRetrieveLevel", "SERIES")
        ds.set_text("StudyInstanceUID", "1.2.3.1")
        ds.set_text("Modality", "CT")
        ds.set_empty("SeriesInstanceUID")
        hits = match(self.instances, ds)
        assert [h.text("SeriesInstanceUID") for h in hits] == ["1.2.3.1.1"]

    def test_requested_unknown_key_echoed_empty(self):
        ds = study_identifier()
        ds.set_empty("StationName")
        (hit,) = match(self.instances, ds)
        el = hit.get("StationName")
        assert el is not None and el.is_empty()

    def test_image_level_counts(self):
        ds = DataSet()
        ds.set_text("QueryRetrieveLevel", "IMAGE")
        ds.set_text("StudyInstanceUID", "1.2.3.1")
        ds.set_text("SeriesInstanceUID", "1.2.3.1.2")
        ds.set_empty("SOPInstanceUID")
        hits = match(self.instances, ds)
        assert sorted(h.text("SOPInstanceUID") for h in hits) == \
            ["1.2.3.1.2.1", "1.2.3.1.2.2"]

    def test_bad_key_matches_nothing(self):
        assert match(self.instances, study_identifier(StationName="NOWHERE")) == []

    def test_match_is_deterministic(self):
        ident = study_identifier(PatientName="DOE^*")
        first = match(self.instances, ident)
        second = match(self.instances, ident)
        assert first == second

    def test_wildcard_agrees_with_regex_brute_force(self):
        rng = random.Random(424242)
        alphabet = "ABC^"
        pattern_alphabet = "ABC^*?"
        for _ in range(200):
            instances = []
            for i in range(rng.randint(1, 50)):
                name = "".join(rng.choice(alphabet)
                               for _ in range(rng.randint(0, 6)))
                instances.append(make_instance(
                    patient_name=name, patient_id=f"P{i}",
                    study_uid=f"77.{i}", series_uid=f"77.{i}.1",
                    sop_uid=f"77.{i}.1.1", modality="CT", instance_number=1,
                    sop_class=CT_IMAGE_STORAGE))
            pattern = "".join(rng.choice(pattern_alphabet)
                              for _ in range(rng.randint(1, 5)))
            regex = re.compile("".join(
                ".*" if ch == "*" else "." if ch == "?" else re.escape(ch)
                for ch in pattern), re.DOTALL)
            expected = {ds.text("StudyInstanceUID") for ds in instances
                        if regex.fullmatch(ds.text("PatientName"))}
            got = {h.text("StudyInstanceUID")
                   for h in match(instances, study_identifier(PatientName=pattern))}
            assert got == expected, f"pattern {pattern!r}"

    def test_image_match_count_equals_move_conservation(self):
        ds = DataSet()
        ds.set_text("QueryRetrieveLevel", "SERIES")
        ds.set_text("StudyInstanceUID", "1.2.3.1")
        ds.set_text("SeriesInstanceUID", "1.2.3.1.1")
        assert len(resolve_instances(self.instances, ds)) == 3


class TestMoveExecution:
    def _move_identifier(self, **keys):
        ds = DataSet()
        for keyword, value in keys.items():
            ds.set_text(keyword, value)
        return ds

    def test_single_image_move(self, mock_pacs, tmp_path):
        sink = start_store_sink(tmp_path, dimse_timeout=5.0)
        mock_pacs.register_ae("SINK", "127.0.0.1", sink.port)
        try:
            assoc = net.associate("127.0.0.1", mock_pacs.port,
                                  called_ae="MOCKPACS", calling_ae="TESTSCU",
                                  contexts=net.default_contexts(uids.STUDY_ROOT_QR_MOVE),
                                  **TEST_TIMEOUTS)
            outcome = net.c_move(assoc, self._move_identifier(
                QueryRetrieveLevel="IMAGE", StudyInstanceUID="1.2.3.1",
                SeriesInstanceUID="1.2.3.1.1", SOPInstanceUID="1.2.3.1.1.2"),
                "SINK")
            assert outcome.completed == 1 and outcome.failed == 0
            assert outcome.is_success
            assoc.release()
            stored = list(tmp_path.rglob("*.dcm"))
            assert [p.name for p in stored] == ["1.2.3.1.1.2.dcm"]
        finally:
            sink.stop()

    def test_fail_nth_store_counts(self, mock_pacs, tmp_path):
        sink = start_store_sink(tmp_path, dimse_timeout=5.0)
        mock_pacs.register_ae("SINK", "127.0.0.1", sink.port)
        mock_pacs.set_fault_plan(FaultPlan(fail_nth_store=2))
        try:
            assoc = net.associate("127.0.0.1", mock_pacs.port,
                                  called_ae="MOCKPACS", calling_ae="TESTSCU",
                                  contexts=net.default_contexts(uids.STUDY_ROOT_QR_MOVE),
                                  **TEST_TIMEOUTS)
            outcome = net.c_move(assoc, self._move_identifier(
                QueryRetrieveLevel="SERIES", StudyInstanceUID="1.2.3.1",
                SeriesInstanceUID="1.2.3.1.1"), "SINK")
            assert outcome.completed == 2 and outcome.failed == 1
            assert outcome.status.code == 0xB000
            assert not outcome.is_success
            assoc.release()
            assert len(list(tmp_path.rglob("*.dcm"))) == 2
        finally:
            sink.stop()

    def test_unreachable_destination_all_failed(self, mock_pacs):
        mock_pacs.register_ae("DEADSINK", "127.0.0.1", free_port())
        assoc = net.associate("127.0.0.1", mock_pacs.port,
                              called_ae="MOCKPACS", calling_ae="TESTSCU",
                              contexts=net.default_contexts(uids.STUDY_ROOT_QR_MOVE),
                              **TEST_TIMEOUTS)
        outcome = net.c_move(assoc, self._move_identifier(
            QueryRetrieveLevel="STUDY", StudyInstanceUID="1.2.3.1"), "DEADSINK")
        assert outcome.completed == 0 and outcome.failed == 5
        assert not outcome.is_success
        assoc.release()

    def test_withheld_find_response_times_out(self):
        fixture = standard_fixture()
        fixture.fault_plan = FaultPlan(withhold_find_response=True)
        mock = seed(fixture, dimse_timeout=5.0)
        try:
            assoc = net.associate("127.0.0.1", mock.port, called_ae="MOCKPACS",
                                  calling_ae="TESTSCU",
                                  contexts=net.default_contexts(uids.STUDY_ROOT_QR_FIND),
                                  connect_timeout=2.0, dimse_timeout=0.6)
            with pytest.raises(net.DimseTimeoutError):
                net.c_find(assoc, study_identifier(), lambda ds: None)
            assoc.abort()
        finally:
            mock.stop()
