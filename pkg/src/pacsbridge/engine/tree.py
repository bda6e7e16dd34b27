"""Hierarchical query results with station provenance and action state."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..dicom import DataSet, Tag, uids
from ..net import associate, c_find, default_contexts
from .filters import QueryFilters, build_identifier
from .stations import StationConfig

TAG_STUDY_UID = Tag(0x0020, 0x000D)
TAG_SERIES_UID = Tag(0x0020, 0x000E)


class AllStationsFailedError(Exception):
    """Every queried station errored out."""

    def __init__(self, errors: list["StationError"]):
        self.errors = errors
        detail = "; ".join(f"{e.station.name}: {e.message}" for e in errors)
        super().__init__(f"all stations failed: {detail}")


@dataclass
class NodeActions:
    retrieve_enabled: bool = True
    preview_enabled: bool = False
    open_enabled: bool = False
    failed_mark: bool = False


@dataclass
class SeriesNode:
    series_instance_uid: str
    modality: str
    series_number: str
    series_description: str
    instance_count: int | None
    actions: NodeActions = field(default_factory=NodeActions)


@dataclass
class StudyNode:
    station: StationConfig
    study_instance_uid: str
    study_date: str
    study_description: str
    patient_name: str
    patient_id: str
    accession_number: str
    custom_values: dict[Tag, str] = field(default_factory=dict)
    series: list[SeriesNode] = field(default_factory=list)
    actions: NodeActions = field(default_factory=NodeActions)


@dataclass
class StationError:
    station: StationConfig
    message: str


@dataclass
class ResultTree:
    studies: list[StudyNode] = field(default_factory=list)
    errors: list[StationError] = field(default_factory=list)

    def to_document(self) -> dict:
        return {
            "studies": [_study_doc(s) for s in self.studies],
            "errors": [{"station": e.station.name, "message": e.message}
                       for e in self.errors],
        }


def _actions_doc(a: NodeActions) -> dict:
    return {
        "retrieve_enabled": a.retrieve_enabled,
        "preview_enabled": a.preview_enabled,
        "open_enabled": a.open_enabled,
        "failed_mark": a.failed_mark,
    }


def _study_doc(node: StudyNode) -> dict:
    return {
        "station": {
            "name": node.station.name,
            "ae_title": node.station.ae_title,
            "host": node.station.host,
            "port": node.station.port,
        },
        "study_instance_uid": node.study_instance_uid,
        "study_date": node.study_date,
        "study_description": node.study_description,
        "patient_name": node.patient_name,
        "patient_id": node.patient_id,
        "accession_number": node.accession_number,
        "custom_values": {str(tag): value
                          for tag, value in node.custom_values.items()},
        "series": [{
            "series_instance_uid": s.series_instance_uid,
            "modality": s.modality,
            "series_number": s.series_number,
            "series_description": s.series_description,
            "instance_count": s.instance_count,
            "actions": _actions_doc(s.actions),
        } for s in node.series],
        "actions": _actions_doc(node.actions),
    }


def _study_node(station: StationConfig, rsp: DataSet,
                custom_tags: list[Tag]) -> StudyNode:
    return StudyNode(
        station=station,
        study_instance_uid=rsp.text(TAG_STUDY_UID),
        study_date=rsp.text(Tag(0x0008, 0x0020)),
        study_description=rsp.text(Tag(0x0008, 0x1030)),
        patient_name=rsp.text(Tag(0x0010, 0x0010)),
        patient_id=rsp.text(Tag(0x0010, 0x0020)),
        accession_number=rsp.text(Tag(0x0008, 0x0050)),
        custom_values={tag: rsp.text(tag) for tag in custom_tags},
    )


def _series_node(rsp: DataSet) -> SeriesNode:
    count = rsp.text(Tag(0x0020, 0x1209))
    return SeriesNode(
        series_instance_uid=rsp.text(TAG_SERIES_UID),
        modality=rsp.text(Tag(0x0008, 0x0060)),
        series_number=rsp.text(Tag(0x0020, 0x0011)),
        series_description=rsp.text(Tag(0x0008, 0x103E)),
        instance_count=int(count) if count else None,
    )


def _query_station(station: StationConfig, filters: QueryFilters,
                   exact_match: bool, calling_ae: str,
                   connect_timeout: float, dimse_timeout: float) -> list[StudyNode]:
    custom_tags = [tag for tag, _ in filters.custom]
    assoc = associate(
        station.host, station.port,
        called_ae=station.ae_title, calling_ae=calling_ae,
        contexts=default_contexts(uids.STUDY_ROOT_QR_FIND),
        connect_timeout=connect_timeout, dimse_timeout=dimse_timeout)
    try:
        study_rsps: list[DataSet] = []
        status = c_find(assoc,
                        build_identifier(filters, "STUDY", exact_match=exact_match),
                        study_rsps.append)
        if not status.is_success:
            raise RuntimeError(f"study query failed with status {status}"
                               + (f": {status.comment}" if status.comment else ""))
        nodes = []
        for rsp in study_rsps:
            node = _study_node(station, rsp, custom_tags)
            series_rsps: list[DataSet] = []
            status = c_find(
                assoc,
                build_identifier(filters, "SERIES", exact_match=exact_match,
                                 study_uid=node.study_instance_uid),
                series_rsps.append)
            if not status.is_success:
                raise RuntimeError(f"series query failed with status {status}")
            node.series = [_series_node(r) for r in series_rsps]
            nodes.append(node)
        return nodes
    finally:
        assoc.release()


def query_stations(targets: list[StationConfig], filters: QueryFilters, *,
                   exact_match: bool = False, calling_ae: str = "BRIDGE",
                   connect_timeout: float = 5.0,
                   dimse_timeout: float = 30.0) -> ResultTree:
    """Fan a study+series query out to every target and merge the results.

    A failing station contributes an error entry without discarding the
    other stations' studies; only a total wipe-out raises."""
    filters.validate()
    tree = ResultTree()
    if not targets:
        return tree
    with ThreadPoolExecutor(max_workers=len(targets)) as pool:
        futures = {pool.submit(_query_station, station, filters, exact_match,
                               calling_ae, connect_timeout, dimse_timeout): station
                   for station in targets}
        results: dict[int, list[StudyNode]] = {}
        for future, station in futures.items():
            try:
                results[id(future)] = future.result()
            except Exception as exc:
                tree.errors.append(StationError(station, str(exc)))
        for future in futures:
            if id(future) in results:
                tree.studies.extend(results[id(future)])
    if targets and len(tree.errors) == len(targets):
        raise AllStationsFailedError(tree.errors)
    return tree
