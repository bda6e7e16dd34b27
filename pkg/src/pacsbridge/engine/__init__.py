"""Multi-station query/retrieve orchestration."""

from .filters import PatientFilters, QueryFilters, SeriesFilters, StudyFilters, build_identifier
from .retrieve import DestConfig, RetrieveReport, retrieve_series, retrieve_study
from .stations import StationConfig, StationStatus, echo_all
from .storesink import (
    DEFAULT_STORE_AE,
    DEFAULT_STORE_PORT,
    StoreSink,
    instance_path,
    start_store_sink,
)
from .tree import (
    AllStationsFailedError,
    NodeActions,
    ResultTree,
    SeriesNode,
    StationError,
    StudyNode,
    query_stations,
)

__all__ = [
    "AllStationsFailedError",
    "DEFAULT_STORE_AE",
    "DEFAULT_STORE_PORT",
    "DestConfig",
    "NodeActions",
    "PatientFilters",
    "QueryFilters",
    "ResultTree",
    "RetrieveReport",
    "SeriesFilters",
    "SeriesNode",
    "StationConfig",
    "StationError",
    "StationStatus",
    "StoreSink",
    "StudyFilters",
    "StudyNode",
    "build_identifier",
    "echo_all",
    "instance_path",
    "query_stations",
    "retrieve_series",
    "retrieve_study",
    "start_store_sink",
]
