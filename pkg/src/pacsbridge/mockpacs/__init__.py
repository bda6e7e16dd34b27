"""Seedable in-memory PACS for hermetic end-to-end testing."""

from .fixture import (
    FaultPlan,
    Fixture,
    fixture_from_manifest,
    gradient_pixels,
    load_manifest,
    make_instance,
    standard_fixture,
)
from .matching import match, resolve_instances, value_matches
from .server import MockPacs, seed

__all__ = [
    "FaultPlan",
    "Fixture",
    "MockPacs",
    "fixture_from_manifest",
    "gradient_pixels",
    "load_manifest",
    "make_instance",
    "match",
    "resolve_instances",
    "seed",
    "standard_fixture",
    "value_matches",
]
