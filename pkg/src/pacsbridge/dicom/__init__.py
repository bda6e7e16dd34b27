"""DICOM data model, data dictionary subset and binary codecs."""

from .dataset import DataElement, DataSet, pad_value
from .dictionary import DictEntry, all_entries, lookup, search_keywords, vr_for_tag
from .errors import CodecError, DicomError, FileFormatError, UnsupportedTransferSyntaxError
from .codec import encode_dataset, parse_dataset
from .filefmt import FileMeta, read_part10_file, write_part10_file
from .tags import Tag
from .vr import VR

__all__ = [
    "CodecError",
    "DataElement",
    "DataSet",
    "DicomError",
    "DictEntry",
    "FileFormatError",
    "FileMeta",
    "Tag",
    "UnsupportedTransferSyntaxError",
    "VR",
    "all_entries",
    "encode_dataset",
    "lookup",
    "pad_value",
    "parse_dataset",
    "read_part10_file",
    "search_keywords",
    "vr_for_tag",
    "write_part10_file",
]
