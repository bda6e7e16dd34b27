"""pacsbridge: query, retrieve, store and preview DICOM studies across PACS stations."""

__version__ = "0.1.0"
