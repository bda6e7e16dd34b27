"""Exception types for DICOM data handling."""


class DicomError(Exception):
    """Base class for all DICOM data-layer errors."""


class CodecError(DicomError):
    """Malformed element stream: truncation, overrun or odd lengths."""


class FileFormatError(DicomError):
    """Not a readable DICOM Part 10 file."""


class UnsupportedTransferSyntaxError(DicomError):
    """Transfer syntax outside the supported native encodings."""

    def __init__(self, uid: str):
        self.uid = uid
        super().__init__(f"unsupported transfer syntax: {uid!r}")
