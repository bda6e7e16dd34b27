"""Embedded DICOM data dictionary subset.

Covers the command group, file-meta group and the common patient/study/
series/image attributes this project queries, stores and renders. Lookup
misses are values, not errors: callers get None and typically fall back
to VR UN.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tags import Tag
from .vr import VR


@dataclass(frozen=True)
class DictEntry:
    tag: Tag
    vr: VR
    keyword: str
    value_multiplicity: str


# (group, element, VR, keyword, VM)
_TABLE = (
    # Command set (group 0000)
    (0x0000, 0x0000, "UL", "CommandGroupLength", "1"),
    (0x0000, 0x0002, "UI", "AffectedSOPClassUID", "1"),
    (0x0000, 0x0003, "UI", "RequestedSOPClassUID", "1"),
    (0x0000, 0x0100, "US", "CommandField", "1"),
    (0x0000, 0x0110, "US", "MessageID", "1"),
    (0x0000, 0x0120, "US", "MessageIDBeingRespondedTo", "1"),
    (0x0000, 0x0600, "AE", "MoveDestination", "1"),
    (0x0000, 0x0700, "US", "Priority", "1"),
    (0x0000, 0x0800, "US", "CommandDataSetType", "1"),
    (0x0000, 0x0900, "US", "Status", "1"),
    (0x0000, 0x0901, "AT", "OffendingElement", "1-n"),
    (0x0000, 0x0902, "LO", "ErrorComment", "1"),
    (0x0000, 0x0903, "US", "ErrorID", "1"),
    (0x0000, 0x1000, "UI", "AffectedSOPInstanceUID", "1"),
    (0x0000, 0x1001, "UI", "RequestedSOPInstanceUID", "1"),
    (0x0000, 0x1020, "US", "NumberOfRemainingSuboperations", "1"),
    (0x0000, 0x1021, "US", "NumberOfCompletedSuboperations", "1"),
    (0x0000, 0x1022, "US", "NumberOfFailedSuboperations", "1"),
    (0x0000, 0x1023, "US", "NumberOfWarningSuboperations", "1"),
    (0x0000, 0x1030, "AE", "MoveOriginatorApplicationEntityTitle", "1"),
    (0x0000, 0x1031, "US", "MoveOriginatorMessageID", "1"),
    # File meta (group 0002)
    (0x0002, 0x0000, "UL", "FileMetaInformationGroupLength", "1"),
    (0x0002, 0x0001, "OB", "FileMetaInformationVersion", "1"),
    (0x0002, 0x0002, "UI", "MediaStorageSOPClassUID", "1"),
    (0x0002, 0x0003, "UI", "MediaStorageSOPInstanceUID", "1"),
    (0x0002, 0x0010, "UI", "TransferSyntaxUID", "1"),
    (0x0002, 0x0012, "UI", "ImplementationClassUID", "1"),
    (0x0002, 0x0013, "SH", "ImplementationVersionName", "1"),
    (0x0002, 0x0016, "AE", "SourceApplicationEntityTitle", "1"),
    # Group 0008
    (0x0008, 0x0005, "CS", "SpecificCharacterSet", "1-n"),
    (0x0008, 0x0008, "CS", "ImageType", "2-n"),
    (0x0008, 0x0012, "DA", "InstanceCreationDate", "1"),
    (0x0008, 0x0013, "TM", "InstanceCreationTime", "1"),
    (0x0008, 0x0014, "UI", "InstanceCreatorUID", "1"),
    (0x0008, 0x0016, "UI", "SOPClassUID", "1"),
    (0x0008, 0x0018, "UI", "SOPInstanceUID", "1"),
    (0x0008, 0x0020, "DA", "StudyDate", "1"),
    (0x0008, 0x0021, "DA", "SeriesDate", "1"),
    (0x0008, 0x0022, "DA", "AcquisitionDate", "1"),
    (0x0008, 0x0023, "DA", "ContentDate", "1"),
    (0x0008, 0x002A, "DT", "AcquisitionDateTime", "1"),
    (0x0008, 0x0030, "TM", "StudyTime", "1"),
    (0x0008, 0x0031, "TM", "SeriesTime", "1"),
    (0x0008, 0x0032, "TM", "AcquisitionTime", "1"),
    (0x0008, 0x0033, "TM", "ContentTime", "1"),
    (0x0008, 0x0050, "SH", "AccessionNumber", "1"),
    (0x0008, 0x0052, "CS", "QueryRetrieveLevel", "1"),
    (0x0008, 0x0054, "AE", "RetrieveAETitle", "1-n"),
    (0x0008, 0x0056, "CS", "InstanceAvailability", "1"),
    (0x0008, 0x0060, "CS", "Modality", "1"),
    (0x0008, 0x0061, "CS", "ModalitiesInStudy", "1-n"),
    (0x0008, 0x0064, "CS", "ConversionType", "1"),
    (0x0008, 0x0068, "CS", "PresentationIntentType", "1"),
    (0x0008, 0x0070, "LO", "Manufacturer", "1"),
    (0x0008, 0x0080, "LO", "InstitutionName", "1"),
    (0x0008, 0x0081, "ST", "InstitutionAddress", "1"),
    (0x0008, 0x0090, "PN", "ReferringPhysicianName", "1"),
    (0x0008, 0x0100, "SH", "CodeValue", "1"),
    (0x0008, 0x0102, "SH", "CodingSchemeDesignator", "1"),
    (0x0008, 0x0104, "LO", "CodeMeaning", "1"),
    (0x0008, 0x0201, "SH", "TimezoneOffsetFromUTC", "1"),
    (0x0008, 0x1010, "SH", "StationName", "1"),
    (0x0008, 0x1030, "LO", "StudyDescription", "1"),
    (0x0008, 0x1032, "SQ", "ProcedureCodeSequence", "1"),
    (0x0008, 0x103E, "LO", "SeriesDescription", "1"),
    (0x0008, 0x1040, "LO", "InstitutionalDepartmentName", "1"),
    (0x0008, 0x1048, "PN", "PhysiciansOfRecord", "1-n"),
    (0x0008, 0x1050, "PN", "PerformingPhysicianName", "1-n"),
    (0x0008, 0x1060, "PN", "NameOfPhysiciansReadingStudy", "1-n"),
    (0x0008, 0x1070, "PN", "OperatorsName", "1-n"),
    (0x0008, 0x1080, "LO", "AdmittingDiagnosesDescription", "1-n"),
    (0x0008, 0x1084, "SQ", "AdmittingDiagnosesCodeSequence", "1"),
    (0x0008, 0x1090, "LO", "ManufacturerModelName", "1"),
    (0x0008, 0x1110, "SQ", "ReferencedStudySequence", "1"),
    (0x0008, 0x1111, "SQ", "ReferencedPerformedProcedureStepSequence", "1"),
    (0x0008, 0x1115, "SQ", "ReferencedSeriesSequence", "1"),
    (0x0008, 0x1120, "SQ", "ReferencedPatientSequence", "1"),
    (0x0008, 0x1140, "SQ", "ReferencedImageSequence", "1"),
    (0x0008, 0x1150, "UI", "ReferencedSOPClassUID", "1"),
    (0x0008, 0x1155, "UI", "ReferencedSOPInstanceUID", "1"),
    (0x0008, 0x2111, "ST", "DerivationDescription", "1"),
    (0x0008, 0x9215, "SQ", "DerivationCodeSequence", "1"),
    # Group 0010
    (0x0010, 0x0010, "PN", "PatientName", "1"),
    (0x0010, 0x0020, "LO", "PatientID", "1"),
    (0x0010, 0x0021, "LO", "IssuerOfPatientID", "1"),
    (0x0010, 0x0022, "CS", "TypeOfPatientID", "1"),
    (0x0010, 0x0024, "SQ", "IssuerOfPatientIDQualifiersSequence", "1"),
    (0x0010, 0x0030, "DA", "PatientBirthDate", "1"),
    (0x0010, 0x0032, "TM", "PatientBirthTime", "1"),
    (0x0010, 0x0040, "CS", "PatientSex", "1"),
    (0x0010, 0x1000, "LO", "OtherPatientIDs", "1-n"),
    (0x0010, 0x1001, "PN", "OtherPatientNames", "1-n"),
    (0x0010, 0x1002, "SQ", "OtherPatientIDsSequence", "1"),
    (0x0010, 0x1005, "PN", "PatientBirthName", "1"),
    (0x0010, 0x1010, "AS", "PatientAge", "1"),
    (0x0010, 0x1020, "DS", "PatientSize", "1"),
    (0x0010, 0x1030, "DS", "PatientWeight", "1"),
    (0x0010, 0x1040, "LO", "PatientAddress", "1"),
    (0x0010, 0x1060, "PN", "PatientMotherBirthName", "1"),
    (0x0010, 0x2000, "LO", "MedicalAlerts", "1-n"),
    (0x0010, 0x2110, "LO", "Allergies", "1-n"),
    (0x0010, 0x2150, "LO", "CountryOfResidence", "1"),
    (0x0010, 0x2154, "SH", "PatientTelephoneNumbers", "1-n"),
    (0x0010, 0x2160, "SH", "EthnicGroup", "1"),
    (0x0010, 0x21A0, "CS", "SmokingStatus", "1"),
    (0x0010, 0x21B0, "LT", "AdditionalPatientHistory", "1"),
    (0x0010, 0x21C0, "US", "PregnancyStatus", "1"),
    (0x0010, 0x21D0, "DA", "LastMenstrualDate", "1"),
    (0x0010, 0x4000, "LT", "PatientComments", "1"),
    # Group 0018
    (0x0018, 0x0010, "LO", "ContrastBolusAgent", "1"),
    (0x0018, 0x0015, "CS", "BodyPartExamined", "1"),
    (0x0018, 0x0020, "CS", "ScanningSequence", "1-n"),
    (0x0018, 0x0021, "CS", "SequenceVariant", "1-n"),
    (0x0018, 0x0022, "CS", "ScanOptions", "1-n"),
    (0x0018, 0x0023, "CS", "MRAcquisitionType", "1"),
    (0x0018, 0x0050, "DS", "SliceThickness", "1"),
    (0x0018, 0x0060, "DS", "KVP", "1"),
    (0x0018, 0x0080, "DS", "RepetitionTime", "1"),
    (0x0018, 0x0081, "DS", "EchoTime", "1"),
    (0x0018, 0x0083, "DS", "NumberOfAverages", "1"),
    (0x0018, 0x0084, "DS", "ImagingFrequency", "1"),
    (0x0018, 0x0087, "DS", "MagneticFieldStrength", "1"),
    (0x0018, 0x0088, "DS", "SpacingBetweenSlices", "1"),
    (0x0018, 0x0090, "DS", "DataCollectionDiameter", "1"),
    (0x0018, 0x1000, "LO", "DeviceSerialNumber", "1"),
    (0x0018, 0x1004, "LO", "PlateID", "1"),
    (0x0018, 0x1020, "LO", "SoftwareVersions", "1-n"),
    (0x0018, 0x1030, "LO", "ProtocolName", "1"),
    (0x0018, 0x1100, "DS", "ReconstructionDiameter", "1"),
    (0x0018, 0x1110, "DS", "DistanceSourceToDetector", "1"),
    (0x0018, 0x1111, "DS", "DistanceSourceToPatient", "1"),
    (0x0018, 0x1120, "DS", "GantryDetectorTilt", "1"),
    (0x0018, 0x1130, "DS", "TableHeight", "1"),
    (0x0018, 0x1140, "CS", "RotationDirection", "1"),
    (0x0018, 0x1150, "IS", "ExposureTime", "1"),
    (0x0018, 0x1151, "IS", "XRayTubeCurrent", "1"),
    (0x0018, 0x1152, "IS", "Exposure", "1"),
    (0x0018, 0x1160, "SH", "FilterType", "1"),
    (0x0018, 0x1170, "IS", "GeneratorPower", "1"),
    (0x0018, 0x1190, "DS", "FocalSpots", "1-n"),
    (0x0018, 0x1200, "DA", "DateOfLastCalibration", "1-n"),
    (0x0018, 0x1201, "TM", "TimeOfLastCalibration", "1-n"),
    (0x0018, 0x1210, "SH", "ConvolutionKernel", "1-n"),
    (0x0018, 0x1250, "SH", "ReceiveCoilName", "1"),
    (0x0018, 0x1251, "SH", "TransmitCoilName", "1"),
    (0x0018, 0x1310, "US", "AcquisitionMatrix", "4"),
    (0x0018, 0x1312, "CS", "InPlanePhaseEncodingDirection", "1"),
    (0x0018, 0x1314, "DS", "FlipAngle", "1"),
    (0x0018, 0x1315, "CS", "VariableFlipAngleFlag", "1"),
    (0x0018, 0x1316, "DS", "SAR", "1"),
    (0x0018, 0x5100, "CS", "PatientPosition", "1"),
    (0x0018, 0x5101, "CS", "ViewPosition", "1"),
    # Group 0020
    (0x0020, 0x000D, "UI", "StudyInstanceUID", "1"),
    (0x0020, 0x000E, "UI", "SeriesInstanceUID", "1"),
    (0x0020, 0x0010, "SH", "StudyID", "1"),
    (0x0020, 0x0011, "IS", "SeriesNumber", "1"),
    (0x0020, 0x0012, "IS", "AcquisitionNumber", "1"),
    (0x0020, 0x0013, "IS", "InstanceNumber", "1"),
    (0x0020, 0x0020, "CS", "PatientOrientation", "2"),
    (0x0020, 0x0032, "DS", "ImagePositionPatient", "3"),
    (0x0020, 0x0037, "DS", "ImageOrientationPatient", "6"),
    (0x0020, 0x0052, "UI", "FrameOfReferenceUID", "1"),
    (0x0020, 0x0060, "CS", "Laterality", "1"),
    (0x0020, 0x0062, "CS", "ImageLaterality", "1"),
    (0x0020, 0x1002, "IS", "ImagesInAcquisition", "1"),
    (0x0020, 0x1040, "LO", "PositionReferenceIndicator", "1"),
    (0x0020, 0x1041, "DS", "SliceLocation", "1"),
    (0x0020, 0x1206, "IS", "NumberOfStudyRelatedSeries", "1"),
    (0x0020, 0x1208, "IS", "NumberOfStudyRelatedInstances", "1"),
    (0x0020, 0x1209, "IS", "NumberOfSeriesRelatedInstances", "1"),
    (0x0020, 0x4000, "LT", "ImageComments", "1"),
    (0x0020, 0x9056, "SH", "StackID", "1"),
    (0x0020, 0x9057, "UL", "InStackPositionNumber", "1"),
    # Group 0028
    (0x0028, 0x0002, "US", "SamplesPerPixel", "1"),
    (0x0028, 0x0004, "CS", "PhotometricInterpretation", "1"),
    (0x0028, 0x0006, "US", "PlanarConfiguration", "1"),
    (0x0028, 0x0008, "IS", "NumberOfFrames", "1"),
    (0x0028, 0x0010, "US", "Rows", "1"),
    (0x0028, 0x0011, "US", "Columns", "1"),
    (0x0028, 0x0030, "DS", "PixelSpacing", "2"),
    (0x0028, 0x0034, "IS", "PixelAspectRatio", "2"),
    (0x0028, 0x0100, "US", "BitsAllocated", "1"),
    (0x0028, 0x0101, "US", "BitsStored", "1"),
    (0x0028, 0x0102, "US", "HighBit", "1"),
    (0x0028, 0x0103, "US", "PixelRepresentation", "1"),
    (0x0028, 0x0106, "US", "SmallestImagePixelValue", "1"),
    (0x0028, 0x0107, "US", "LargestImagePixelValue", "1"),
    (0x0028, 0x0120, "US", "PixelPaddingValue", "1"),
    (0x0028, 0x0300, "CS", "QualityControlImage", "1"),
    (0x0028, 0x0301, "CS", "BurnedInAnnotation", "1"),
    (0x0028, 0x0302, "CS", "RecognizableVisualFeatures", "1"),
    (0x0028, 0x0A02, "CS", "PixelSpacingCalibrationType", "1"),
    (0x0028, 0x0A04, "LO", "PixelSpacingCalibrationDescription", "1"),
    (0x0028, 0x1040, "CS", "PixelIntensityRelationship", "1"),
    (0x0028, 0x1041, "SS", "PixelIntensityRelationshipSign", "1"),
    (0x0028, 0x1050, "DS", "WindowCenter", "1-n"),
    (0x0028, 0x1051, "DS", "WindowWidth", "1-n"),
    (0x0028, 0x1052, "DS", "RescaleIntercept", "1"),
    (0x0028, 0x1053, "DS", "RescaleSlope", "1"),
    (0x0028, 0x1054, "LO", "RescaleType", "1"),
    (0x0028, 0x1055, "LO", "WindowCenterWidthExplanation", "1-n"),
    (0x0028, 0x2110, "CS", "LossyImageCompression", "1"),
    (0x0028, 0x2112, "DS", "LossyImageCompressionRatio", "1-n"),
    (0x0028, 0x2114, "CS", "LossyImageCompressionMethod", "1-n"),
    # Group 0032
    (0x0032, 0x1032, "PN", "RequestingPhysician", "1"),
    (0x0032, 0x1033, "LO", "RequestingService", "1"),
    (0x0032, 0x1060, "LO", "RequestedProcedureDescription", "1"),
    (0x0032, 0x1070, "LO", "RequestedContrastAgent", "1"),
    (0x0032, 0x4000, "LT", "StudyComments", "1"),
    # Group 0038
    (0x0038, 0x0010, "LO", "AdmissionID", "1"),
    (0x0038, 0x0050, "LO", "SpecialNeeds", "1"),
    (0x0038, 0x0300, "LO", "CurrentPatientLocation", "1"),
    (0x0038, 0x0500, "LO", "PatientState", "1"),
    # Group 0040
    (0x0040, 0x0001, "AE", "ScheduledStationAETitle", "1-n"),
    (0x0040, 0x0002, "DA", "ScheduledProcedureStepStartDate", "1"),
    (0x0040, 0x0003, "TM", "ScheduledProcedureStepStartTime", "1"),
    (0x0040, 0x0006, "PN", "ScheduledPerformingPhysicianName", "1"),
    (0x0040, 0x0007, "LO", "ScheduledProcedureStepDescription", "1"),
    (0x0040, 0x0009, "SH", "ScheduledProcedureStepID", "1"),
    (0x0040, 0x0010, "SH", "ScheduledStationName", "1-n"),
    (0x0040, 0x0012, "LO", "PreMedication", "1"),
    (0x0040, 0x0020, "CS", "ScheduledProcedureStepStatus", "1"),
    (0x0040, 0x0100, "SQ", "ScheduledProcedureStepSequence", "1"),
    (0x0040, 0x0241, "AE", "PerformedStationAETitle", "1"),
    (0x0040, 0x0244, "DA", "PerformedProcedureStepStartDate", "1"),
    (0x0040, 0x0245, "TM", "PerformedProcedureStepStartTime", "1"),
    (0x0040, 0x0250, "DA", "PerformedProcedureStepEndDate", "1"),
    (0x0040, 0x0251, "TM", "PerformedProcedureStepEndTime", "1"),
    (0x0040, 0x0252, "CS", "PerformedProcedureStepStatus", "1"),
    (0x0040, 0x0253, "SH", "PerformedProcedureStepID", "1"),
    (0x0040, 0x0254, "LO", "PerformedProcedureStepDescription", "1"),
    (0x0040, 0x0255, "LO", "PerformedProcedureTypeDescription", "1"),
    (0x0040, 0x0260, "SQ", "PerformedProtocolCodeSequence", "1"),
    (0x0040, 0x0275, "SQ", "RequestAttributesSequence", "1"),
    (0x0040, 0x1001, "SH", "RequestedProcedureID", "1"),
    (0x0040, 0x1002, "LO", "ReasonForTheRequestedProcedure", "1"),
    (0x0040, 0x1003, "SH", "RequestedProcedurePriority", "1"),
    (0x0040, 0x2016, "LO", "PlacerOrderNumberImagingServiceRequest", "1"),
    (0x0040, 0x2017, "LO", "FillerOrderNumberImagingServiceRequest", "1"),
    (0x0040, 0xA730, "SQ", "ContentSequence", "1"),
    # Group 0088
    (0x0088, 0x0130, "SH", "StorageMediaFileSetID", "1"),
    (0x0088, 0x0140, "UI", "StorageMediaFileSetUID", "1"),
    # Pixel data
    (0x7FE0, 0x0010, "OW", "PixelData", "1"),
)

_BY_TAG: dict[Tag, DictEntry] = {}
_BY_KEYWORD: dict[str, DictEntry] = {}
for _group, _element, _vr, _keyword, _vm in _TABLE:
    _entry = DictEntry(Tag(_group, _element), VR(_vr), _keyword, _vm)
    if _entry.tag in _BY_TAG or _keyword in _BY_KEYWORD:
        raise RuntimeError(f"duplicate dictionary entry: {_keyword}")
    _BY_TAG[_entry.tag] = _entry
    _BY_KEYWORD[_keyword] = _entry


def lookup(key: Tag | str) -> DictEntry | None:
    """Find an entry by Tag or by exact keyword; None when absent."""
    if isinstance(key, Tag):
        return _BY_TAG.get(key)
    return _BY_KEYWORD.get(key)


def vr_for_tag(tag: Tag) -> VR:
    """Dictionary VR for a tag, UN when unknown."""
    entry = _BY_TAG.get(tag)
    return entry.vr if entry is not None else VR.UN


def search_keywords(prefix: str, limit: int = 25) -> list[DictEntry]:
    """Case-insensitive substring search over keywords, for pickers."""
    needle = prefix.lower()
    hits = [e for e in _BY_TAG.values() if needle in e.keyword.lower()]
    hits.sort(key=lambda e: (not e.keyword.lower().startswith(needle), e.keyword))
    return hits[:limit]


def all_entries() -> list[DictEntry]:
    return sorted(_BY_TAG.values(), key=lambda e: e.tag)
