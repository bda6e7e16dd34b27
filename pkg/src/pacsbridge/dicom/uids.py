"""Well-known UID constants used across the bridge."""

# Transfer syntaxes (the only encodings this project reads or writes).
IMPLICIT_VR_LE = "1.2.840.10008.1.2"
EXPLICIT_VR_LE = "1.2.840.10008.1.2.1"
SUPPORTED_TRANSFER_SYNTAXES = (IMPLICIT_VR_LE, EXPLICIT_VR_LE)

# Service classes.
VERIFICATION = "1.2.840.10008.1.1"
STUDY_ROOT_QR_FIND = "1.2.840.10008.5.1.4.1.2.2.1"
STUDY_ROOT_QR_MOVE = "1.2.840.10008.5.1.4.1.2.2.2"

# Storage SOP classes accepted by the local store service.
CT_IMAGE_STORAGE = "1.2.840.10008.5.1.4.1.1.2"
MR_IMAGE_STORAGE = "1.2.840.10008.5.1.4.1.1.4"
US_IMAGE_STORAGE = "1.2.840.10008.5.1.4.1.1.6.1"
SECONDARY_CAPTURE_STORAGE = "1.2.840.10008.5.1.4.1.1.7"
CR_IMAGE_STORAGE = "1.2.840.10008.5.1.4.1.1.1"
DX_IMAGE_STORAGE = "1.2.840.10008.5.1.4.1.1.1.1"
STORAGE_SOP_CLASSES = (
    CT_IMAGE_STORAGE,
    MR_IMAGE_STORAGE,
    US_IMAGE_STORAGE,
    SECONDARY_CAPTURE_STORAGE,
    CR_IMAGE_STORAGE,
    DX_IMAGE_STORAGE,
)

# Association plumbing.
APPLICATION_CONTEXT = "1.2.840.10008.3.1.1.1"

# This implementation (UUID-derived root).
IMPLEMENTATION_CLASS_UID = "2.25.180769753943022335636019352738487943335"
IMPLEMENTATION_VERSION_NAME = "PACSBRIDGE01"
