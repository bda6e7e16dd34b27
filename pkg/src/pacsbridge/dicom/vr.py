"""Value representations and their length-encoding classes."""

from __future__ import annotations

import enum


class VR(str, enum.Enum):
    AE = "AE"
    AS = "AS"
    AT = "AT"
    CS = "CS"
    DA = "DA"
    DS = "DS"
    DT = "DT"
    FL = "FL"
    FD = "FD"
    IS = "IS"
    LO = "LO"
    LT = "LT"
    OB = "OB"
    OW = "OW"
    PN = "PN"
    SH = "SH"
    SL = "SL"
    SQ = "SQ"
    SS = "SS"
    ST = "ST"
    TM = "TM"
    UI = "UI"
    UL = "UL"
    UN = "UN"
    US = "US"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


# VRs encoded with a 2-byte reserved field and a 4-byte length in explicit VR.
# Every code outside the supported set is treated as long-form too.
LONG_FORM_VRS = frozenset({VR.OB, VR.OW, VR.UN, VR.SQ})

# Text VRs padded with a trailing space to even length; UI pads with NUL.
TEXT_VRS = frozenset({
    VR.AE, VR.AS, VR.CS, VR.DA, VR.DS, VR.DT, VR.IS,
    VR.LO, VR.LT, VR.PN, VR.SH, VR.ST, VR.TM,
})

# String-valued VRs (multi-valued via backslash); UI included.
STRING_VRS = TEXT_VRS | {VR.UI}


def is_long_form(code: str) -> bool:
    """Length-encoding class for a raw two-character VR code."""
    try:
        return VR(code) in LONG_FORM_VRS
    except ValueError:
        return True


def is_known(code: str) -> bool:
    try:
        VR(code)
    except ValueError:
        return False
    return True
