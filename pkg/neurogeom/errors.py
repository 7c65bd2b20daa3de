"""Exception hierarchy for neurogeom.

Every error carries the process exit code the command line reports for it:
1 usage, 2 parse, 3 numeric or degenerate input, 4 I/O.
"""

__all__ = [
    "NeuroGeomError",
    "UsageError",
    "ParseError",
    "NumericError",
    "StorageError",
    "HeaderTooShort",
    "BadMagicSize",
    "BadMagic",
    "UnsupportedDatatype",
    "PayloadSizeMismatch",
    "InvalidHeader",
    "MeshFormatError",
    "LandmarkFormatError",
    "EnsembleFormatError",
    "TractFormatError",
    "EmptyMask",
    "DegenerateClass",
    "NotEnoughVoxels",
    "EmptySurface",
    "DegenerateVolume",
    "OddChiForClosed",
    "RankDeficient",
    "DegenerateConfiguration",
    "SingularTransform",
    "NonFinite",
    "AllZero",
    "SizeMismatch",
    "LabelMismatch",
    "TopologyMismatch",
    "DimsMismatch",
    "EmptyEnsemble",
]


class NeuroGeomError(Exception):
    exit_code = 1


class UsageError(NeuroGeomError):
    exit_code = 1


class ParseError(NeuroGeomError):
    """Malformed input. ``index`` is the offending line or record when known."""

    exit_code = 2

    def __init__(self, message, index=None):
        if index is not None:
            message = f"{message} (record {index})"
        super().__init__(message)
        self.index = index


class NumericError(NeuroGeomError):
    exit_code = 3


class StorageError(NeuroGeomError):
    exit_code = 4


######################################################################
# Image formats
######################################################################
class HeaderTooShort(ParseError):
    pass


class BadMagicSize(ParseError):
    pass


class BadMagic(ParseError):
    pass


class UnsupportedDatatype(ParseError):
    pass


class PayloadSizeMismatch(ParseError):
    pass


class InvalidHeader(ParseError):
    pass


######################################################################
# Text and packed formats
######################################################################
class MeshFormatError(ParseError):
    pass


class LandmarkFormatError(ParseError):
    pass


class EnsembleFormatError(ParseError):
    pass


class TractFormatError(ParseError):
    pass


######################################################################
# Numeric and degenerate inputs
######################################################################
class EmptyMask(NumericError):
    pass


class DegenerateClass(NumericError):
    pass


class NotEnoughVoxels(NumericError):
    pass


class EmptySurface(NumericError):
    pass


class DegenerateVolume(NumericError):
    pass


class OddChiForClosed(NumericError):
    pass


class RankDeficient(NumericError):
    pass


class DegenerateConfiguration(NumericError):
    pass


class SingularTransform(NumericError):
    pass


class NonFinite(NumericError):
    pass


class AllZero(NumericError):
    pass


class SizeMismatch(NumericError):
    pass


class LabelMismatch(NumericError):
    pass


class TopologyMismatch(NumericError):
    pass


class DimsMismatch(NumericError):
    pass


class EmptyEnsemble(NumericError):
    pass
