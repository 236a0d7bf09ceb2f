"""Exception types.

Everything derives from :class:`QWLCTError` (a ``ValueError``) so callers and
the CLI can treat any input validation failure uniformly.
"""


class QWLCTError(ValueError):
    pass


# parameters
class DetNotOne(QWLCTError):
    pass


class DegenerateB(QWLCTError):
    pass


# grids and fields
class GridMismatch(QWLCTError):
    pass


class InvalidGrid(QWLCTError):
    pass


class NonFiniteSample(QWLCTError):
    pass


class NonGridShift(QWLCTError):
    pass


class NonGridU(QWLCTError):
    pass


class NonGridModulation(QWLCTError):
    pass


class AsymmetricGrid(QWLCTError):
    pass


class ZeroWindow(QWLCTError):
    pass


class MapTooLarge(QWLCTError):
    pass


# closed-form example
class NonPositiveAlpha(QWLCTError):
    pass


class DomainTooLarge(QWLCTError):
    pass


# file formats
class FormatError(QWLCTError):
    pass


class BadMagic(FormatError):
    pass


class BadVersion(FormatError):
    pass


class TruncatedPayload(FormatError):
    pass


class MissingPoint(FormatError):
    pass


class DuplicatePoint(FormatError):
    pass


class ParseError(FormatError):
    pass
