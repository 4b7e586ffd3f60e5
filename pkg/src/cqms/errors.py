"""Exception types raised by cqms."""


class CQMSError(Exception):
    """Base class for domain errors."""


class DimensionError(CQMSError, ValueError):
    pass


class NonHermitianError(CQMSError, ValueError):
    pass


class NotCPError(CQMSError):
    """Raised when a Choi matrix has an eigenvalue below the negativity tolerance."""


class NotUnitalError(CQMSError):
    pass


class NotCovariantError(CQMSError):
    pass


class NoAncillaRepError(CQMSError):
    pass


class NotEquivalentError(CQMSError):
    """No unitary intertwines the two Weyl pairs at the requested tolerance."""


class NotUnitaryError(CQMSError, ValueError):
    pass


class OffOrbitError(CQMSError, ValueError):
    pass
