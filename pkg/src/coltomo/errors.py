"""Exception hierarchy shared by all modules."""


class TomographyError(Exception):
    """Base class for every error raised by coltomo."""


class DimensionError(TomographyError, ValueError):
    """Operands have incompatible sizes."""


class CapacityError(TomographyError, ValueError):
    """Requested qubit number exceeds the dense-matrix cap."""


class DomainError(TomographyError, ValueError):
    """Argument outside the mathematical domain (e.g. inadmissible weight triple)."""


class SingularFiducialError(TomographyError, ValueError):
    """A fiducial overlap vanishes, so the s=+1 kernel is undefined."""


class UnsupportedFiducialError(TomographyError, ValueError):
    """Operation only has a known closed form for the default fiducial."""


class IncompleteDataError(TomographyError, ValueError):
    """A table is missing entries for some admissible triples."""

    def __init__(self, missing):
        self.missing = sorted(missing)
        super().__init__(f"missing entries for triples: {self.missing}")


class ValidationError(TomographyError, ValueError):
    """Input operator is not a valid density matrix."""


class ConsistencyError(TomographyError, RuntimeError):
    """Internal invariant violated (indicates a bug or bad input slipping through)."""
