"""Exception types shared across the package."""


class PolysymError(Exception):
    """Base class for all domain errors."""


class ParseError(PolysymError):
    """The interchange document is malformed or structurally invalid."""


class DegenerateInputError(PolysymError):
    """Point set too degenerate for finite point-group analysis."""


class InconsistentSystemError(PolysymError):
    """A linear system has no solution for the requested assignment."""


class ManipulationError(PolysymError):
    """Invalid manipulation request (bad edge id or scaling factor)."""


class NotSymmetricError(PolysymError):
    """Input lengths violate the detected orbit equalities."""


class SymmetryAssemblyError(PolysymError):
    """Internal self-check failed (stale group, reduction bound violated)."""
