"""
Exception hierarchy for geotri.

Validators report failed properties through ValidationReport objects; the
exceptions below are reserved for invalid inputs and broken preconditions.
"""


class GeotriError(Exception):
    """Base class for every error raised by geotri."""


# --- Geometry ---
class GeometryDomainError(GeotriError, ValueError):
    """A point lies outside its model (Klein norm >= 1, non-unit sphere vector...)."""


class DegenerateTriangleError(GeometryDomainError):
    """Triangle with a vanishing side or three collinear vertices."""


# --- Mesh construction and topology ---
class MeshError(GeotriError):
    """Invalid mesh input or a mesh that violates a structural precondition."""


class DuplicateEdgeError(MeshError):
    pass


class DanglingEndpointError(MeshError):
    pass


class SelfLoopError(MeshError):
    pass


class FaceMismatchError(MeshError):
    """Supplied faces disagree with the faces derived from the rotation system."""


class NotClosedError(MeshError):
    pass


class NotADiskError(MeshError):
    pass


# --- Generators ---
class ScheduleError(GeotriError, ValueError):
    """RadiusSchedule parameters out of range."""


class ScheduleValidationError(GeotriError):
    """The schedule is not certified for the requested number of layers."""

    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = list(failures)


class AssignmentInfeasibleError(GeotriError):
    """Inter-layer degree budgets cannot be met (caller bug)."""


class UnsupportedDegreeError(GeotriError, ValueError):
    """No k-regular construction exists for this surface and degree."""


class LayerOverflowError(GeotriError, OverflowError):
    def __init__(self, k, n):
        super().__init__(f"a_n for k={k} exceeds the representable range at n={n}")
        self.k = k
        self.n = n


class MeshTooLargeError(GeotriError):
    pass


# --- Analysis and I/O ---
class AnalysisError(GeotriError, ValueError):
    pass


class MeshFileError(GeotriError):
    """Malformed, truncated or unsupported mesh file."""


class RenderError(GeotriError, ValueError):
    """The mesh cannot be drawn with the requested model or format."""
