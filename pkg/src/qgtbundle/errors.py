"""Exception hierarchy shared by all modules."""


class GeometryError(Exception):
    """Base class for every error raised by qgtbundle."""


class OutOfDomain(GeometryError):
    """A point or finite-difference stencil node lies outside the chart."""


class NonFinite(GeometryError):
    """A field returned NaN or Inf."""


class DegenerateDomain(GeometryError):
    """A (shrunken) chart interval has no interior."""


class SingularMetric(GeometryError):
    """A fiber or spacetime metric is not invertible."""


class RankMismatch(GeometryError):
    """The numerical rank of a projector differs from its declared rank."""


class NullVector(GeometryError):
    """Gram-Schmidt met a vector with vanishing pseudo-norm."""


class FrameDiscontinuity(GeometryError):
    """Frame alignment between neighbouring stencil points failed."""


class TorsionfulConnection(GeometryError):
    """A base connection is not symmetric in its lower indices."""


class OffShell(GeometryError):
    """A momentum violates the mass-shell constraint."""


class OffPlane(GeometryError):
    """A momentum has a non-zero out-of-plane component."""


class FrameNotInKernel(GeometryError):
    """A spinor frame is not annihilated by the Dirac symbol."""


class DomainError(GeometryError):
    """A model parameter is outside its admissible range."""


class LeftDomain(GeometryError):
    """A ray left the chart during integration."""


class StepRejected(GeometryError):
    """An integration step produced non-finite values."""


class KernelCollapse(GeometryError):
    """A transported spinor lost its component in the projector image."""


class ConfigError(GeometryError):
    """Invalid run configuration."""


class ModelError(GeometryError):
    """Unknown model or invalid model parameters."""
