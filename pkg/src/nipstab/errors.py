"""Exception hierarchy shared by all nipstab modules."""


class NipstabError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(NipstabError, ValueError):
    """Vectors or matrices with incompatible dimensions."""


class ShapeError(NipstabError, ValueError):
    """A matrix does not have the required shape (e.g. not square)."""


class ArityError(NipstabError, ValueError):
    """Wrong number of trailing arguments for an n-inner product."""


class AxiomViolationError(NipstabError, ArithmeticError):
    """A form produced a value that no n-inner product can take."""


class AnchorError(NipstabError, ValueError):
    """Anchor set for an induced inner product is not linearly independent."""


class DivergenceError(NipstabError, ValueError):
    """Control-function series diverges, or p lies outside a scheme's validity interval."""


class UnitScalarError(NipstabError, ValueError):
    """A scalar required to lie on the unit circle does not."""


class ScaleOverflowError(NipstabError, OverflowError):
    """Direct-method iterate arguments grew beyond the safe double range."""


class ConfigError(NipstabError, ValueError):
    """Invalid experiment configuration or instance parameters."""
