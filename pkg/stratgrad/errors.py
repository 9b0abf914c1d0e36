"""
@file stratgrad/errors.py

Exception hierarchy shared by the library, the CLI and the HTTP surface.
"""


class StratgradError(Exception):
    """Base class for every error raised by stratgrad."""


class ComplexValidationError(StratgradError):
    """A raw simplex list does not describe a valid simplicial complex."""


class MissingFace(ComplexValidationError):
    """Inclusion-closure is violated: a face of a listed simplex is absent."""


class DuplicateSimplex(ComplexValidationError):
    """The same simplex is listed twice."""


class VertexOutOfRange(ComplexValidationError):
    """A simplex references a vertex index outside [0, n_vertices)."""


class FilterShapeError(StratgradError):
    """A filter vector does not match its complex (length or finiteness)."""


class DegreeTooLarge(StratgradError):
    """The requested homology degree exceeds the dimension of the complex."""


class InfiniteInterval(StratgradError):
    """An essential interval reached a computation that needs finite endpoints."""


class NotDifferentiable(StratgradError):
    """A gradient was requested at a point outside the differentiability set."""


class MaxInnerIterations(StratgradError):
    """The update step did not settle within its inner-iteration guard."""


class MaxRounds(StratgradError):
    """make_differentiable did not find an admissible point within its guard."""


class OracleContractError(StratgradError):
    """A strata oracle broke its contract (e.g. non-monotone radius reuse)."""


class ConfigError(StratgradError):
    """An experiment configuration is inconsistent or references missing files."""
