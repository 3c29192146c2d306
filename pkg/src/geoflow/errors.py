"""Exception hierarchy shared by every geoflow module."""


class GeoflowError(Exception):
    """Base class for domain errors raised by geoflow."""


class CutLocusError(GeoflowError, ValueError):
    """A log/exp/transport was requested at or beyond the cut locus."""


class EmptyNeighborhoodError(GeoflowError):
    """No sample lies within the locality radius of the query point."""


class DegenerateSpectrumError(GeoflowError):
    """The local covariance has no distinct leading eigenvalue.

    ``node`` is set when the failure happened while tracing a curve.
    """

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class HemisphereError(GeoflowError):
    """Points are too spread for the intrinsic mean to be unique."""


class NonConvergenceError(GeoflowError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class AmbiguousProjectionError(GeoflowError):
    """A point has several well separated nearest points on a curve."""


class SeparationError(GeoflowError):
    """Two flows are not separated where a boundary point is needed."""


class EndOfFlowError(GeoflowError):
    """A boundary point projects onto an endpoint of one of the flows."""


class ZeroSpreadError(GeoflowError, ZeroDivisionError):
    """The relative gap is undefined because the local spread is zero."""


class InseparableError(GeoflowError):
    """Two planar point sets cannot be split by a line."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class LengthMismatchError(GeoflowError, ValueError):
    pass


class ParseError(GeoflowError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NormalizationError(GeoflowError, ValueError):
    pass
