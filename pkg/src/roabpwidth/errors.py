"""Exception types raised across the package."""

from __future__ import annotations


class RoabpError(Exception):
    """Base class; ``code`` is the machine-readable tag the CLI reports."""

    code = "error"


class FieldError(RoabpError, ValueError):
    code = "field_error"


class DimensionError(RoabpError, ValueError):
    code = "dimension_error"


class ZeroPolynomialError(RoabpError, ValueError):
    code = "zero_polynomial"


class CapExceededError(RoabpError, ValueError):
    code = "cap_exceeded"


class ParseError(RoabpError, ValueError):
    code = "parse_error"


class GraphError(RoabpError, ValueError):
    code = "graph_error"
