"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ToolkitError):
    """Invalid configuration, parameter, label, or contract violation."""


class ParseError(ToolkitError):
    """Malformed feature file; the message names the offending row."""


class ShapeError(ToolkitError):
    """Array dimensions inconsistent with what the operation requires."""


class NumericError(ToolkitError):
    """Non-finite values or other numerical breakdowns."""


class EvaluationError(ToolkitError):
    """Retrieval evaluation cannot produce a well-defined report."""
