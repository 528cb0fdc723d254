"""
Exception hierarchy for dftn.

Every error raised on purpose by the library derives from ``DftnError`` so the
CLI can turn it into a readable message and a non-zero exit code.
"""

from typing import Optional


class DftnError(Exception):
    """Base class for all dftn errors"""


class DimensionError(DftnError, ValueError):
    """Shapes of operands do not fit together"""


class ParameterError(DftnError, ValueError):
    """A numeric knob is outside its valid range"""


class DegenerateInputError(DftnError, ValueError):
    """Input is valid in shape but makes the operation undefined"""


class PrecisionError(DftnError, ValueError):
    """A value is not on the grid required by a packed representation"""


class ConfigurationError(DftnError):
    """Run, network or fusion configuration is inconsistent"""


class UsageError(ConfigurationError):
    """Command-line arguments are missing or contradict each other"""


class FormatError(DftnError, ValueError):
    """A packed model file is malformed or has an unsupported version"""


class ParseError(DftnError, ValueError):
    """Input text (CSV stream or schema file) could not be parsed"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
