"""Exception types shared across the package."""


class DicondError(Exception):
    """Base class for all package-specific errors."""


class EdgeListParseError(DicondError, ValueError):
    """Malformed edge-list input; carries the 1-based line number."""

    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class EmptyGraphError(DicondError, ValueError):
    """Input describes no vertices at all."""


class DegenerateSubsetError(DicondError, ValueError):
    """Subset is empty, full, or has a zero-volume side."""


class ConstantVectorError(DicondError, ValueError):
    """Vertex vector is constant (or has zero median spread) where a
    nonconstant one is required."""


class GraphTooLargeError(DicondError, ValueError):
    """Instance exceeds an exhaustive-enumeration size cap."""
