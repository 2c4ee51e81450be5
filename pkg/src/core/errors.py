"""
Exception hierarchy for the oscillatory quadrature core.
"""
from typing import Optional, Sequence, Tuple


class QuadratureError(Exception):
    """Base class for every error raised by the quadrature core."""


class ContractError(QuadratureError, ValueError):
    """A precondition of a public operation was violated."""


class SolverError(QuadratureError):
    """The dense linear algebra kernel failed."""

    def __init__(self, message: str, shape: Tuple[int, int]):
        super().__init__(f"{message} (matrix {shape[0]}x{shape[1]})")
        self.shape = shape


class GeometryError(QuadratureError, ValueError):
    """Inconsistent or degenerate geometry."""


class InvalidElementError(GeometryError):
    """An element has a nonpositive Jacobian or bad orientation."""

    def __init__(self, message: str, element_index: Optional[int] = None):
        if element_index is not None:
            message = f"element {element_index}: {message}"
        super().__init__(message)
        self.element_index = element_index


class MeshParseError(GeometryError):
    """Malformed mesh text."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NonConvergenceError(QuadratureError):
    """An adaptive procedure exhausted its depth budget."""

    def __init__(
        self,
        message: str,
        interval: Optional[Tuple[float, float]] = None,
        cell_path: Optional[Sequence[int]] = None,
        element_index: Optional[int] = None,
    ):
        parts = [message]
        if element_index is not None:
            parts.append(f"element {element_index}")
        if cell_path is not None:
            parts.append(f"cell {format_cell_path(cell_path)}")
        if interval is not None:
            parts.append(f"interval [{interval[0]!r}, {interval[1]!r}]")
        super().__init__(", ".join(parts))
        self.interval = interval
        self.cell_path = tuple(cell_path) if cell_path is not None else None
        self.element_index = element_index


class IntegrandDomainError(QuadratureError, ValueError):
    """The integrand is undefined somewhere on the requested domain."""


def format_cell_path(path: Sequence[int]) -> str:
    """Render a sub-cell path as 'root.2.0.3'."""
    return ".".join(["root", *(str(p) for p in path)])


class ConfigurationError(QuadratureError, ValueError):
    """Unknown or malformed configuration keys."""


class UsageError(QuadratureError, ValueError):
    """Invalid command-line usage."""
