"""Shared exception types."""


class GeometryError(ValueError):
    """Invalid or inconsistent geometric input."""


class EmptyInteriorError(GeometryError):
    """A body (or a shrunken parallel body) has empty interior."""


class DegenerateGeometryError(GeometryError):
    """Tangential or otherwise measure-zero configuration; rejected, not perturbed."""


class SolverError(RuntimeError):
    """An iterative solver failed to bracket or converge."""
