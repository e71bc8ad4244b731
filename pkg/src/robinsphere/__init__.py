"""Numerics for the first Robin eigenvalue on convex domains of the sphere.

The package bundles a radial ball eigensolver, exact geometry of convex
bodies on S^2 built from geodesic caps, curvature measures with Steiner
formulas, the perimeter-profile comparison machinery, a piecewise-linear
finite element oracle, and half-space model primitives for the hyperbolic
non-convexity construction.
"""

from robinsphere.errors import (
    DegenerateGeometryError,
    EmptyInteriorError,
    GeometryError,
    SolverError,
)

__all__ = [
    "GeometryError",
    "DegenerateGeometryError",
    "EmptyInteriorError",
    "SolverError",
]

__version__ = "0.1.0"
