"""Exact polyhedral kernel: lattice linear algebra, cones, polyhedra and
relative cohomology of convex pairs."""

from .linalg import (
    column_hnf, det, dot, integer_kernel, primitive, rank, row_hnf,
    smith_invariants, solve, solve_integer,
)
from .polyhedra import (
    Cone, Polyhedron, TangentCone, dual_cone, lattice_points,
    orthogonal_complement, polytope_from_halfspaces, sort_ccw, tangent_cone,
    volume,
)
from .topology import (
    PlanarCellComplex, clip, euler, feasible, reduced_betti,
    relative_pair_cohomology,
)

__all__ = [
    "Cone", "PlanarCellComplex", "Polyhedron", "TangentCone", "clip",
    "column_hnf", "det", "dot", "dual_cone", "euler", "feasible",
    "integer_kernel", "lattice_points", "orthogonal_complement", "primitive",
    "polytope_from_halfspaces", "rank", "reduced_betti",
    "relative_pair_cohomology", "row_hnf", "smith_invariants", "solve",
    "solve_integer", "sort_ccw", "tangent_cone", "volume",
]
