"""Numerical quasiconformal self-maps of the unit disk.

A Beltrami field mu is pulled back to logarithmic coordinates, a sparse
overdetermined linear system is assembled on a reflected triangular mesh,
and its least-squares solution gives the vertex images of the map.
"""

from .assembly import SparseSystem, assemble, boundary_targets, triangle_coeffs
from .beltrami import BeltramiSpec, L_mu, NuTable, affine_B, implicit_mu, nu_table, pullback_nu
from .errors import (DegenerateInputError, DomainError, InadmissibleFieldError, ParameterError,
                     QCError, ResourceError, SolverError, UnsupportedOracleError)
from .lsq import LsqSolution, residual_report, solve_lsq
from .mapping import SolutionMesh, evaluate_pl, exponentiate, max_vertex_error
from .mesh import IndexMap, LogMesh, MeshOrder, build_mesh, choose_M
from .pipeline import solve_field, verification_error

__version__ = "0.1.0"

__all__ = [
    "BeltramiSpec", "DegenerateInputError", "DomainError", "IndexMap", "InadmissibleFieldError",
    "L_mu", "LogMesh", "LsqSolution", "MeshOrder", "NuTable", "ParameterError", "QCError",
    "ResourceError", "SolutionMesh", "SolverError", "SparseSystem", "UnsupportedOracleError",
    "affine_B", "assemble", "boundary_targets", "build_mesh", "choose_M", "evaluate_pl",
    "exponentiate", "implicit_mu", "max_vertex_error", "nu_table", "pullback_nu",
    "residual_report", "solve_field", "solve_lsq", "triangle_coeffs", "verification_error",
]
