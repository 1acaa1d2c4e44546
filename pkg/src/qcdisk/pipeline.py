"""End-to-end solve: mesh, field averages, assembly, least squares, exponentiation."""

from __future__ import annotations

import time
import warnings

from .assembly import assemble
from .beltrami import BeltramiSpec, nu_table
from .errors import UnsupportedOracleError
from .lsq import solve_lsq
from .mapping import (SolutionMesh, boundary_argument_error, exponentiate, max_vertex_error,
                      real_axis_mask)
from .mesh import build_mesh, choose_M
from .oracles import constant_oracle, radial_map, sector_angle


def solve_field(spec: BeltramiSpec | str, N: int, M: int | None = None, tol: float = 1e-10,
                weighting: str = "equilibrated", quiet: bool = True) -> tuple[SolutionMesh, float]:
    """Solve for ``spec`` on the ``(M, N)`` mesh; returns the solution and the wall time.

    The wall time covers assembly and the least-squares solve only.
    """
    if isinstance(spec, str):
        spec = BeltramiSpec.parse(spec)
    if M is None:
        M = choose_M(N)
    mesh = build_mesh((M, N))
    nu = nu_table(spec, mesh)
    t0 = time.perf_counter()
    system = assemble(spec, mesh, nu, weighting=weighting)
    sol = solve_lsq(system, tol=tol)
    runtime = time.perf_counter() - t0
    res = {"residual_l2": sol.residual2, "residual_inf": sol.residualInf,
           "normal_residual": sol.normalResidual, **sol.stats}
    with warnings.catch_warnings():
        if quiet:
            warnings.simplefilter("ignore", RuntimeWarning)
        out = exponentiate(sol.V, mesh, res)
    return out, runtime


def has_oracle(spec: BeltramiSpec) -> bool:
    if spec.kind == "constant":
        c = spec.params[0]
        return c.imag == 0 and 0 <= c.real < 1
    return spec.kind in ("radial", "sectorial")


def verification_error(spec: BeltramiSpec, sol: SolutionMesh) -> float:
    """Error of ``sol`` against the closed-form answer for ``spec``.

    Constant fields compare every vertex with the elliptic-function map,
    the radial field compares the real-axis vertices with ``phi``, and the
    sectorial field compares boundary arguments with ``psi``.
    """
    if spec.kind == "constant" and has_oracle(spec):
        return max_vertex_error(sol, constant_oracle(spec.params[0].real))[0]
    if spec.kind == "radial":
        return max_vertex_error(sol, radial_map, real_axis_mask(sol))[0]
    if spec.kind == "sectorial":
        return boundary_argument_error(sol, sector_angle)
    raise UnsupportedOracleError(
        f"no closed-form reference for {spec.name}; verify supports real constants in [0,1), radial, sectorial")
