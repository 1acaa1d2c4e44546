"""Sparse overdetermined system for the discrete Beltrami problem.

Each triangle contributes one complex equation saying that its W-image is
the image of the Z-triangle under an affine map with dilatation nu.  The
boundary rows pin the innermost and outermost rings to a small ellipse
(and its reflection) and one extra row fixes ``W_00 = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .beltrami import NuTable, nu_table
from .errors import DomainError, InadmissibleFieldError, ParameterError, QCError
from .mesh import LEFT, LogMesh

TRIANGLE_LEFT, TRIANGLE_RIGHT, BOUNDARY_LEFT, BOUNDARY_RIGHT, NORMALIZATION = range(5)
ROW_KINDS = ("triangleLeft", "triangleRight", "boundaryLeft", "boundaryRight", "normalization")

WEIGHTINGS = ("equilibrated", "literal")


class AssemblyError(QCError, RuntimeError):
    """Internal consistency failure while building a system."""


def triangle_coeffs(nu, Za, Zb, Zc):
    """Coefficients ``(a, b, c)`` of the triangle equation ``a Wa + b Wb + c Wc = 0``.

    Each coefficient is ``L_nu`` of the directed side opposite its vertex.
    Works elementwise on arrays.
    """
    nu = np.asarray(nu, dtype=complex)
    if np.any(np.abs(nu) >= 1):
        raise DomainError("triangle coefficients need |nu| < 1")
    d = np.stack(np.broadcast_arrays(
        np.asarray(Zb - Zc, dtype=complex),
        np.asarray(Zc - Za, dtype=complex),
        np.asarray(Za - Zb, dtype=complex)))
    if np.any(d == 0):
        raise DomainError("triangle coefficients need distinct vertices")
    out = (d + nu * np.conj(d)) / (1 + nu)
    return out[0], out[1], out[2]


def inner_average(spec, mesh: LogMesh) -> complex:
    """Mean of mu over the innermost ring of mesh vertices."""
    z = np.exp(mesh.Z[0])
    mu0 = complex(np.mean(spec(z)))
    if not abs(mu0) < 1:
        raise InadmissibleFieldError(f"inner average |mu0| = {abs(mu0):.6g} >= 1")
    return mu0


def ellipse_points(spec, mesh: LogMesh) -> np.ndarray:
    """Innermost ring mapped by ``L_mu0``: a small ellipse around the origin."""
    mu0 = inner_average(spec, mesh)
    z = np.exp(mesh.Z[0])
    return (z + mu0 * np.conj(z)) / (1 + mu0)


def boundary_targets(spec, mesh: LogMesh) -> np.ndarray:
    """Log-differences ``D_k = E_k - E_{k-1}`` along the inner ellipse, ``k = 1..N-1``.

    ``E_k`` follows a continuous branch of ``log e_k`` starting with
    ``Im E_0`` in ``[0, 2 pi)``.
    """
    e = ellipse_points(spec, mesh)
    arg = np.unwrap(np.angle(e))
    arg -= 2 * np.pi * np.floor(arg[0] / (2 * np.pi))
    E = np.log(np.abs(e)) + 1j * arg
    return np.diff(E)


@dataclass(frozen=True, eq=False)
class SparseSystem:
    """Assembled system ``A V = B`` with one tag per row."""

    A: sp.csr_matrix
    rhs: np.ndarray
    row_kind: np.ndarray
    M: int
    N: int
    weighting: str = "equilibrated"

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    @property
    def n_cols(self) -> int:
        return self.A.shape[1]

    def entries(self):
        """``(row, col, value)`` triplets in row order."""
        coo = self.A.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return coo.row[order], coo.col[order], coo.data[order]

    def rows_of(self, kind: int) -> np.ndarray:
        return np.flatnonzero(self.row_kind == kind)


def assemble(spec, mesh: LogMesh, nu: NuTable | None = None,
             weighting: str = "equilibrated") -> SparseSystem:
    """Build the sparse system for ``spec`` on ``mesh``.

    Rows come in a fixed order: left triangles, right triangles, left
    boundary, right boundary, normalization.

    ``weighting="literal"`` uses the ``L_nu`` coefficients and unit boundary
    rows as written.  ``"equilibrated"`` (default) multiplies every triangle
    row by ``1 + nu`` and every boundary row by the edge length ``2 pi / N``
    so that all rows carry comparable weight in the least-squares fit; the
    exact solution of a consistent system is unchanged.
    """
    if weighting not in WEIGHTINGS:
        raise ParameterError(f"weighting must be one of {WEIGHTINGS}, got {weighting!r}")
    if nu is None:
        nu = nu_table(spec, mesh)
    M, N = mesh.M, mesh.N
    nt = mesh.n_triangles
    if nu.values.shape != (nt,):
        raise AssemblyError(f"nu table has {nu.values.shape[0]} entries, mesh has {nt} triangles")

    Zt = mesh.triangle_Z()
    a, b, c = triangle_coeffs(nu.values, Zt[:, 0], Zt[:, 1], Zt[:, 2])
    coef = np.column_stack([a, b, c])
    if weighting == "equilibrated":
        coef = coef * (1 + nu.values)[:, None]
    cols = mesh.triangle_columns()
    tri_rhs = -2j * np.pi * np.sum(coef * mesh.tri_shift, axis=1)

    D = boundary_targets(spec, mesh)
    h = 2 * np.pi / N if weighting == "equilibrated" else 1.0
    idx = mesh.index
    k = np.arange(1, N)
    nb = N - 1

    rows = [np.repeat(np.arange(nt), 3)]
    colv = [cols.ravel()]
    vals = [coef.ravel()]
    r0 = nt
    for jb in (-M, M):
        rr = r0 + np.arange(nb)
        rows.append(np.repeat(rr, 2))
        colv.append(np.column_stack([idx.column(jb, k), idx.column(jb, k - 1)]).ravel())
        vals.append(np.tile([h, -h], nb).astype(complex))
        r0 += nb
    rows.append(np.array([r0]))
    colv.append(np.array([idx.column(0, 0)]))
    vals.append(np.array([1.0 + 0j]))
    n_rows = r0 + 1

    rhs = np.concatenate([tri_rhs, h * D, -h * np.conj(D), [0.0]])
    kind = np.concatenate([
        np.where(mesh.half == LEFT, TRIANGLE_LEFT, TRIANGLE_RIGHT),
        np.full(nb, BOUNDARY_LEFT), np.full(nb, BOUNDARY_RIGHT), [NORMALIZATION]])

    A = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(colv))),
        shape=(n_rows, mesh.order.n_v))
    if A.shape != (mesh.order.n_e, mesh.order.n_v) or rhs.shape[0] != n_rows:
        raise AssemblyError(f"assembled shape {A.shape} does not match the mesh order")
    return SparseSystem(A=A, rhs=rhs.astype(complex), row_kind=kind.astype(np.int8),
                        M=M, N=N, weighting=weighting)
