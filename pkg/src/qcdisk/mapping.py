"""From the solved log-plane mesh to the disk map."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .beltrami import implicit_mu
from .errors import DomainError
from .mesh import LogMesh, MINUS, PLUS, _orient


@dataclass(frozen=True, eq=False)
class SolutionMesh:
    """Solved mesh: ``W[j+M, k]`` for all ``j`` and ``w[j+M, k] = exp(W)`` for ``j <= 0``."""

    mesh: LogMesh
    W: np.ndarray
    w: np.ndarray
    flipped: tuple = ()
    residuals: dict = field(default_factory=dict)

    @property
    def z(self) -> np.ndarray:
        return np.exp(self.mesh.Z[: self.mesh.M + 1])

    def w_triangles(self) -> np.ndarray:
        """Left-half image triangles, shape ``(2MN, 3)``."""
        m = self.mesh
        n = m.n_left
        return self.w[m.tri_j[:n] + m.M, m.tri_k[:n]]

    def z_triangles(self) -> np.ndarray:
        m = self.mesh
        n = m.n_left
        return self.z[m.tri_j[:n] + m.M, m.tri_k[:n]]


def exponentiate(V, mesh: LogMesh, residuals: dict | None = None) -> SolutionMesh:
    """Reshape the solution vector and map it to the disk.

    Left-half image triangles with negative orientation are reported in
    ``flipped`` (with a warning); they are not an error.
    """
    M, N = mesh.M, mesh.N
    W = np.asarray(V, dtype=complex).reshape(N, 2 * M + 1).T.copy()
    w = np.exp(W[: M + 1])
    n = mesh.n_left
    wt = w[mesh.tri_j[:n] + M, mesh.tri_k[:n]]
    bad = np.flatnonzero(_orient(wt) < 0)
    flipped = tuple(mesh.label(int(t)) for t in bad)
    if flipped:
        warnings.warn(f"{len(flipped)} image triangles are improperly oriented", RuntimeWarning, stacklevel=2)
    return SolutionMesh(mesh=mesh, W=W, w=w, flipped=flipped, residuals=dict(residuals or {}))


def discrete_mu(sol: SolutionMesh) -> np.ndarray:
    """Dilatation of the affine map on each left z-triangle."""
    zt = sol.z_triangles()
    wt = sol.w_triangles()
    return implicit_mu(zt[:, 0], zt[:, 1], zt[:, 2], wt[:, 0], wt[:, 1], wt[:, 2])


def _triangle_lookup(mesh: LogMesh) -> np.ndarray:
    """``table[j+M, k, f]`` = left triangle index with label ``(j, k)``, ``f=0`` plus, ``f=1`` minus."""
    M, N = mesh.M, mesh.N
    n = mesh.n_left
    table = np.full((M + 1, N, 2), -1, dtype=np.int64)
    f = np.where(mesh.family[:n] == PLUS, 0, 1)
    table[mesh.label_j[:n] + M, mesh.label_k[:n], f] = np.arange(n)
    return table


def _barycentric(tri, p):
    a, b, c = tri
    det = _cross(b - a, c - a)
    l1 = _cross(p - a, c - a) / det
    l2 = _cross(b - a, p - a) / det
    return np.array([1 - l1 - l2, l1, l2])


def _cross(u, v):
    return u.real * v.imag - u.imag * v.real


def _candidates(mesh: LogMesh, table, Zq: complex):
    M, N = mesh.M, mesh.N
    h = mesh.order.step
    band = math.floor(Zq.real / h)
    k0 = math.floor(Zq.imag * N / (2 * math.pi))
    out = []
    for jb in (band - 1, band, band + 1):
        for j, f in ((jb + 1, 0), (jb, 1)):
            if not -M <= j <= 0:
                continue
            for dk in range(-2, 3):
                t = table[j + M, (k0 + dk) % N, f]
                if t >= 0:
                    out.append(int(t))
    return sorted(set(out))


def evaluate_pl(sol: SolutionMesh, z) -> complex:
    """Piecewise-linear map through the z-triangles with vertex values ``w``.

    Points on shared edges resolve to the lowest triangle label.  Points in
    the thin gap between the outer polygon and the unit circle use the
    nearest boundary triangle's affine map.
    """
    z = complex(z)
    mesh = sol.mesh
    r_in = math.exp(mesh.R[0])
    if abs(z) > 1 + 1e-12:
        raise DomainError(f"|z| = {abs(z):.6g} lies outside the closed unit disk")
    if abs(z) < r_in * (1 - 1e-12):
        raise DomainError(f"|z| = {abs(z):.6g} lies in the unmeshed hole |z| < {r_in:.6g}")
    table = _lookup_cache(sol)
    Zq = complex(math.log(abs(z)), math.atan2(z.imag, z.real) % (2 * math.pi))
    zt_all = sol.z_triangles()
    wt_all = sol.w_triangles()
    best, best_score = None, -np.inf
    for t in _candidates(mesh, table, Zq):
        lam = _barycentric(zt_all[t], z)
        score = float(lam.min())
        if score >= -1e-12:
            return complex(lam @ wt_all[t])
        if score > best_score:
            best, best_score = (t, lam), score
    t, lam = best
    return complex(lam @ wt_all[t])


_LOOKUPS: dict = {}


def _lookup_cache(sol: SolutionMesh):
    key = id(sol.mesh)
    hit = _LOOKUPS.get(key)
    if hit is None or hit[0] is not sol.mesh:
        hit = (sol.mesh, _triangle_lookup(sol.mesh))
        _LOOKUPS[key] = hit
    return hit[1]


def max_vertex_error(sol: SolutionMesh, oracle, mask=None):
    """Max of ``|w_jk - oracle(z_jk)|`` over ``j <= 0`` and the per-``j`` profile.

    ``mask`` (shape ``(M+1, N)``) restricts the comparison to selected vertices;
    profile entries with no selected vertex are ``nan``.
    """
    z = sol.z
    err = np.abs(sol.w - oracle(z))
    if mask is not None:
        err = np.where(mask, err, np.nan)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        profile = np.nanmax(err, axis=1)
    return float(np.nanmax(err)), profile


def real_axis_mask(sol: SolutionMesh) -> np.ndarray:
    """Vertices lying on the real axis of the disk."""
    return np.abs(sol.z.imag) < 1e-9


def boundary_argument_error(sol: SolutionMesh, psi) -> float:
    """``max_k |psi(theta_k) - arg w_{0,k}|`` on the unit circle, using ``Im W`` as the argument."""
    M = sol.mesh.M
    theta = sol.mesh.Z[M].imag
    return float(np.max(np.abs(psi(theta) - sol.W[M].imag)))


__all__ = [
    "SolutionMesh", "exponentiate", "discrete_mu", "evaluate_pl", "max_vertex_error",
    "real_axis_mask", "boundary_argument_error", "MINUS",
]
