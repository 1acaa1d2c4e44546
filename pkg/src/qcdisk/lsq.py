"""Least-squares solution of the assembled system."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.linalg as spla

from .assembly import ROW_KINDS, SparseSystem
from .errors import ParameterError, SolverError

COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class LsqSolution:
    V: np.ndarray
    residual2: float
    residualInf: float
    normalResidual: float
    stats: dict = field(default_factory=dict)


def _certificate(A, AH, B, V, AHB_norm):
    r = A @ V - B
    g = AH @ r
    return r, float(np.linalg.norm(g)) / max(AHB_norm, np.finfo(float).tiny)


def solve_lsq(system: SparseSystem, tol: float = 1e-10, max_iter: int | None = None,
              method: str = "auto") -> LsqSolution:
    """Minimize ``||A V - B||_2``.

    The default path factors the normal equations ``A^H A`` with a sparse LU
    and applies iterative refinement until ``||A^H (A V - B)|| <= tol ||A^H B||``.
    When the 1-norm condition estimate exceeds ``1e12`` (or ``method="lsqr"``)
    LSQR is used instead.  A solution that misses the certificate raises
    :class:`SolverError`.
    """
    if tol <= 0:
        raise ParameterError("tol must be positive")
    if method not in ("auto", "direct", "lsqr"):
        raise ParameterError(f"unknown method {method!r}")
    A = system.A
    B = system.rhs
    AH = A.conj().T.tocsr()
    AHB = AH @ B
    AHB_norm = float(np.linalg.norm(AHB))
    if AHB_norm == 0:
        V = np.zeros(A.shape[1], dtype=complex)
        return LsqSolution(V, float(np.linalg.norm(B)), float(np.max(np.abs(B), initial=0.0)), 0.0,
                           {"method": "trivial", "iterations": 0})

    t0 = time.perf_counter()
    stats: dict = {}
    use = method
    lu = None
    if method in ("auto", "direct"):
        G = (AH @ A).tocsc()
        try:
            lu = spla.splu(G, permc_spec="MMD_AT_PLUS_A")
        except RuntimeError as exc:
            if method == "direct":
                raise SolverError("normal-equations factorization failed", {"error": str(exc)}) from exc
            lu = None
        if lu is not None:
            Ginv = spla.LinearOperator(G.shape, matvec=lu.solve, rmatvec=lambda x: lu.solve(x, trans="H"),
                                       dtype=complex)
            try:
                cond = float(spla.onenormest(G) * spla.onenormest(Ginv))
            except Exception:  # estimator breakdown means the factor is unusable
                cond = np.inf
            stats["cond_estimate"] = cond
            if cond > COND_LIMIT and method == "auto":
                lu = None
        use = "direct" if lu is not None else "lsqr"

    limit = max_iter if max_iter is not None else (5 if use == "direct" else 20 * A.shape[1])
    if use == "direct":
        V = lu.solve(AHB)
        r, rel = _certificate(A, AH, B, V, AHB_norm)
        it = 0
        while rel > tol and it < limit:
            V = V - lu.solve(AH @ r)
            r, rel = _certificate(A, AH, B, V, AHB_norm)
            it += 1
        stats.update(method="direct", iterations=it, nnz_factor=int(lu.L.nnz + lu.U.nnz))
    else:
        out = spla.lsqr(A, B, atol=tol * 1e-2, btol=tol * 1e-2, iter_lim=limit)
        V = out[0]
        r, rel = _certificate(A, AH, B, V, AHB_norm)
        stats.update(method="lsqr", iterations=int(out[2]))
    stats["seconds"] = time.perf_counter() - t0
    stats["relative_normal_residual"] = rel
    if not rel <= tol:
        raise SolverError(f"least-squares certificate not met: {rel:.3e} > {tol:.1e}", stats)
    return LsqSolution(
        V=V,
        residual2=float(np.linalg.norm(r)),
        residualInf=float(np.max(np.abs(r))),
        normalResidual=float(np.linalg.norm(AH @ r)),
        stats=stats,
    )


def residual_report(system: SparseSystem, V) -> dict:
    """Max and L2 residual per row class, plus the total L2 residual."""
    V = np.asarray(V)
    if V.shape != (system.n_cols,):
        raise ParameterError(f"V has shape {V.shape}, expected ({system.n_cols},)")
    r = system.A @ V - system.rhs
    out = {}
    for code, name in enumerate(ROW_KINDS):
        rk = r[system.row_kind == code]
        out[name] = {
            "rows": int(rk.size),
            "max": float(np.max(np.abs(rk), initial=0.0)),
            "l2": float(np.linalg.norm(rk)),
        }
    out["total_l2"] = float(np.linalg.norm(r))
    return out
