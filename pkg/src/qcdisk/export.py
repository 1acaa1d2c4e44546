"""JSON and SVG output for solved meshes."""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import ParameterError
from .mapping import SolutionMesh
from .mesh import build_mesh


def _pair(c) -> list:
    return [float(c.real), float(c.imag)]


def solution_to_dict(sol: SolutionMesh, mu_spec: str) -> dict:
    """Self-describing record; vertices in unknown order, triangles as 1-based indices."""
    mesh = sol.mesh
    M, N = mesh.M, mesh.N
    p = np.arange(1, mesh.order.n_v + 1)
    js, ks = mesh.index.backward(p)
    verts = []
    for j, k in zip(js.tolist(), ks.tolist()):
        left = j <= 0
        verts.append({
            "j": j,
            "k": k,
            "Z": _pair(mesh.Z[j + M, k]),
            "W": _pair(sol.W[j + M, k]),
            "z": _pair(np.exp(mesh.Z[j + M, k])) if left else None,
            "w": _pair(sol.w[j + M, k]) if left else None,
        })
    tris = (mesh.triangle_columns() + 1).tolist()
    return {
        "M": M,
        "N": N,
        "mu_spec": mu_spec,
        "residual_l2": float(sol.residuals.get("residual_l2", float("nan"))),
        "residual_inf": float(sol.residuals.get("residual_inf", float("nan"))),
        "flipped": [list(lab) for lab in sol.flipped],
        "vertices": verts,
        "triangles": tris,
    }


def save_solution(sol: SolutionMesh, mu_spec: str, path) -> None:
    # json writes floats with repr, which round-trips exactly
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(solution_to_dict(sol, mu_spec), fh, allow_nan=True)
        fh.write("\n")


def load_solution(path) -> tuple[SolutionMesh, str]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        M, N = int(data["M"]), int(data["N"])
        mesh = build_mesh((M, N))
        W = np.empty((2 * M + 1, N), dtype=complex)
        w = np.empty((M + 1, N), dtype=complex)
        for v in data["vertices"]:
            j, k = v["j"], v["k"]
            W[j + M, k] = complex(*v["W"])
            if j <= 0:
                w[j + M, k] = complex(*v["w"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"malformed solution file {path}: {exc}") from exc
    res = {"residual_l2": data.get("residual_l2"), "residual_inf": data.get("residual_inf")}
    flipped = tuple(tuple(x) for x in data.get("flipped", []))
    return SolutionMesh(mesh=mesh, W=W, w=w, flipped=flipped, residuals=res), data.get("mu_spec", "")


def plane_triangles(sol: SolutionMesh, plane: str) -> np.ndarray:
    """Triangle vertex coordinates in the ``z``, ``W`` or ``w`` plane."""
    mesh = sol.mesh
    M = mesh.M
    if plane == "W":
        return sol.W[mesh.tri_j + M, mesh.tri_k] + 2j * np.pi * mesh.tri_shift
    n = mesh.n_left
    if plane == "w":
        return sol.w_triangles()
    if plane == "z":
        return np.exp(mesh.Z[mesh.tri_j[:n] + M, mesh.tri_k[:n]])
    raise ParameterError(f"plane must be z, W or w, got {plane!r}")


def edge_lengths(sol: SolutionMesh, plane: str = "w") -> tuple[np.ndarray, np.ndarray]:
    """Length and midpoint of every triangle side (shared sides appear twice)."""
    T = plane_triangles(sol, plane)
    a, b = T, np.roll(T, -1, axis=1)
    return np.abs(b - a).ravel(), ((a + b) / 2).ravel()


def render_svg(sol: SolutionMesh, plane: str = "w", size: int = 800, stroke: float = 0.5) -> str:
    """Triangle edges as one SVG path in a square viewport; disk planes get the unit circle."""
    T = plane_triangles(sol, plane)
    if plane == "W":
        lo = complex(T.real.min(), T.imag.min())
        hi = complex(T.real.max(), T.imag.max())
    else:
        lo, hi = complex(-1, -1), complex(1, 1)
    span = max(hi.real - lo.real, hi.imag - lo.imag) or 1.0
    pad = 0.03 * span
    scale = size / (span + 2 * pad)

    def xy(c):
        return (c.real - lo.real + pad) * scale, (hi.imag - c.imag + pad) * scale

    parts = []
    for tri in T:
        pts = [xy(c) for c in tri]
        parts.append("M{:.2f} {:.2f}L{:.2f} {:.2f}L{:.2f} {:.2f}Z".format(*pts[0], *pts[1], *pts[2]))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if plane in ("z", "w"):
        cx, cy = xy(0j)
        out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{scale:.2f}" fill="none" '
                   f'stroke="gray" stroke-width="{2 * stroke}"/>')
    out.append(f'<path d="{"".join(parts)}" fill="none" stroke="black" stroke-width="{stroke}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def fundamental_midpoints() -> tuple[complex, complex]:
    """Edge midpoints of the fundamental quadrilateral on the real and imaginary axes."""
    r = math.sqrt(2) - 1
    return complex(r, 0), complex(0, r)
