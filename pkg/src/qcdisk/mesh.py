"""Logarithmic triangular mesh of the punctured disk.

The basic mesh lives in the left half of the log plane ``Z = log z``.
Rows are indexed by ``j`` (``-M <= j <= 0``, real part ``R_j``) and
columns by ``k`` (``0 <= k < N``, imaginary part ``2*pi*(k + (j mod 2)/2)/N``),
so every triangle is equilateral with side ``2*pi/N``.  The right half
``j > 0`` is the mirror image under ``Z -> -conj(Z)``.

Triangles never store vertex columns outside ``0..N-1``; a vertex that
lies one period above or below the basic strip is stored with its
reduced column and a ``shift`` of ``+1``/``-1`` (multiples of ``2*pi*i``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

SQRT3 = math.sqrt(3.0)

PLUS, MINUS = 1, -1
LEFT, RIGHT = 0, 1


@dataclass(frozen=True)
class MeshOrder:
    """Mesh dimensions: ``M`` radial layers per half, ``N`` angular steps."""

    M: int
    N: int

    def __post_init__(self):
        if not isinstance(self.M, (int, np.integer)) or self.M < 1:
            raise ParameterError(f"mesh order requires M >= 1, got M={self.M!r}")
        if not isinstance(self.N, (int, np.integer)) or self.N < 3:
            raise ParameterError(f"mesh order requires N >= 3, got N={self.N!r}")

    @property
    def n_v(self) -> int:
        """Number of unknowns ``(2M+1)N``."""
        return (2 * self.M + 1) * self.N

    @property
    def n_e(self) -> int:
        """Number of equations ``4MN + 2(N-1) + 1``."""
        return 4 * self.M * self.N + 2 * (self.N - 1) + 1

    @property
    def step(self) -> float:
        """Radial spacing ``sqrt(3)*pi/N`` between consecutive columns."""
        return SQRT3 * math.pi / self.N


@dataclass(frozen=True)
class IndexMap:
    """k-major bijection between ``(j, k)`` and ``p`` in ``1..n_v``."""

    M: int
    N: int

    @property
    def size(self) -> int:
        return (2 * self.M + 1) * self.N

    def forward(self, j, k):
        j = np.asarray(j)
        k = np.asarray(k)
        if np.any(np.abs(j) > self.M) or np.any((k < 0) | (k >= self.N)):
            raise ParameterError(f"index pair out of range for M={self.M}, N={self.N}")
        p = k * (2 * self.M + 1) + (j + self.M) + 1
        return int(p) if p.ndim == 0 else p

    def backward(self, p):
        p = np.asarray(p)
        if np.any((p < 1) | (p > self.size)):
            raise ParameterError(f"p must lie in 1..{self.size}")
        k, jj = np.divmod(p - 1, 2 * self.M + 1)
        j = jj - self.M
        if p.ndim == 0:
            return int(j), int(k)
        return j, k

    def column(self, j, k):
        """Zero-based matrix column of ``W_jk``."""
        return self.forward(j, k) - 1


@dataclass(frozen=True, eq=False)
class LogMesh:
    """Structured mesh in log coordinates.

    ``Z[j + M, k]`` holds the vertex ``Z_jk`` for ``-M <= j <= M``.  Triangle
    arrays all have length ``4MN``; the first ``2MN`` entries are the left
    half (``half == LEFT``), the rest are their mirror images in the same
    order, so ``partner[t] == t - 2MN`` for right triangles.  Vertex triples
    are positively oriented.
    """

    order: MeshOrder
    Z: np.ndarray
    tri_j: np.ndarray
    tri_k: np.ndarray
    tri_shift: np.ndarray
    family: np.ndarray
    half: np.ndarray
    label_j: np.ndarray
    label_k: np.ndarray
    index: IndexMap = field(repr=False)

    @property
    def M(self) -> int:
        return self.order.M

    @property
    def N(self) -> int:
        return self.order.N

    @property
    def n_triangles(self) -> int:
        return self.tri_j.shape[0]

    @property
    def n_left(self) -> int:
        return 2 * self.M * self.N

    @property
    def R(self) -> np.ndarray:
        """Real parts ``R_j`` for ``j = -M..M``."""
        return self.Z[:, 0].real.copy()

    @property
    def wrap(self) -> np.ndarray:
        """True for triangles that use a vertex shifted by ``+-2*pi*i``."""
        return np.any(self.tri_shift != 0, axis=1)

    @property
    def partner(self) -> np.ndarray:
        n = self.n_left
        t = np.arange(self.n_triangles)
        return np.where(t < n, t + n, t - n)

    def vertex(self, j: int, k: int) -> complex:
        return complex(self.Z[j + self.M, k])

    def triangle_Z(self, t=None) -> np.ndarray:
        """True (shift-adjusted) vertex coordinates, shape ``(n, 3)``."""
        sel = slice(None) if t is None else t
        j, k, s = self.tri_j[sel], self.tri_k[sel], self.tri_shift[sel]
        return self.Z[j + self.M, k] + 2j * np.pi * s

    def triangle_columns(self) -> np.ndarray:
        """Zero-based unknown columns of each triangle vertex, shape ``(4MN, 3)``."""
        return self.index.column(self.tri_j, self.tri_k)

    def label(self, t: int) -> tuple[str, str, int, int]:
        """Human-readable ``(half, family, j, k)`` label of triangle ``t``."""
        return (
            "left" if self.half[t] == LEFT else "right",
            "+" if self.family[t] == PLUS else "-",
            int(self.label_j[t]),
            int(self.label_k[t]),
        )


def choose_M(N: int) -> int:
    """Least multiple of 4 that is at least ``N log N / (pi sqrt 3)``."""
    if N < 3:
        raise ParameterError(f"N must be >= 3, got {N}")
    target = N * math.log(N) / (math.pi * SQRT3)
    return 4 * max(1, math.ceil(target / 4 - 1e-12))


def _left_triangles(M: int, N: int):
    """Unsorted left-half triangles as ``(fam, jl, kl, vj, vk)`` arrays."""
    rows = []
    k = np.arange(N)
    for j in range(-M + 1, 1):
        if j % 2 == 0:
            vj = [j - 1, j - 1, j]
            vk = [k - 1, k, k]
        else:
            vj = [j - 1, j - 1, j]
            vk = [k, k + 1, k]
        rows.append((PLUS, j, vj, vk))
    for j in range(-M, 0):
        if j % 2 == 0:
            vj = [j + 1, j + 1, j]
            vk = [k - 1, k, k]
        else:
            vj = [j + 1, j + 1, j]
            vk = [k, k + 1, k]
        rows.append((MINUS, j, vj, vk))

    fam, jl, kl, tj, tk = [], [], [], [], []
    for f, j, vj, vk in rows:
        fam.append(np.full(N, f))
        jl.append(np.full(N, j))
        kl.append(k)
        tj.append(np.column_stack([np.full(N, v) for v in vj]))
        tk.append(np.column_stack(vk))
    return (np.concatenate(fam), np.concatenate(jl), np.concatenate(kl),
            np.vstack(tj), np.vstack(tk))


def _orient(Zt: np.ndarray) -> np.ndarray:
    """Signed doubled area of each row of a ``(n, 3)`` complex array."""
    return np.imag(np.conj(Zt[:, 1] - Zt[:, 0]) * (Zt[:, 2] - Zt[:, 0]))


def build_mesh(order: MeshOrder | tuple[int, int]) -> LogMesh:
    """Build the reflected logarithmic mesh for ``order``."""
    if not isinstance(order, MeshOrder):
        order = MeshOrder(*order)
    M, N = order.M, order.N
    h = order.step

    j = np.arange(-M, M + 1)
    k = np.arange(N)
    jj, kk = np.meshgrid(j, k, indexing="ij")
    jl = -np.abs(jj)
    Zleft = h * jl + 2j * np.pi * (kk + (jl % 2) / 2) / N
    # Z_jk = -conj(Z_{-j,k}) on the right half
    Z = np.where(jj > 0, -np.conj(Zleft), Zleft)

    fam, lj, lk, tj, tk = _left_triangles(M, N)
    order_idx = np.lexsort((-fam, lk, lj))
    fam, lj, lk, tj, tk = fam[order_idx], lj[order_idx], lk[order_idx], tj[order_idx], tk[order_idx]

    shift = np.floor_divide(tk, N)
    tk = tk - shift * N

    Zt = Z[tj + M, tk] + 2j * np.pi * shift
    neg = _orient(Zt) < 0
    tj[neg] = tj[neg][:, [0, 2, 1]]
    tk[neg] = tk[neg][:, [0, 2, 1]]
    shift[neg] = shift[neg][:, [0, 2, 1]]

    # mirror: the reflection reverses orientation, so swap two vertices back
    rj = -tj[:, [0, 2, 1]]
    rk = tk[:, [0, 2, 1]]
    rs = shift[:, [0, 2, 1]]

    n = fam.size
    return LogMesh(
        order=order,
        Z=Z,
        tri_j=np.vstack([tj, rj]),
        tri_k=np.vstack([tk, rk]),
        tri_shift=np.vstack([shift, rs]),
        family=np.concatenate([fam, fam]),
        half=np.concatenate([np.full(n, LEFT), np.full(n, RIGHT)]),
        label_j=np.concatenate([lj, -lj]),
        label_k=np.concatenate([lk, lk]),
        index=IndexMap(M, N),
    )


def disk_vertices(mesh: LogMesh) -> np.ndarray:
    """``z_jk = exp(Z_jk)`` for ``-M <= j <= 0``, shape ``(M+1, N)``."""
    return np.exp(mesh.Z[: mesh.M + 1])
