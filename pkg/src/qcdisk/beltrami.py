"""Beltrami fields, affine mu-conformal maps and the log-plane pullback."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateInputError, DomainError, InadmissibleFieldError, ParameterError
from .mesh import LEFT, LogMesh


def _check_mu(mu):
    if np.any(np.abs(mu) >= 1):
        raise DomainError(f"Beltrami coefficient must satisfy |mu| < 1, got {mu!r}")


def L_mu(mu, z):
    """Normalized real-linear map ``(z + mu conj z) / (1 + mu)``; fixes 0 and 1."""
    _check_mu(mu)
    return (z + mu * np.conj(z)) / (1 + mu)


def affine_B(mu, z1, z2, w1, w2):
    """The unique mu-conformal affine map sending ``z1 -> w1`` and ``z2 -> w2``."""
    _check_mu(mu)
    if z1 == z2 or w1 == w2:
        raise DegenerateInputError("affine_B needs z1 != z2 and w1 != w2")
    base = L_mu(mu, z2 - z1)
    scale = (w2 - w1) / base

    def B(z):
        return w1 + scale * L_mu(mu, np.asarray(z) - z1)

    return B


def implicit_mu(z1, z2, z3, w1, w2, w3):
    """Beltrami coefficient of the affine map taking ``(z1,z2,z3)`` to ``(w1,w2,w3)``.

    Orientation-reversing data yields a value with modulus >= 1 (``inf`` when
    the denominator vanishes) rather than an exception.
    """
    z1, z2, z3, w1, w2, w3 = np.broadcast_arrays(
        *(np.asarray(v, dtype=complex) for v in (z1, z2, z3, w1, w2, w3)))
    if np.any(np.abs(_cross(z2 - z1, z3 - z1)) == 0) or np.any(np.abs(_cross(w2 - w1, w3 - w1)) == 0):
        raise DegenerateInputError("implicit_mu needs noncollinear triples")
    num = (z2 - z1) * (w3 - w1) - (z3 - z1) * (w2 - w1)
    den = np.conj(z2 - z1) * (w3 - w1) - np.conj(z3 - z1) * (w2 - w1)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(den == 0, np.inf + 0j, -num / np.where(den == 0, 1, den))
    return complex(out) if out.ndim == 0 else out


def _cross(a, b):
    return np.imag(np.conj(a) * b)


def triangle_discrepancy(c0, c):
    """Dilatation taking the triangle ``(0, 1, c0)`` to ``(0, 1, c)``.

    Zero exactly when the triangles are similar; always inside the unit disk.
    """
    if np.any(np.imag(c0) <= 0) or np.any(np.imag(c) <= 0):
        raise DomainError("triangle_discrepancy needs Im c0 > 0 and Im c > 0")
    return -(c - c0) / (c - np.conj(c0))


# ---------------------------------------------------------------------------
# builtin fields

def radial_profile(r):
    """phi(r) = (1 - cos 3r) / (1 - cos 3)."""
    return (1 - np.cos(3 * r)) / (1 - math.cos(3.0))


def radial_profile_deriv(r):
    return 3 * np.sin(3 * r) / (1 - math.cos(3.0))


def sector_angle(theta):
    """psi(theta): slope 1/2 on [0, pi], 3/2 on [pi, 2pi]."""
    t = np.mod(theta, 2 * np.pi)
    return np.where(t <= np.pi, t / 2, np.pi / 2 + 1.5 * (t - np.pi))


def sector_slope(theta):
    t = np.mod(theta, 2 * np.pi)
    return np.where(t < np.pi, 0.5, 1.5)


def _nonzero(z, what):
    if np.any(z == 0):
        raise DomainError(f"the {what} field is undefined at z = 0")


def _radial(z):
    _nonzero(z, "radial")
    r = np.abs(z)
    t = r * radial_profile_deriv(r) / radial_profile(r)
    return (t - 1) / (t + 1) * z / np.conj(z)


def _sectorial(z):
    _nonzero(z, "sectorial")
    d = sector_slope(np.angle(z))
    return (1 - d) / (1 + d) * z / np.conj(z)


def _daripa1(z):
    return np.abs(z) ** 2 * np.exp(0.65 * (1j * z ** 5 - 2.0))


def _daripa2(z):
    return 0.5 * np.abs(z) ** 2 * np.sin(5 * z.real)


def _oscillate(z):
    return 0.9 * np.sin(np.abs(20 * z)) + 0j


# radius used for Fuchsian evaluation on the unit circle, where the series
# has its natural boundary
FUCHSIAN_RMAX = 1 - 1e-9


@lru_cache(maxsize=8)
def _group(word_len):
    from .fuchsian import enumerate_group
    return enumerate_group(word_len)


_SIMPLE = {
    "radial": _radial,
    "sectorial": _sectorial,
    "daripa1": _daripa1,
    "daripa2": _daripa2,
    "oscillate": _oscillate,
}

CATALOG = ("constant:<re>[+<im>i]", "radial", "sectorial", "daripa1", "daripa2",
           "oscillate", "fuchsian:<c>[:<wordLen>]")


@dataclass(frozen=True)
class BeltramiSpec:
    """A named Beltrami field on the closed unit disk.

    ``params`` is ``(c,)`` for ``constant`` and ``(c, word_len)`` for
    ``fuchsian``; the other builtins take no parameters.
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind == "constant":
            (c,) = self.params
            if abs(c) >= 1:
                raise InadmissibleFieldError(f"constant field needs |c| < 1, got {c}")
        elif self.kind == "fuchsian":
            c, L = self.params
            if abs(c) >= 1:
                raise InadmissibleFieldError(f"fuchsian field needs |c| < 1, got {c}")
            if L < 0:
                raise ParameterError("fuchsian word length must be >= 0")
        elif self.kind not in _SIMPLE:
            raise ParameterError(f"unknown field kind {self.kind!r}; valid: {', '.join(CATALOG)}")

    @classmethod
    def constant(cls, c) -> "BeltramiSpec":
        return cls("constant", (complex(c),))

    @classmethod
    def fuchsian(cls, c: float, word_len: int = 6) -> "BeltramiSpec":
        return cls("fuchsian", (float(c), int(word_len)))

    @classmethod
    def parse(cls, text: str) -> "BeltramiSpec":
        """Parse the CLI syntax, e.g. ``constant:0.3``, ``radial``, ``fuchsian:0.5:6``."""
        head, _, rest = text.strip().partition(":")
        bad = ParameterError(f"cannot parse field {text!r}; valid: {', '.join(CATALOG)}")
        if head == "constant":
            try:
                c = complex(rest.replace("i", "j"))
            except ValueError:
                raise bad from None
            return cls.constant(c)
        if head == "fuchsian":
            parts = rest.split(":")
            try:
                if len(parts) > 2 or not parts[0]:
                    raise ValueError
                c = float(parts[0])
                L = int(parts[1]) if len(parts) == 2 else 6
            except ValueError:
                raise bad from None
            return cls.fuchsian(c, L)
        if head in _SIMPLE and not rest:
            return cls(head)
        raise ParameterError(f"unknown field {text!r}; valid: {', '.join(CATALOG)}")

    @property
    def name(self) -> str:
        if self.kind == "constant":
            c = self.params[0]
            if c.imag == 0:
                return f"constant:{c.real:g}"
            return f"constant:{c.real:g}{c.imag:+g}i"
        if self.kind == "fuchsian":
            return f"fuchsian:{self.params[0]:g}:{self.params[1]}"
        return self.kind

    @property
    def continuous(self) -> bool:
        """False for fields with jump discontinuities inside the disk."""
        return self.kind != "sectorial"

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "constant":
            return np.full(z.shape, self.params[0], dtype=complex)
        if self.kind == "fuchsian":
            from .fuchsian import fuchsian_mu
            c, L = self.params
            r = np.abs(z)
            zc = np.where(r > FUCHSIAN_RMAX, z * (FUCHSIAN_RMAX / np.maximum(r, 1e-300)), z)
            return fuchsian_mu(c, _group(L), zc)
        return _SIMPLE[self.kind](z)


def pullback_nu(spec, Z):
    """Pullback of ``mu`` to the log plane: ``mu(e^Z) exp(-2i Im Z)``."""
    Z = np.asarray(Z, dtype=complex)
    return spec(np.exp(Z)) * np.exp(-2j * Z.imag)


# ---------------------------------------------------------------------------
# per-triangle averages

@dataclass(frozen=True, eq=False)
class NuTable:
    """Per-triangle constant dilatation, aligned with the mesh triangle arrays."""

    values: np.ndarray
    rule: str

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


@lru_cache(maxsize=None)
def subtriangle_centroids(level: int) -> np.ndarray:
    """Barycentric centroids of the ``4**level`` congruent subtriangles."""
    n = 2 ** level
    pts = []
    for a in range(n):
        for b in range(n - a):
            pts.append(((a + 1 / 3) / n, (b + 1 / 3) / n))
            if a + b < n - 1:
                pts.append(((a + 2 / 3) / n, (b + 2 / 3) / n))
    P = np.array(pts)
    return np.column_stack([1 - P.sum(axis=1), P])


def nu_table(spec, mesh: LogMesh, rule: str = "auto", level: int = 4) -> NuTable:
    """Average the pulled-back field over each triangle.

    ``rule="vertex"`` takes the mean over the three vertices; ``"area"``
    uses the centroid rule on ``4**level`` subtriangles.  ``"auto"`` picks
    the vertex mean for continuous fields and the area mean otherwise.
    Right-half values are conjugates of their left partners.
    """
    if rule == "auto":
        rule = "vertex" if getattr(spec, "continuous", True) else "area"
    if rule not in ("vertex", "area"):
        raise ParameterError(f"unknown averaging rule {rule!r}")

    zv = np.exp(mesh.Z[: mesh.M + 1])
    mv = spec(zv)
    if np.any(~np.isfinite(mv)) or np.any(np.abs(mv) >= 1):
        bad = np.argwhere(~(np.abs(mv) < 1))[0]
        j, k = int(bad[0]) - mesh.M, int(bad[1])
        raise InadmissibleFieldError(f"|mu| >= 1 at mesh vertex (j={j}, k={k})")

    n = mesh.n_left
    Zt = mesh.triangle_Z(slice(0, n))
    if rule == "vertex":
        left = pullback_nu(spec, Zt).mean(axis=1)
    else:
        G = subtriangle_centroids(level)
        left = np.empty(n, dtype=complex)
        chunk = max(1, 200_000 // G.shape[0])
        for s in range(0, n, chunk):
            pts = Zt[s:s + chunk] @ G.T
            left[s:s + chunk] = pullback_nu(spec, pts).mean(axis=1)

    bad = np.flatnonzero(~(np.abs(left) < 1))
    if bad.size:
        raise InadmissibleFieldError(f"|nu| >= 1 on triangle {mesh.label(int(bad[0]))}")
    values = np.concatenate([left, np.conj(left)])
    assert np.all(mesh.half[:n] == LEFT)
    return NuTable(values=values, rule=rule)
