"""Poincare theta series for a free Fuchsian group of rank two.

The group is generated by two hyperbolic disk automorphisms whose
isometric circles are centred at ``+-sqrt(2)`` and ``+-i sqrt(2)`` with
radius 1; the four circles are pairwise tangent on the unit circle, so
the region outside all of them is an ideal quadrilateral fundamental
domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceError

WORD_CAP = 200_000
MAX_REDUCTION_STEPS = 100


@dataclass(frozen=True)
class Mobius:
    """``z -> (a z + b) / (c z + d)`` with ``ad - bc = 1``."""

    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def normalized(cls, a, b, c, d) -> "Mobius":
        det = complex(a * d - b * c)
        if det == 0:
            raise DomainError("singular Mobius matrix")
        s = np.sqrt(det)
        return cls(complex(a / s), complex(b / s), complex(c / s), complex(d / s))

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "Mobius") -> "Mobius":
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def __call__(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def deriv(self, z):
        return 1 / (self.c * z + self.d) ** 2


S = math.sqrt(2) / 2
G1 = Mobius.normalized(1, S, S, 1)
G2 = Mobius.normalized(1, 1j * S, -1j * S, 1)
GENERATORS = (G1, G2, G1.inverse(), G2.inverse())
# index of the inverse letter
_INV = (2, 3, 0, 1)


@dataclass(frozen=True, eq=False)
class GroupEnumeration:
    """All freely reduced words of length ``<= L`` as coefficient arrays."""

    L: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    words: tuple

    def __len__(self) -> int:
        return self.a.size

    def element(self, i: int) -> Mobius:
        return Mobius(complex(self.a[i]), complex(self.b[i]), complex(self.c[i]), complex(self.d[i]))


def word_count(L: int) -> int:
    return 1 + 2 * (3 ** L - 1)


def enumerate_group(L: int, cap: int = WORD_CAP) -> GroupEnumeration:
    """Breadth-first enumeration of reduced words over ``g1, g2, g1^-1, g2^-1``."""
    if L < 0:
        raise DomainError("word length must be >= 0")
    if word_count(L) > cap:
        raise ResourceError(f"{word_count(L)} words at length {L} exceeds the cap of {cap}")
    ident = Mobius(1, 0, 0, 1)
    elems = [ident]
    words = [()]
    frontier = [((), ident)]
    for _ in range(L):
        nxt = []
        for w, g in frontier:
            for i, gen in enumerate(GENERATORS):
                if w and _INV[w[-1]] == i:
                    continue
                item = (w + (i,), g @ gen)
                nxt.append(item)
        frontier = nxt
        words.extend(w for w, _ in nxt)
        elems.extend(g for _, g in nxt)
    arr = np.array([[e.a, e.b, e.c, e.d] for e in elems], dtype=complex)
    return GroupEnumeration(L, arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], tuple(words))


def _check_disk(z):
    if np.any(np.abs(z) >= 1):
        raise DomainError("the theta series is evaluated inside the open unit disk")


def reduce_to_domain(z):
    """Map ``z`` into the fundamental domain.

    Returns ``(z', gamma')`` with ``z' = gamma(z)`` for a group element
    ``gamma`` built from generator steps.  Each step applies the generator
    whose isometric circle contains the point most deeply.
    """
    z = np.array(z, dtype=complex)
    der = np.ones_like(z)
    cs = np.array([g.c for g in GENERATORS])
    ds = np.array([g.d for g in GENERATORS])
    for _ in range(MAX_REDUCTION_STEPS):
        mod = np.abs(cs[:, None] * z.ravel()[None, :] + ds[:, None]).reshape((4,) + z.shape)
        pick = np.argmin(mod, axis=0)
        act = np.take_along_axis(mod, pick[None], axis=0)[0] < 1 - 1e-14
        if not np.any(act):
            break
        for i, g in enumerate(GENERATORS):
            sel = act & (pick == i)
            if np.any(sel):
                der[sel] = der[sel] * g.deriv(z[sel])
                z[sel] = g(z[sel])
    return z, der


def theta_series(enum: GroupEnumeration, z, reduce: bool = True):
    """Truncated series ``sum over words of gamma'(z)^2 = (cz + d)^-4``.

    With ``reduce`` the sum is only evaluated inside the fundamental domain
    and carried back by ``Theta(z) = Theta(gamma z) gamma'(z)^2``.
    """
    z = np.asarray(z, dtype=complex)
    _check_disk(z)
    flat = z.ravel()
    if reduce:
        flat, der = reduce_to_domain(flat)
    else:
        der = np.ones_like(flat)
    out = np.empty_like(flat)
    chunk = max(1, 400_000 // max(len(enum), 1))
    for s in range(0, flat.size, chunk):
        zz = flat[s:s + chunk]
        out[s:s + chunk] = np.sum((enum.c[:, None] * zz[None, :] + enum.d[:, None]) ** -4, axis=0)
    out = (out * der ** 2).reshape(z.shape)
    return complex(out) if out.ndim == 0 else out


def fuchsian_mu(c: float, enum: GroupEnumeration, z):
    """Invariant Beltrami field ``c conj(Theta) / |Theta|``."""
    if abs(c) >= 1:
        raise DomainError(f"|c| must be < 1, got {c}")
    th = np.asarray(theta_series(enum, z))
    mag = np.abs(th)
    if np.any(mag < 1e-12):
        raise DomainError("Theta vanishes at the evaluation point; perturb z")
    out = c * np.conj(th) / mag
    return complex(out) if out.ndim == 0 else out
