"""Closed-form reference maps used to check the solver.

The constant-mu map sends the disk to itself: ``L_mu`` turns the unit
circle into an ellipse, a scaling puts its foci at ``+-1``, and
``sqrt(k) sn((2K/pi) arcsin u; k^2)`` maps the ellipse interior
conformally back onto the disk.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

from .beltrami import BeltramiSpec, radial_profile, sector_angle
from .errors import DomainError, UnsupportedOracleError


def _check_q(q):
    if not 0 < q < 1:
        raise DomainError(f"nome must satisfy 0 < q < 1, got {q}")


def theta2_theta3(q: float) -> tuple[float, float]:
    """Null values ``theta_2(q)`` and ``theta_3(q)`` by direct q-series."""
    _check_q(q)
    t2 = 0.0
    t3 = 1.0
    n = 0
    while True:
        a = 2 * q ** ((n + 0.5) ** 2)
        b = 2 * q ** ((n + 1) ** 2)
        t2 += a
        t3 += b
        if a < 1e-17 * t2 and b < 1e-17 * t3:
            return t2, t3
        n += 1


def complete_K(m: float) -> float:
    """Complete elliptic integral of the first kind by the AGM."""
    if not 0 <= m < 1:
        raise DomainError(f"parameter must satisfy 0 <= m < 1, got {m}")
    a, b = 1.0, math.sqrt(1 - m)
    # quadratic convergence: a few steps reach rounding level
    for _ in range(60):
        if abs(a - b) <= 4 * sys.float_info.epsilon * a:
            break
        a, b = (a + b) / 2, math.sqrt(a * b)
    return math.pi / (2 * a)


def nome(m: float) -> float:
    """Jacobi nome ``q = exp(-pi K'/K)``."""
    return math.exp(-math.pi * complete_K(1 - m) / complete_K(m))


def _theta_terms(q, v):
    """``theta_1(v)`` and ``theta_4(v)`` for complex ``v``."""
    lq = -math.log(q)
    grow = 2 * float(np.max(np.abs(np.imag(v)), initial=0.0))
    # stop once q^(n^2) e^(2n |Im v|) drops below machine precision
    nmax = 2
    while nmax * nmax * lq - (2 * nmax + 1) * grow < 40:
        nmax += 1
    t1 = np.zeros_like(v)
    t4 = np.ones_like(v)
    for n in range(nmax + 1):
        t1 = t1 + 2 * (-1) ** n * q ** ((n + 0.5) ** 2) * np.sin((2 * n + 1) * v)
        if n:
            t4 = t4 + 2 * (-1) ** n * q ** (n * n) * np.cos(2 * n * v)
    return t1, t4


def jacobi_sn(u, m: float):
    """``sn(u; m)`` for complex ``u`` via the theta-function quotient."""
    if not 0 < m < 1:
        raise DomainError(f"parameter must satisfy 0 < m < 1, got {m}")
    q = nome(m)
    t2, t3 = theta2_theta3(q)
    u = np.asarray(u, dtype=complex)
    v = u / (t3 * t3)
    # poles sit at v = n pi + i (l + 1/2) (-log q); measure in lattice units
    a = v.real / math.pi
    b = v.imag / (-math.log(q)) - 0.5
    if np.any(np.hypot(a - np.round(a), b - np.round(b)) < 1e-8):
        raise DomainError("jacobi_sn evaluated at a pole")
    t1, t4 = _theta_terms(q, v)
    out = (t3 / t2) * t1 / t4
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class EllipticParams:
    """Parameters of the constant-mu oracle for real ``0 < mu < 1``."""

    mu: float
    a: float
    b: float
    q: float
    k: float
    m: float
    K: float

    @classmethod
    def from_mu(cls, mu) -> "EllipticParams":
        mu = _real_mu(mu)
        s = math.sqrt(mu)
        a = (1 / s + s) / 2
        b = (1 / s - s) / 2
        q = mu * mu
        t2, t3 = theta2_theta3(q)
        k = (t2 / t3) ** 2
        return cls(mu=mu, a=a, b=b, q=q, k=k, m=k * k, K=math.pi / 2 * t3 * t3)


def _real_mu(mu) -> float:
    c = complex(mu)
    if c.imag != 0 or not 0 < c.real < 1:
        raise UnsupportedOracleError(f"the constant-mu oracle needs real 0 < mu < 1, got {mu}")
    return c.real


def exact_constant_map(mu, z):
    """Exact normalized solution ``f(0)=0, f(1)=1`` for constant real ``mu``."""
    p = EllipticParams.from_mu(mu)
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1 + 1e-12):
        raise DomainError("exact_constant_map needs |z| <= 1")
    u = (z + p.mu * np.conj(z)) / (2 * math.sqrt(p.mu))
    w = math.sqrt(p.k) * _sn_with_params(2 * p.K / math.pi * np.arcsin(u), p)
    return complex(w) if w.ndim == 0 else w


def _sn_with_params(u, p: EllipticParams):
    t2, t3 = theta2_theta3(p.q)
    v = np.asarray(u, dtype=complex) / (t3 * t3)
    t1, t4 = _theta_terms(p.q, v)
    return (t3 / t2) * t1 / t4


def constant_oracle(mu):
    """Exact map for constant real ``mu`` in ``[0, 1)``; the identity at 0."""
    if complex(mu) == 0:
        return lambda z: np.asarray(z, dtype=complex)
    _real_mu(mu)
    return lambda z: exact_constant_map(mu, z)


def radial_map(z):
    """``f(z) = phi(|z|) z / |z|``."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise DomainError("the radial map is evaluated away from z = 0")
    r = np.abs(z)
    return radial_profile(r) * z / r


def radial_pair():
    """Radial field and its exact solution."""
    return BeltramiSpec("radial"), radial_map


def sectorial_pair():
    """Sectorial field and the exact boundary argument ``psi(theta)``."""
    return BeltramiSpec("sectorial"), sector_angle


def exterior_map(alpha: float, z):
    """Conformal map of the disk onto the exterior of an ellipse with aspect ratio ``alpha``."""
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must satisfy 0 < alpha < 1, got {alpha}")
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise DomainError("exterior_map has a pole at z = 0")
    out = ((1 + alpha) - (1 - alpha) * z * z) / (2 * alpha * z)
    return complex(out) if out.ndim == 0 else out
