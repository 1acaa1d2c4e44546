"""Command-line driver.

Exit codes: 0 ok, 1 usage, 2 solver failure, 3 inadmissible field, 4 I/O.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .beltrami import BeltramiSpec
from .errors import (DomainError, InadmissibleFieldError, ParameterError, SolverError,
                     UnsupportedOracleError)
from .export import fundamental_midpoints, load_solution, render_svg, save_solution
from .mapping import evaluate_pl
from .mesh import choose_M
from .pipeline import solve_field, verification_error

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_FIELD, EXIT_IO = 0, 1, 2, 3, 4

SCHEDULE = (16, 32, 48, 64, 72, 84)
TABLES = {
    1: ("constant:0.1", "constant:0.3", "constant:0.5", "constant:0.7"),
    2: ("radial",),
    3: ("sectorial",),
}
CSV_HEADER = ("mu", "M", "N", "max_error", "runtime_s")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qcdisk", description="Quasiconformal self-maps of the unit disk.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def mesh_args(sp, need_mu=True, need_N=True):
        sp.add_argument("--mu", required=need_mu, help="field, e.g. constant:0.3, radial, fuchsian:0.5:6")
        sp.add_argument("--N", type=int, required=need_N, help="angular resolution")
        sp.add_argument("--M", type=int, default=None, help="radial layers per half (default: choose_M(N))")
        sp.add_argument("--tol", type=float, default=1e-10, help="least-squares certificate tolerance")

    s = sub.add_parser("solve", help="solve and write the mesh as JSON")
    mesh_args(s)
    s.add_argument("--out", help="JSON path (default: stdout)")
    s.add_argument("--svg", help="also write an SVG plot")
    s.add_argument("--plane", choices=("z", "W", "w"), default="w")

    v = sub.add_parser("verify", help="error against the closed-form map, as a CSV row")
    mesh_args(v)
    v.add_argument("--out", help="CSV path (default: stdout)")

    t = sub.add_parser("table", help="sweep a reference error table")
    t.add_argument("--table", type=int, choices=(1, 2, 3), required=True)
    t.add_argument("--mu", action="append", help="restrict to these fields (repeatable)")
    t.add_argument("--N", type=int, action="append", help="restrict to these N (repeatable)")
    t.add_argument("--tol", type=float, default=1e-10)
    t.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    t.add_argument("--out", help="CSV path (default: stdout)")

    pl = sub.add_parser("plot", help="SVG of a solved mesh")
    mesh_args(pl, need_mu=False, need_N=False)
    pl.add_argument("--in", dest="infile", help="solution JSON written by solve")
    pl.add_argument("--svg", required=True)
    pl.add_argument("--plane", choices=("z", "W", "w"), default="w")
    pl.add_argument("--size", type=int, default=800)
    pl.add_argument("--stroke", type=float, default=0.5)

    f = sub.add_parser("fuchsian-demo", help="solve the theta-series field and report midpoint images")
    f.add_argument("--mu", default="fuchsian:0.5:6")
    f.add_argument("--N", type=int, default=64)
    f.add_argument("--M", type=int, default=64)
    f.add_argument("--tol", type=float, default=1e-10)
    f.add_argument("--out", help="JSON path")
    f.add_argument("--svg", help="SVG path")
    f.add_argument("--plane", choices=("z", "W", "w"), default="w")
    return p


def _spec(text) -> BeltramiSpec:
    return BeltramiSpec.parse(text)


def _write_text(path, text):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_HEADER)
    for r in sorted(rows, key=lambda r: (r[0], r[2])):
        wr.writerow([r[0], r[1], r[2], repr(r[3]), f"{r[4]:.6f}"])
    return buf.getvalue()


def verify_cell(mu_text: str, N: int, M: int | None = None, tol: float = 1e-10):
    spec = _spec(mu_text)
    sol, runtime = solve_field(spec, N, M, tol=tol)
    return spec.name, sol.mesh.M, N, verification_error(spec, sol), runtime


def cmd_solve(a) -> int:
    spec = _spec(a.mu)
    sol, runtime = solve_field(spec, a.N, a.M, tol=a.tol)
    if a.out:
        save_solution(sol, spec.name, a.out)
    else:
        from .export import solution_to_dict
        json.dump(solution_to_dict(sol, spec.name), sys.stdout)
        sys.stdout.write("\n")
    if a.svg:
        _write_text(a.svg, render_svg(sol, a.plane))
    print(f"{spec.name} M={sol.mesh.M} N={a.N} residual_l2={sol.residuals['residual_l2']:.3e} "
          f"flipped={len(sol.flipped)} runtime_s={runtime:.3f}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(a) -> int:
    spec = _spec(a.mu)
    from .pipeline import has_oracle
    if not has_oracle(spec):
        raise UnsupportedOracleError(f"no closed-form reference for {spec.name}")
    _write_text(a.out, _csv([verify_cell(a.mu, a.N, a.M, a.tol)]))
    return EXIT_OK


def cmd_table(a) -> int:
    fields = a.mu or TABLES[a.table]
    fields = [_spec(m).name for m in fields]
    Ns = a.N or SCHEDULE
    cells = [(m, n) for m in fields for n in Ns]
    if a.jobs > 1:
        with ProcessPoolExecutor(max_workers=a.jobs) as ex:
            rows = list(ex.map(verify_cell, *zip(*cells), [None] * len(cells), [a.tol] * len(cells)))
    else:
        rows = [verify_cell(m, n, None, a.tol) for m, n in cells]
    _write_text(a.out, _csv(rows))
    return EXIT_OK


def cmd_plot(a) -> int:
    if a.infile:
        sol, _ = load_solution(a.infile)
    elif a.mu and a.N:
        sol, _ = solve_field(_spec(a.mu), a.N, a.M, tol=a.tol)
    else:
        raise UsageError("plot needs --in <json> or --mu and --N")
    _write_text(a.svg, render_svg(sol, a.plane, size=a.size, stroke=a.stroke))
    return EXIT_OK


def cmd_fuchsian_demo(a) -> int:
    spec = _spec(a.mu)
    if spec.kind != "fuchsian":
        raise UsageError("fuchsian-demo needs a fuchsian:<c>[:<wordLen>] field")
    M = a.M if a.M is not None else choose_M(a.N)
    sol, runtime = solve_field(spec, a.N, M, tol=a.tol)
    m1, m2 = fundamental_midpoints()
    p1, p2 = evaluate_pl(sol, m1), evaluate_pl(sol, m2)
    report = {
        "mu_spec": spec.name, "M": M, "N": a.N,
        "residual_l2": sol.residuals["residual_l2"],
        "flipped": len(sol.flipped),
        "p1": [p1.real, p1.imag], "p2": [p2.real, p2.imag],
        "runtime_s": runtime,
    }
    print(json.dumps(report, indent=1))
    if a.out:
        save_solution(sol, spec.name, a.out)
    if a.svg:
        _write_text(a.svg, render_svg(sol, a.plane))
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "table": cmd_table,
    "plot": cmd_plot,
    "fuchsian-demo": cmd_fuchsian_demo,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InadmissibleFieldError as exc:
        print(f"inadmissible field: {exc}", file=sys.stderr)
        return EXIT_FIELD
    except (ParameterError, UnsupportedOracleError, DomainError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"solver failure: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
