"""liecurv: build F4, split it with two involutions, and study Einstein metrics.

Exit codes: 0 ok, 1 verification failure, 2 construction error,
3 involution error, 4 bad input.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .chevalley import build_chevalley, compact_form, invariant_form, jacobi_check
from .curvature import (MetricParams, ricci_closed_form, ricci_connection_path,
                        ricci_triple_bracket_u)
from .einstein import ACCEPT_TOL, enumerate_solutions
from .involution import (InvolutionError, InvolutionSpec, compose, fixed_subalgebra,
                         grading_matrix, identify_type, involution_from_marks,
                         joint_decomposition, block_subtable)
from .model import TAU_MARKS, THETA_MARKS, f4_model
from .report import dumps, fmt, table
from .root_system import (LONG_ROOT_2, NEGATIVE_KILLING, CartanType, UnsupportedTypeError,
                          build_root_system)

EXIT_OK, EXIT_VERIFY, EXIT_BUILD, EXIT_INVOLUTION, EXIT_INPUT = 0, 1, 2, 3, 4
PATHS = ("closed", "brackets", "connection")


class UsageError(Exception):
    pass


class _BuildError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    fmt: str = "table"
    tol: float = ACCEPT_TOL
    normalization: str = LONG_ROOT_2
    output: str | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError(f"tolerance must be positive, got {self.tol}")


def _type_name(sub) -> str:
    try:
        t = identify_type(sub)
    except ValueError:
        return "not semisimple"
    return " + ".join(map(str, t)) if isinstance(t, list) else str(t)


def cmd_algebra(cfg: RunConfig, args) -> tuple[int, str]:
    try:
        rs = build_root_system(CartanType.parse(args.type))
    except UnsupportedTypeError as e:
        raise _BuildError(str(e)) from None
    alg = build_chevalley(rs)
    cb = compact_form(alg)
    rep = jacobi_check(alg.table)
    rep_c = jacobi_check(cb.table)
    data = {
        "type": str(rs.cartan_type),
        "rank": rs.rank,
        "dimension": rs.dimension,
        "roots": len(rs.roots),
        "positive_roots": len(rs.positive_roots),
        "highest_root": list(rs.highest_root.coeffs),
        "cartan_matrix": [list(row) for row in rs.cartan],
        "killing_scale": fmt(invariant_form(cb, NEGATIVE_KILLING).scale),
        "jacobi": "pass" if rep.ok and rep_c.ok else "fail",
        "jacobi_triples": rep.triples_checked,
    }
    if cfg.fmt == "json":
        return (EXIT_OK if data["jacobi"] == "pass" else EXIT_BUILD), dumps(data)
    rows = [(k.replace("_", " "), v) for k, v in data.items() if k != "cartan_matrix"]
    text = table(rows, ("property", "value"))
    text += "cartan matrix:\n" + "".join("  " + " ".join(f"{x:2d}" for x in row) + "\n"
                                         for row in rs.cartan)
    return (EXIT_OK if data["jacobi"] == "pass" else EXIT_BUILD), text


def cmd_decompose(cfg: RunConfig, args) -> tuple[int, str]:
    m = f4_model()
    rs, cb = m.rs, m.cb
    theta = involution_from_marks(rs, InvolutionSpec.parse(args.theta))
    tau = involution_from_marks(rs, InvolutionSpec.parse(args.tau))
    decomp = joint_decomposition(theta, tau, cb)
    grading = grading_matrix(decomp, cb)
    types = {
        "k_theta": _type_name(fixed_subalgebra(cb, theta)[1]),
        "k_tau": _type_name(fixed_subalgebra(cb, tau)[1]),
        "k_theta_tau": _type_name(fixed_subalgebra(cb, compose(theta, tau))[1]),
        "h1": _type_name(block_subtable(decomp, cb, 0)),
    }
    data = {
        "theta": args.theta,
        "tau": args.tau,
        "dims": list(decomp.dims),
        "boundaries": list(decomp.boundaries),
        "grading": [[g[0] if len(g) == 1 else g for g in row] for row in grading],
        "types": types,
    }
    if cfg.fmt == "json":
        return EXIT_OK, dumps(data)
    signs = ["++", "+-", "-+", "--"]
    rows = [(f"h{k + 1}", signs[k], d) for k, d in enumerate(decomp.dims)]
    text = table(rows, ("block", "(theta,tau)", "dim"))
    text += "\n[h_i, h_j] lies in block:\n"
    text += table([[f"h{i + 1}"] + [f"h{x}" if not isinstance(x, list) else "-" for x in row]
                   for i, row in enumerate(data["grading"])],
                  ("", "h1", "h2", "h3", "h4"))
    text += "\n" + table([(k, v) for k, v in types.items()], ("subalgebra", "type"))
    return EXIT_OK, text


def cmd_ricci(cfg: RunConfig, args) -> tuple[int, str]:
    try:
        p = MetricParams.parse(args.u)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if len(p) != 4:
        raise UsageError(f"expected four coefficients, got {len(p)}")
    m = f4_model()
    scale = invariant_form(m.cb, NEGATIVE_KILLING).scale
    # u is read against the chosen form; internally everything is long-root-2
    u = p.scaled(scale) if cfg.normalization == NEGATIVE_KILLING else p
    paths = PATHS if args.path == "all" else (args.path,)
    results = {}
    for name in paths:
        if name == "closed":
            results[name] = ricci_closed_form(u, m.casimir)
        elif name == "brackets":
            results[name] = ricci_triple_bracket_u(u, m.brackets_killing, m.decomp.dims, scale)
        else:
            results[name] = ricci_connection_path(u, m.cb, m.decomp)
    first = results[paths[0]]
    spread = max(a.disagreement(b) for a in results.values() for b in results.values())
    einstein = first.is_einstein(cfg.tol)
    data = {
        "u": fmt(list(p.u)),
        "normalization": cfg.normalization,
        "components": {k: fmt(list(v.r)) for k, v in results.items()},
        "max_disagreement": fmt(spread),
        "einstein": einstein,
    }
    if cfg.fmt == "json":
        return EXIT_OK, dumps(data)
    rows = [(k,) + tuple(fmt(list(v.r))) for k, v in results.items()]
    text = table(rows, ("path", "r1", "r2", "r3", "r4"))
    text += f"max disagreement: {fmt(spread)}\n"
    text += "Einstein\n" if einstein else "not Einstein\n"
    return EXIT_OK, text


def cmd_solve(cfg: RunConfig, args) -> tuple[int, str]:
    sols = enumerate_solutions(tol=cfg.tol)
    if cfg.fmt == "json":
        return EXIT_OK, dumps([s.as_dict() for s in sols])
    rows = [(fmt(list(s.u)), fmt(s.einstein_constant), fmt(s.residual),
             str(s.classification), s.provenance) for s in sols]
    return EXIT_OK, table(rows, ("u", "constant", "residual", "class", "source"))


def cmd_verify(cfg: RunConfig, args) -> tuple[int, str]:
    from .verify import run_all
    checks = run_all()
    failed = [c for c in checks if not c.passed]
    code = EXIT_VERIFY if failed else EXIT_OK
    if cfg.fmt == "json":
        return code, dumps({"passed": not failed,
                            "checks": [c.as_dict(args.timings) for c in checks]})
    rows = [(c.criterion, "PASS" if c.passed else "FAIL", c.name, c.expected,
             c.shown_computed(args.timings)) for c in checks]
    text = table(rows, ("#", "status", "check", "expected", "computed"))
    text += f"{len(checks) - len(failed)}/{len(checks)} checks passed\n"
    if failed:
        text += "failures: " + "; ".join(f"[{c.criterion}] {c.name}" for c in failed) + "\n"
    return code, text


COMMANDS = {
    "algebra": cmd_algebra,
    "decompose": cmd_decompose,
    "ricci": cmd_ricci,
    "solve": cmd_solve,
    "verify-paper": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--output", metavar="PATH", help="write the report to a file")
    common.add_argument("--normalization", choices=(LONG_ROOT_2, NEGATIVE_KILLING),
                        default=LONG_ROOT_2, help="invariant form the metric is written against")
    common.add_argument("--tol", type=float, default=ACCEPT_TOL,
                        help="tolerance for Einstein residuals")

    parser = _Parser(prog="liecurv", description="Exact F4 Lie algebra and Einstein metrics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("algebra", parents=[common], help="build a root system and its algebra")
    p.add_argument("--type", default="f4", help="Cartan type such as f4, b4, d4")
    p = sub.add_parser("decompose", parents=[common], help="split F4 by two involutions")
    p.add_argument("--theta", default=THETA_MARKS)
    p.add_argument("--tau", default=TAU_MARKS)
    p = sub.add_parser("ricci", parents=[common], help="Ricci components of a metric")
    p.add_argument("--u", required=True, help="four coefficients, e.g. 3/5,1,1,1")
    p.add_argument("--path", choices=PATHS + ("all",), default="all")
    sub.add_parser("solve", parents=[common], help="enumerate the Einstein metrics")
    p = sub.add_parser("verify-paper", parents=[common], help="run every end-to-end check")
    p.add_argument("--timings", action="store_true", help="show wall-clock readings")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.format, args.tol, args.normalization, args.output)
        code, text = COMMANDS[args.command](cfg, args)
    except UsageError as e:
        print(f"liecurv: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except _BuildError as e:
        print(f"liecurv: error: {e}", file=sys.stderr)
        return EXIT_BUILD
    except InvolutionError as e:
        print(f"liecurv: involution error: {e}", file=sys.stderr)
        return EXIT_INVOLUTION
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
