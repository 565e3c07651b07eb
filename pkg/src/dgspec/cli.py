"""Command-line front end.

Exit codes: 0 ok, 1 usage, 2 parse, 3 precondition, 4 numerical failure,
5 a verification suite found a violation.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io as _io
import os
import sys
from pathlib import Path

from . import estimates, neighborhood, structure, verify
from .components import frobenius_form, min_spanning_trees, scc
from .eig import EigenSolverError, spectrum
from .generators import GenerationError
from .graph import GraphError, quasi_isolated_mask
from .io import dumps_report, format_edge_list, read_edge_list
from .laplacian import PreconditionError, radii

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_PRECONDITION, EXIT_NUMERICAL, EXIT_VIOLATION = range(6)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _csv(rows: list[list]) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _fmt(x) -> str:
    return "-" if x is None else (f"{x:.6g}" if isinstance(x, float) else str(x))


# -- commands --------------------------------------------------------------------

def cmd_spectrum(args):
    g = read_edge_list(args.path)
    s = spectrum(g, with_residuals=True)
    n_r = int((~quasi_isolated_mask(g)).sum())
    total = complex(s.eigenvalues.sum())
    payload = {
        "command": "spectrum",
        "input": Path(args.path).name,
        "n": g.n,
        "spectrum": s.to_dict(),
        "sum_check": {"sum_re": total.real, "sum_im": total.imag, "v_r": n_r,
                      "holds": abs(total - n_r) <= 1e-8 * g.n},
        "radii": radii(g).to_dict(),
    }
    if args.format == "csv":
        return s.to_csv()
    if args.format == "text":
        lines = [f"n = {g.n}, m0 = {s.m0}, m1 = {s.m1}, r = {radii(g).r:.6g}", "re im residual"]
        res = s.residuals
        for k, z in enumerate(s.eigenvalues):
            lines.append(f"{z.real:.10g} {z.imag:.10g} {_fmt(None if res is None else float(res[k]))}")
        return "\n".join(lines) + "\n"
    return dumps_report(payload)


def cmd_components(args):
    g = read_edge_list(args.path)
    form = frobenius_form(g)
    payload = {"command": "components", "input": Path(args.path).name, "n": g.n,
               "scc": scc(g), "frobenius": form.to_dict(),
               "min_spanning_trees": min_spanning_trees(g)}
    if args.format == "csv":
        rows = [["index", "vertices", "isolated", "quasi_isolated"]]
        for k, comp in enumerate(form.components):
            rows.append([k, " ".join(map(str, comp)), form.isolated[k], form.quasi_isolated[k]])
        return _csv(rows)
    if args.format == "text":
        lines = [f"{len(form.components)} components, spanning trees needed: {min_spanning_trees(g)}"]
        for k, comp in enumerate(form.components):
            flag = " isolated" if form.isolated[k] else ""
            lines.append(f"[{k}] {' '.join(map(str, comp))}{flag}")
        return "\n".join(lines) + "\n"
    return dumps_report(payload)


def cmd_structure(args):
    g = read_edge_list(args.path)
    ks = None if args.k is None else [args.k]
    rep = structure.structure_report(g, ks=ks)
    payload = {"command": "structure", "input": Path(args.path).name, "n": g.n, "report": rep.to_dict()}
    if args.format == "csv":
        rows = [["k", "anti", "vertices", "labels", "evidence", "spectral"]]
        for f in rep.kpartite_findings:
            rows.append([f.k, f.anti, " ".join(map(str, f.vertices)),
                         "" if f.labels is None else " ".join(map(str, f.labels)),
                         f.evidence, f.spectral.value])
        return _csv(rows)
    if args.format == "text":
        lines = [
            f"is_dag                  {rep.is_dag}",
            f"spectrum in {{0,1}}       {rep.spectral_consistent}",
            f"cyclic vertices         {rep.cyclic_vertices} (spectral lower bound {rep.cyclic_vertex_lower_bound})",
            f"radius                  {rep.radius:.6g}",
            f"maximal components      {rep.maximal_components}",
            f"bipartite               {rep.bipartite} {rep.bipartite_components}",
            f"anti-bipartite          {rep.anti_bipartite} {rep.anti_bipartite_components}",
        ]
        for f in rep.kpartite_findings:
            kind = "anti-" if f.anti else ""
            lines.append(f"  {kind}{f.k}-partite on {f.vertices} [{f.evidence}, spectral {f.spectral.value}]")
        return "\n".join(lines) + "\n"
    return dumps_report(payload)


def _checks_text(checks) -> str:
    lines = [f"{'check':28} {'bound':>12} {'quantity':>12} {'slack':>12} verdict"]
    for c in checks:
        lines.append(f"{c.name:28} {_fmt(c.bound):>12} {_fmt(c.quantity):>12} {_fmt(c.slack):>12} {c.verdict}")
    return "\n".join(lines) + "\n"


def cmd_estimate(args):
    g = read_edge_list(args.path)
    rep = estimates.estimate_report(g)
    payload = {"command": "estimate", "input": Path(args.path).name, "n": g.n, "report": rep.to_dict()}
    if args.format == "csv":
        rows = [["name", "bound", "quantity", "side", "slack", "verdict"]]
        rows += [[c.name, c.bound, c.quantity, c.side, c.slack, c.verdict] for c in rep.checks]
        return _csv(rows)
    if args.format == "text":
        return _checks_text(rep.checks)
    return dumps_report(payload)


def cmd_neighborhood(args):
    if args.order is None:
        raise UsageError("neighborhood needs --order")
    g = read_edge_list(args.path)
    gl = neighborhood.neighborhood_graph(g, args.order)
    if args.graph_out:
        Path(args.graph_out).write_text(format_edge_list(gl), encoding="utf-8")
    if args.format == "text":
        return format_edge_list(gl)
    rep = neighborhood.neighborhood_report(g, args.order)
    if args.format == "csv":
        return spectrum(gl).to_csv()
    payload = {"command": "neighborhood", "input": Path(args.path).name, "n": g.n,
               "report": rep, "edge_list": format_edge_list(gl)}
    return dumps_report(payload)


def cmd_verify(args):
    names = sorted(verify.SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        if name not in verify.SUITES:
            raise UsageError(f"unknown suite {name!r}; known: all, {', '.join(sorted(verify.SUITES))}")
    results = [verify.run_suite(name, seed=args.seed, trials=args.trials) for name in names]
    ok = all(r.ok for r in results)
    if args.format == "text":
        lines = []
        for r in results:
            lines.append(f"{'PASS' if r.ok else 'FAIL'} {r.suite}: {r.passed}/{r.trials}")
            for f in r.failures:
                lines.append(f"  trial {f.trial}: {f.detail}")
                lines.extend("    " + x for x in f.reproducer.splitlines())
        out = "\n".join(lines) + "\n"
    elif args.format == "csv":
        rows = [["suite", "seed", "trials", "passed", "failed"]]
        rows += [[r.suite, r.seed, r.trials, r.passed, len(r.failures)] for r in results]
        out = _csv(rows)
    else:
        out = dumps_report({"command": "verify", "ok": ok, "results": [r.to_dict() for r in results]})
    return out, (EXIT_OK if ok else EXIT_VIOLATION)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "components": cmd_components,
    "structure": cmd_structure,
    "estimate": cmd_estimate,
    "neighborhood": cmd_neighborhood,
    "verify": cmd_verify,
}


@contextlib.contextmanager
def _tolerance(tol):
    """Apply ``--tol`` as the process default for the duration of one command."""
    if tol is None:
        yield
        return
    saved = os.environ.get("DGSPEC_TOL")
    os.environ["DGSPEC_TOL"] = repr(tol)
    try:
        yield
    finally:
        if saved is None:
            del os.environ["DGSPEC_TOL"]
        else:
            os.environ["DGSPEC_TOL"] = saved


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, help="relative eigenvalue tolerance (default 1e-8 or $DGSPEC_TOL)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--order", type=int, help="neighborhood order l >= 2")
    common.add_argument("--k", type=int, help="restrict k-partite detection to this k")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    parser = _Parser(prog="dgspec", description="Spectra of normalized Laplacians of signed digraphs.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in ("spectrum", "components", "structure", "estimate", "neighborhood"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("path", help="edge-list file")
        if name == "neighborhood":
            p.add_argument("--graph-out", help="also write the neighborhood graph as an edge list here")
    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--suite", required=True, help="suite name or 'all'")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command")
        if args.tol is not None and not args.tol > 0:
            raise UsageError("--tol must be positive")
        with _tolerance(args.tol):
            result = COMMANDS[args.command](args)
        out, code = result if isinstance(result, tuple) else (result, EXIT_OK)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, OSError, UnicodeDecodeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (EigenSolverError, GenerationError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
