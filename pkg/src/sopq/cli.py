"""Command line interface.

Exit codes: 0 success (or check true), 1 check false, 2 malformed input.
JSON is the canonical output; ``--output text`` prints a short summary.
"""

import argparse
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import cartan_polar, homotopy_engine, quasisphere, transitivity, verify, wedge_cover
from .errors import MembershipError, SopqError
from .indefinite_group import (
    DEFAULT_TOL,
    GroupElement,
    Signature,
    column_orthogonality_report,
    is_identity_component,
    is_member,
)

SCHEMA = "1"
EXIT_OK, EXIT_FALSE, EXIT_MALFORMED = 0, 1, 2


@dataclass
class CliConfig:
    tolerance: float = DEFAULT_TOL
    seed: int = 42
    samples: int = 1000
    output: str = "json"


class UsageError(Exception):
    pass


def _sig(text):
    try:
        return Signature.parse(text)
    except SopqError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {value}")
    return value


def _floats(text):
    text = text.strip()
    if not text:
        return np.zeros(0)
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise UsageError(f"cannot parse vector {text!r}") from None


def _load_matrix(args):
    """GroupElement JSON from ``--matrix FILE`` or ``--rows JSON``; returns (sig, array)."""
    if args.matrix:
        try:
            with open(args.matrix) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read matrix file: {exc}") from None
        if not isinstance(data, dict) or "rows" not in data:
            raise UsageError("matrix file must hold {\"sig\": [p, q], \"rows\": [...]}")
        sig = args.sig or _sig(",".join(str(v) for v in data.get("sig", [])))
        rows = data["rows"]
    elif args.rows:
        try:
            rows = json.loads(args.rows)
        except json.JSONDecodeError as exc:
            raise UsageError(f"cannot parse --rows: {exc}") from None
        sig = args.sig
    else:
        raise UsageError("give --matrix FILE or --rows JSON")
    if sig is None:
        raise UsageError("signature missing; pass --sig p,q")
    try:
        M = np.array(rows, dtype=float).reshape(len(rows), -1) if rows else np.zeros((0, 0))
    except (TypeError, ValueError):
        raise UsageError("rows must be a rectangular list of numbers") from None
    if M.shape != (sig.n, sig.n):
        raise UsageError(f"matrix has shape {M.shape}, signature {sig} needs ({sig.n}, {sig.n})")
    return sig, M


def _emit(payload, config, text=None):
    payload = {"schema": SCHEMA, **payload}
    if config.output == "text" and text is not None:
        print(text)
    else:
        print(json.dumps(payload, sort_keys=True))


def _pi1_grid(p_max, q_max):
    table = homotopy_engine.pi1_table(p_max, q_max)
    return {f"{p},{q}": str(d.group) for (p, q), d in sorted(table.items())}


def cmd_pi1(args, config):
    if args.table:
        grid = _pi1_grid(args.p, args.q)
        rows = []
        for p in range(args.p + 1):
            rows.append("  ".join(f"{grid[f'{p},{q}']:>10}" for q in range(args.q + 1)))
        _emit({"table": grid}, config, "\n".join(rows))
        return EXIT_OK
    d = homotopy_engine.pi1_so_plus(args.p, args.q)
    payload = {"p": args.p, "q": args.q, "group": str(d.group)}
    lines = [str(d.group)]
    if args.trace:
        payload["trace"] = d.trace.to_dict()
        for step in d.trace.steps:
            lines.append(f"  {step.rule}: {step.target}: {step.sequence}  =>  {step.conclusion}  [{step.provenance}]")
    _emit(payload, config, "\n".join(lines))
    return EXIT_OK


def cmd_pi_table(args, config):
    args.table = True
    return cmd_pi1(args, config)


def cmd_member(args, config):
    sig, M = _load_matrix(args)
    report = is_member(sig, M, config.tolerance)
    cols = column_orthogonality_report(sig, M, config.tolerance)
    payload = {
        "sig": [sig.p, sig.q],
        **report.to_dict(),
        "identity_component": bool(report.in_SO and is_identity_component(sig, M)),
        "columns": asdict(cols),
    }
    _emit(payload, config, f"in_O={report.in_O} in_SO={report.in_SO}")
    return EXIT_OK if report.in_SO else EXIT_FALSE


def cmd_complete(args, config):
    if args.sig is None or args.point is None:
        raise UsageError("complete needs --sig and --point")
    x = _floats(args.point)
    res = transitivity.complete_to_group(args.sig, x, config.tolerance, seed=config.seed)
    text = "\n".join(" ".join(f"{v: .12g}" for v in row) for row in res.element.entries)
    _emit(res.to_dict(), config, text)
    return EXIT_OK


def cmd_polar(args, config):
    sig, M = _load_matrix(args)
    try:
        A = GroupElement.from_matrix(sig, M, config.tolerance)
    except MembershipError as exc:
        _emit({"error": str(exc)}, config, str(exc))
        return EXIT_FALSE
    try:
        res = cartan_polar.polar_decompose(A, max(config.tolerance, 1e-8))
    except MembershipError as exc:
        _emit({"error": str(exc)}, config, str(exc))
        return EXIT_FALSE
    _emit(res.to_dict(), config, f"residual {res.reconstruction_residual:.3g}")
    return EXIT_OK


def cmd_chart(args, config):
    if args.sig is None:
        raise UsageError("chart needs --sig")
    if args.point is not None:
        pt = quasisphere.on_sphere(args.sig, 1, _floats(args.point), config.tolerance)
        x, y = quasisphere.unchart(pt)
        _emit({"x": x.tolist(), "y": y.tolist()}, config, f"x={x.tolist()} y={y.tolist()}")
        return EXIT_OK
    if args.x is None or args.y is None:
        raise UsageError("chart needs --x and --y, or --point to invert")
    pt = quasisphere.chart(args.sig, _floats(args.x), _floats(args.y), config.tolerance)
    payload = {**pt.to_dict(), "residual": pt.residual}
    _emit(payload, config, " ".join(f"{v:.12g}" for v in pt.coords))
    return EXIT_OK


def cmd_cover(args, config):
    if not args.verify:
        plus, minus = wedge_cover.form_signature()
        payload = {
            "form": wedge_cover.wedge_form().tolist(),
            "signature": [plus, minus],
            "norms": [n for _, n in wedge_cover.explicit_norms()],
            "algebra_dimension": wedge_cover.form_algebra_dimension(),
        }
        _emit(payload, config, f"signature ({plus},{minus})")
        return EXIT_OK
    tol = args.tol if args.tol is not None else 1e-8
    report = wedge_cover.verify_cover(config.samples, config.seed, tol)
    _emit(report.to_dict(), config, f"cover: {'pass' if report.ok else 'FAIL'}")
    return EXIT_OK if report.ok else EXIT_FALSE


def cmd_verify(args, config):
    sigs = [args.sig] if args.sig is not None else None
    reports = verify.run(args.suite, args.samples, config.seed, args.tol, sigs)
    ok = all(r.ok for r in reports)
    lines = []
    for r in reports:
        worst = max(r.worst.values(), default=0.0)
        sig = "" if r.sig is None else str(r.sig)
        lines.append(
            f"{'PASS' if r.ok else 'FAIL'} {r.suite}{sig}: {r.checks - r.failures}/{r.checks} worst {worst:.3g}"
        )
    _emit({"ok": ok, "suites": [r.to_dict() for r in reports]}, config, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FALSE


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help=f"tolerance (default {DEFAULT_TOL})")
    common.add_argument("--seed", type=_nonneg, default=42)
    common.add_argument("--samples", type=_nonneg, default=None, help="sample count (default 1000)")
    common.add_argument("--output", choices=("json", "text"), default="json")
    common.add_argument("--verbose", action="store_true", help="print the effective config to stderr")

    parser = argparse.ArgumentParser(prog="sopq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pi1", parents=[common], help="pi_1(SO+(p,q)) by exact sequences")
    p.add_argument("p", type=_nonneg)
    p.add_argument("q", type=_nonneg)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--table", action="store_true", help="print the grid 0..p x 0..q")
    p.set_defaults(func=cmd_pi1)

    p = sub.add_parser("pi-table", parents=[common], help="grid of pi_1(SO+(p,q))")
    p.add_argument("p", type=_nonneg)
    p.add_argument("q", type=_nonneg)
    p.set_defaults(func=cmd_pi_table)

    for name, func, help_ in (
        ("member", cmd_member, "membership in O(p,q) / SO(p,q)"),
        ("polar", cmd_polar, "polar decomposition A = K exp(P)"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--sig", type=_sig)
        p.add_argument("--matrix", help="GroupElement JSON file {sig, rows}")
        p.add_argument("--rows", help="inline JSON list of rows")
        p.set_defaults(func=func)

    p = sub.add_parser("complete", parents=[common], help="complete a point of X+ to SO(p,q)")
    p.add_argument("--sig", type=_sig)
    p.add_argument("--point", help="comma separated coordinates")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("chart", parents=[common], help="R^q x S^(p-1) <-> X+(p,q)")
    p.add_argument("--sig", type=_sig)
    p.add_argument("--x", help="base point in R^q")
    p.add_argument("--y", help="unit vector in R^p")
    p.add_argument("--point", help="point of X+ to invert")
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("cover", parents=[common], help="wedge-square cover SL(4) -> SO+(3,3)")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("verify", parents=[common], help="randomized property suites")
    p.add_argument("suite", choices=verify.SUITES + ("all",))
    p.add_argument("--sig", type=_sig)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config = CliConfig(
        tolerance=args.tol if args.tol is not None else DEFAULT_TOL,
        seed=args.seed,
        samples=args.samples if args.samples is not None else 1000,
        output=args.output,
    )
    if args.verbose:
        print(json.dumps({"config": asdict(config)}, sort_keys=True), file=sys.stderr)
    try:
        return args.func(args, config)
    except (UsageError, SopqError) as exc:
        print(f"sopq {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
