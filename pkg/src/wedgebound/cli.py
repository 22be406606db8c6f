"""Command-line interface: ``wedgebound {bound|verify|optimize-origin|sweep|paper-examples}``.

Exit codes: 0 success, 1 usage or parse error, 2 containment refusal or no
feasible pose, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .audit import audit_rows
from .bounds import Formula, faber_krahn_bound, pw_bound, reflex_bound
from .domains import load_domain
from .eigensolver import EigenSolveError, MeshError, lambda1_fem
from .geometry import GeometryError, Pose, WedgeFamily, contains_in_wedge, length_scale, to_wedge_frame
from .moments import ContainmentError
from .origin_search import optimize_pose
from .special import RootFindingError, SpecialDomainError

EXIT_OK, EXIT_USAGE, EXIT_CONTAINMENT, EXIT_NUMERICAL = 0, 1, 2, 3

ROW_FIELDS = [
    "domain", "formula", "param", "origin_x", "origin_y", "rotation",
    "bound", "bound_full", "moment", "moment_err",
    "lambda1", "lambda1_err", "lambda1_full", "upper_bound",
    "verdict", "provenance", "note",
]
AUDIT_FIELDS = ["key", "claim", "paper_value", "recomputed", "recomputed_full", "abs_err", "method", "flag"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _g(v) -> str:
    return "" if v is None else f"{v:.6g}"


def _full(v) -> str:
    return "" if v is None else repr(float(v))


def _point(text: str) -> tuple[float, float]:
    try:
        x, y = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from None
    return x, y


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for stochastic subroutines")

    dom = argparse.ArgumentParser(add_help=False)
    dom.add_argument("--domain", required=True, help="JSON domain file or a built-in @NAME")

    pose = argparse.ArgumentParser(add_help=False)
    pose.add_argument("--origin", type=_point, help="wedge vertex in world coordinates, 'x,y'")
    pose.add_argument("--rotation", type=float, help="wedge orientation in radians")

    p = _Parser(prog="wedgebound", description="Eigenvalue lower bounds for domains in wedges and reflex angles.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bound", parents=[common, dom, pose], help="evaluate one lower bound")
    b.add_argument("--formula", choices=("fk", "pw", "reflex"), required=True)
    b.add_argument("--alpha", type=float)
    b.add_argument("--beta", type=float)
    b.add_argument("--force", action="store_true", help="evaluate even if containment fails (report marked invalid)")

    v = sub.add_parser("verify", parents=[common, dom, pose], help="bracket bounds with a finite-element lambda_1")
    v.add_argument("--h0", type=float, help="coarsest mesh size (default: length scale / 8)")
    v.add_argument("--refinements", type=int, default=3)
    v.add_argument("--alpha", type=float)
    v.add_argument("--beta", type=float)

    o = sub.add_parser("optimize-origin", parents=[common, dom], help="search the pose maximizing a bound")
    o.add_argument("--alpha", type=float)
    o.add_argument("--beta", type=float)
    o.add_argument("--budget", type=int, default=500)

    s = sub.add_parser("sweep", parents=[common, dom, pose], help="reflex bound over a range of beta")
    s.add_argument("--beta-from", type=float, default=1.0)
    s.add_argument("--beta-to", type=float, default=2.0)
    s.add_argument("--steps", type=int, default=11)

    sub.add_parser("paper-examples", parents=[common], help="audit table of the published worked examples")
    return p


def _pose(args, domain) -> Pose:
    origin = args.origin if args.origin is not None else domain.pose.origin
    rotation = args.rotation if args.rotation is not None else domain.pose.rotation
    return Pose(origin, rotation)


def _family(args, required=True) -> WedgeFamily | None:
    if args.alpha is not None and args.beta is not None:
        raise UsageError("give either --alpha or --beta, not both")
    try:
        if args.beta is not None:
            return WedgeFamily.reflex(args.beta)
        if args.alpha is not None:
            return WedgeFamily.pw(args.alpha)
    except GeometryError as e:
        raise UsageError(str(e)) from None
    if required:
        raise UsageError("--alpha or --beta is required")
    return None


def _row(domain, report, pose=None, fem=None, verdict="", note="") -> dict:
    m = report.moment
    pose = report.pose_used if pose is None else pose
    return {
        "domain": domain.name,
        "formula": report.formula.value,
        "param": _g(report.param),
        "origin_x": _g(pose.origin[0]) if pose else "",
        "origin_y": _g(pose.origin[1]) if pose else "",
        "rotation": _g(pose.rotation) if pose else "",
        "bound": _g(report.value),
        "bound_full": _full(report.value),
        "moment": _g(m.value) if m else _g(report.area),
        "moment_err": _g(m.abs_err) if m else "",
        "lambda1": _g(fem.extrapolated) if fem else "",
        "lambda1_err": _g(fem.error_estimate) if fem else "",
        "lambda1_full": _full(fem.extrapolated) if fem else "",
        "upper_bound": _g(fem.upper_bound) if fem else "",
        "verdict": verdict,
        "provenance": "derived",
        "note": note,
    }


def _emit(rows, fields, args) -> None:
    if args.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: r.get(k, "") for k in fields})
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _verdict(report, fem) -> str:
    margin = fem.error_estimate + report.rel_err * report.value + 1e-9 * report.value
    return "ok" if report.value <= fem.extrapolated + margin else "violated"


def cmd_bound(args) -> int:
    domain = load_domain(args.domain)
    if args.formula == "fk":
        report = faber_krahn_bound(domain)
        _emit([_row(domain, report, verdict="issued")], ROW_FIELDS, args)
        return EXIT_OK
    if args.formula == "reflex" and args.beta is None:
        raise UsageError("--formula reflex requires --beta")
    if args.formula == "pw" and args.alpha is None:
        raise UsageError("--formula pw requires --alpha")
    pose = _pose(args, domain)
    try:
        if args.formula == "reflex":
            report = reflex_bound(domain, args.beta, pose, force=args.force)
        else:
            report = pw_bound(domain, args.alpha, pose, force=args.force)
    except GeometryError as e:
        if isinstance(e, ContainmentError):
            raise
        raise UsageError(str(e)) from None
    verdict = "issued" if report.valid else "invalid-forced"
    _emit([_row(domain, report, verdict=verdict)], ROW_FIELDS, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.h0 is not None and not args.h0 > 0.0:
        raise UsageError(f"--h0 must be positive, got {args.h0}")
    if args.refinements < 2:
        raise UsageError("--refinements must be at least 2")
    domain = load_domain(args.domain)
    family = _family(args, required=False)
    pose = _pose(args, domain)
    fem = lambda1_fem(domain, args.h0, args.refinements)
    note = "inscribed-polygon mesh" if fem.inscribed else ""
    reports = [faber_krahn_bound(domain)]
    if family is not None:
        candidates = [family]
    else:
        candidates = [WedgeFamily.reflex(b) for b in (1.0, 1.5, 2.0)] + [WedgeFamily.pw(1.0)]
    frame = to_wedge_frame(domain, pose).shape
    for fam in candidates:
        if not contains_in_wedge(frame, fam).ok:
            if family is not None:
                raise ContainmentError(contains_in_wedge(frame, fam), fam)
            continue
        reports.append(pw_bound(domain, fam.param, pose) if fam.kind.value == "pw" else reflex_bound(domain, fam.param, pose))
    rows = [_row(domain, r, fem=fem, verdict=_verdict(r, fem), note=note) for r in reports]
    _emit(rows, ROW_FIELDS, args)
    return EXIT_OK


def cmd_optimize(args) -> int:
    family = _family(args)
    if args.budget < 50:
        raise UsageError("--budget must be at least 50")
    domain = load_domain(args.domain)
    res = optimize_pose(domain, family, args.budget)
    feasible = sum(v is not None for _, v in res.trace)
    note = f"evaluations={res.evaluations} feasible={feasible}"
    if not res.feasible:
        row = {k: "" for k in ROW_FIELDS}
        row.update(domain=domain.name, formula=Formula[family.kind.name].value, param=_g(family.param),
                   verdict="infeasible", provenance="derived", note=note)
        _emit([row], ROW_FIELDS, args)
        return EXIT_CONTAINMENT
    _emit([_row(domain, res.best_bound, res.best_pose, verdict="best", note=note)], ROW_FIELDS, args)
    return EXIT_OK


def cmd_sweep(args) -> int:
    lo, hi, n = args.beta_from, args.beta_to, args.steps
    if not (1.0 <= lo <= hi <= 2.0):
        raise UsageError(f"need 1 <= beta-from <= beta-to <= 2, got {lo}, {hi}")
    if n < 1:
        raise UsageError("--steps must be at least 1")
    domain = load_domain(args.domain)
    pose = _pose(args, domain)
    betas = [lo] if n == 1 else list(np.linspace(lo, hi, n))
    rows, values = [], []
    for beta in betas:
        try:
            r = reflex_bound(domain, float(beta), pose)
        except ContainmentError:
            row = {k: "" for k in ROW_FIELDS}
            row.update(domain=domain.name, formula="Reflex", param=_g(beta), verdict="infeasible", provenance="derived")
            rows.append(row)
            values.append(-math.inf)
            continue
        rows.append(_row(domain, r))
        values.append(r.value)
    if max(values) == -math.inf:
        _emit(rows, ROW_FIELDS, args)
        return EXIT_CONTAINMENT
    k = int(np.argmax(values))
    for i, row in enumerate(rows):
        if values[i] > -math.inf:
            row["verdict"] = "max" if i == k else "feasible"
    _emit(rows, ROW_FIELDS, args)
    return EXIT_OK


def cmd_paper_examples(args) -> int:
    rows = []
    for r in audit_rows(seed=args.seed):
        rows.append({
            "key": r.key,
            "claim": r.claim,
            "paper_value": "" if r.published is None else f"{r.published:.4f}",
            "recomputed": _g(r.recomputed),
            "recomputed_full": _full(r.recomputed),
            "abs_err": _g(r.abs_err),
            "method": r.method,
            "flag": r.flag,
        })
    _emit(rows, AUDIT_FIELDS, args)
    return EXIT_OK


COMMANDS = {
    "bound": cmd_bound,
    "verify": cmd_verify,
    "optimize-origin": cmd_optimize,
    "sweep": cmd_sweep,
    "paper-examples": cmd_paper_examples,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"wedgebound: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ContainmentError as e:
        print(f"wedgebound: containment refused: {e}", file=sys.stderr)
        return EXIT_CONTAINMENT
    except (MeshError, EigenSolveError, RootFindingError, ArithmeticError) as e:
        print(f"wedgebound: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (GeometryError, SpecialDomainError, OSError) as e:
        print(f"wedgebound: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
