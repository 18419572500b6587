"""Command-line front end: ``aitts <command> [options]``."""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bell import DEFAULT_PHASES, MeasurementPhases
from .conformance import FAIL, verify_paper
from .explore import (
    DEFAULT_PHI_STEPS,
    DEFAULT_THETA_STEPS,
    Metric,
    MetricKind,
    angle_grid,
    contour_grid,
    maximize,
    region_mask,
    sweep_p,
)
from .export import fmt, jsonable, to_csv, to_json, to_table
from .states import AittsParams, aitts, aitts_entries, catalog, lookup, psi, schmidt_number
from .wigner import ImaginaryDwfError, WignerConvention, dwf, wigner_negativity

REGION_THETA_STEPS = 91
REGION_PHI_STEPS = 181
REGION_P_STEPS = 51


class CliError(Exception):
    """User-facing error; printed without a traceback, exit status 2."""


@dataclass
class Result:
    header: list[str]
    rows: list[list]
    meta: dict = field(default_factory=dict)
    records: list | None = None
    failed: bool = False

    def render(self, form: str) -> str:
        if form == "json":
            records = self.records if self.records is not None else [dict(zip(self.header, r)) for r in self.rows]
            return to_json(self.meta, records)
        if form == "csv":
            return to_csv(self.header, self.rows)
        lines = [f"# {k}: {_short(v)}" for k, v in sorted(self.meta.items())]
        body = to_table(self.header, [[_short(v) for v in r] for r in self.rows])
        return "\n".join(lines + [body]) if lines else body


def _short(value):
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(str(_short(v)) for v in value) + "]"
    if isinstance(value, (float, np.floating)):
        return fmt(value, 6)
    return value


# -- argument helpers ---------------------------------------------------------

def _phases(text: str) -> MeasurementPhases:
    try:
        return MeasurementPhases.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"p must lie in [0, 1], got {text}")
    return value


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument("--convention", choices=[c.value for c in WignerConvention], default="paper",
                        help="DWF phase convention (default: paper)")
    common.add_argument("--phases", type=_phases, default=DEFAULT_PHASES, metavar="a1,a2,b1,b2",
                        help="CGLMP measurement phases (default: 0,0.5,0.25,-0.25)")
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--deg", action="store_true", help="--theta/--phi are given in degrees")
    return common


def _add_state_selector(parser: argparse.ArgumentParser, p_default: float | None = 1.0) -> None:
    parser.add_argument("name", nargs="?", help="catalog state name (S1_1 ... S3_2, noise)")
    parser.add_argument("--theta", type=float)
    parser.add_argument("--phi", type=float)
    if p_default is not None:
        parser.add_argument("--p", type=_probability, default=p_default)


def _metric_choices() -> list[str]:
    return ["e", "n", "i3", *(k.value for k in MetricKind)]


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="aitts", description="Anisotropic two-qutrit state toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", parents=[common], help="density matrix and its parameters")
    _add_state_selector(p)
    p.add_argument("--dwf", action="store_true", help="print the 9x9 DWF table instead of the matrix")

    p = sub.add_parser("metrics", parents=[common], help="entanglement, Wigner negativity and I3")
    _add_state_selector(p)
    p.add_argument("--imag-tol", type=float, default=None,
                   help="reject DWF values whose imaginary part exceeds this")

    p = sub.add_parser("sweep", parents=[common], help="metric curves along p")
    _add_state_selector(p, p_default=None)
    p.add_argument("--catalog", action="store_true", help="sweep every catalog state")
    p.add_argument("--metric", choices=_metric_choices() + ["all"], default="all")
    p.add_argument("--p-steps", type=_positive, default=101)
    p.add_argument("--reference", action="store_true", help="use explicit matrices instead of closed forms")

    p = sub.add_parser("region", parents=[common], help="feasibility mask over (theta, phi, p)")
    p.add_argument("--metric", choices=_metric_choices(), required=True)
    p.add_argument("--level", type=float, default=None, help="default: 2 for i3, 0 otherwise")
    p.add_argument("--theta-steps", type=_positive, default=REGION_THETA_STEPS)
    p.add_argument("--phi-steps", type=_positive, default=REGION_PHI_STEPS)
    p.add_argument("--p-steps", type=_positive, default=REGION_P_STEPS)

    p = sub.add_parser("maximize", parents=[common], help="maximize a metric over the angles")
    p.add_argument("--metric", choices=_metric_choices(), required=True)
    p.add_argument("--p", type=_probability, default=1.0)
    p.add_argument("--theta-steps", type=_positive, default=DEFAULT_THETA_STEPS)
    p.add_argument("--phi-steps", type=_positive, default=DEFAULT_PHI_STEPS)

    p = sub.add_parser("contour", parents=[common], help="pure-state metric on a theta x phi table")
    p.add_argument("--metric", choices=_metric_choices(), required=True)
    p.add_argument("--theta-steps", type=_positive, default=DEFAULT_THETA_STEPS)
    p.add_argument("--phi-steps", type=_positive, default=DEFAULT_PHI_STEPS)

    sub.add_parser("verify-paper", parents=[common], help="replay the published numbers")
    return parser


# -- commands -----------------------------------------------------------------

def _metric(args, name: str) -> Metric:
    return Metric.parse(name, WignerConvention(args.convention), args.phases)


def _angles(args) -> tuple[str, float | None, float | None]:
    """Resolve ``name`` or ``--theta/--phi`` into (label, theta, phi); noise has no angles."""
    if args.name is not None:
        if args.theta is not None or args.phi is not None:
            raise CliError("give either a state name or --theta/--phi, not both")
        try:
            entry = lookup(args.name)
        except KeyError as exc:
            raise CliError(exc.args[0]) from None
        return entry.name, entry.theta, entry.phi
    if args.theta is None or args.phi is None:
        raise CliError("a state name or both --theta and --phi are required")
    scale = math.pi / 180.0 if args.deg else 1.0
    return "custom", args.theta * scale, args.phi * scale


def _params(theta, phi, p) -> AittsParams:
    return AittsParams(0.0, 0.0, 0.0) if theta is None else AittsParams(theta, phi, p)


def cmd_state(args) -> Result:
    label, theta, phi = _angles(args)
    params = _params(theta, phi, args.p)
    rho = aitts(params)
    entries = aitts_entries(params)
    meta = {"state": label, "theta": theta, "phi": phi, "p": params.p,
            **{k: v for k, v in entries.items() if k != "schmidt_number"},
            "schmidt_number": None if theta is None else schmidt_number(psi(theta, phi))}
    if args.dwf:
        conv = WignerConvention(args.convention)
        grid = dwf(rho, conv)
        meta.update(convention=conv.value, max_imag=grid.max_imag())
        table = grid.table()
        header = ["x1+3*x2"] + [f"z{j}" for j in range(9)]
        return Result(header, [[i, *table[i]] for i in range(9)], meta,
                      records=[list(r) for r in table])
    m = rho.matrix.real
    header = ["row"] + [f"c{j}" for j in range(9)]
    return Result(header, [[i, *m[i]] for i in range(9)], meta, records=[list(r) for r in m])


def cmd_metrics(args) -> Result:
    label, theta, phi = _angles(args)
    rho = aitts(_params(theta, phi, args.p))
    conv = WignerConvention(args.convention)
    values = {}
    for kind in MetricKind:
        metric = _metric(args, kind.value)
        if kind is MetricKind.WIGNER_NEGATIVITY and args.imag_tol is not None:
            values[kind.value] = wigner_negativity(rho, conv, imag_tol=args.imag_tol)
        else:
            values[kind.value] = metric.of_state(rho)
    meta = {"state": label, "theta": theta, "phi": phi, "p": args.p, "convention": conv.value,
            "phases": list(args.phases.as_tuple())}
    header = list(values)
    return Result(header, [list(values.values())], meta, records=[values])


def _sweep_targets(args) -> list[tuple[str, float | None, float | None]]:
    if args.catalog:
        if args.name or args.theta is not None or args.phi is not None:
            raise CliError("--catalog cannot be combined with a state selection")
        return [(e.name, e.theta, e.phi) for e in catalog()]
    return [_angles(args)]


def cmd_sweep(args) -> Result:
    targets = _sweep_targets(args)
    kinds = list(MetricKind) if args.metric == "all" else [_metric(args, args.metric).kind]
    p_grid = np.linspace(0.0, 1.0, args.p_steps) if args.p_steps > 1 else np.array([1.0])
    rows, records = [], []
    for label, theta, phi in targets:
        for kind in kinds:
            metric = _metric(args, kind.value)
            if theta is None:
                samples = [(p, metric.of_state(aitts(_params(None, None, p)))) for p in p_grid]
            else:
                samples = sweep_p(theta, phi, p_grid, metric, reference=args.reference)
            for p, value in samples:
                rows.append([theta if theta is not None else math.nan, phi if phi is not None else math.nan,
                             p, kind.value, value])
                records.append({"state": label, "theta": theta, "phi": phi, "p": p,
                                "metric": kind.value, "value": value})
    meta = {"convention": args.convention, "phases": list(args.phases.as_tuple()),
            "p_steps": args.p_steps, "reference": args.reference}
    return Result(["theta", "phi", "p", "metric", "value"], rows, meta, records)


def cmd_region(args) -> Result:
    metric = _metric(args, args.metric)
    level = args.level if args.level is not None else (2.0 if metric.kind is MetricKind.BELL_I3 else 0.0)
    theta_grid = angle_grid(args.theta_steps, math.pi)
    phi_grid = angle_grid(args.phi_steps, 2 * math.pi)
    p_grid = angle_grid(args.p_steps, 1.0)
    mask = region_mask(metric, level, theta_grid, phi_grid, p_grid, threads=args.threads)
    meta = {"metric": metric.kind.value, "level": level, "theta_steps": args.theta_steps,
            "phi_steps": args.phi_steps, "p_steps": args.p_steps, "lowest_p": mask.lowest_p(),
            "convention": args.convention, "phases": list(args.phases.as_tuple())}
    header = ["theta", "phi", "p", "inside"]
    if args.format == "csv":
        T, F, P = np.meshgrid(theta_grid, phi_grid, p_grid, indexing="ij")
        rows = zip(T.ravel(), F.ravel(), P.ravel(), mask.mask.ravel())
        return Result(header, rows, meta)
    slabs = []
    for k, p in enumerate(p_grid):
        slabs.append({"p": p, "count": int(mask.mask[:, :, k].sum()),
                      "boxes": [list(b) for b in mask.slab_boxes(k)]})
    rows = [[s["p"], s["count"], len(s["boxes"])] for s in slabs]
    return Result(["p", "count", "components"], rows, meta, records=slabs)


def cmd_maximize(args) -> Result:
    metric = _metric(args, args.metric)
    res = maximize(metric, p=args.p, theta_steps=args.theta_steps, phi_steps=args.phi_steps)
    meta = {"metric": metric.kind.value, "p": args.p, "grid_value": res.grid_value,
            "best": list(res.best), "convention": args.convention,
            "phases": list(args.phases.as_tuple())}
    rows = [[o.theta, o.phi, o.value] for o in res.optima]
    return Result(["theta", "phi", "value"], rows, meta)


def cmd_contour(args) -> Result:
    metric = _metric(args, args.metric)
    grid = contour_grid(metric, angle_grid(args.theta_steps, math.pi), angle_grid(args.phi_steps, 2 * math.pi))
    header = ["theta", "phi", "p", "metric", "value"] + (["isoline"] if grid.isoline is not None else [])
    rows = []
    for i, t in enumerate(grid.theta_grid):
        for j, f in enumerate(grid.phi_grid):
            row = [t, f, 1.0, metric.kind.value, grid.values[i, j]]
            if grid.isoline is not None:
                row.append(bool(grid.isoline[i, j]))
            rows.append(row)
    meta = {"metric": metric.kind.value, "theta_steps": args.theta_steps, "phi_steps": args.phi_steps,
            "convention": args.convention, "phases": list(args.phases.as_tuple())}
    return Result(header, rows, meta)


def cmd_verify_paper(args) -> Result:
    report = verify_paper(WignerConvention(args.convention), args.phases)
    meta = {"convention": report.convention.value, "phases": list(args.phases.as_tuple()),
            "checks": len(report.checks), "pass": report.count("pass"), "fail": report.count(FAIL),
            "paper_inconsistent": report.count("paper-inconsistent")}
    header = ["id", "status", "expected", "computed", "tolerance", "description", "note"]
    if args.format == "csv":
        rows = [[c.id, c.status, json.dumps(jsonable(c.expected)), json.dumps(jsonable(c.computed)),
                 c.tolerance, c.description, c.note] for c in report.checks]
    else:
        rows = [[c.id, c.status, c.expected, c.computed, c.tolerance, c.description, c.note]
                for c in report.checks]
    result = Result(header, rows, meta, records=[c.as_dict() for c in report.checks])
    result.failed = not report.ok
    if args.format == "table":
        result.header = header[:4]
        result.rows = [r[:4] for r in rows]
    return result


COMMANDS = {
    "state": cmd_state,
    "metrics": cmd_metrics,
    "sweep": cmd_sweep,
    "region": cmd_region,
    "maximize": cmd_maximize,
    "contour": cmd_contour,
    "verify-paper": cmd_verify_paper,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except (CliError, ImaginaryDwfError, ValueError) as exc:
        print(f"aitts {args.command}: error: {exc}", file=sys.stderr)
        return 2
    text = result.render(args.format)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"aitts {args.command}: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 1 if result.failed else 0


if __name__ == "__main__":
    sys.exit(main())
