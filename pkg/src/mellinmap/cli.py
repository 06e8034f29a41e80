"""Command-line front end: ``scan``, ``coupling`` and ``verify``.

Exit codes: 0 success, 1 numerical acceptance failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import dual_representation as dual
from .errors import MellinMapError
from .evolution_engine import dglap_residual_xspace
from .kinematics import EvolutionPoint, MethodReport, oracle_report
from .mellin_inversion import (
    DEFAULT_ANCHOR,
    DEFAULT_CHEB_NODES,
    DEFAULT_EXTENT,
    DEFAULT_NODES,
    build_vertical_contour,
    invert_direct,
    invert_mapped,
)
from .moment_kernels import TOY_SPLITTING, duality_residuals, gamma, mellin_of_splitting
from .running_coupling import BRANCH_POINT_RATIO, CouplingModel, alpha_point

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

METHODS = ("direct", "dual", "mapped", "oracle")
THRESHOLDS = {"direct": 1e-6, "mapped": 1e-10, "dual": 1e-12, "oracle": 0.0}
SCAN_FIELDS = ("x", "u", "method", "value", "error_estimate", "nodes_or_terms", "deviation_from_oracle")
COUPLING_FIELDS = ("q2_ratio", "re_alpha", "im_alpha", "lambert_residual")

ACCEPTANCE_X = (0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.8, 0.9)
ACCEPTANCE_U = (1.0, 2.0, 4.0, 10.0, 25.0, 50.0, 100.0)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class NumericalConfig:
    contour_anchor: float = DEFAULT_ANCHOR
    contour_extent: float = DEFAULT_EXTENT
    contour_nodes: int = DEFAULT_NODES
    cheb_nodes: int = DEFAULT_CHEB_NODES
    series_tol: float = 1e-14
    fd_step: float = 1e-3
    quad_tol: float = 1e-10


@dataclass
class ScanRequest:
    x_values: list
    u_values: list
    methods: list
    output_format: str = "csv"
    config: NumericalConfig = field(default_factory=NumericalConfig)

    def validate(self):
        if not self.methods:
            raise UsageError("at least one method is required")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise UsageError(f"unknown method(s): {', '.join(sorted(unknown))}")
        if not self.x_values or not self.u_values:
            raise UsageError("the grid needs at least one x and one u value")
        for x in self.x_values:
            if not (math.isfinite(x) and 0.0 < x <= 1.0):
                raise UsageError(f"x values must lie in (0, 1], got {x!r}")
        for u in self.u_values:
            if not (math.isfinite(u) and u > 0.0):
                raise UsageError(f"u values must be positive, got {u!r}")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.output_format!r}")


def _failed(method: str, nodes: int = 0) -> MethodReport:
    return MethodReport(method, math.nan, math.nan, nodes, math.nan)


def _evaluate(method: str, p: EvolutionPoint, cfg: NumericalConfig, contour) -> MethodReport:
    if method == "oracle":
        return oracle_report(p)
    if method == "dual":
        return dual.eval_dual(p, dual.DualSeriesConfig(tol=cfg.series_tol))
    if method == "direct":
        if p.x == 1.0:
            # boundary value, not a quadrature result
            return MethodReport("direct", 1.0, 0.0, 0)
        return invert_direct(p, contour)
    if method == "mapped":
        if p.x == 1.0 or p.u == 1.0:
            # t = 0: the collapsed integrand is constant and the rule is exact
            return MethodReport("mapped", p.x, 0.0, cfg.cheb_nodes)
        return invert_mapped(p, cfg.cheb_nodes)
    raise UsageError(f"unknown method {method!r}")


def _scan_point(p: EvolutionPoint, methods, cfg: NumericalConfig, contour):
    ref = oracle_report(p)
    out = []
    for method in sorted(set(methods) | {"oracle"}):
        try:
            rep = _evaluate(method, p, cfg, contour)
        except MellinMapError as exc:
            print(f"x={p.x!r} u={p.u!r} method={method}: {exc}", file=sys.stderr)
            rep = _failed(method)
        if math.isfinite(rep.value):
            rep = rep.against(ref.value)
        out.append(rep)
    return out


def run_scan(req: ScanRequest, jobs: int = 1):
    """Evaluate every method at every grid point.

    Returns ``(records, ok)`` where ``records`` are dicts sorted by x, u,
    method and ``ok`` is True when every deviation meets its threshold.
    """
    req.validate()
    cfg = req.config
    contour = build_vertical_contour(cfg.contour_anchor, cfg.contour_extent, cfg.contour_nodes)
    points = [EvolutionPoint(x, u) for x in sorted(set(req.x_values)) for u in sorted(set(req.u_values))]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda p: _scan_point(p, req.methods, cfg, contour), points))
    else:
        results = [_scan_point(p, req.methods, cfg, contour) for p in points]

    records = []
    ok = True
    for p, reports in zip(points, results):
        for rep in reports:
            dev = rep.deviation_from_oracle
            if not (math.isfinite(dev) and dev <= THRESHOLDS[rep.method]):
                ok = False
            records.append(
                {
                    "x": p.x,
                    "u": p.u,
                    "method": rep.method,
                    "value": rep.value,
                    "error_estimate": rep.error_estimate,
                    "nodes_or_terms": rep.nodes_or_terms,
                    "deviation_from_oracle": dev,
                }
            )
    return records, ok


def run_coupling_curve(gauge_N: int, branch: int, q2_ratios, tol: float = 1e-14):
    model = CouplingModel(gauge_N, branch)
    records = []
    for q in q2_ratios:
        pt = alpha_point(model, q, tol)
        records.append(
            {
                "q2_ratio": pt.q2_ratio,
                "re_alpha": pt.alpha.real,
                "im_alpha": pt.alpha.imag,
                "lambert_residual": pt.lambert_residual,
            }
        )
    return records


# -- residual battery -------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    max_residual: float
    threshold: float
    passed: bool


def _scaling_error(r_h: float, r_half: float) -> float:
    # relative distance of the halving ratio from the second-order value 4
    if not r_half > 0.0:
        return math.inf
    return abs(r_h / r_half - 4.0) / 4.0


def run_residual_suite(cfg: NumericalConfig = NumericalConfig(), seed: int = 20240601):
    """Run the invariant battery and return a list of :class:`CheckResult`."""
    rng = np.random.default_rng(seed)
    h = cfg.fd_step
    checks = []

    samples = []
    while len(samples) < 100:
        z = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        if abs(z) > 1e-6 and abs(z + 1) > 1e-6:
            samples.append(z)
    res, flagged = duality_residuals(samples)
    worst = max(max(r1, r2) / (1.0 + abs(s)) for (r1, r2), s in zip(res, samples))
    checks.append(CheckResult("duality round trip", worst, 1e-12, worst <= 1e-12 and not flagged))

    Ns = [complex(rng.uniform(0.5, 10), rng.uniform(-10, 10)) for _ in range(50)]
    worst = max(abs(mellin_of_splitting(TOY_SPLITTING, N, 1e-12) - gamma(N)) for N in Ns)
    checks.append(CheckResult("Mellin moment of splitting function", worst, 1e-10, worst <= 1e-10))

    worst = 0.0
    scaling = 0.0
    for x in ACCEPTANCE_X:
        for u in ACCEPTANCE_U[1:]:
            r = dglap_residual_xspace(x, u, h, cfg.quad_tol)
            worst = max(worst, r)
            scaling = max(scaling, _scaling_error(r, dglap_residual_xspace(x, u, h / 2, cfg.quad_tol)))
    checks.append(CheckResult("x-space DGLAP residual", worst, 1e-5, worst <= 1e-5))
    checks.append(CheckResult("x-space DGLAP h^2 scaling", scaling, 0.2, scaling <= 0.2))

    x_grid = np.geomspace(1e-3, 0.99, 100)
    u_grid = np.geomspace(1.0, 100.0, 100)
    Ms = [1.0 + 0.5 * math.sqrt(rng.uniform()) * complex(math.cos(a), math.sin(a))
          for a in rng.uniform(0, 2 * math.pi, 20)]
    Ns = [complex(rng.uniform(0.0, 5.0), rng.uniform(-3.0, 3.0)) for _ in range(20)]
    for label, fn, pts, grid in (
        ("dual ODE residual", dual.dual_ode_residual, Ms, x_grid),
        ("moment ODE residual", dual.moment_ode_residual, Ns, u_grid),
    ):
        worst = 0.0
        scaling = 0.0
        for v in pts:
            r = fn(v, grid, h)
            worst = max(worst, r)
            scaling = max(scaling, _scaling_error(r, fn(v, grid, h / 2)))
        checks.append(CheckResult(label, worst, 1e-6, worst <= 1e-6))
        checks.append(CheckResult(f"{label} h^2 scaling", scaling, 0.2, scaling <= 0.2))

    q = np.geomspace(BRANCH_POINT_RATIO + 0.01, 1e8, 200)
    pts = [alpha_point(CouplingModel(3, -1), v) for v in q]
    worst = max(p.lambert_residual for p in pts)
    checks.append(CheckResult("Lambert round trip", worst, 1e-12, worst <= 1e-12))
    a = np.array([p.alpha.real for p in pts])
    af = all(p.alpha.imag == 0.0 for p in pts) and bool(np.all(a > 0)) and bool(np.all(np.diff(a) < 0))
    # reported value: largest step increase of alpha (non-positive when monotone)
    checks.append(CheckResult("asymptotic freedom (branch -1)", float(np.max(np.diff(a))), 0.0, af))
    return checks


# -- output -----------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _write(records, fields, fmt: str, path):
    if fmt == "json":
        text = json.dumps([{k: r[k] for k in fields} for r in records], indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        for r in records:
            w.writerow([_fmt(r[k]) for k in fields])
        text = buf.getvalue()
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _float_list(text: str):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mellinmap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def numerics(p):
        d = NumericalConfig()
        p.add_argument("--contour-anchor", type=float, default=d.contour_anchor)
        p.add_argument("--contour-extent", type=float, default=d.contour_extent)
        p.add_argument("--contour-nodes", type=int, default=d.contour_nodes)
        p.add_argument("--cheb-nodes", type=int, default=d.cheb_nodes)
        p.add_argument("--series-tol", type=float, default=d.series_tol)
        p.add_argument("--fd-step", type=float, default=d.fd_step)
        p.add_argument("--quad-tol", type=float, default=d.quad_tol)

    def output(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", default="-", help="output path (default: standard output)")

    scan = sub.add_parser("scan", help="evaluate phi(x, u) by every route on a grid")
    scan.add_argument("--x", type=_float_list, default=list(ACCEPTANCE_X), help="comma-separated x values")
    scan.add_argument("--u", type=_float_list, default=list(ACCEPTANCE_U), help="comma-separated u values")
    scan.add_argument("--methods", default=",".join(METHODS), help="comma-separated subset of " + ",".join(METHODS))
    scan.add_argument("--jobs", type=int, default=1)
    numerics(scan)
    output(scan)

    coup = sub.add_parser("coupling", help="running coupling along a Q^2/mu^2 grid")
    coup.add_argument("--gauge-n", type=int, default=3)
    coup.add_argument("--branch", type=int, default=-1, choices=(-1, 0, 1))
    coup.add_argument("--q2", type=_float_list, default=None, help="explicit comma-separated Q^2/mu^2 values")
    coup.add_argument("--q2-min", type=float, default=BRANCH_POINT_RATIO + 0.01)
    coup.add_argument("--q2-max", type=float, default=1e8)
    coup.add_argument("--points", type=int, default=200)
    output(coup)

    ver = sub.add_parser("verify", help="run the residual battery and print a pass/fail table")
    ver.add_argument("--seed", type=int, default=20240601)
    numerics(ver)
    return parser


def _config(args) -> NumericalConfig:
    return NumericalConfig(
        contour_anchor=args.contour_anchor,
        contour_extent=args.contour_extent,
        contour_nodes=args.contour_nodes,
        cheb_nodes=args.cheb_nodes,
        series_tol=args.series_tol,
        fd_step=args.fd_step,
        quad_tol=args.quad_tol,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "scan":
            methods = [m.strip() for m in args.methods.split(",") if m.strip()]
            req = ScanRequest(args.x, args.u, methods, args.format, _config(args))
            records, ok = run_scan(req, jobs=max(1, args.jobs))
            _write(records, SCAN_FIELDS, args.format, args.output)
            return EXIT_OK if ok else EXIT_NUMERICAL
        if args.command == "coupling":
            if args.gauge_n < 2:
                raise UsageError(f"--gauge-n must be at least 2, got {args.gauge_n}")
            if args.q2 is not None and (not args.q2 or min(args.q2) <= 0):
                raise UsageError("--q2 needs positive values")
            if args.q2 is not None:
                q2 = args.q2
            else:
                if args.points < 1 or not 0 < args.q2_min <= args.q2_max:
                    raise UsageError("need points >= 1 and 0 < q2-min <= q2-max")
                q2 = list(np.geomspace(args.q2_min, args.q2_max, args.points))
            try:
                records = run_coupling_curve(args.gauge_n, args.branch, q2)
            except MellinMapError as exc:
                print(f"coupling: {exc}", file=sys.stderr)
                return EXIT_NUMERICAL
            _write(records, COUPLING_FIELDS, args.format, args.output)
            return EXIT_OK
        checks = run_residual_suite(_config(args), args.seed)
        width = max(len(c.name) for c in checks)
        for c in checks:
            status = "PASS" if c.passed else "FAIL"
            print(f"{status}  {c.name:<{width}}  max={c.max_residual:.3e}  threshold={c.threshold:.1e}")
        failed = [c.name for c in checks if not c.passed]
        if failed:
            print("failed: " + "; ".join(failed), file=sys.stderr)
            return EXIT_NUMERICAL
        return EXIT_OK
    except UsageError as exc:
        print(f"mellinmap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MellinMapError as exc:
        print(f"mellinmap: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
