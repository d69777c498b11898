"""Command-line interface.

Subcommands: pt-solve, sc-series, ht-expand, oracle, loops.  Every run
writes a deterministic JSON report {config, rows, checks, diagnostics}
(and optionally a CSV of the rows).  Exit codes: 0 success/agreement,
2 a comparison found a mismatch, 3 a budget stopped the run early,
64 usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction

from . import __version__, fixtures, ht_expansion, oracle, pt_solver, sc_series
from .report import Row, SeriesReport, compare_rows
from .ring import CycloNum
from .walker import enumerate_loops, graph_loop_sum, sc_walk_edges, whitney_check

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config_defaults(args, parser, argv):
    """Config file supplies defaults; explicit command-line flags win."""
    if not getattr(args, "config", None):
        return args
    overrides = _read_config_file(args.config)
    given = {a.lstrip("-").replace("-", "_").split("=")[0] for a in argv if a.startswith("--")}
    for key, value in overrides.items():
        if key in given or not hasattr(args, key):
            continue
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, value.lower() in ("1", "true", "yes", "on"))
        elif isinstance(current, int):
            setattr(args, key, int(value))
        elif isinstance(current, float):
            setattr(args, key, float(value))
        else:
            setattr(args, key, value)
    return args


def _emit(report: SeriesReport, args, exit_code: int) -> int:
    report.config["version"] = __version__
    report.config["threads"] = int(os.environ.get("ISINGLOOPS_THREADS", "1"))
    text = report.to_json()
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if getattr(args, "csv", None):
        with open(args.csv, "w") as fh:
            fh.write(report.rows_to_csv())
    return exit_code


def _common_flags(sub):
    sub.add_argument("--config", help="key=value defaults file")
    sub.add_argument("--out", help="write the JSON report here")
    sub.add_argument("--csv", help="also write the rows as CSV")


# ---------------------------------------------------------------------------


def cmd_pt_solve(args) -> tuple[SeriesReport, int]:
    report = SeriesReport(config={
        "command": "pt-solve", "convention": args.convention,
        "coupling": args.coupling, "fit_window": args.fit_window,
        "points_per_side": args.points_per_side, "at_x": args.at_x,
        "grid": args.grid,
    })
    crit = pt_solver.critical_point()
    report.diagnostics["critical_point"] = {
        "x_c": crit.x_c,
        "tc_over_j": crit.tc_over_j,
        "f_at_xc": crit.f_at_xc,
        "f_prime_at_xc": crit.f_prime_at_xc,
        "f_second_at_xc": crit.f_second_at_xc,
    }
    report.checks["xc_matches_closed_form"] = abs(crit.x_c - (2 - math.sqrt(3))) < 1e-10
    report.checks["f_vanishes_at_xc"] = abs(crit.f_at_xc) < 1e-12

    if args.at_x is not None:
        psi = pt_solver.symbolic_psi_pt(args.convention)
        x = args.at_x
        if x == 0.0:
            phi_over_t = -math.log(2.0)
        else:
            avg, _ = psi.log_theta_average(x)
            phi_over_t = -math.log(2.0) + 1.5 * math.log1p(-x * x) - 0.5 * avg
        report.diagnostics["at_x"] = {"x": x, "phi_per_site_per_t": phi_over_t}
        if x == 0.0:
            report.checks["at_x0_is_minus_log2"] = abs(phi_over_t + math.log(2.0)) < 1e-15
        return report, EXIT_OK if not report.mismatch else EXIT_MISMATCH

    lo, hi = (float(s) for s in args.fit_window.split(":"))
    fit = pt_solver.specific_heat_scan(
        coupling=args.coupling, convention=args.convention,
        window=(lo, hi), points_per_side=args.points_per_side)
    report.diagnostics["cv_fit"] = {
        "B": fit.fit_constant,
        "r_squared": fit.r_squared,
        "side_fits": fit.side_fits,
        "window": list(fit.fit_window),
        "blackout_delta": pt_solver.BLACKOUT_DELTA,
    }
    report.checks["r_squared_above_0.99"] = fit.r_squared > 0.99
    report.checks["log_slope_negative"] = fit.fit_constant < 0
    for x, t, cv in fit.points:
        report.rows.append(Row(r=0, value=cv, source="cv-scan",
                               flags={"x": x, "temperature": t}))
    gmin, gmax, gnum = (float(s) for s in args.grid.split(":"))
    grid = []
    for k in range(int(gnum)):
        t = gmin + (gmax - gmin) * k / max(int(gnum) - 1, 1)
        res = pt_solver.free_energy(t, args.coupling, args.convention)
        grid.append({"temperature": t, "x": res.x,
                     "free_energy": res.free_energy,
                     "quad_error": res.quad_error})
    report.diagnostics["phi_grid"] = grid
    report.checks["free_energy_monotone_decreasing"] = all(
        a["free_energy"] > b["free_energy"] for a, b in zip(grid, grid[1:]))
    return report, EXIT_OK if not report.mismatch else EXIT_MISMATCH


def cmd_sc_series(args) -> tuple[SeriesReport, int]:
    report = sc_series.run_pipelines(order=args.order)
    report.config.update({
        "command": "sc-series", "order": args.order,
        "check_det": args.check_det, "naive": args.naive,
    })
    if args.check_det:
        psi = sc_series.symbolic_psi_sc()
        report.checks["determinant_fixture"] = (
            psi.series == fixtures.sc_determinant_fixture())
        naive = sc_series.naive_reduce(psi)
        report.checks["naive_fixture"] = naive.series == fixtures.sc_naive_fixture()
    if args.naive:
        psi = sc_series.symbolic_psi_sc()
        naive = sc_series.naive_reduce(psi)
        root = pt_solver.critical_point().x_c
        report.diagnostics["naive"] = {
            "naive": True,
            "zero_angle_value_at_triangular_root": naive.zero_angle_eval(root),
            "reproduces_triangular_critical_point": abs(naive.zero_angle_eval(root)) < 1e-12,
        }
    code = EXIT_MISMATCH if report.mismatch else EXIT_OK
    return report, code


def cmd_ht_expand(args) -> tuple[SeriesReport, int]:
    report = SeriesReport(config={
        "command": "ht-expand", "lattice": args.lattice, "order": args.order,
        "radius": args.radius, "through_center": args.through_center,
        "bond_dedup": args.bond_dedup, "stabilize": args.stabilize,
    })
    code = EXIT_OK
    try:
        rows = ht_expansion.series_rows(
            args.lattice, args.order, radius=args.radius,
            through_center=args.through_center, dedup=args.bond_dedup)
    except ht_expansion.BudgetExceeded as exc:
        report.diagnostics["budget"] = {"reached_order": exc.reached_order,
                                        "partial": exc.partial}
        return report, EXIT_BUDGET
    if args.through_center and args.bond_dedup:
        # orders below two disjoint minimal cycles are purely connected and
        # comparable to the infinite-lattice through-site counts
        _, through = oracle.connected_counts(args.lattice, min(args.order, 7))
        limit = 2 * oracle.GIRTH[args.lattice] - 1
        oracle_vals = {r: Fraction(v) for r, v in through.items() if r <= limit}
        for r in range(min(args.order, limit) + 1):
            oracle_vals.setdefault(r, Fraction(1 if r == 0 else 0))
        rows = compare_rows(rows, oracle_vals, "through-site-connected")
    report.add_rows(rows)
    if args.stabilize:
        radii = [int(s) for s in args.stabilize.split(",")]
        table = ht_expansion.stabilization_table(
            args.lattice, args.order, radii, through_center=args.through_center)
        report.diagnostics["stabilization"] = {str(k): v for k, v in table.items()}
        stable_limit = 2 * oracle.GIRTH[args.lattice] - 1
        stable = all(
            table[radii[i]][r] == table[radii[0]][r]
            for i in range(1, len(radii))
            for r in range(min(args.order, stable_limit) + 1))
        report.checks[f"stable_through_order_{min(args.order, stable_limit)}"] = stable
    if report.mismatch:
        code = EXIT_MISMATCH
    return report, code


def cmd_oracle(args) -> tuple[SeriesReport, int]:
    sides = tuple(int(s) for s in args.sides.split(","))
    report = SeriesReport(config={
        "command": "oracle", "lattice": args.lattice, "sides": list(sides),
        "periodic": args.periodic, "exhaustive": args.exhaustive,
        "r_max": args.r_max, "persite": args.persite,
    })
    if args.persite:
        ps = oracle.persite_log_series(args.lattice, args.r_max)
        for r in sorted(ps.connected):
            report.rows.append(Row(r=r, value=Fraction(ps.connected[r]),
                                   source="oracle",
                                   flags={"column": "persite-connected"}))
        for r in sorted(ps.cumulants):
            report.rows.append(Row(r=r, value=ps.cumulants[r], source="oracle",
                                   flags={"column": "persite-cumulant"}))
        return report, EXIT_OK
    spec = oracle.LatticeSpec(args.lattice, sides, periodic=args.periodic)
    counts = oracle.even_subgraph_counts(spec, r_max=args.r_max)
    for r, c in enumerate(counts):
        report.rows.append(Row(r=r, value=Fraction(c), source="oracle",
                               flags={"column": "cycle-space"}))
    if args.exhaustive:
        part = oracle.exhaustive_partition(spec)
        for r, c in enumerate(part):
            if args.r_max is None or r <= args.r_max:
                report.rows.append(Row(r=r, value=Fraction(c), source="oracle",
                                       flags={"column": "exhaustive"}))
        trimmed = part[: len(counts)]
        report.checks["exhaustive_equals_cycle_space"] = trimmed == counts
        try:
            full = ht_expansion.full_partition_polynomial(spec)
            report.checks["full_partition_equals_exhaustive"] = full == part
        except ValueError:
            report.diagnostics["full_partition"] = "skipped: lattice too large"
    code = EXIT_MISMATCH if report.mismatch else EXIT_OK
    return report, code


def cmd_loops(args) -> tuple[SeriesReport, int]:
    report = SeriesReport(config={
        "command": "loops", "max_len": args.max_len, "dedup": args.dedup,
        "examples": args.examples, "whitney": args.whitney,
    })
    if args.examples:
        hexagon = graph_loop_sum(sc_walk_edges([1, 2, 3, 4, 5, 6]))
        improper = graph_loop_sum(sc_walk_edges([1, 2, 6, 5, 3, 2, 4, 5]))
        noncubic = graph_loop_sum(sc_walk_edges([1, 6, 2, 4, 3, 4, 4, 5, 5, 1, 6]))
        values = [g.action_value() for g in (hexagon, improper, noncubic)]
        report.checks["example1_counts_plus_one"] = values[0] == 1
        report.checks["example2_counts_zero"] = values[1] == 0
        report.checks["example3_counts_zero"] = values[2] == 0
        report.diagnostics["examples"] = [
            {
                "generic": g.generic_monomial.pretty(),
                "value": str(g.action_value()),
                "decompositions": [
                    {
                        "loops": [list(lp.directions) for lp in d.loops],
                        "comb_sign": d.comb_sign,
                        "phase_exponents": [lp.phase_exponent for lp in d.loops],
                        "oriented_tags": sorted(
                            str(t.lmn) for t in d.oriented_total_tags()),
                    }
                    for d in g.decompositions
                ],
            }
            for g in (hexagon, improper, noncubic)
        ]
    if args.whitney:
        loops = enumerate_loops(args.max_len, dedup=args.dedup)
        checked = sum(1 for w in loops if whitney_check(w))
        report.diagnostics["whitney"] = {"loops": len(loops), "passed": checked}
        report.checks["whitney_all_pass"] = checked == len(loops)
        by_len = {}
        for w in loops:
            by_len[w.length] = by_len.get(w.length, 0) + 1
        for length in sorted(by_len):
            report.rows.append(Row(r=length, value=by_len[length], source="loops",
                                   flags={"dedup": args.dedup}))
    code = EXIT_MISMATCH if report.mismatch else EXIT_OK
    return report, code


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="isingloops",
                     description="Loop-propagator and high-temperature series engine")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("pt-solve", help="triangular-lattice thermodynamics")
    p.add_argument("--convention", choices=("paper", "geometric"), default="paper")
    p.add_argument("--coupling", type=float, default=1.0)
    p.add_argument("--fit-window", default="1e-4:1e-2")
    p.add_argument("--points-per-side", type=int, default=10)
    p.add_argument("--at-x", type=float, default=None)
    p.add_argument("--grid", default="2.0:6.0:9",
                   help="temperature grid min:max:count for the potential table")
    _common_flags(p)
    p.set_defaults(func=cmd_pt_solve)

    p = subs.add_parser("sc-series", help="tagged simple-cubic series pipelines")
    p.add_argument("--order", type=int, default=sc_series.DEFAULT_ORDER)
    p.add_argument("--check-det", action="store_true")
    p.add_argument("--naive", action="store_true")
    _common_flags(p)
    p.set_defaults(func=cmd_sc_series)

    p = subs.add_parser("ht-expand", help="spin-product high-temperature expansion")
    p.add_argument("--lattice", choices=("sq", "sc"), default="sq")
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--through-center", dest="through_center",
                   action="store_true", default=True)
    p.add_argument("--no-through-center", dest="through_center", action="store_false")
    p.add_argument("--bond-dedup", dest="bond_dedup", action="store_true", default=True)
    p.add_argument("--literal-bonds", dest="bond_dedup", action="store_false")
    p.add_argument("--stabilize", default=None,
                   help="comma-separated radii for the stability table")
    _common_flags(p)
    p.set_defaults(func=cmd_ht_expand)

    p = subs.add_parser("oracle", help="brute-force ground truth")
    p.add_argument("--lattice", choices=("ring", "sq", "pt", "sc"), default="sq")
    p.add_argument("--sides", default="4,4", help="comma-separated side lengths")
    p.add_argument("--periodic", dest="periodic", action="store_true", default=True)
    p.add_argument("--open", dest="periodic", action="store_false")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--persite", action="store_true")
    p.add_argument("--r-max", type=int, default=None)
    _common_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = subs.add_parser("loops", help="loop enumeration and worked examples")
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--dedup", choices=("none", "reversal", "cyclic"), default="none")
    p.add_argument("--examples", action="store_true")
    p.add_argument("--whitney", action="store_true", default=True)
    p.add_argument("--no-whitney", dest="whitney", action="store_false")
    _common_flags(p)
    p.set_defaults(func=cmd_loops)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _apply_config_defaults(args, parser, argv)
    try:
        report, code = args.func(args)
    except ht_expansion.BudgetExceeded as exc:
        sys.stderr.write(f"budget exhausted at order {exc.reached_order}\n")
        return EXIT_BUDGET
    except (ValueError, ResourceWarning) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    report.config["argv"] = argv
    return _emit(report, args, code)


if __name__ == "__main__":
    sys.exit(main())
