"""Command-line front end: every operation, emitting CSV or JSON rows.

Exit codes: 0 success, 2 usage error, 3 resource cap, 4 budget exhausted.
Counts are printed as decimal strings (lossless beyond 64 bits), rationals as
"num/den", floats with 17 significant digits; both formats carry the same
preformatted values, so outputs are byte-stable across runs and worker counts.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import analytics, bounds, enumeration, montecarlo
from .errors import BudgetExceededError, ResourceCapError
from .landscape import MODE_CORNER, MODE_FIXED_HAMMING, MODE_UNIFORM, PlacementMode

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_BUDGET = 4


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _emit(rows: list[dict], fmt: str, out: Optional[str]) -> None:
    if not rows:
        text = ""
    else:
        columns = list(rows[0].keys())
        formatted = [{c: _fmt(r[c]) for c in columns} for r in rows]
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
            writer.writeheader()
            writer.writerows(formatted)
            text = buf.getvalue()
        else:
            text = json.dumps({"columns": columns, "rows": formatted}, indent=1)
            text += "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_grid(spec: str) -> list[float]:
    """Grid forms: "a:b:step" (inclusive) or a comma list "x1,x2,...". """
    if ":" in spec:
        a, b, step = (float(tok) for tok in spec.split(":"))
        if step <= 0:
            raise ValueError("grid step must be positive")
        n = int((b - a) / step + 1e-9) + 1
        return [round(a + i * step, 12) for i in range(n)]
    return [float(tok) for tok in spec.split(",")]


def _parse_int_list(spec: str) -> list[int]:
    return [int(tok) for tok in spec.split(",")]


def _x_values(args) -> list:
    if args.x is not None and args.x_grid is not None:
        raise ValueError("use either --x or --x-grid, not both")
    if args.x_grid is not None:
        return list(_parse_grid(args.x_grid))
    if args.x is None:
        raise ValueError("one of --x / --x-grid is required")
    return [args.x]


def _mode_from(args) -> PlacementMode:
    if args.mode == MODE_FIXED_HAMMING:
        if args.H is None:
            raise ValueError("--mode fixedH needs --H")
        return PlacementMode.fixed_hamming(args.H)
    if args.mode == MODE_UNIFORM:
        return PlacementMode.uniform_random()
    return PlacementMode.opposite_corner()


def _x_arg(text: str):
    if text in ("uniform", "random"):
        return "uniform"
    return float(text)


# --- subcommand runners --------------------------------------------------------


def _run_enumerate(args) -> list[dict]:
    counter = enumeration.count_saw_naive if args.naive else enumeration.count_saw
    kwargs = {}
    if not args.naive:
        kwargs = {"workers": args.workers, "budget_leaves": args.budget_leaves}
    table = counter(args.L, args.H, max_p=args.max_p, **kwargs)
    return [
        {"L": args.L, "H": table.hamming, "p": p, "count": c}
        for p, c in table.items()
    ]


def _run_mset(args) -> list[dict]:
    if args.list:
        paths = enumeration.list_mset_paths(args.L, args.H, cap=args.list_cap)
        return [{"path": s} for s in paths]
    table = enumeration.enumerate_mset(args.L, args.H, max_p=args.max_p)
    return [
        {"L": args.L, "H": table.hamming, "p": p, "count": c}
        for p, c in table.items()
    ]


def _run_bounds(args) -> list[dict]:
    rows = []
    for x in _x_values(args):
        pair = bounds.eval_bounds(args.L, args.H, x)
        rows.append(
            {
                "L": args.L, "H": pair.hamming, "x": x,
                "lower": pair.lower, "upper": pair.upper,
                "log_lower": pair.log_lower, "log_upper": pair.log_upper,
            }
        )
    return rows


def _run_phi(args) -> list[dict]:
    poly = bounds.phi_polynomial(args.L)
    return [
        {"L": args.L, "degree": d, "coefficient": c}
        for d, c in enumerate(poly.coefficients)
        if c
    ]


def _run_albounds(args) -> list[dict]:
    lower, upper = bounds.aL_bounds(args.L)
    return [{"L": args.L, "lower": lower, "upper": upper}]


def _run_critical(args) -> list[dict]:
    if args.alpha is not None and args.alpha_grid is not None:
        raise ValueError("use either --alpha or --alpha-grid, not both")
    if args.alpha is not None:
        grid = [args.alpha]
    elif args.alpha_grid is not None:
        grid = _parse_grid(args.alpha_grid)
    else:
        raise ValueError("one of --alpha / --alpha-grid is required")
    return [
        {"alpha": cp.alpha, "x_star": cp.x_star, "residual": cp.residual}
        for cp in analytics.critical_curve(grid)
    ]


def _run_expect(args) -> list[dict]:
    table = enumeration.count_saw(
        args.L, args.H, max_p=args.max_p,
        workers=args.workers, budget_leaves=args.budget_leaves,
    )
    return [
        {
            "L": args.L, "H": table.hamming, "x": x,
            "expected_theta": enumeration.exact_expected_theta(
                args.L, table.hamming, x, table=table
            ),
        }
        for x in _x_values(args)
    ]


def _run_averaged(args) -> list[dict]:
    rows = []
    for x in _x_values(args):
        exact, closed = analytics.averaged_expectation(args.L, x)
        rows.append({"L": args.L, "x": x, "exact_sum": exact, "closed_form": closed})
    return rows


def _run_simulate(args) -> list[dict]:
    summary = montecarlo.estimate(
        args.L, _mode_from(args), args.x, args.trials, args.seed,
        workers=args.workers, compute_direct=args.direct,
    )
    return [montecarlo.summary_row(summary)]


def _run_figure1(args) -> list[dict]:
    x_grid = _parse_grid(args.x_grid)
    if args.H_list is not None:
        rows = []
        for L in _parse_int_list(args.L_list):
            rows.extend(
                montecarlo.hamming_conditional_sweep(
                    L, _parse_int_list(args.H_list), x_grid, args.trials,
                    args.seed, workers=args.workers, compute_direct=args.direct,
                )
            )
        return rows
    return montecarlo.figure1_sweep(
        _parse_int_list(args.L_list), x_grid, args.trials, args.seed,
        mode=_mode_from(args), workers=args.workers, compute_direct=args.direct,
    )


def _run_figure2(args) -> list[dict]:
    grid = _parse_grid(args.alpha_grid)
    return [
        {"alpha": cp.alpha, "x_star": cp.x_star}
        for cp in analytics.critical_curve(grid)
    ]


def _run_convergence(args) -> list[dict]:
    rows = []
    for x in _x_values(args):
        for diag in analytics.convergence_table(
            _parse_int_list(args.L_list), args.alpha, x
        ):
            rows.append(
                {
                    "L": diag.dim, "H": diag.hamming, "x": diag.x,
                    "lower_root": diag.lower_root,
                    "upper_root": diag.upper_root,
                    "limit": diag.limit,
                }
            )
    return rows


# --- parser ---------------------------------------------------------------------


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="FILE", default=None)


def _add_x_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--x-grid", dest="x_grid", metavar="A:B:STEP", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="accperc",
        description="Accessibility percolation on the L-hypercube: exact path "
        "counts, bounds, critical points, and Monte Carlo simulation.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="exact self-avoiding path counts by backsteps")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--H", type=int, default=None)
    p.add_argument("--max-p", dest="max_p", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget-leaves", dest="budget_leaves", type=int,
                   default=enumeration.DEFAULT_BUDGET)
    p.add_argument("--naive", action="store_true",
                   help="unweighted exhaustive DFS (cross-check, tiny L only)")
    _add_output_flags(p)
    p.set_defaults(func=_run_enumerate)

    p = sub.add_parser("mset", help="recursive lower-bound path set counts")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--H", type=int, default=None)
    p.add_argument("--max-p", dest="max_p", type=int, default=None)
    p.add_argument("--list", action="store_true", help="emit explicit paths (small L)")
    p.add_argument("--list-cap", dest="list_cap", type=int,
                   default=enumeration.MSET_LIST_CAP)
    _add_output_flags(p)
    p.set_defaults(func=_run_mset)

    p = sub.add_parser("bounds", help="bracket E^x(Theta) by the generating functions")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--H", type=int, default=None)
    _add_x_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_run_bounds)

    p = sub.add_parser("phi", help="integer generating polynomial of the m-set")
    p.add_argument("--L", type=int, required=True)
    _add_output_flags(p)
    p.set_defaults(func=_run_phi)

    p = sub.add_parser("albounds", help="doubly-exponential bounds on the total count")
    p.add_argument("--L", type=int, required=True)
    _add_output_flags(p)
    p.set_defaults(func=_run_albounds)

    p = sub.add_parser("critical", help="critical starting fitness x*_alpha")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--alpha-grid", dest="alpha_grid", metavar="A:B:STEP", default=None)
    _add_output_flags(p)
    p.set_defaults(func=_run_critical)

    p = sub.add_parser("expect", help="exact E^x(Theta) from enumerated counts")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--H", type=int, default=None)
    p.add_argument("--max-p", dest="max_p", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget-leaves", dest="budget_leaves", type=int,
                   default=enumeration.DEFAULT_BUDGET)
    _add_x_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_run_expect)

    p = sub.add_parser("averaged", help="random-fittest-site averaged expectation")
    p.add_argument("--L", type=int, required=True)
    _add_x_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_run_averaged)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of P^x(Theta >= 1)")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--mode", choices=(MODE_CORNER, MODE_FIXED_HAMMING, MODE_UNIFORM),
                   default=MODE_CORNER)
    p.add_argument("--H", type=int, default=None)
    p.add_argument("--x", type=_x_arg, required=True,
                   help='starting fitness in [0,1], or "uniform"')
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--direct", action="store_true",
                   help="also count minimal-length open paths")
    _add_output_flags(p)
    p.set_defaults(func=_run_simulate)

    p = sub.add_parser("figure1", help="P^x(Theta >= 1) over an (L, x) grid")
    p.add_argument("--L-list", dest="L_list", default="8,12,16,20,24")
    p.add_argument("--x-grid", dest="x_grid", default="0.0:0.5:0.05")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mode", choices=(MODE_CORNER, MODE_FIXED_HAMMING, MODE_UNIFORM),
                   default=MODE_CORNER)
    p.add_argument("--H", type=int, default=None)
    p.add_argument("--H-list", dest="H_list", default=None,
                   help="fixed-Hamming sweep per L (comma list)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--direct", action="store_true")
    _add_output_flags(p)
    p.set_defaults(func=_run_figure1)

    p = sub.add_parser("figure2", help="critical line x*_alpha over an alpha grid")
    p.add_argument("--alpha-grid", dest="alpha_grid", default="0.01:1.0:0.01")
    _add_output_flags(p)
    p.set_defaults(func=_run_figure2)

    p = sub.add_parser("convergence", help="L-th roots of the bounds vs their limit")
    p.add_argument("--L-list", dest="L_list", required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    _add_x_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_run_convergence)

    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        rows = args.func(args)
        _emit(rows, args.format, args.out)
    except BudgetExceededError as exc:
        print(f"accperc: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ResourceCapError as exc:
        print(f"accperc: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"accperc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
