"""Command-line front end for the W-function toolkit.

Each subcommand reproduces one artifact of the numerical study — a
differentiation-matrix section, a fast matrix-vector product, an expansion,
an error-versus-N table, a separability report, a power-growth probe, or the
endpoint error table — and writes it as CSV or JSON.

Exit codes: 0 on success, 2 on a configuration error (bad flag values,
violated preconditions), 3 on a numerical failure (divergent entry integral,
failed eigensolve, non-finite function values).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .diffmatrix import (
    DivergentIntegralError,
    MatrixSection,
    dense_diff_matrix_closed,
    dense_diff_matrix_quadrature,
    iota,
    iota_check,
    power_section,
    section_sidecar,
    section_write_csv,
    separability_scan,
)
from .expansion import (
    ERROR_REPORT_HEADER,
    error_report,
    error_report_to_csv,
    expand,
    partial_sum_eval,
    test_function,
)
from .families import (
    WeightFamily,
    generalized_hermite,
    konoplev,
    laguerre,
    ultraspherical,
)
from .fastops import (
    apply_power,
    fast_product_plan,
    matvec_separable,
    matvec_symmetric_separable,
)
from .orthopoly import QuadratureError

__all__ = ["main", "build_parser"]


def _family_from_args(args) -> WeightFamily:
    kind = args.family
    if kind is None:
        raise ValueError("--family is required")
    if kind == "laguerre":
        _require(args, "alpha")
        return laguerre(args.alpha)
    if kind == "ultraspherical":
        _require(args, "alpha")
        return ultraspherical(args.alpha)
    if kind == "genhermite":
        _require(args, "mu")
        return generalized_hermite(args.mu)
    _require(args, "alpha")
    _require(args, "gamma")
    return konoplev(args.alpha, args.gamma)


def _require(args, name: str) -> None:
    if getattr(args, name) is None:
        raise ValueError(f"--{name} is required for --family {args.family}")


def _parse_grid(spec: str) -> np.ndarray:
    try:
        a, b, n = spec.split(":")
        return np.linspace(float(a), float(b), int(n))
    except ValueError:
        raise ValueError(f"--grid expects a:b:n, got {spec!r}") from None


def _default_grid(family: WeightFamily) -> np.ndarray:
    if family.kind == "laguerre":
        return np.linspace(1e-10, 30.0, 3001)
    if family.kind == "genhermite":
        return np.linspace(-6.0, 6.0, 2001)
    return np.linspace(-1.0 + 1e-6, 1.0 - 1e-6, 2001)


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def _write_rows(args, header, rows) -> None:
    """Rows of dicts, as CSV (default) or a JSON array."""
    fh = _open_out(args.out)
    try:
        if args.format == "json":
            json.dump([{k: row[k] for k in header} for row in rows], fh, indent=1)
            fh.write("\n")
        else:
            writer = csv.DictWriter(fh, fieldnames=header)
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _cell(row[k]) for k in header})
    finally:
        if fh is not sys.stdout:
            fh.close()


def _cell(v):
    return f"{v:.16e}" if isinstance(v, float) else v


def cmd_dmat(args) -> int:
    family = _family_from_args(args)
    display = args.display if args.display is not None else 100
    internal = args.internal if args.internal is not None else 300
    section = power_section(family, args.s, display=display, internal=internal)
    out = args.out or f"dmat_{family.kind}_s{args.s}.csv"
    section_write_csv(section, out)
    with open(out + ".json", "w") as fh:
        fh.write(section_sidecar(section) + "\n")
    print(f"wrote {out} and {out}.json (max_abs={section.max_abs:.6e})")
    return 0


def cmd_matvec(args) -> int:
    family = _family_from_args(args)
    M = args.M if args.M is not None else 0
    N = args.N if args.N is not None else M
    rng = np.random.default_rng(args.seed)
    f = rng.standard_normal(N + 1)
    if family.kind in ("laguerre", "ultraspherical"):
        plan = fast_product_plan(family, M, N)
        if args.r != 1:
            h = apply_power(plan, f, args.r)
        elif plan.factors.parity_structured:
            h = matvec_symmetric_separable(plan, f, pad=True)
        else:
            h = matvec_separable(plan, f)
        flops = plan.flop_counter
    else:
        builder = (
            dense_diff_matrix_quadrature
            if family.kind == "konoplev"
            else dense_diff_matrix_closed
        )
        D = builder(family, N, N).entries
        h = np.linalg.matrix_power(D, args.r)[: M + 1] @ f
        flops = None
    rows = [{"m": m, "h": float(v)} for m, v in enumerate(h)]
    _write_rows(args, ("m", "h"), rows)
    if flops is not None:
        print(f"flops={flops}", file=sys.stderr)
    return 0


def cmd_expand(args) -> int:
    family = _family_from_args(args)
    N = args.N if args.N is not None else 40
    fn = test_function(args.func or "us1")
    c = expand(fn, "Phi", family, N)
    if args.grid:
        grid = _parse_grid(args.grid)
        vals = partial_sum_eval(c, grid, args.deriv)
        exact = fn.derivative(args.deriv)(grid)
        rows = [
            {"x": float(x), "value": float(v), "exact": float(e)}
            for x, v, e in zip(grid, vals, exact)
        ]
        _write_rows(args, ("x", "value", "exact"), rows)
    else:
        rows = [{"n": n, "c": float(v)} for n, v in enumerate(c.values)]
        _write_rows(args, ("n", "c"), rows)
    return 0


def cmd_errplot(args) -> int:
    family = _family_from_args(args)
    N = args.N if args.N is not None else 40
    fn = test_function(args.func or "us1")
    grid = _parse_grid(args.grid) if args.grid else _default_grid(family)
    N_list = list(range(5, N + 1, 5)) or [N]
    rows = error_report(fn, family, "Phi", N_list, grid, derivative_order=args.deriv)
    if args.out and args.format != "json":
        error_report_to_csv(rows, args.out)
    else:
        _write_rows(args, ERROR_REPORT_HEADER, rows)
    return 0


def cmd_separability(args) -> int:
    family = _family_from_args(args)
    N = args.N if args.N is not None else 40
    builder = (
        dense_diff_matrix_quadrature
        if family.kind == "konoplev"
        else dense_diff_matrix_closed
    )
    D = builder(family, N, N)
    report = separability_scan(D)
    out = {
        "family": family.kind,
        "separable": report.separable,
        "symmetrically_separable": report.symmetrically_separable,
        "max_iota": report.max_iota,
        "max_iota_check": report.max_iota_check,
        "scale": report.scale,
        "iota_2_1": iota(D, 2, 1),
        "iota_check_3_0": iota_check(D, 3, 0),
    }
    fh = _open_out(args.out)
    try:
        if args.format == "csv":
            writer = csv.DictWriter(fh, fieldnames=list(out))
            writer.writeheader()
            writer.writerow({k: _cell(v) for k, v in out.items()})
        else:
            json.dump(out, fh, indent=1)
            fh.write("\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_powers_growth(args) -> int:
    family = _family_from_args(args)
    internal = args.internal if args.internal is not None else 300
    display = args.display if args.display is not None else 100
    lo = power_section(family, args.s, display=display, internal=internal)
    hi = power_section(family, args.s, display=display, internal=2 * internal)
    rel = abs(hi.max_abs - lo.max_abs) / lo.max_abs
    out = {
        "family": family.kind,
        "s": args.s,
        "internal": internal,
        "max_abs": lo.max_abs,
        "max_abs_doubled": hi.max_abs,
        "relative_change": rel,
    }
    fh = _open_out(args.out)
    try:
        json.dump(out, fh, indent=1)
        fh.write("\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_table45(args) -> int:
    """3 x 4 table of |errors| at x = 1e-10 for LAG2, N=60, alpha in 1..4."""
    eta = 1e-10
    N = args.N if args.N is not None else 60
    fn = test_function(args.func or "lag2")
    rows = []
    for alpha in (1.0, 2.0, 3.0, 4.0):
        family = laguerre(alpha)
        c = expand(fn, "Phi", family, N)
        row = {"alpha": alpha}
        for order in (0, 1, 2):
            approx = partial_sum_eval(c, eta, order)
            exact = float(fn.derivative(order)(np.array([eta]))[0])
            row[f"order{order}"] = abs(approx - exact)
        rows.append(row)
    _write_rows(args, ("alpha", "order0", "order1", "order2"), rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wfuncs", description="W-function differentiation-matrix toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--family",
        choices=("laguerre", "ultraspherical", "genhermite", "konoplev"),
    )
    common.add_argument("--alpha", type=float)
    common.add_argument("--mu", type=float)
    common.add_argument("--gamma", type=float)
    common.add_argument("--s", type=int, default=1)
    common.add_argument("--r", type=int, default=1)
    common.add_argument("--M", type=int)
    common.add_argument("--N", type=int)
    common.add_argument("--internal", type=int)
    common.add_argument("--display", type=int)
    common.add_argument("--func", choices=("us1", "us2", "lag1", "lag2"))
    common.add_argument("--deriv", type=int, choices=(0, 1, 2), default=0)
    common.add_argument("--grid", help="evaluation grid a:b:n")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0)
    for name, fn in (
        ("dmat", cmd_dmat),
        ("matvec", cmd_matvec),
        ("expand", cmd_expand),
        ("errplot", cmd_errplot),
        ("separability", cmd_separability),
        ("powers-growth", cmd_powers_growth),
        ("table45", cmd_table45),
    ):
        p = sub.add_parser(name, parents=[common])
        p.set_defaults(handler=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, 0 on --help; keep that contract
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DivergentIntegralError, QuadratureError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
