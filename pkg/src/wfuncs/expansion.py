"""Expansions in the polynomial basis P and the W-function basis Phi.

Coefficients are computed by Gauss quadrature against the family weight:

    c_n(P)   = int f p_n w dx         = sum_k omega_k f(x_k) p_n(x_k),
    c_n(Phi) = int f p_n sqrt(w) dx   = sum_k omega_k f(x_k) p_n(x_k) / sqrt(w(x_k)),

the division being finite because Gauss nodes are interior.  Partial sums and
their first two derivatives are evaluated with the analytic phi_n derivative
formulas, so that endpoint blow-up of phi_n'' for small weight exponents is
represented faithfully rather than smoothed by a truncated operator.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .diffmatrix import dense_diff_matrix_closed, dense_diff_matrix_quadrature
from .families import WeightFamily, weight_eval
from .orthopoly import (
    eval_poly_derivative_sequence,
    eval_poly_second_derivative_sequence,
    eval_poly_sequence,
    gauss_rule,
)
from .wfunctions import (
    WFunctionBasis,
    eval_wfunction_derivative_sequence,
    eval_wfunction_second_derivative_sequence,
    eval_wfunction_sequence,
)

__all__ = [
    "CoefficientVector",
    "TestFunction",
    "TEST_FUNCTIONS",
    "test_function",
    "expand",
    "partial_sum_eval",
    "diff_coefficients",
    "error_report",
    "error_report_to_csv",
    "ERROR_REPORT_HEADER",
]


@dataclass(frozen=True)
class CoefficientVector:
    """Expansion coefficients of a function in basis "P" or "Phi"."""

    values: np.ndarray
    basis: str
    family: WeightFamily

    def __post_init__(self):
        if self.basis not in ("P", "Phi"):
            raise ValueError(f'basis must be "P" or "Phi", got {self.basis!r}')
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))


@dataclass(frozen=True)
class TestFunction:
    """A benchmark function with closed-form derivatives to order 2."""

    id: str
    f: Callable[[np.ndarray], np.ndarray]
    df: Callable[[np.ndarray], np.ndarray]
    d2f: Callable[[np.ndarray], np.ndarray]

    def derivative(self, order: int) -> Callable[[np.ndarray], np.ndarray]:
        return (self.f, self.df, self.d2f)[order]


def _us1_f(x):
    return (1.0 - 2.0 * x) * np.cos(0.5 * np.pi * x)


def _us1_df(x):
    return -2.0 * np.cos(0.5 * np.pi * x) - 0.5 * np.pi * (1.0 - 2.0 * x) * np.sin(0.5 * np.pi * x)


def _us1_d2f(x):
    return 2.0 * np.pi * np.sin(0.5 * np.pi * x) - 0.25 * np.pi**2 * (1.0 - 2.0 * x) * np.cos(0.5 * np.pi * x)


def _us2_f(x):
    return (1.0 - 2.0 * x) * np.cos(0.5 * np.pi * x) ** 2


def _us2_df(x):
    return -2.0 * np.cos(0.5 * np.pi * x) ** 2 - 0.5 * np.pi * (1.0 - 2.0 * x) * np.sin(np.pi * x)


def _us2_d2f(x):
    return 2.0 * np.pi * np.sin(np.pi * x) - 0.5 * np.pi**2 * (1.0 - 2.0 * x) * np.cos(np.pi * x)


def _lag1_f(x):
    return np.exp(-x) * np.sin(x)


def _lag1_df(x):
    return np.exp(-x) * (np.cos(x) - np.sin(x))


def _lag1_d2f(x):
    return -2.0 * np.exp(-x) * np.cos(x)


def _lag2_f(x):
    return np.exp(-x) * np.sin(x) ** 2


def _lag2_df(x):
    return np.exp(-x) * (np.sin(2.0 * x) - np.sin(x) ** 2)


def _lag2_d2f(x):
    return np.exp(-x) * (2.0 * np.cos(2.0 * x) - 2.0 * np.sin(2.0 * x) + np.sin(x) ** 2)


TEST_FUNCTIONS = {
    "us1": TestFunction("us1", _us1_f, _us1_df, _us1_d2f),
    "us2": TestFunction("us2", _us2_f, _us2_df, _us2_d2f),
    "lag1": TestFunction("lag1", _lag1_f, _lag1_df, _lag1_d2f),
    "lag2": TestFunction("lag2", _lag2_f, _lag2_df, _lag2_d2f),
}


def test_function(name: str) -> TestFunction:
    try:
        return TEST_FUNCTIONS[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown test function {name!r}; choose from {sorted(TEST_FUNCTIONS)}"
        ) from None


def expand(f, basis: str, family: WeightFamily, N: int, n_quad: int | None = None) -> CoefficientVector:
    """Coefficients c_0..c_N of f in the requested basis.

    ``f`` is a TestFunction or a plain callable.  The quadrature size defaults
    to 2N + 16 points, enough for the polynomial factor plus slack for the
    smooth part of f.
    """
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    fn = f.f if isinstance(f, TestFunction) else f
    rule = gauss_rule(family, max(n_quad or 0, 2 * N + 16))
    vals = np.asarray(fn(rule.nodes), dtype=float)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        node = rule.nodes[bad][0]
        raise FloatingPointError(
            f"f evaluated to a non-finite value at quadrature node x={node!r}"
        )
    P = eval_poly_sequence(family, N, rule.nodes)
    weights = rule.weights
    if basis == "Phi":
        weights = weights / np.sqrt(weight_eval(family, rule.nodes))
    elif basis != "P":
        raise ValueError(f'basis must be "P" or "Phi", got {basis!r}')
    return CoefficientVector(P @ (weights * vals), basis, family)


def partial_sum_eval(c: CoefficientVector, x, derivative_order: int = 0):
    """Partial sum (or its first or second derivative) at x.

    The derivative is that of the partial sum itself: sum c_n phi_n^(d) with
    analytic phi derivatives (respectively p_n^(d) in the P basis).
    """
    if derivative_order not in (0, 1, 2):
        raise ValueError(f"derivative_order must be 0, 1 or 2, got {derivative_order}")
    n_max = c.values.size - 1
    if c.basis == "Phi":
        basis = WFunctionBasis(c.family, n_max)
        seq = (
            eval_wfunction_sequence,
            eval_wfunction_derivative_sequence,
            eval_wfunction_second_derivative_sequence,
        )[derivative_order](basis, x)
    else:
        seq = (
            eval_poly_sequence,
            eval_poly_derivative_sequence,
            eval_poly_second_derivative_sequence,
        )[derivative_order](c.family, n_max, x)
    out = c.values @ seq
    return float(out) if np.ndim(x) == 0 else out


def diff_coefficients(c: CoefficientVector, r: int = 1, internal: int | None = None) -> CoefficientVector:
    """Coefficients of the r-th derivative, obtained by applying D^r.

    Valid in the Phi basis only (phi' = D phi entrywise).  ``internal`` sets
    the truncation; the result keeps that full length.  Unlike the analytic
    route in partial_sum_eval, this represents the derivative inside the span
    of finitely many phi_n.  When f'/sqrt(w) is singular at an endpoint (for
    instance f'(+-1) != 0 under an ultraspherical weight) that representation
    converges only algebraically in ``internal``, so the two routes agree to
    the truncation error, not to machine precision.
    """
    if c.basis != "Phi":
        raise ValueError("coefficient differentiation applies to the Phi basis")
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    n = c.values.size
    size = max(internal or 0, n)
    builder = (
        dense_diff_matrix_quadrature
        if c.family.kind == "konoplev"
        else dense_diff_matrix_closed
    )
    D = builder(c.family, size - 1, size - 1).entries
    v = np.zeros(size)
    v[:n] = c.values
    # phi' = D phi row-wise, so the coefficient vector transforms by D^T
    for _ in range(r):
        v = D.T @ v
    return CoefficientVector(v, "Phi", c.family)


ERROR_REPORT_HEADER = (
    "family",
    "alpha",
    "basis",
    "N",
    "deriv",
    "sup_err",
    "l2_err",
    "log10_sup",
    "log10_l2",
)


def _main_parameter(family: WeightFamily) -> float:
    return family.mu if family.kind == "genhermite" else family.alpha


def error_report(
    f: TestFunction,
    family: WeightFamily,
    basis: str,
    N_list,
    grid,
    derivative_order: int = 0,
    expand_derivative: bool = False,
) -> list[dict]:
    """Sup-norm and grid-L2 errors of the partial sums on the given grid.

    By default the derivative of the partial sum of f is compared against the
    exact derivative.  With ``expand_derivative`` the derivative itself is
    expanded and evaluated at order zero instead (the alternative reading of
    a derivative expansion); the two are reported by the same schema.
    """
    grid = np.asarray(grid, dtype=float)
    exact = f.derivative(derivative_order)(grid)
    rows = []
    for N in N_list:
        if expand_derivative and derivative_order > 0:
            c = expand(f.derivative(derivative_order), basis, family, int(N))
            approx = partial_sum_eval(c, grid, 0)
        else:
            c = expand(f, basis, family, int(N))
            approx = partial_sum_eval(c, grid, derivative_order)
        err = np.abs(approx - exact)
        sup = float(np.max(err))
        l2 = float(math.sqrt(np.trapezoid(err**2, grid))) if grid.size > 1 else sup
        tiny = np.finfo(float).tiny
        rows.append(
            {
                "family": family.kind,
                "alpha": _main_parameter(family),
                "basis": basis,
                "N": int(N),
                "deriv": derivative_order,
                "sup_err": sup,
                "l2_err": l2,
                "log10_sup": math.log10(max(sup, tiny)),
                "log10_l2": math.log10(max(l2, tiny)),
            }
        )
    return rows


def error_report_to_csv(rows: list[dict], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=ERROR_REPORT_HEADER)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row[k]) for k in ERROR_REPORT_HEADER})


def _csv_cell(v):
    return f"{v:.16e}" if isinstance(v, float) else v
