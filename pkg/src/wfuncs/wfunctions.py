"""W-functions phi_n = sqrt(w) p_n and their derivatives.

The phi_n are orthonormal in the plain (unweighted) L2 inner product on the
support of w.  Derivatives are computed analytically by the product rule,

    phi_n' = q1 p_n + sqrt(w) p_n',        q1 = w' / (2 sqrt(w)),
    phi_n'' = q2 p_n + 2 q1 p_n' + sqrt(w) p_n'',

with q2 = w''/(2 sqrt(w)) - w'^2/(4 w^{3/2}), keeping this module independent
of the differentiation-matrix module so each cross-validates the other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .families import (
    WeightFamily,
    weight_derivative,
    weight_eval,
    weight_second_derivative,
)
from .orthopoly import (
    eval_poly_derivative_sequence,
    eval_poly_second_derivative_sequence,
    eval_poly_sequence,
)

__all__ = [
    "WFunctionBasis",
    "eval_wfunction_sequence",
    "eval_wfunction_derivative_sequence",
    "eval_wfunction_second_derivative_sequence",
    "eval_wfunction_log_sequence",
]

# Beyond this point e^{-x/2} drifts into the denormal range for moderate n;
# callers must switch to the log-magnitude API.
_LAGUERRE_X_MAX = 700.0


@dataclass(frozen=True)
class WFunctionBasis:
    """The W-function system phi_0..phi_{n_max} of a weight family."""

    family: WeightFamily
    n_max: int

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError(f"n_max must be >= 0, got {self.n_max}")


def _check_range(basis: WFunctionBasis, x: np.ndarray) -> None:
    if basis.family.kind == "laguerre" and np.any(x > _LAGUERRE_X_MAX):
        raise ValueError(
            f"x > {_LAGUERRE_X_MAX:g} underflows e^(-x/2); "
            "use eval_wfunction_log_sequence instead"
        )


def eval_wfunction_sequence(basis: WFunctionBasis, x) -> np.ndarray:
    """phi_0(x)..phi_{n_max}(x); x scalar or 1-D array, strictly inside support."""
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    _check_range(basis, xa)
    sw = np.sqrt(weight_eval(basis.family, xa))
    out = sw * eval_poly_sequence(basis.family, basis.n_max, xa)
    return out[:, 0] if scalar else out


def eval_wfunction_derivative_sequence(basis: WFunctionBasis, x) -> np.ndarray:
    """phi_0'(x)..phi_{n_max}'(x) by the analytic product rule."""
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    _check_range(basis, xa)
    sw = np.sqrt(weight_eval(basis.family, xa))
    q1 = weight_derivative(basis.family, xa) / (2.0 * sw)
    p = eval_poly_sequence(basis.family, basis.n_max, xa)
    dp = eval_poly_derivative_sequence(basis.family, basis.n_max, xa)
    out = q1 * p + sw * dp
    return out[:, 0] if scalar else out


def eval_wfunction_second_derivative_sequence(basis: WFunctionBasis, x) -> np.ndarray:
    """phi_0''(x)..phi_{n_max}''(x) by the analytic product rule.

    Near an endpoint where w vanishes like dist^a with a < 4 this grows like
    dist^{a/2 - 2}; the blow-up is genuine, not a numerical artifact.
    """
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    _check_range(basis, xa)
    w = weight_eval(basis.family, xa)
    sw = np.sqrt(w)
    w1 = weight_derivative(basis.family, xa)
    w2 = weight_second_derivative(basis.family, xa)
    q1 = w1 / (2.0 * sw)
    q2 = w2 / (2.0 * sw) - w1 * w1 / (4.0 * w * sw)
    p = eval_poly_sequence(basis.family, basis.n_max, xa)
    dp = eval_poly_derivative_sequence(basis.family, basis.n_max, xa)
    d2p = eval_poly_second_derivative_sequence(basis.family, basis.n_max, xa)
    out = q2 * p + 2.0 * q1 * dp + sw * d2p
    return out[:, 0] if scalar else out


def eval_wfunction_log_sequence(basis: WFunctionBasis, x) -> tuple[np.ndarray, np.ndarray]:
    """(sign, log|phi_n(x)|) for each n, usable where phi itself underflows.

    Returns sign 0 and log -inf where phi_n(x) = 0 exactly.
    """
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    fam = basis.family
    if fam.kind == "laguerre":
        log_sw = 0.5 * (fam.alpha * np.log(xa) - xa)
    elif fam.kind == "ultraspherical":
        log_sw = 0.5 * fam.alpha * np.log1p(-xa * xa)
    elif fam.kind == "genhermite":
        log_sw = fam.mu * np.log(np.abs(xa)) - 0.5 * xa * xa
    else:
        log_sw = 0.5 * (
            (2.0 * fam.gamma + 1.0) * np.log(np.abs(xa))
            + fam.alpha * np.log1p(-xa * xa)
        )
    p = eval_poly_sequence(fam, basis.n_max, xa)
    sign = np.sign(p)
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(p)) + log_sw
    return (sign[:, 0], logs[:, 0]) if scalar else (sign, logs)
