"""Orthonormal polynomial recurrences and Gauss quadrature for the weight families.

The orthonormal recurrence used throughout is

    beta_n p_{n+1}(x) = (x + alpha_n) p_n(x) - beta_{n-1} p_{n-1}(x),

with beta_{-1} = 0, beta_n > 0 and positive leading coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .families import WeightFamily, log_moment_zero

__all__ = [
    "RecurrenceCoeffs",
    "QuadratureRule",
    "QuadratureError",
    "recurrence_coeffs",
    "eval_poly_sequence",
    "eval_poly_derivative_sequence",
    "eval_poly_second_derivative_sequence",
    "gauss_rule",
    "gauss_laguerre_general",
    "gauss_jacobi_general",
    "jacobi_x_recurrence",
    "konoplev_monic_c",
]


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Orthonormal three-term recurrence coefficients alpha_0..alpha_{n-1}, beta_0..beta_{n-1}."""

    alpha_seq: np.ndarray
    beta_seq: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alpha_seq, dtype=float)
        b = np.asarray(self.beta_seq, dtype=float)
        if a.shape != b.shape:
            raise ValueError("alpha_seq and beta_seq must have equal length")
        if np.any(b <= 0):
            raise ValueError("all beta coefficients must be strictly positive")
        object.__setattr__(self, "alpha_seq", a)
        object.__setattr__(self, "beta_seq", b)

    @property
    def length(self) -> int:
        return self.alpha_seq.size


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule: sum(weights * g(nodes)) = int g w dx for deg g <= exactness_degree."""

    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int


class QuadratureError(RuntimeError):
    """Raised when the tridiagonal eigensolve behind a Gauss rule fails."""


def jacobi_x_recurrence(alpha: float, m: int) -> tuple[float, float]:
    """Coefficients (A_m, C_m) of x P_m = A_m P_{m+1} + C_m P_{m-1} for P_m^{(alpha,alpha)}."""
    A = (m + 1) * (m + 2 * alpha + 1) / ((m + 1 + alpha) * (2 * m + 2 * alpha + 1))
    C = (m + alpha) / (2 * m + 2 * alpha + 1)
    return A, C


def konoplev_monic_c(family: WeightFamily, n: int) -> float:
    """Monic recurrence coefficient c_n for the Konoplev weight, n >= 1."""
    if family.kind != "konoplev":
        raise ValueError("konoplev_monic_c applies to the Konoplev family only")
    if n < 1:
        raise ValueError("monic coefficients are defined for n >= 1")
    a, g = family.alpha, family.gamma
    if n % 2 == 0:
        k = n // 2
        return k * (k + a) / ((2 * k + a + g) * (2 * k + 1 + a + g))
    k = (n - 1) // 2
    return (k + 1 + g) * (k + 1 + a + g) / ((2 * k + 1 + a + g) * (2 * k + 2 + a + g))


def _monic_ab(family: WeightFamily, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Monic coefficients a_0..a_{n-1}, b_1..b_{n-1} of pi_{k+1} = (x-a_k) pi_k - b_k pi_{k-1}."""
    n = np.arange(n_max, dtype=float)
    if family.kind == "laguerre":
        al = family.alpha
        a = 2.0 * n + al + 1.0
        b = n[1:] * (n[1:] + al)
    elif family.kind == "ultraspherical":
        al = family.alpha
        a = np.zeros(n_max)
        k = n[1:]
        b = k * (k + 2 * al) / ((2 * k + 2 * al - 1) * (2 * k + 2 * al + 1))
    elif family.kind == "genhermite":
        a = np.zeros(n_max)
        k = np.arange(1, n_max)
        b = np.where(k % 2 == 0, k / 2.0, (k - 1) / 2.0 + family.mu + 0.5)
    else:
        a = np.zeros(n_max)
        b = np.array([konoplev_monic_c(family, int(k)) for k in range(1, n_max)])
    return a, b


def recurrence_coeffs(family: WeightFamily, n_max: int) -> RecurrenceCoeffs:
    """Orthonormal recurrence coefficients alpha_0..alpha_{n_max-1}, beta_0..beta_{n_max-1}."""
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    if n_max == 0:
        return RecurrenceCoeffs(np.empty(0), np.empty(0))
    a_monic, b_monic = _monic_ab(family, n_max + 1)
    # beta_k = sqrt(b_{k+1}); offsets enter with a plus sign in the recurrence
    return RecurrenceCoeffs(-a_monic[:n_max], np.sqrt(b_monic[:n_max]))


def _p0(family: WeightFamily) -> float:
    return math.exp(-0.5 * log_moment_zero(family))


def eval_poly_sequence(family: WeightFamily, n_max: int, x) -> np.ndarray:
    """p_0(x)..p_{n_max}(x) by forward recurrence; x may be scalar or 1-D array.

    Returns shape (n_max+1,) for scalar x and (n_max+1, len(x)) otherwise.
    """
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    rc = recurrence_coeffs(family, n_max)
    out = np.empty((n_max + 1, x.size))
    out[0] = _p0(family)
    if n_max >= 1:
        prev = np.zeros_like(x)
        for n in range(n_max):
            out[n + 1] = ((x + rc.alpha_seq[n]) * out[n] - (rc.beta_seq[n - 1] if n else 0.0) * prev) / rc.beta_seq[n]
            prev = out[n]
    return out[:, 0] if scalar else out


def eval_poly_derivative_sequence(family: WeightFamily, n_max: int, x) -> np.ndarray:
    """p'_0(x)..p'_{n_max}(x) via the differentiated recurrence."""
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    rc = recurrence_coeffs(family, n_max)
    p = np.empty((n_max + 1, x.size))
    dp = np.empty((n_max + 1, x.size))
    p[0] = _p0(family)
    dp[0] = 0.0
    p_prev = np.zeros_like(x)
    dp_prev = np.zeros_like(x)
    for n in range(n_max):
        bm = rc.beta_seq[n - 1] if n else 0.0
        p[n + 1] = ((x + rc.alpha_seq[n]) * p[n] - bm * p_prev) / rc.beta_seq[n]
        dp[n + 1] = ((x + rc.alpha_seq[n]) * dp[n] + p[n] - bm * dp_prev) / rc.beta_seq[n]
        p_prev, dp_prev = p[n], dp[n]
    return dp[:, 0] if scalar else dp


def eval_poly_second_derivative_sequence(family: WeightFamily, n_max: int, x) -> np.ndarray:
    """p''_0(x)..p''_{n_max}(x) via twice-differentiated recurrence."""
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    rc = recurrence_coeffs(family, n_max)
    p = np.empty((n_max + 1, x.size))
    dp = np.empty_like(p)
    d2p = np.empty_like(p)
    p[0] = _p0(family)
    dp[0] = 0.0
    d2p[0] = 0.0
    p_prev = dp_prev = d2p_prev = np.zeros_like(x)
    for n in range(n_max):
        bm = rc.beta_seq[n - 1] if n else 0.0
        xa = x + rc.alpha_seq[n]
        p[n + 1] = (xa * p[n] - bm * p_prev) / rc.beta_seq[n]
        dp[n + 1] = (xa * dp[n] + p[n] - bm * dp_prev) / rc.beta_seq[n]
        d2p[n + 1] = (xa * d2p[n] + 2.0 * dp[n] - bm * d2p_prev) / rc.beta_seq[n]
        p_prev, dp_prev, d2p_prev = p[n], dp[n], d2p[n]
    return d2p[:, 0] if scalar else d2p


def _golub_welsch(diag: np.ndarray, off: np.ndarray, log_mu0: float):
    try:
        nodes = eigh_tridiagonal(diag, off, eigvals_only=True)
    except Exception as exc:  # pragma: no cover - LAPACK failure is environmental
        raise QuadratureError(f"tridiagonal eigensolve failed: {exc}") from exc
    # Christoffel weights 1 / sum_k p_k(x_i)^2: relatively accurate even where
    # the eigenvector-based formula loses all precision on tiny weights.
    p_prev = np.zeros_like(nodes)
    p = np.full_like(nodes, math.exp(-0.5 * log_mu0))
    total = p * p
    with np.errstate(over="ignore"):
        for k in range(diag.size - 1):
            p, p_prev = ((nodes - diag[k]) * p - (off[k - 1] if k else 0.0) * p_prev) / off[k], p
            total += p * p
        weights = 1.0 / total
    return nodes, weights


def gauss_laguerre_general(a: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """n-point Gauss rule for the weight t^a e^{-t} on (0, inf), a > -1."""
    if not a > -1:
        raise ValueError(f"Laguerre parameter must exceed -1, got {a}")
    if n < 1:
        raise ValueError("n must be >= 1")
    k = np.arange(n, dtype=float)
    diag = 2.0 * k + a + 1.0
    j = np.arange(1, n, dtype=float)
    off = np.sqrt(j * (j + a))
    return _golub_welsch(diag, off, float(gammaln(a + 1.0)))


def gauss_jacobi_general(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """n-point Gauss rule for the weight (1-t)^a (1+t)^b on (-1, 1), a, b > -1."""
    if not (a > -1 and b > -1):
        raise ValueError(f"Jacobi parameters must exceed -1, got ({a}, {b})")
    if n < 1:
        raise ValueError("n must be >= 1")
    ab = a + b
    k = np.arange(n, dtype=float)
    denom = (2 * k + ab) * (2 * k + ab + 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        diag = np.where(denom == 0.0, (b - a) / (ab + 2.0), (b * b - a * a) / denom)
    j = np.arange(1, n, dtype=float)
    s = 2 * j + ab
    with np.errstate(invalid="ignore", divide="ignore"):
        off = np.sqrt(4 * j * (j + a) * (j + b) * (j + ab) / (s * s * (s * s - 1.0)))
    if n > 1:
        # j = 1 has its own formula; the general one is 0/0 when a + b = -1
        off[0] = math.sqrt(4 * (1 + a) * (1 + b) / ((ab + 2.0) ** 2 * (ab + 3.0)))
    log_mu0 = (ab + 1.0) * math.log(2.0) + float(
        gammaln(a + 1.0) + gammaln(b + 1.0) - gammaln(ab + 2.0)
    )
    return _golub_welsch(diag, off, log_mu0)


def gauss_rule(family: WeightFamily, n_points: int) -> QuadratureRule:
    """Gauss rule integrating exactly against the family weight.

    Laguerre and ultraspherical rules come from the family's own tridiagonal
    recurrence matrix.  The |x|-factor families are built by the substitutions
    t = x^2 (generalized Hermite, onto a Laguerre-type rule) and t = 2x^2 - 1
    (Konoplev, onto a Jacobi rule), splitting the symmetric integral over the
    two half-intervals; this avoids touching the kink of |x| at the origin.
    """
    if n_points < 1:
        raise ValueError(f"n_points must be >= 1, got {n_points}")
    if family.kind == "laguerre":
        nodes, weights = gauss_laguerre_general(family.alpha, n_points)
    elif family.kind == "ultraspherical":
        nodes, weights = gauss_jacobi_general(family.alpha, family.alpha, n_points)
    elif family.kind == "genhermite":
        n_half = (n_points + 1) // 2
        t, w = gauss_laguerre_general(family.mu - 0.5, n_half)
        r = np.sqrt(t)
        nodes = np.concatenate([-r[::-1], r])
        weights = 0.5 * np.concatenate([w[::-1], w])
    else:
        n_half = (n_points + 1) // 2
        t, w = gauss_jacobi_general(family.alpha, family.gamma, n_half)
        u = 0.5 * (1.0 + t)
        r = np.sqrt(u)
        c = 2.0 ** (-(family.alpha + family.gamma + 2.0))
        nodes = np.concatenate([-r[::-1], r])
        weights = c * np.concatenate([w[::-1], w])
    return QuadratureRule(nodes=nodes, weights=weights, exactness_degree=2 * n_points - 1)
