"""Linear-time matrix-vector products with separable differentiation matrices.

For a separable matrix (D_{m,n} = a_m b_n below the diagonal, skew-symmetric
completion) the product h = D f reduces to running prefix/suffix sums:

    h_m = a_m sigma_m - b_m rho_m,
    sigma_m = sum_{n <  m} b_n f_n,      rho_m = sum_{n > m} a_n f_n,

which costs about N + 3M fused multiply-adds instead of the O(MN) of a dense
product.  The symmetrically separable (parity-structured) case runs the same
sums split over even and odd indices.

Flop accounting counts one fused multiply-add (or one bare multiplication) as
one flop; the additions of the running sums ride along with the
multiplication that produced each term.  The one-time cost of the factor
sequences is charged to plan construction and reported separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diffmatrix import SeparableFactors, matvec_factors
from .families import WeightFamily

__all__ = [
    "FastProductPlan",
    "fast_product_plan",
    "matvec_separable",
    "matvec_symmetric_separable",
    "apply_power",
]


@dataclass
class FastProductPlan:
    """Factor sequences plus section sizes and a per-plan flop counter.

    Not safe to share across concurrent calls: the counter mutates.
    """

    factors: SeparableFactors
    M: int
    N: int
    flop_counter: int = 0
    precompute_flops: int = field(default=0, repr=False)

    def __post_init__(self):
        if self.M < 0 or self.N < 0:
            raise ValueError("M and N must be >= 0")
        if self.M > self.N:
            raise ValueError(f"plans require M <= N, got M={self.M}, N={self.N}")
        if self.factors.a_seq.size < self.N + 1:
            raise ValueError("factor sequences must cover indices 0..N")


def fast_product_plan(family: WeightFamily, M: int, N: int) -> FastProductPlan:
    """Plan a fast product for rows 0..M of D applied to coefficients 0..N."""
    factors = matvec_factors(family, N)
    # factor construction costs a handful of flops per entry (log-Gamma calls)
    return FastProductPlan(factors, M, N, precompute_flops=4 * (N + 1))


def _coeffs(f) -> np.ndarray:
    values = getattr(f, "values", f)
    return np.asarray(values, dtype=float)


def matvec_separable(plan: FastProductPlan, f) -> np.ndarray:
    """h = D f for separable D, rows 0..M; about N + 3M flops."""
    if plan.factors.parity_structured:
        raise ValueError("factors are parity-structured; use matvec_symmetric_separable")
    fv = _coeffs(f)
    if fv.size != plan.N + 1:
        raise ValueError(f"expected {plan.N + 1} coefficients, got {fv.size}")
    M, N = plan.M, plan.N
    a, b = plan.factors.a_seq, plan.factors.b_seq
    # sigma_m = sum_{n<m} b_n f_n for m = 0..M
    sigma = np.concatenate(([0.0], np.cumsum(b[:M] * fv[:M])))
    # rho_m = sum_{n>m} a_n f_n for m = 0..M
    pa = a[1 : N + 1] * fv[1 : N + 1]
    rho = np.concatenate((np.cumsum(pa[::-1])[::-1], [0.0]))[: M + 1]
    plan.flop_counter += N + M + 2 * (M + 1)
    return a[: M + 1] * sigma - b[: M + 1] * rho


def matvec_symmetric_separable(plan: FastProductPlan, f, pad: bool = False) -> np.ndarray:
    """h = D f for symmetrically separable D (entries on odd m+n only).

    The interleaved prefix-sum scheme assumes even M and N; odd sizes are
    rejected unless ``pad`` is set, in which case the input is zero-extended
    (and the output truncated) to the requested sizes.
    """
    if not plan.factors.parity_structured:
        raise ValueError("factors are not parity-structured; use matvec_separable")
    fv = _coeffs(f)
    if fv.size != plan.N + 1:
        raise ValueError(f"expected {plan.N + 1} coefficients, got {fv.size}")
    M, N = plan.M, plan.N
    if M % 2 or N % 2:
        if not pad:
            raise ValueError(
                "the even/odd scheme needs even M and N; pass pad=True to "
                "zero-pad the odd sizes"
            )
        inner = FastProductPlan(_extended_factors(plan), M + M % 2, N + N % 2)
        h = matvec_symmetric_separable(inner, np.append(fv, np.zeros(N % 2)))
        plan.flop_counter += inner.flop_counter
        return h[: M + 1]
    a, b = plan.factors.a_seq, plan.factors.b_seq
    fe, fo = fv[0 : N + 1 : 2], fv[1 : N + 1 : 2]  # lengths N/2+1, N/2
    ae, be = a[0 : N + 1 : 2], b[0 : N + 1 : 2]
    ao, bo = a[1 : N + 1 : 2], b[1 : N + 1 : 2]
    half = M // 2
    # even outputs h_{2m}, m = 0..M/2: sums over odd input indices
    sig_o = np.concatenate(([0.0], np.cumsum(bo[:half] * fo[:half])))
    rho_o = np.concatenate((np.cumsum((ao * fo)[::-1])[::-1], [0.0]))[: half + 1]
    h_even = ae[: half + 1] * sig_o - be[: half + 1] * rho_o
    # odd outputs h_{2m+1}, m = 0..M/2-1: sums over even input indices
    sig_e = np.cumsum(be[:half] * fe[:half])
    rho_e = np.concatenate((np.cumsum((ae[1:] * fe[1:])[::-1])[::-1], [0.0]))[:half]
    h_odd = ao[:half] * sig_e - bo[:half] * rho_e
    h = np.empty(M + 1)
    h[0::2] = h_even
    h[1::2] = h_odd
    plan.flop_counter += N + 3 * M + 2
    return h


def _extended_factors(plan: FastProductPlan) -> SeparableFactors:
    """Factors covering one extra index, for zero-padded odd-size products."""
    a, b = plan.factors.a_seq, plan.factors.b_seq
    if a.size >= plan.N + 2:
        return plan.factors
    # the padded coefficient is zero, so the extra factor value is never used
    return SeparableFactors(
        np.append(a, 0.0), np.append(b, 0.0), plan.factors.parity_structured
    )


def apply_power(plan: FastProductPlan, f, r: int) -> np.ndarray:
    """First M+1 entries of D^r f; about r (N + 4N) flops.

    Intermediate vectors are kept at full length N+1 — truncating between
    applications would compute (P_M D P_M)^r instead of P_M D^r.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    fv = _coeffs(f)
    full = FastProductPlan(plan.factors, plan.N, plan.N)
    step = (
        matvec_symmetric_separable
        if plan.factors.parity_structured
        else matvec_separable
    )
    for _ in range(r):
        fv = step(full, fv)
    plan.flop_counter += full.flop_counter
    return fv[: plan.M + 1]
