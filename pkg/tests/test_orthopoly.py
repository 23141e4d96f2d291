import math

import numpy as np
import pytest
from scipy.special import roots_genlaguerre

from wfuncs import families as F
from wfuncs import orthopoly as O

ALL_FAMILIES = [
    F.laguerre(1.3),
    F.ultraspherical(2.2),
    F.generalized_hermite(0.7),
    F.generalized_hermite(0.0),
    F.konoplev(1.5, 0.4),
    F.konoplev(1.0, -0.5),
]


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=str)
def test_orthonormality_via_own_gauss_rule(family):
    n = 14
    rule = O.gauss_rule(family, 2 * n + 4)
    P = O.eval_poly_sequence(family, n, rule.nodes)
    gram = (P * rule.weights) @ P.T
    assert np.max(np.abs(gram - np.eye(n + 1))) < 5e-14


def test_laguerre_rule_against_scipy():
    t, w = O.gauss_laguerre_general(1.3, 32)
    ts, ws = roots_genlaguerre(32, 1.3)
    assert np.max(np.abs(t - ts)) < 1e-10
    assert np.max(np.abs((w - ws) / ws)) < 1e-11


def test_jacobi_rule_total_mass():
    # int (1-t)^a (1+t)^b dt = 2^(a+b+1) B(a+1, b+1)
    a, b = 1.2, -0.5
    _, w = O.gauss_jacobi_general(a, b, 12)
    exact = 2.0 ** (a + b + 1) * math.exp(
        math.lgamma(a + 1) + math.lgamma(b + 1) - math.lgamma(a + b + 2)
    )
    assert np.sum(w) == pytest.approx(exact, rel=1e-14)


def test_jacobi_rule_handles_parameter_sum_minus_one():
    # a + b = -1 makes the generic beta_1 formula 0/0; the rule must still work
    t, w = O.gauss_jacobi_general(-0.5, -0.5, 8)
    assert np.all(np.isfinite(t)) and np.all(np.isfinite(w))
    # Chebyshev weight: total mass pi
    assert np.sum(w) == pytest.approx(math.pi, rel=1e-14)


def test_p0_is_inverse_root_of_moment():
    # ultraspherical alpha=1: mu_0 = 4/3, p_0 = sqrt(3)/2
    v = O.eval_poly_sequence(F.ultraspherical(1.0), 0, 0.3)[0]
    assert v == pytest.approx(math.sqrt(3) / 2, rel=1e-15)


def test_jacobi_x_recurrence_example():
    A, C = O.jacobi_x_recurrence(1.0, 1)
    assert A == pytest.approx(8.0 / 15.0)
    assert C == pytest.approx(2.0 / 5.0)


def test_konoplev_monic_coefficients():
    fam = F.konoplev(1.0, 0.0)
    # c_2 = 1*(1+1) / ((2+1)(3+1)) = 1/6
    assert O.konoplev_monic_c(fam, 2) == pytest.approx(1.0 / 6.0, rel=1e-14)
    # gamma = -1/2 reduces to the ultraspherical recurrence
    rk = O.recurrence_coeffs(F.konoplev(1.7, -0.5), 10)
    ru = O.recurrence_coeffs(F.ultraspherical(1.7), 10)
    assert np.max(np.abs(rk.beta_seq - ru.beta_seq)) < 1e-14
    assert np.max(np.abs(rk.alpha_seq - ru.alpha_seq)) < 1e-14


@pytest.mark.parametrize("family", [F.ultraspherical(1.5), F.laguerre(2.0)], ids=str)
def test_derivative_sequences_match_finite_differences(family):
    x = np.array([0.31, 0.72]) if family.kind == "laguerre" else np.array([0.3, -0.7])
    h = 1e-6
    dp = O.eval_poly_derivative_sequence(family, 8, x)
    fd = (
        O.eval_poly_sequence(family, 8, x + h) - O.eval_poly_sequence(family, 8, x - h)
    ) / (2 * h)
    assert np.max(np.abs(dp - fd)) < 1e-6
    d2 = O.eval_poly_second_derivative_sequence(family, 8, x)
    fd2 = (
        O.eval_poly_derivative_sequence(family, 8, x + h)
        - O.eval_poly_derivative_sequence(family, 8, x - h)
    ) / (2 * h)
    assert np.max(np.abs(d2 - fd2)) < 1e-5


def test_scalar_and_array_shapes():
    fam = F.ultraspherical(1.0)
    assert O.eval_poly_sequence(fam, 5, 0.3).shape == (6,)
    assert O.eval_poly_sequence(fam, 5, np.array([0.3, 0.4])).shape == (6, 2)


def test_symmetric_family_parity():
    fam = F.generalized_hermite(0.7)
    P = O.eval_poly_sequence(fam, 7, np.array([0.6, -0.6]))
    signs = (-1.0) ** np.arange(8)
    assert np.allclose(P[:, 1], signs * P[:, 0])


def test_exactness_degree_reported():
    rule = O.gauss_rule(F.laguerre(1.0), 10)
    assert rule.exactness_degree >= 2 * 10 - 1
