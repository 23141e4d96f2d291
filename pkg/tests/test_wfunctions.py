import numpy as np
import pytest

from wfuncs import families as F
from wfuncs import orthopoly as O
from wfuncs import wfunctions as W

ALL_FAMILIES = [
    F.laguerre(1.3),
    F.ultraspherical(2.2),
    F.generalized_hermite(0.7),
    F.konoplev(1.5, 0.4),
]


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=str)
def test_plain_l2_orthonormality(family):
    """The phi_n are orthonormal without any weight in the inner product."""
    n = 10
    rule = O.gauss_rule(family, 2 * n + 6)
    basis = W.WFunctionBasis(family, n)
    ph = W.eval_wfunction_sequence(basis, rule.nodes)
    # sum w_k g(x_k) = int g w dx, so divide the integrand by w
    gram = (ph * (rule.weights / F.weight_eval(family, rule.nodes))) @ ph.T
    assert np.max(np.abs(gram - np.eye(n + 1))) < 1e-12


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=str)
def test_derivatives_match_finite_differences(family):
    x = np.array([0.31, 0.72]) if family.kind == "laguerre" else np.array([0.31, -0.72])
    h = 1e-6
    basis = W.WFunctionBasis(family, 8)
    d1 = W.eval_wfunction_derivative_sequence(basis, x)
    fd = (
        W.eval_wfunction_sequence(basis, x + h)
        - W.eval_wfunction_sequence(basis, x - h)
    ) / (2 * h)
    assert np.max(np.abs(d1 - fd)) < 1e-6
    d2 = W.eval_wfunction_second_derivative_sequence(basis, x)
    fd2 = (
        W.eval_wfunction_derivative_sequence(basis, x + h)
        - W.eval_wfunction_derivative_sequence(basis, x - h)
    ) / (2 * h)
    assert np.max(np.abs(d2 - fd2)) < 1e-5


def test_second_derivative_blowup_direction():
    """For ultraspherical alpha < 4 the exponent alpha/2 - 2 is negative, so
    phi'' grows without bound approaching the endpoint."""
    basis = W.WFunctionBasis(F.ultraspherical(1.0), 4)
    near = abs(W.eval_wfunction_second_derivative_sequence(basis, 1.0 - 1e-8)[4])
    far = abs(W.eval_wfunction_second_derivative_sequence(basis, 1.0 - 1e-4)[4])
    assert near > 100 * far


def test_laguerre_range_guard_and_log_fallback():
    basis = W.WFunctionBasis(F.laguerre(2.0), 5)
    with pytest.raises(ValueError):
        W.eval_wfunction_sequence(basis, 800.0)
    sign, logs = W.eval_wfunction_log_sequence(basis, 800.0)
    assert np.all(np.isfinite(logs))
    assert np.all(np.abs(sign) == 1.0)


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=str)
def test_log_sequence_consistent_with_direct(family):
    x = 0.37
    basis = W.WFunctionBasis(family, 6)
    direct = W.eval_wfunction_sequence(basis, x)
    sign, logs = W.eval_wfunction_log_sequence(basis, x)
    assert np.allclose(sign * np.exp(logs), direct, rtol=1e-12)


def test_scalar_and_array_shapes():
    basis = W.WFunctionBasis(F.ultraspherical(2.0), 5)
    assert W.eval_wfunction_sequence(basis, 0.3).shape == (6,)
    assert W.eval_wfunction_sequence(basis, np.array([0.1, 0.2, 0.3])).shape == (6, 3)


def test_negative_n_max_rejected():
    with pytest.raises(ValueError):
        W.WFunctionBasis(F.laguerre(1.0), -1)
