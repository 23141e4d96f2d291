import math

import numpy as np
import pytest
from scipy.special import eval_jacobi

from wfuncs import diffmatrix as DM
from wfuncs import families as F
from wfuncs import orthopoly as O
from wfuncs import wfunctions as W


def _dense(family, n):
    builder = (
        DM.dense_diff_matrix_quadrature
        if family.kind == "konoplev"
        else DM.dense_diff_matrix_closed
    )
    return builder(family, n, n)


def test_entry_spot_values():
    D = DM.dense_diff_matrix_closed(F.laguerre(1.0), 2, 2).entries
    assert D[1, 0] == pytest.approx(1.0 / (2.0 * math.sqrt(2.0)), rel=1e-14)
    D = DM.dense_diff_matrix_closed(F.ultraspherical(1.0), 2, 2).entries
    assert D[1, 0] == pytest.approx(math.sqrt(5.0) / 2.0, rel=1e-14)
    D = DM.dense_diff_matrix_closed(F.generalized_hermite(0.5), 3, 3).entries
    assert D[2, 1] == pytest.approx(1.0, rel=1e-14)


def test_matches_direct_phi_prime_integral_ultraspherical():
    """D_{m,n} = int phi_m' phi_n dx, computed with a plain Legendre rule."""
    fam = F.ultraspherical(2.0)
    t, w = O.gauss_jacobi_general(0.0, 0.0, 400)
    basis = W.WFunctionBasis(fam, 15)
    ph = W.eval_wfunction_sequence(basis, t)
    dph = W.eval_wfunction_derivative_sequence(basis, t)
    direct = (dph * w) @ ph.T
    closed = DM.dense_diff_matrix_closed(fam, 15, 15).entries
    assert np.max(np.abs(direct - closed)) < 1e-12


def test_matches_direct_phi_prime_integral_laguerre():
    """Same cross-check on (0, inf): phi_m' phi_n e^x is a polynomial times
    e^{-x}, so a plain Laguerre rule integrates it exactly."""
    fam = F.laguerre(2.0)
    t, w = O.gauss_laguerre_general(0.0, 150)
    basis = W.WFunctionBasis(fam, 15)
    boost = np.exp(t / 2.0)[None, :]
    ph = W.eval_wfunction_sequence(basis, t) * boost
    dph = W.eval_wfunction_derivative_sequence(basis, t) * boost
    direct = (dph * w) @ ph.T
    closed = DM.dense_diff_matrix_closed(fam, 15, 15).entries
    assert np.max(np.abs(direct - closed)) < 1e-11


def test_konoplev_reduces_to_ultraspherical_at_gamma_minus_half():
    Qk = DM.dense_diff_matrix_quadrature(F.konoplev(1.0, -0.5), 23, 23).entries
    Cu = DM.dense_diff_matrix_closed(F.ultraspherical(1.0), 23, 23).entries
    assert np.max(np.abs(Qk - Cu)) < 1e-12


def test_laguerre_entry_signs_alternate():
    """With positive leading coefficients the strict lower triangle carries
    the sign (-1)^(m+n+1)."""
    D = DM.dense_diff_matrix_closed(F.laguerre(2.0), 6, 6).entries
    m, n = np.tril_indices(7, -1)
    signs = (-1.0) ** (m + n + 1)
    assert np.all(np.sign(D[m, n]) == signs)


def test_separable_factor_magnitudes_match_entries():
    fam = F.laguerre(2.0)
    f = DM.separable_factors(fam, 39)
    D = DM.dense_diff_matrix_closed(fam, 39, 39).entries
    ab = np.tril(np.outer(f.a_seq, f.b_seq), -1)
    m, n = np.tril_indices(40, -1)
    rel = np.abs(np.abs(D[m, n]) - ab[m, n]) / ab[m, n]
    assert np.max(rel) < 1e-12


def test_matvec_factors_reproduce_signed_entries():
    for fam in (F.laguerre(1.7), F.ultraspherical(2.3)):
        f = DM.matvec_factors(fam, 19)
        D = DM.dense_diff_matrix_closed(fam, 19, 19).entries
        lower = np.tril(np.outer(f.a_seq, f.b_seq), -1)
        if f.parity_structured:
            idx = np.arange(20)
            lower *= (idx[:, None] + idx[None, :]) % 2
        assert np.max(np.abs(np.tril(D, -1) - lower)) < 1e-13


def test_factors_rejected_for_nonseparable_families():
    with pytest.raises(ValueError):
        DM.separable_factors(F.generalized_hermite(0.5), 10)
    with pytest.raises(ValueError):
        DM.separable_factors(F.konoplev(1.0, 0.0), 10)


def test_iota_closed_values():
    D = DM.dense_diff_matrix_quadrature(F.generalized_hermite(0.5), 8, 8)
    expect = 1.5 * math.sqrt(1.0 / (1.5 + 0.5))
    assert abs(DM.iota(D, 2, 1)) == pytest.approx(expect, rel=1e-12)
    D = DM.dense_diff_matrix_quadrature(F.konoplev(1.0, 0.0), 8, 8)
    expect = 6.0 * math.sqrt(35.0 / (2.0 * 2.0 * 3.0 * 1.0 * 3.0))
    assert abs(DM.iota_check(D, 3, 0)) == pytest.approx(expect, rel=1e-12)


def test_iota_check_vanishes_at_gamma_minus_half():
    D = DM.dense_diff_matrix_quadrature(F.konoplev(1.0, -0.5), 8, 8)
    assert abs(DM.iota_check(D, 3, 0)) < 1e-12


def test_iota_margin_checks():
    D = DM.dense_diff_matrix_closed(F.laguerre(1.0), 4, 4)
    with pytest.raises(IndexError):
        DM.iota(D, 4, 1)
    with pytest.raises(IndexError):
        DM.iota_check(D, 3, 0)


def test_separability_scan_verdicts():
    cases = [
        (F.laguerre(3.0), True, True),
        (F.ultraspherical(2.0), False, True),
        (F.generalized_hermite(0.5), False, False),
        (F.konoplev(1.0, 0.0), False, False),
    ]
    for fam, sep, symsep in cases:
        r = DM.separability_scan(_dense(fam, 29))
        assert r.separable is sep, fam
        assert r.symmetrically_separable is symsep, fam


def test_iota_decay_probe_nonincreasing():
    v = DM.iota_decay_probe(F.generalized_hermite(0.5), 0, [4, 8, 16])
    assert np.all(np.diff(v) <= 1e-12)
    assert DM.iota_decay_probe(F.generalized_hermite(0.5), 0, []).size == 0


def test_d2_kernel_symmetric_and_matches_product():
    fam = F.ultraspherical(2.0)
    k13 = DM.d2_entry_kernel(fam, 1, 3)
    k31 = DM.d2_entry_kernel(fam, 3, 1)
    assert k13 == pytest.approx(k31, rel=1e-12)
    block = DM.power_section(fam, 2, display=4, internal=800).entries
    assert block[0, 0] == pytest.approx(DM.d2_entry_kernel(fam, 0, 0), rel=1e-4)


def test_d2_kernel_divergence_detected():
    with pytest.raises(DM.DivergentIntegralError):
        DM.d2_entry_kernel(F.ultraspherical(1.0), 0, 0)
    with pytest.raises(DM.DivergentIntegralError):
        DM.d2_entry_kernel(F.laguerre(0.5), 0, 0)


def test_power_section_preconditions():
    with pytest.raises(ValueError):
        DM.power_section(F.laguerre(2.0), 0)
    with pytest.raises(ValueError):
        DM.power_section(F.laguerre(2.0), 1, display=10, internal=5)


def test_ultraspherical_S_against_quadrature():
    a = 1.3
    t, w = O.gauss_jacobi_general(a - 1.0, a - 1.0, 40)
    for m, n in [(0, 0), (2, 0), (3, 1), (6, 4)]:
        val = float(np.sum(w * eval_jacobi(m, a, a, t) * eval_jacobi(n, a, a, t)))
        assert DM.ultraspherical_S(a, m, n) == pytest.approx(val, rel=1e-12)
    with pytest.raises(ValueError):
        DM.ultraspherical_S(a, 1, 0)


def test_e_o_closed_against_quadrature():
    for a in (0.7, 1.0, 2.5):
        t, w = O.gauss_jacobi_general(a - 1.0, a - 1.0, 60)
        for m in (0, 1, 3):
            e_q = float(np.sum(w * eval_jacobi(2 * m, a, a, t)))
            o_q = float(np.sum(w * t * eval_jacobi(2 * m + 1, a, a, t)))
            e_c, o_c = DM.e_o_closed(a, m)
            assert e_c == pytest.approx(e_q, rel=1e-11, abs=1e-14)
            assert o_c == pytest.approx(o_q, rel=1e-11, abs=1e-14)


def test_pochhammer():
    assert DM.pochhammer(2.5, 0) == 1.0
    assert DM.pochhammer(2.5, 3) == pytest.approx(2.5 * 3.5 * 4.5, rel=1e-14)


def test_asymptotic_row_scaling_ultraspherical():
    """|D_{m,n}| ~ const * n^(alpha+1/2) / m^(alpha-1/2) along m = 2n+1."""
    fam = F.ultraspherical(2.0)
    f = DM.separable_factors(fam, 450)

    def ratio(n):
        m = 2 * n + 1
        return f.a_seq[m] * f.b_seq[n] * m ** (fam.alpha - 0.5) / n ** (fam.alpha + 0.5)

    assert abs(ratio(200) / ratio(100) - 1.0) < 0.05


def test_csv_round_trip_and_sidecar():
    sec = DM.dense_diff_matrix_closed(F.laguerre(2.0), 5, 7)
    import tempfile, os

    path = tempfile.mktemp(suffix=".csv")
    DM.section_write_csv(sec, path)
    back = DM.section_read_csv(path)
    os.remove(path)
    assert np.array_equal(back, sec.entries)
    meta = DM.section_from_sidecar(DM.section_sidecar(sec))
    assert meta["family"] == sec.family
    assert meta["s"] == 1
    assert meta["max_abs"] == sec.max_abs
