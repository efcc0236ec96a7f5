import math

import numpy as np
import pytest

from psiapprox.approx import best_orthogonal, deviation_norm, partial_sum
from psiapprox.derivative import DerivativeParams, class_norm
from psiapprox.extremal import (
    FlatnessError,
    SignSequence,
    f1,
    f2,
    f2_lower_bound,
    f2_monotone_bound,
    f2_scale,
    i_quantity_exact,
    i_quantity_minimizer,
    i_quantity_numeric,
    prefix_sup_norms,
    rudin_shapiro,
    rudin_shapiro_signs,
)
from psiapprox.grid import grid_size
from psiapprox.psi import PsiSequence
from psiapprox.utils.models import ApproxMethod, FrequencySet


def test_f1(harmonic):
    p = f1(harmonic, 2)
    assert p.support == (-2, 2)
    assert p.coefficient(2) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        f1(harmonic, 0)


@pytest.mark.parametrize("n", [1, 4, 9])
def test_f1_orthogonal_to_window(psi_family, n):
    assert partial_sum(f1(psi_family, n), n).is_zero


def test_rudin_shapiro_prefix():
    assert rudin_shapiro(7).signs == (1, 1, 1, -1, 1, 1, -1, 1)
    assert rudin_shapiro(0).signs == (1,)
    assert rudin_shapiro(0).grid_sup() == pytest.approx(1.0)


def test_rudin_shapiro_closed_form():
    # eps_k = (-1)^(number of "11" pairs in the binary expansion of k)
    signs = rudin_shapiro_signs(4096)
    expected = [(-1) ** bin(k & (k >> 1)).count("1") for k in range(4096)]
    assert signs.tolist() == expected


def test_rudin_shapiro_large():
    seq = rudin_shapiro(4095)
    assert seq.m == 4095
    assert seq.grid_sup() <= 5 * 64


def test_rudin_shapiro_rejects_negative():
    with pytest.raises(ValueError):
        rudin_shapiro(-1)


def test_flatness_for_every_prefix():
    m_max = 4096
    sups = prefix_sup_norms(rudin_shapiro_signs(m_max + 1), 16 * (2 * m_max + 1))
    bounds = 5 * np.sqrt(np.arange(1, m_max + 2))
    assert np.all(sups <= bounds)


def test_all_ones_violates_flatness():
    sups = prefix_sup_norms(np.ones(64), 16 * 129)
    bounds = 5 * np.sqrt(np.arange(1, 65))
    assert np.all(sups[:24] <= bounds[:24] * (1 + 1e-12))
    assert np.all(sups[25:] > bounds[25:])
    assert SignSequence.constant(30).grid_sup() > SignSequence.constant(30).flatness_bound()


def test_sign_sequence_validation():
    with pytest.raises(ValueError):
        SignSequence(())
    with pytest.raises(ValueError):
        SignSequence((1, 0, -1))


def test_flatness_error_is_raised(monkeypatch):
    monkeypatch.setattr("psiapprox.extremal.FLATNESS_CONSTANT", 0.5)
    rudin_shapiro.cache_clear()
    try:
        with pytest.raises(FlatnessError):
            rudin_shapiro(15)
    finally:
        monkeypatch.undo()
        rudin_shapiro.cache_clear()


def test_f2_smallest_case(harmonic):
    p = f2(harmonic, 1)
    scale = 10 * math.sqrt(2) + 2
    assert p.support == (-1, 0, 1)
    for k in (-1, 0, 1):
        assert p.coefficient(k) == pytest.approx(1 / scale)


def test_f2_coefficients(psi_family):
    n = 4
    p = f2(psi_family, n)
    signs = rudin_shapiro(2 * n - 1)
    assert p.degree == 2 * n - 1
    assert p.is_real_valued(0.0)
    for k in range(-(2 * n - 1), 2 * n):
        expected = signs[abs(k)] * psi_family(abs(k)) / f2_scale(n)
        assert p.coefficient(k) == pytest.approx(expected, rel=1e-15)


def test_f2_rejects_short_signs(harmonic):
    with pytest.raises(ValueError, match="needs 6 signs"):
        f2(harmonic, 3, SignSequence.constant(3))


@pytest.mark.parametrize("psi", [
    PsiSequence.power(0.5), PsiSequence.power(1), PsiSequence.power(2), PsiSequence.log(1)
], ids=lambda psi: psi.label)
@pytest.mark.parametrize("beta", [0.0, 1.0, 0.37])
def test_f2_is_class_member(psi, beta):
    params = DerivativeParams(psi, beta)
    for n in [*range(1, 33), 64, 128, 256]:
        p = f2(psi, n)
        assert class_norm(p, params, grid_size(p.degree)) <= 1 + 1e-9


def test_i_quantity_smallest_case(harmonic):
    expected = math.pi / (5 * math.sqrt(2) + 1)
    assert i_quantity_exact(harmonic, 1) == pytest.approx(expected)
    assert f2_lower_bound(harmonic, 1, 2) == pytest.approx(
        expected / (2 * math.pi * (10 * math.sqrt(2) + 1))
    )
    assert f2_lower_bound(harmonic, 1, 2) == pytest.approx(4.09e-3, rel=1e-2)


def test_i_quantity_smallest_case_over_every_gamma(harmonic):
    # every gamma_2 within {-1, 0, 1} leaves out exactly one unit weight
    for gamma in ([-1, 0], [-1, 1], [0, 1]):
        numeric = i_quantity_numeric(harmonic, 1, FrequencySet.of(gamma))
        assert numeric == pytest.approx(i_quantity_exact(harmonic, 1), rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 6, 10])
def test_i_quantity_minimizer_attains_exact_value(psi_family, n):
    gamma = i_quantity_minimizer(psi_family, n)
    assert gamma.size == 2 * n
    assert i_quantity_numeric(psi_family, n, gamma) == pytest.approx(
        i_quantity_exact(psi_family, n), rel=1e-12
    )


def test_i_quantity_other_gamma_is_larger(harmonic):
    n = 3
    window = FrequencySet.window(n)
    assert i_quantity_numeric(harmonic, n, window) > i_quantity_exact(harmonic, n)


def test_i_quantity_numeric_rejects_coarse_grid(harmonic):
    with pytest.raises(ValueError):
        i_quantity_numeric(harmonic, 3, FrequencySet.window(3), N=10)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16, 32, 64])
def test_explicit_chain_at_l2(psi_family, n):
    p = f2(psi_family, n)
    lower = f2_lower_bound(psi_family, n, 2)
    orth = best_orthogonal(p, 2 * n, 2, ApproxMethod.EXACT_L2).value
    odd = best_orthogonal(p, 2 * n - 1, 2, ApproxMethod.EXACT_L2).value
    assert lower <= orth
    assert orth <= odd * (1 + 1e-12)
    assert odd <= deviation_norm(p, n, 2) * (1 + 1e-12)
    assert lower >= f2_monotone_bound(psi_family, n) * (1 - 1e-12)


def test_lower_bound_is_exponent_free(harmonic):
    assert f2_lower_bound(harmonic, 5, 1) == f2_lower_bound(harmonic, 5, 7.5)
    with pytest.raises(ValueError):
        f2_lower_bound(harmonic, 5, 0.5)


@pytest.mark.parametrize("family", ["power", "log"])
def test_order_estimates_have_bounded_spread(family):
    ns = [4, 8, 16, 32, 64]
    for parameter in (0.5, 1, 2):
        psi = PsiSequence(family, parameter)
        best = [
            math.sqrt(2 * math.pi * f1(psi, n).energy()) / psi(n) for n in ns
        ]
        orth = [
            best_orthogonal(f2(psi, n), 2 * n, 2, ApproxMethod.EXACT_L2).value / psi(n)
            for n in ns
        ]
        assert max(best) / min(best) == pytest.approx(1.0)
        assert max(orth) / min(orth) <= 50
