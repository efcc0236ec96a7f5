import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psiapprox.extremal import f2, rudin_shapiro
from psiapprox.grid import (
    GridFunction,
    analyze,
    evaluate,
    grid_size,
    nesting_constant,
    norm_linf,
    norm_ls,
    synthesize,
)
from psiapprox.spectrum import TrigPolynomial

from .conftest import random_polynomial

cos_t = TrigPolynomial.cosine(1)


def test_synthesize_quarter_points():
    assert np.allclose(synthesize(cos_t, 4).samples, [1, 0, -1, 0], atol=1e-15)
    assert np.allclose(
        synthesize(TrigPolynomial.monomial(2), 4).samples, [1, -1, 1, -1], atol=1e-15
    )


def test_synthesize_zero():
    g = synthesize(TrigPolynomial.zero(), 8)
    assert g.size == 8
    assert not np.any(g.samples)


def test_synthesize_rejects_empty_grid():
    with pytest.raises(ValueError):
        synthesize(cos_t, 0)


def test_synthesize_matches_direct_evaluation():
    p = random_polynomial(3, max_degree=10)
    g = synthesize(p, 40)
    assert np.allclose(g.samples, evaluate(p, g.nodes()), atol=1e-12)


def test_synthesize_aliases_high_frequencies():
    # on 4 points e^{5it} and e^{it} coincide
    assert np.allclose(
        synthesize(TrigPolynomial.monomial(5), 4).samples,
        synthesize(TrigPolynomial.monomial(1), 4).samples,
    )


def test_analyze_recovers_cosine():
    p = analyze(synthesize(TrigPolynomial.cosine(3), 16), 3)
    assert p.support == (-3, 3)
    assert p.coefficient(3) == pytest.approx(0.5, abs=1e-12)


def test_analyze_constant():
    p = analyze(GridFunction(np.full(4, 5.0)), 0)
    assert p.support == (0,)
    assert p.coefficient(0) == pytest.approx(5.0)


def test_analyze_recovers_f2(harmonic):
    original = f2(harmonic, 2)
    recovered = analyze(synthesize(original, 64), 3)
    for k in range(-3, 4):
        assert abs(recovered.coefficient(k) - original.coefficient(k)) <= 1e-12


def test_analyze_keeps_small_coefficients_on_fine_grids():
    p = TrigPolynomial({0: 1.0, 5: 1e-13})
    recovered = analyze(synthesize(p, 4096), 5)
    assert 5 in recovered.support
    assert recovered.coefficient(5) == pytest.approx(1e-13, rel=1e-3)
    assert recovered.support == (0, 5)


def test_analyze_rejects_aliasing_window():
    with pytest.raises(ValueError, match="aliases"):
        analyze(GridFunction(np.ones(6)), 3)


@pytest.mark.parametrize("seed", range(10))
def test_analyze_inverts_synthesize(seed):
    p = random_polynomial(seed)
    q = analyze(synthesize(p, 2 * p.degree + 1), p.degree)
    assert max(abs(q.coefficient(k) - c) for k, c in p.entries()) <= 1e-12


@pytest.mark.parametrize("s", [1, 1.5, 2, 3, 7.5])
def test_norm_of_one(s):
    assert norm_ls(GridFunction(np.ones(10)), s) == pytest.approx((2 * math.pi) ** (1 / s))


def test_norm_l2_of_cosine():
    assert norm_ls(synthesize(cos_t, 64), 2) == pytest.approx(math.sqrt(math.pi), rel=1e-14)


def test_norm_l1_of_cosine_converges_quadratically():
    # kinks of |cos| sit on the nodes: the rule gives 2h cot(h/2) = 4 - h^2/3 + ...
    for N in (64, 4096):
        h = 2 * math.pi / N
        assert norm_ls(synthesize(cos_t, N), 1) == pytest.approx(2 * h / math.tan(h / 2))
    assert abs(norm_ls(synthesize(cos_t, 64), 1) - 4) <= 4e-3
    assert abs(norm_ls(synthesize(cos_t, 4096), 1) - 4) <= 1e-6


@pytest.mark.parametrize("s", [0.5, math.inf, math.nan])
def test_norm_rejects_bad_exponent(s):
    with pytest.raises(ValueError):
        norm_ls(GridFunction(np.ones(4)), s)


def test_norm_linf():
    assert norm_linf(synthesize(cos_t, 8)) == pytest.approx(1.0)
    assert norm_linf(synthesize(TrigPolynomial.monomial(1), 7)) == pytest.approx(1.0)
    signs = rudin_shapiro(7)
    assert norm_linf(synthesize(signs.sum_polynomial(), 256)) <= 5 * math.sqrt(8)


def test_norm_linf_refines_monotonically():
    p = random_polynomial(11, max_degree=6)
    values = [norm_linf(synthesize(p, 13 * 2**j)) for j in range(5)]
    assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))


@settings(max_examples=200, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    size=st.integers(1, 300),
    exponents=st.sampled_from([(1, 2), (1, 4), (2, 4)]),
)
def test_nesting_inequality(seed, size, exponents):
    q, p = exponents
    rng = np.random.default_rng(seed)
    g = GridFunction(rng.standard_normal(size) + 1j * rng.standard_normal(size))
    assert norm_ls(g, q) <= nesting_constant(q, p) * norm_ls(g, p) * (1 + 1e-12)


def test_nesting_constant():
    assert nesting_constant(2, 2) == 1.0
    assert nesting_constant(1, math.inf) == pytest.approx(2 * math.pi)
    with pytest.raises(ValueError):
        nesting_constant(4, 2)


def test_grid_size():
    assert grid_size(0) == 16
    assert grid_size(8) == 16 * 17
    assert grid_size(3, oversample=2) == 14
    with pytest.raises(ValueError):
        grid_size(3, oversample=0)
