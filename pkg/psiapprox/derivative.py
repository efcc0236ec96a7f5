from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import OVERSAMPLE, grid_size, nesting_constant, norm_linf, norm_ls, synthesize
from .psi import PsiSequence
from .spectrum import TrigPolynomial


@dataclass(frozen=True)
class DerivativeParams:
    """psi weights and phase shift beta (the phase applied is beta*pi/2)."""

    psi: PsiSequence
    beta: float = 0.0

    def phase(self, ks: np.ndarray) -> np.ndarray:
        return np.exp(1j * np.sign(ks) * self.beta * math.pi / 2)


def psi_beta_derivative(f: TrigPolynomial, params: DerivativeParams) -> TrigPolynomial:
    """
    (psi, beta)-derivative: c_k -> c_k / psi(|k|) * e^{i sign(k) beta pi/2} for k != 0.

    The mean is discarded.
    """
    nonconstant = f.select(lambda k: k != 0)
    return nonconstant.apply_multiplier(
        lambda ks: params.phase(ks) / params.psi.evaluate(np.abs(ks))
    )


def psi_beta_integral(
    phi: TrigPolynomial, params: DerivativeParams, mean: complex = 0.0
) -> TrigPolynomial:
    """
    Inverse of psi_beta_derivative on zero-mean polynomials.

    Raises:
        ValueError: when phi has a nonzero constant term
    """
    if phi.coefficient(0) != 0:
        raise ValueError(
            f"(psi, beta)-integral needs a zero-mean input, got mean {phi.coefficient(0)}"
        )
    integral = phi.apply_multiplier(
        lambda ks: params.psi.evaluate(np.abs(ks)) / params.phase(ks)
    )
    return integral + TrigPolynomial.constant(mean)


def random_real_polynomial(
    degree: int, rng: np.random.Generator, mean: bool = False
) -> TrigPolynomial:
    """sum_{k=1}^{degree} a_k cos kt + b_k sin kt with a_k, b_k ~ U[-1, 1]."""
    a = rng.uniform(-1.0, 1.0, size=degree)
    b = rng.uniform(-1.0, 1.0, size=degree)
    ks = np.arange(1, degree + 1)
    positive = (a - 1j * b) / 2
    poly = TrigPolynomial.from_arrays(
        np.concatenate([ks, -ks]), np.concatenate([positive, positive.conj()])
    )
    if mean:
        poly = poly + TrigPolynomial.constant(rng.uniform(-1.0, 1.0))
    return poly


def random_class_member(
    params: DerivativeParams, degree: int, seed: int, oversample: int = OVERSAMPLE
) -> TrigPolynomial:
    """
    Seeded real-valued member of the class with ||f^psi_beta||_inf <= 1.

    The derivative is a random real zero-mean polynomial of the given degree,
    normalized by its sup on the oversampled verification grid.
    """
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree}")
    rng = np.random.default_rng(seed)
    phi = random_real_polynomial(degree, rng)
    sup = norm_linf(synthesize(phi, grid_size(degree, oversample)))
    return psi_beta_integral((1.0 / sup) * phi, params)


def class_norm(f: TrigPolynomial, params: DerivativeParams, N: int | None = None) -> float:
    """Grid sup of the (psi, beta)-derivative; f is in the class when this is <= 1."""
    derivative = psi_beta_derivative(f, params)
    return norm_linf(synthesize(derivative, N or grid_size(derivative.degree)))


def ls_derivative_norm(
    f: TrigPolynomial, params: DerivativeParams, s: float, N: int | None = None
) -> float:
    derivative = psi_beta_derivative(f, params)
    return norm_ls(synthesize(derivative, N or grid_size(derivative.degree)), s)


def embedding_sides(
    f: TrigPolynomial, params: DerivativeParams, s: float, N: int | None = None
) -> tuple[float, float]:
    """(||f^psi_beta||_s, (2 pi)^{1/s} ||f^psi_beta||_inf) on one grid."""
    N = N or grid_size(psi_beta_derivative(f, params).degree)
    lhs = ls_derivative_norm(f, params, s, N)
    return lhs, nesting_constant(s, math.inf) * class_norm(f, params, N)


def embedding_holds(
    f: TrigPolynomial, params: DerivativeParams, s: float, N: int | None = None
) -> bool:
    lhs, rhs = embedding_sides(f, params, s, N)
    return lhs <= rhs * (1 + 1e-12)
