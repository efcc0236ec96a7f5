"""Approximation of (psi, beta)-differentiable periodic functions by trigonometric polynomials."""

from .spectrum import TrigPolynomial
from .psi import PsiSequence
from .utils.models import FrequencySet, SweepConfig

__all__ = ["FrequencySet", "PsiSequence", "SweepConfig", "TrigPolynomial"]
