import numpy as np
import pytest

from psiapprox.derivative import DerivativeParams, random_real_polynomial
from psiapprox.psi import PsiSequence


@pytest.fixture
def harmonic():
    """psi(k) = 1/k"""
    return PsiSequence.power(1)


@pytest.fixture
def unit_params():
    return DerivativeParams(PsiSequence.power(0), 0.0)


@pytest.fixture(params=[
    PsiSequence.power(0.5),
    PsiSequence.power(1),
    PsiSequence.power(2),
    PsiSequence.log(1),
], ids=lambda psi: psi.label)
def psi_family(request):
    return request.param


def random_polynomial(seed: int, max_degree: int = 32, mean: bool = True):
    rng = np.random.default_rng(seed)
    degree = int(rng.integers(1, max_degree + 1))
    return random_real_polynomial(degree, rng, mean=mean)
