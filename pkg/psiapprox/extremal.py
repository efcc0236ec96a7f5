from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import OVERSAMPLE, TWO_PI, check_exponent, grid_size, nodes, norm_linf, synthesize
from .psi import PsiSequence
from .spectrum import TrigPolynomial
from .utils.models import FrequencySet

# Flatness constant in ||sum_{k<=m} eps_k e^{ikx}||_inf <= 5 sqrt(m+1).
FLATNESS_CONSTANT = 5.0


class FlatnessError(RuntimeError):
    pass


@dataclass(frozen=True)
class SignSequence:
    """Signs eps_0..eps_m, each +1 or -1."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if not self.signs:
            raise ValueError("a sign sequence needs at least one entry")
        if any(e not in (1, -1) for e in self.signs):
            raise ValueError("sign sequence entries must be +1 or -1")

    @classmethod
    def constant(cls, m: int) -> "SignSequence":
        """All +1: the Dirichlet-like sum, whose sup is m+1."""
        return cls((1,) * (m + 1))

    @property
    def m(self) -> int:
        return len(self.signs) - 1

    def __getitem__(self, k: int) -> int:
        return self.signs[k]

    def sum_polynomial(self) -> TrigPolynomial:
        return TrigPolynomial.from_arrays(np.arange(self.m + 1), np.array(self.signs))

    def flatness_bound(self) -> float:
        return FLATNESS_CONSTANT * math.sqrt(self.m + 1)

    def grid_sup(self, oversample: int = OVERSAMPLE) -> float:
        return norm_linf(synthesize(self.sum_polynomial(), grid_size(self.m, oversample)))


def rudin_shapiro_signs(length: int) -> np.ndarray:
    """
    Raw pair-recursion signs, unverified.

    Equal to (-1)^popcount(k & (k >> 1)) at index k.
    """
    p = np.array([1], dtype=np.int64)
    q = np.array([1], dtype=np.int64)
    while p.size < length:
        p, q = np.concatenate([p, q]), np.concatenate([p, -q])
    return p[:length]


@lru_cache(maxsize=256)
def rudin_shapiro(m: int, oversample: int = OVERSAMPLE) -> SignSequence:
    """
    First m+1 Rudin-Shapiro signs from the pair recursion
    P_{j+1} = P_j | Q_j, Q_{j+1} = P_j | -Q_j, starting at P_0 = Q_0 = [+1].

    Raises:
        FlatnessError: when the oversampled grid sup exceeds 5 sqrt(m+1)
    """
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    seq = SignSequence(tuple(int(e) for e in rudin_shapiro_signs(m + 1)))
    sup = seq.grid_sup(oversample)
    if sup > seq.flatness_bound():
        raise FlatnessError(
            f"Rudin-Shapiro sum of length {m + 1} has grid sup {sup:.6g} "
            f"> {seq.flatness_bound():.6g}"
        )
    return seq


def prefix_sup_norms(signs, N: int) -> np.ndarray:
    """Grid sup of sum_{k<=m} eps_k e^{ikx} for every prefix m, on one N-point grid."""
    z = np.exp(1j * nodes(N))
    power = np.ones(N, dtype=np.complex128)
    running = np.zeros(N, dtype=np.complex128)
    sups = np.empty(len(signs))
    for k, eps in enumerate(signs):
        running += eps * power
        sups[k] = np.abs(running).max()
        power *= z
    return sups


def f1(psi: PsiSequence, n: int) -> TrigPolynomial:
    """psi(n) cos(nt): orthogonal to every polynomial of degree <= n-1."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return TrigPolynomial.cosine(n, psi(n))


def f2_scale(n: int) -> float:
    return 10 * math.sqrt(2 * n) + 2


def f2(psi: PsiSequence, n: int, signs: SignSequence | None = None) -> TrigPolynomial:
    """
    sum_{|k|<=2n-1} xi_{|k|} psi(|k|) e^{ikt} / (10 sqrt(2n) + 2),
    xi the Rudin-Shapiro signs for m = 2n-1 unless given.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    xi = rudin_shapiro(2 * n - 1) if signs is None else signs
    if xi.m < 2 * n - 1:
        raise ValueError(f"f2 for n={n} needs {2 * n} signs, got {xi.m + 1}")
    ks = np.arange(-(2 * n - 1), 2 * n)
    moduli = np.abs(ks)
    amps = np.asarray(xi.signs, dtype=np.float64)[moduli] * psi.evaluate(moduli)
    return TrigPolynomial.from_arrays(ks, amps / f2_scale(n))


def _window_weights(psi: PsiSequence, n: int) -> tuple[np.ndarray, np.ndarray]:
    ks = np.arange(-(2 * n - 1), 2 * n)
    return ks, psi.evaluate(np.abs(ks))


def i_quantity_exact(psi: PsiSequence, n: int) -> float:
    """
    pi/(5 sqrt(2n)+1) * min over gamma_2n of sum_{|k|<=2n-1, k not in gamma} psi(|k|).

    The minimum discards the 2n largest of the 4n-1 weights.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _, weights = _window_weights(psi, n)
    kept = np.sort(weights)[: 2 * n - 1]
    return math.pi / (5 * math.sqrt(2 * n) + 1) * float(kept.sum())


def i_quantity_minimizer(psi: PsiSequence, n: int) -> FrequencySet:
    """The gamma_2n attaining the infimum: the 2n largest weights, ties to smaller |k|."""
    ks, weights = _window_weights(psi, n)
    order = sorted(range(ks.size), key=lambda i: (-weights[i], abs(ks[i]), ks[i] < 0))
    return FrequencySet.of(int(ks[i]) for i in order[: 2 * n])


def i_quantity_numeric(
    psi: PsiSequence,
    n: int,
    gamma: FrequencySet,
    N: int | None = None,
    signs: SignSequence | None = None,
) -> float:
    """|integral of (f2 - S_gamma f2)(t) * sum_{|k|<=2n-1} xi_{|k|} e^{ikt} dt| by quadrature."""
    xi = rudin_shapiro(2 * n - 1) if signs is None else signs
    f = f2(psi, n, xi)
    residual = f - f.restrict(gamma.members)
    ks = np.arange(-(2 * n - 1), 2 * n)
    test = TrigPolynomial.from_arrays(ks, np.asarray(xi.signs, dtype=np.float64)[np.abs(ks)])
    N = N or grid_size(2 * n - 1)
    if N < 4 * (2 * n - 1) + 1:
        raise ValueError(f"grid of {N} points cannot integrate the degree-{4 * n - 2} product")
    product = synthesize(residual, N).samples * synthesize(test, N).samples
    return float(abs(TWO_PI / N * product.sum()))


def f2_lower_bound(psi: PsiSequence, n: int, s: float) -> float:
    """Lower bound on e_2n^perp(f2)_s, valid for every s in [1, inf)."""
    check_exponent(s)
    return i_quantity_exact(psi, n) / (TWO_PI * (10 * math.sqrt(2 * n) + 1))


def f2_monotone_bound(psi: PsiSequence, n: int) -> float:
    """(2n-1) psi(2n-1) / ((10 sqrt(2n)+2)(10 sqrt(2n)+1)); below f2_lower_bound for monotone psi."""
    root = 10 * math.sqrt(2 * n)
    return (2 * n - 1) * psi(2 * n - 1) / ((root + 2) * (root + 1))
