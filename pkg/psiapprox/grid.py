from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectrum import CANONICAL_TOL, TrigPolynomial

TWO_PI = 2 * math.pi

# Oversampling over the Nyquist minimum 2*degree+1; |f|^s with kinks
# converges like O(N^-2), so the default is generous.
OVERSAMPLE = 16


@dataclass(frozen=True)
class GridFunction:
    """Complex samples of a 2*pi-periodic function at t_j = 2*pi*j/N."""

    samples: np.ndarray

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.complex128, copy=True).ravel()
        if samples.size < 1:
            raise ValueError("a grid function needs at least one sample")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    @property
    def size(self) -> int:
        return int(self.samples.size)

    def nodes(self) -> np.ndarray:
        return nodes(self.size)


def nodes(N: int) -> np.ndarray:
    return TWO_PI * np.arange(N) / N


def grid_size(degree: int, oversample: int = OVERSAMPLE) -> int:
    """Oversampled grid size for polynomials up to `degree`."""
    if oversample < 1:
        raise ValueError(f"oversample must be >= 1, got {oversample}")
    return oversample * (2 * max(int(degree), 0) + 1)


def synthesize(p: TrigPolynomial, N: int) -> GridFunction:
    """Evaluate p on the uniform N-point grid (exact to rounding for any N)."""
    if N < 1:
        raise ValueError(f"grid size must be positive, got {N}")
    bins = np.zeros(N, dtype=np.complex128)
    if not p.is_zero:
        ks, cs = p.arrays()
        # e^{ikt_j} depends only on k mod N on the grid
        np.add.at(bins, np.mod(ks, N), cs)
    return GridFunction(np.fft.ifft(bins) * N)


def evaluate(p: TrigPolynomial, t) -> np.ndarray:
    """Evaluate p at arbitrary points."""
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if p.is_zero:
        return np.zeros(t.shape, dtype=np.complex128)
    ks, cs = p.arrays()
    return np.exp(1j * np.outer(t, ks)) @ cs


def analyze(g: GridFunction, max_degree: int) -> TrigPolynomial:
    """
    Discrete Fourier coefficients for |k| <= max_degree.

    Args:
        g: sampled function
        max_degree: highest frequency to recover

    Returns:
        TrigPolynomial with c_k = (1/N) sum_j g_j e^{-ikt_j}

    Raises:
        ValueError: when N < 2*max_degree+1 (frequencies would alias)
    """
    if max_degree < 0:
        raise ValueError(f"max_degree must be nonnegative, got {max_degree}")
    N = g.size
    if N < 2 * max_degree + 1:
        raise ValueError(
            f"grid of {N} points aliases frequencies up to {max_degree}; "
            f"need at least {2 * max_degree + 1}"
        )
    spectrum = np.fft.fft(g.samples) / N
    ks = np.arange(-max_degree, max_degree + 1)
    cs = spectrum[np.mod(ks, N)]
    # FFT round-off on absent frequencies is about log2(N) ulps of the rms sample
    rms = float(np.sqrt(np.mean(np.abs(g.samples) ** 2)))
    floor = CANONICAL_TOL * max(math.log2(N), 1.0) * rms
    cs = np.where(np.abs(cs) < floor, 0, cs)
    return TrigPolynomial.from_arrays(ks, cs)


def check_exponent(s: float) -> float:
    s = float(s)
    if not math.isfinite(s) or s < 1:
        raise ValueError(f"exponent s must lie in [1, inf), got {s}")
    return s


def norm_ls(g: GridFunction, s: float) -> float:
    """Rectangle-rule L_s norm over [0, 2*pi)."""
    s = check_exponent(s)
    moduli = np.abs(g.samples)
    if s == 2:
        total = float(np.sum(moduli * moduli))
    else:
        total = float(np.sum(moduli**s))
    return (TWO_PI / g.size * total) ** (1 / s)


def norm_linf(g: GridFunction) -> float:
    """Grid maximum: a lower estimate of the sup norm."""
    return float(np.max(np.abs(g.samples)))


def nesting_constant(q: float, p: float) -> float:
    """(2*pi)^{1/q-1/p}, so that ||f||_q <= nesting_constant(q, p) * ||f||_p for q <= p."""
    q = check_exponent(q)
    if p != math.inf:
        p = check_exponent(p)
    if q > p:
        raise ValueError(f"nesting needs q <= p, got q={q}, p={p}")
    return TWO_PI ** (1 / q - (0 if p == math.inf else 1 / p))
