from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .utils.models import ClassReport

# Empirical class constants above this are reported as failing.
DEFAULT_CAP = 64.0

FAMILIES = ("power", "log", "table")


@dataclass(frozen=True)
class PsiSequence:
    """
    Positive weight sequence psi(k), k >= 0, with psi(0) := psi(1).

    Families:
        power  psi(k) = k^-r          (r >= 0; r = 0 gives psi == 1)
        log    psi(k) = ln^-eps(k+1)  (eps > 0)
        table  psi(k) = values[k-1]   (1-based, finite range)
    """

    family: str
    parameter: float = 0.0
    values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown psi family {self.family!r}, expected one of {FAMILIES}")
        if self.family == "power" and not (math.isfinite(self.parameter) and self.parameter >= 0):
            raise ValueError(f"power exponent must be finite and >= 0, got {self.parameter}")
        if self.family == "log" and not (math.isfinite(self.parameter) and self.parameter > 0):
            raise ValueError(f"log exponent must be finite and > 0, got {self.parameter}")
        if self.family == "table":
            if not self.values:
                raise ValueError("table psi needs at least one value")
            if any(not (math.isfinite(v) and v > 0) for v in self.values):
                raise ValueError("table psi values must be finite and positive")

    @classmethod
    def power(cls, r: float) -> "PsiSequence":
        return cls("power", float(r))

    @classmethod
    def log(cls, eps: float) -> "PsiSequence":
        return cls("log", float(eps))

    @classmethod
    def table(cls, values: Iterable[float]) -> "PsiSequence":
        return cls("table", values=tuple(float(v) for v in values))

    @classmethod
    def from_file(cls, path: str | Path) -> "PsiSequence":
        """One positive real per line, line 1 is psi(1)."""
        values = np.loadtxt(Path(path), dtype=np.float64, ndmin=1)
        return cls.table(values.tolist())

    @classmethod
    def parse(cls, text: str) -> "PsiSequence":
        """Parse `power:r`, `log:eps` or `table:<path>`."""
        family, sep, arg = text.strip().partition(":")
        if not sep or not arg:
            raise ValueError(f"psi must look like family:argument, got {text!r}")
        family = family.strip().lower()
        if family == "table":
            return cls.from_file(arg.strip())
        if family in ("power", "log"):
            try:
                value = float(arg)
            except ValueError as e:
                raise ValueError(f"bad psi parameter in {text!r}") from e
            return cls(family, value)
        raise ValueError(f"unknown psi family in {text!r}")

    @property
    def label(self) -> str:
        if self.family == "table":
            return f"table[{len(self.values)}]"
        return f"{self.family}:{self.parameter:g}"

    @property
    def max_index(self) -> int | None:
        """Largest k that can be evaluated, None when unbounded."""
        return len(self.values) if self.family == "table" else None

    def evaluate(self, ks) -> np.ndarray:
        """Vectorized psi(|k|) for nonnegative integer k."""
        ks = np.asarray(ks, dtype=np.int64)
        if ks.size and int(ks.min()) < 0:
            raise ValueError("psi is indexed by nonnegative integers")
        ks = np.maximum(ks, 1)
        if self.family == "power":
            return ks.astype(np.float64) ** (-self.parameter)
        if self.family == "log":
            return np.log(ks + 1.0) ** (-self.parameter)
        top = int(ks.max()) if ks.size else 0
        if top > len(self.values):
            raise IndexError(f"psi table has {len(self.values)} values, asked for k={top}")
        return np.asarray(self.values, dtype=np.float64)[ks - 1]

    def __call__(self, k: int) -> float:
        return float(self.evaluate(np.array([k]))[0])

    def is_monotone(self, k_max: int) -> bool:
        """Nonincreasing on 1..k_max."""
        vals = self.evaluate(np.arange(1, k_max + 1))
        return bool(np.all(np.diff(vals) <= 0))


def eval(psi: PsiSequence, k: int) -> float:  # noqa: A001 - mirrors the psi(k) notation
    return psi(k)


def _check_range(psi: PsiSequence, top: int, what: str) -> None:
    if psi.max_index is not None and top > psi.max_index:
        raise IndexError(
            f"{what} needs psi up to k={top}, table has {psi.max_index} values"
        )


def verify_almost_decreasing(
    psi: PsiSequence, k_max: int, cap: float = DEFAULT_CAP
) -> ClassReport:
    """max over 1 <= k1 <= k2 <= k_max of psi(k2)/psi(k1), by a running minimum."""
    if k_max < 2:
        raise ValueError(f"k_max must be >= 2, got {k_max}")
    _check_range(psi, k_max, "almost-decreasing check")
    vals = psi.evaluate(np.arange(1, k_max + 1))
    ratios = vals / np.minimum.accumulate(vals)
    witness = int(np.argmax(ratios))
    constant = float(ratios[witness])
    return ClassReport(
        class_name="P",
        criterion="almost_decreasing",
        k_max=k_max,
        empirical_constant=constant,
        witness_index=witness + 1,
        cap=cap,
        passes=constant <= cap,
    )


def truncated(psi: PsiSequence, n: int, ks) -> np.ndarray:
    """psi_n(k): 0 for k < n, psi(k) otherwise."""
    ks = np.asarray(ks, dtype=np.int64)
    return np.where(ks < n, 0.0, psi.evaluate(ks))


def dyadic_block_variations(psi: PsiSequence, n: int, m_max: int) -> np.ndarray:
    """sum_{k=2^m}^{2^{m+1}} |psi_n(k+1) - psi_n(k)| for m = 0..m_max."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if m_max < 0:
        raise ValueError(f"m_max must be >= 0, got {m_max}")
    top = 2 ** (m_max + 1) + 1
    _check_range(psi, top, "dyadic variation check")
    ks = np.arange(1, top + 1)
    jumps = np.abs(np.diff(truncated(psi, n, ks)))  # jumps[k-1] = |psi_n(k+1) - psi_n(k)|
    return np.array(
        [jumps[2**m - 1 : 2 ** (m + 1)].sum() for m in range(m_max + 1)]
    )


def verify_dyadic_variation(
    psi: PsiSequence, n: int, m_max: int, cap: float = DEFAULT_CAP
) -> ClassReport:
    """
    Dyadic-block variation of the truncated sequence relative to psi(n).

    The witness index is the first k of the block attaining the maximum.
    """
    blocks = dyadic_block_variations(psi, n, m_max) / psi(n)
    m_star = int(np.argmax(blocks))
    constant = float(blocks[m_star])
    return ClassReport(
        class_name="P",
        criterion="dyadic_variation",
        k_max=2 ** (m_max + 1) + 1,
        empirical_constant=constant,
        witness_index=2**m_star,
        cap=cap,
        passes=constant <= cap,
        m_max=m_max,
    )


def verify_B(psi: PsiSequence, k_max: int, cap: float = DEFAULT_CAP) -> ClassReport:  # noqa: N802
    """max_{1<=k<=k_max} psi(k)/psi(2k)."""
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    if psi.max_index is not None and psi.max_index < 2 * k_max + 2:
        raise IndexError(
            f"doubling check up to k_max={k_max} needs {2 * k_max + 2} table values, "
            f"got {psi.max_index}"
        )
    ks = np.arange(1, k_max + 1)
    ratios = psi.evaluate(ks) / psi.evaluate(2 * ks)
    witness = int(np.argmax(ratios))
    constant = float(ratios[witness])
    return ClassReport(
        class_name="B",
        criterion="doubling",
        k_max=k_max,
        empirical_constant=constant,
        witness_index=witness + 1,
        cap=cap,
        passes=constant <= cap,
    )


def verify_P(
    psi: PsiSequence,
    n_values: Sequence[int],
    k_max: int,
    m_max: int,
    cap: float = DEFAULT_CAP,
) -> list[ClassReport]:
    """Both P criteria; the dyadic one is evaluated for each n."""
    reports = [verify_almost_decreasing(psi, k_max, cap)]
    reports.extend(verify_dyadic_variation(psi, n, m_max, cap) for n in n_values)
    return reports


def doubling_ratio(psi: PsiSequence, n: int) -> float:
    """psi(n)/psi(2n); bounded in n exactly when psi is in B."""
    return psi(n) / psi(2 * n)
