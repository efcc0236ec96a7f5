from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

# Amplitudes below this modulus are treated as exact zeros.
CANONICAL_TOL = 1e-15


def _canonical(coeffs: Mapping[int, complex]) -> dict[int, complex]:
    return {
        int(k): complex(c)
        for k, c in sorted(coeffs.items())
        if abs(c) >= CANONICAL_TOL
    }


@dataclass(frozen=True)
class TrigPolynomial:
    """
    Trigonometric polynomial sum_k c_k e^{ikt} stored as a sparse map.

    Instances are immutable; every operation returns a new polynomial in
    canonical form (sorted frequencies, zero amplitudes absent).
    """

    coeffs: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", MappingProxyType(_canonical(self.coeffs)))

    # --- constructors ---

    @classmethod
    def from_coeffs(cls, entries: Iterable[tuple[int, complex]]) -> "TrigPolynomial":
        """Build from (frequency, amplitude) pairs; duplicate frequencies are summed."""
        acc: dict[int, complex] = {}
        for k, c in entries:
            acc[int(k)] = acc.get(int(k), 0j) + complex(c)
        return cls(acc)

    @classmethod
    def from_arrays(cls, frequencies, amplitudes) -> "TrigPolynomial":
        ks = np.asarray(frequencies, dtype=np.int64)
        cs = np.asarray(amplitudes, dtype=np.complex128)
        if ks.shape != cs.shape:
            raise ValueError(
                f"frequency/amplitude shape mismatch: {ks.shape} vs {cs.shape}"
            )
        return cls.from_coeffs(zip(ks.tolist(), cs.tolist()))

    @classmethod
    def zero(cls) -> "TrigPolynomial":
        return cls()

    @classmethod
    def constant(cls, value: complex) -> "TrigPolynomial":
        return cls({0: value})

    @classmethod
    def monomial(cls, k: int, amplitude: complex = 1.0) -> "TrigPolynomial":
        return cls({k: amplitude})

    @classmethod
    def cosine(cls, n: int, amplitude: float = 1.0) -> "TrigPolynomial":
        """amplitude * cos(n t)"""
        if n == 0:
            return cls.constant(amplitude)
        return cls({n: amplitude / 2, -n: amplitude / 2})

    # --- inspection ---

    @property
    def degree(self) -> int:
        return max((abs(k) for k in self.coeffs), default=0)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> complex:
        return self.coeffs.get(int(k), 0j)

    def entries(self) -> list[tuple[int, complex]]:
        return list(self.coeffs.items())

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Frequencies and amplitudes as parallel numpy arrays."""
        ks = np.fromiter(self.coeffs.keys(), dtype=np.int64, count=len(self.coeffs))
        cs = np.fromiter(
            self.coeffs.values(), dtype=np.complex128, count=len(self.coeffs)
        )
        return ks, cs

    def is_real_valued(self, tol: float = 0.0) -> bool:
        """True iff max_k |c_{-k} - conj(c_k)| <= tol."""
        if tol < 0:
            raise ValueError(f"tolerance must be nonnegative, got {tol}")
        frequencies = set(self.coeffs) | {-k for k in self.coeffs}
        return all(
            abs(self.coefficient(-k) - self.coefficient(k).conjugate()) <= tol
            for k in frequencies
        )

    def energy(self) -> float:
        """sum_k |c_k|^2; times 2*pi this is the squared L2 norm."""
        return float(sum(abs(c) ** 2 for c in self.coeffs.values()))

    # --- algebra ---

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        return TrigPolynomial.from_coeffs([*self.entries(), *other.entries()])

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "TrigPolynomial":
        return TrigPolynomial({k: -c for k, c in self.coeffs.items()})

    def __mul__(self, scalar: complex) -> "TrigPolynomial":
        if isinstance(scalar, TrigPolynomial):
            return NotImplemented
        return TrigPolynomial({k: scalar * c for k, c in self.coeffs.items()})

    __rmul__ = __mul__

    def restrict(self, frequencies: Iterable[int]) -> "TrigPolynomial":
        """Keep only the listed frequencies."""
        keep = set(frequencies)
        return TrigPolynomial({k: c for k, c in self.coeffs.items() if k in keep})

    def select(self, predicate: Callable[[int], bool]) -> "TrigPolynomial":
        return TrigPolynomial({k: c for k, c in self.coeffs.items() if predicate(k)})

    def apply_multiplier(
        self, multiplier: Callable[[np.ndarray], np.ndarray]
    ) -> "TrigPolynomial":
        """Diagonal operator: c_k -> multiplier(k) * c_k, evaluated on the support."""
        if self.is_zero:
            return self
        ks, cs = self.arrays()
        return TrigPolynomial.from_arrays(ks, cs * np.asarray(multiplier(ks)))

    # --- text codec ---

    def dumps(self) -> str:
        """One `k re im` line per stored frequency, ascending k."""
        return "".join(
            f"{k} {c.real:.17g} {c.imag:.17g}\n" for k, c in self.coeffs.items()
        )

    @classmethod
    def loads(cls, text: str) -> "TrigPolynomial":
        entries = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected `k re im`, got {line!r}")
            entries.append((int(parts[0]), complex(float(parts[1]), float(parts[2]))))
        return cls.from_coeffs(entries)


def from_coeffs(entries: Iterable[tuple[int, complex]]) -> TrigPolynomial:
    return TrigPolynomial.from_coeffs(entries)


def is_real_valued(p: TrigPolynomial, tol: float = 0.0) -> bool:
    return p.is_real_valued(tol)


def coefficient(p: TrigPolynomial, k: int) -> complex:
    return p.coefficient(k)
