from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass, field, replace
from enum import StrEnum
from pathlib import Path
from typing import Any

from ..spectrum import TrigPolynomial
from .constants import (
    DEFAULT_CLASS_CAP,
    DEFAULT_GRID_OVERSAMPLE,
    DEFAULT_MAX_ITER,
    DEFAULT_SEED,
    DEFAULT_SEED_COUNT,
    DEFAULT_TOL,
)


class ApproxMethod(StrEnum):
    CLOSED_FORM_L2 = "closed_form_l2"
    IRLS = "irls"
    LINPROG = "linprog"
    EXACT_L2 = "exact_l2"
    EXHAUSTIVE = "exhaustive"
    GREEDY = "greedy"


@dataclass(frozen=True)
class ClassReport:
    class_name: str
    criterion: str
    k_max: int
    empirical_constant: float
    witness_index: int
    cap: float
    passes: bool
    # dyadic scans only
    m_max: int | None = None


@dataclass(frozen=True)
class FrequencySet:
    """A collection gamma_m of retained integer frequencies."""

    members: frozenset[int]

    @classmethod
    def of(cls, frequencies: Iterable[int]) -> "FrequencySet":
        return cls(frozenset(int(k) for k in frequencies))

    @classmethod
    def window(cls, n: int) -> "FrequencySet":
        """{-n+1, ..., n-1}: the frequencies kept by S_{n-1}."""
        return cls.of(range(-n + 1, n))

    @property
    def size(self) -> int:
        return len(self.members)

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def __contains__(self, k: int) -> bool:
        return k in self.members

    def padded(self, m: int, avoid: Iterable[int] = ()) -> "FrequencySet":
        """
        Extend to exactly m members with frequencies neither present nor in
        `avoid`, smallest |k| first, positive before negative.
        """
        members = set(self.members)
        blocked = members | set(avoid)
        k = 0
        while len(members) < m:
            for cand in (k, -k) if k else (0,):
                if len(members) < m and cand not in blocked:
                    members.add(cand)
            k += 1
        return FrequencySet(frozenset(members))


@dataclass(frozen=True)
class ApproxResult:
    value: float
    minimizer: TrigPolynomial | FrequencySet
    method: ApproxMethod
    certificate: float | None = None
    converged: bool = True
    iterations: int = 0
    discretization_gap: float | None = None


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-9
    max_iter: int = 500
    oversample: int = 16
    # IRLS weight floor: weights use max(|r|, smoothing)
    smoothing: float = 1e-10
    # E_n solver for s != 2: irls, or linprog (exact grid LP at s = 1)
    method: ApproxMethod = ApproxMethod.IRLS


def _float_list(raw: str) -> tuple[float, ...]:
    return tuple(float(x) for x in raw.split(",") if x.strip())


def _int_list(raw: str) -> tuple[int, ...]:
    values: list[int] = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    return tuple(values)


def _bool(raw: str) -> bool:
    return raw.strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class SweepConfig:
    psi: str
    beta: float
    s_values: tuple[float, ...]
    n_values: tuple[int, ...]
    grid_oversample: int = DEFAULT_GRID_OVERSAMPLE
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    seed: int = DEFAULT_SEED
    seed_count: int = DEFAULT_SEED_COUNT
    class_cap: float = DEFAULT_CLASS_CAP
    output: Path | None = None
    corrupt_signs: bool = False
    dump_dir: Path | None = None
    method: ApproxMethod = ApproxMethod.IRLS

    def __post_init__(self):
        if self.method not in (ApproxMethod.IRLS, ApproxMethod.LINPROG):
            raise ValueError(f"method must be irls or linprog, got {self.method}")
        if not self.s_values:
            raise ValueError("s_values must not be empty")
        if not self.n_values:
            raise ValueError("n_values must not be empty")
        if any(not math.isfinite(s) or s < 1 for s in self.s_values):
            raise ValueError(f"every s must lie in [1, inf), got {self.s_values}")
        if any(n < 1 for n in self.n_values):
            raise ValueError(f"every n must be >= 1, got {self.n_values}")
        if self.grid_oversample < 1:
            raise ValueError(f"grid_oversample must be >= 1, got {self.grid_oversample}")
        if self.tol <= 0 or self.max_iter < 1:
            raise ValueError("solver tol must be positive and max_iter >= 1")
        if self.seed_count < 0:
            raise ValueError(f"seed_count must be >= 0, got {self.seed_count}")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SweepConfig":
        missing = [key for key in ("psi", "s_values", "n_values") if not data.get(key)]
        if missing:
            raise ValueError(f"config is missing required keys: {', '.join(missing)}")
        try:
            return cls(
                psi=str(data["psi"]).strip(),
                beta=float(data.get("beta") or 0.0),
                s_values=_float_list(str(data["s_values"])),
                n_values=_int_list(str(data["n_values"])),
                grid_oversample=int(data.get("grid_oversample") or DEFAULT_GRID_OVERSAMPLE),
                tol=float(data.get("tol") or DEFAULT_TOL),
                max_iter=int(data.get("max_iter") or DEFAULT_MAX_ITER),
                seed=int(data.get("seed") or DEFAULT_SEED),
                seed_count=int(
                    data["seed_count"] if data.get("seed_count") not in (None, "")
                    else DEFAULT_SEED_COUNT
                ),
                class_cap=float(data.get("class_cap") or DEFAULT_CLASS_CAP),
                output=Path(data["output"]) if data.get("output") else None,
                corrupt_signs=_bool(str(data.get("corrupt_signs") or "")),
                dump_dir=Path(data["dump_dir"]) if data.get("dump_dir") else None,
                method=ApproxMethod(str(data.get("method") or ApproxMethod.IRLS).strip()),
            )
        except (TypeError, ValueError) as e:
            raise ValueError(f"invalid config: {e}") from e

    def with_overrides(self, **overrides: Any) -> "SweepConfig":
        """Apply CLI overrides, ignoring the ones left unset."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    @property
    def solver_options(self) -> SolverOptions:
        return SolverOptions(
            tol=self.tol,
            max_iter=self.max_iter,
            oversample=self.grid_oversample,
            method=self.method,
        )


@dataclass(frozen=True)
class BoundReport:
    """lhs <= rhs * (1 + tolerance) for one checked inequality."""

    inequality: str
    n: int
    s: float | None
    lhs: float
    rhs: float
    tolerance: float = 0.0
    # scan extent and argmax of class membership rows
    k_max: int | None = None
    m_max: int | None = None
    witness_index: int | None = None
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "passed", bool(self.lhs <= self.rhs * (1 + self.tolerance))
        )

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else math.inf
        return self.lhs / self.rhs

    def to_row(self) -> dict[str, Any]:
        return {
            "inequality": self.inequality,
            "n": self.n,
            "s": self.s,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "k_max": self.k_max,
            "m_max": self.m_max,
            "witness_index": self.witness_index,
        }
