from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import pandas as pd

from .approx import (
    ConvergenceWarning,
    best_approx,
    best_orthogonal,
    deviation_norm,
    fourier_sum_ratio,
    partial_sum,
)
from .derivative import (
    DerivativeParams,
    class_norm,
    embedding_sides,
    random_class_member,
)
from .extremal import (
    FlatnessError,
    SignSequence,
    f1,
    f2,
    f2_lower_bound,
    f2_monotone_bound,
    rudin_shapiro,
    rudin_shapiro_signs,
)
from .grid import grid_size, nesting_constant
from .psi import (
    PsiSequence,
    doubling_ratio,
    verify_almost_decreasing,
    verify_B,
    verify_dyadic_variation,
)
from .spectrum import TrigPolynomial
from .utils.constants import CSV_FLOAT_FORMAT, SCHEMA_VERSION
from .utils.models import (
    ApproxMethod,
    ApproxResult,
    BoundReport,
    ClassReport,
    FrequencySet,
    SweepConfig,
)

SWEEP_COLUMNS = [
    "n",
    "s",
    "psi_n",
    "half_psi_n",
    "rho_f1",
    "best_f1",
    "best_f1_certificate",
    "best_f1_method",
    "best_f1_converged",
    "best_f1_iterations",
    "best_f1_gap",
    "rho_f2",
    "eorth_2n_minus_1_f2",
    "eorth_2n_f2",
    "eorth_method",
    "f2_lower_bound",
    "f2_monotone_bound",
    "ratio_rho_f1",
    "ratio_best_f1",
    "ratio_certificate_f1",
    "ratio_eorth_2n_f2",
    "ratio_f2_lower_bound",
    "psi_doubling_ratio",
    "witness_max_rho_ratio",
    "witness_max_fourier_ratio",
    "smoke_rho",
    "smoke_best",
]

REPORT_COLUMNS = [
    "inequality",
    "n",
    "s",
    "lhs",
    "rhs",
    "ratio",
    "tolerance",
    "pass",
    "k_max",
    "m_max",
    "witness_index",
]

# Relative slack for inequalities between computed quantities.
CHAIN_TOL = 1e-9
# Relative slack for closed-form explicit bounds.
EXPLICIT_TOL = 1e-12


@dataclass(frozen=True)
class Witnesses:
    """The lower-bound witnesses of one order n."""

    n: int
    signs: SignSequence
    f1: TrigPolynomial
    f2: TrigPolynomial


def _signs(n: int, config: SweepConfig) -> SignSequence:
    if config.corrupt_signs:
        return SignSequence.constant(2 * n - 1)
    try:
        return rudin_shapiro(2 * n - 1, config.grid_oversample)
    except FlatnessError as e:
        # keep going with the unverified signs; the prop3 row records the failure
        print(f"❌ {e}")
        return SignSequence(tuple(int(x) for x in rudin_shapiro_signs(2 * n)))


def build_witnesses(psi: PsiSequence, n: int, config: SweepConfig) -> Witnesses:
    signs = _signs(n, config)
    return Witnesses(n=n, signs=signs, f1=f1(psi, n), f2=f2(psi, n, signs))


def orthogonal_pair(
    f: TrigPolynomial, n: int, s: float, oversample: int
) -> tuple[ApproxResult, ApproxResult]:
    """
    e_{2n-1}^perp(f)_s and e_2n^perp(f)_s.

    Exact for s = 2; otherwise greedy seeded with the Fourier window, so both
    values stay below rho_n and the pair stays ordered.
    """
    N = grid_size(f.degree, oversample)
    if s == 2:
        return (
            best_orthogonal(f, 2 * n - 1, s, ApproxMethod.EXACT_L2, N),
            best_orthogonal(f, 2 * n, s, ApproxMethod.EXACT_L2, N),
        )
    window = FrequencySet.window(n)
    odd = best_orthogonal(f, 2 * n - 1, s, ApproxMethod.GREEDY, N, candidates=[window])
    even = best_orthogonal(
        f, 2 * n, s, ApproxMethod.GREEDY, N, candidates=[window, odd.minimizer]
    )
    return odd, even


def warn_unconverged(result: ApproxResult, n: int, s: float) -> None:
    if not result.converged:
        print(
            f"⚠️ E_{n}(f1) in L_{s:g} did not converge after {result.iterations} "
            "iterations; reporting the best iterate"
        )


def _ratio(value: float, scale: float) -> float:
    return value / scale if scale else math.nan


def _sweep_row(
    n: int,
    s: float,
    psi: PsiSequence,
    params: DerivativeParams,
    witnesses: Witnesses,
    members: list[TrigPolynomial],
    smoke: TrigPolynomial,
    config: SweepConfig,
) -> dict[str, Any]:
    opts = config.solver_options
    oversample = config.grid_oversample
    psi_n = psi(n)

    rho_f1 = deviation_norm(witnesses.f1, n, s, grid_size(n, oversample))
    best = best_approx(witnesses.f1, n, s, opts)
    warn_unconverged(best, n, s)

    rho_f2 = deviation_norm(witnesses.f2, n, s, grid_size(witnesses.f2.degree, oversample))
    odd, even = orthogonal_pair(witnesses.f2, n, s, oversample)
    lower = f2_lower_bound(psi, n, s)

    rho_ratios = [
        deviation_norm(f, n, s, grid_size(f.degree, oversample)) / psi_n for f in members
    ]
    fourier_ratios = [fourier_sum_ratio(f, params, n, s, opts) for f in members]

    return {
        "n": n,
        "s": s,
        "psi_n": psi_n,
        "half_psi_n": psi_n / 2,
        "rho_f1": rho_f1,
        "best_f1": best.value,
        "best_f1_certificate": best.certificate,
        "best_f1_method": str(best.method),
        "best_f1_converged": best.converged,
        "best_f1_iterations": best.iterations,
        "best_f1_gap": best.discretization_gap,
        "rho_f2": rho_f2,
        "eorth_2n_minus_1_f2": odd.value,
        "eorth_2n_f2": even.value,
        "eorth_method": str(even.method),
        "f2_lower_bound": lower,
        "f2_monotone_bound": f2_monotone_bound(psi, n),
        "ratio_rho_f1": _ratio(rho_f1, psi_n),
        "ratio_best_f1": _ratio(best.value, psi_n),
        "ratio_certificate_f1": _ratio(best.certificate, psi_n),
        "ratio_eorth_2n_f2": _ratio(even.value, psi_n),
        "ratio_f2_lower_bound": _ratio(lower, psi_n),
        "psi_doubling_ratio": doubling_ratio(psi, n),
        "witness_max_rho_ratio": max(rho_ratios, default=math.nan),
        "witness_max_fourier_ratio": (
            math.nan if s == 1 or not fourier_ratios else max(fourier_ratios)
        ),
        "smoke_rho": deviation_norm(smoke, n, s, grid_size(max(smoke.degree, n), oversample)),
        "smoke_best": best_approx(smoke, n, s, opts).value,
    }


def random_members(params: DerivativeParams, n: int, config: SweepConfig) -> list[TrigPolynomial]:
    """seed_count class members of degree 2n, seeds config.seed, config.seed+1, ..."""
    return [
        random_class_member(params, 2 * n, config.seed + i, config.grid_oversample)
        for i in range(config.seed_count)
    ]


def run_sweep(config: SweepConfig) -> pd.DataFrame:
    """One row per (n, s): deviations, best and best orthogonal approximations of the witnesses."""
    psi = PsiSequence.parse(config.psi)
    params = DerivativeParams(psi, config.beta)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        for n in sorted(set(config.n_values)):
            witnesses = build_witnesses(psi, n, config)
            members = random_members(params, n, config)
            # lies in T_(2n-1): every deviation column must vanish
            smoke = partial_sum(witnesses.f2, n)
            for s in sorted(set(config.s_values)):
                rows.append(_sweep_row(n, s, psi, params, witnesses, members, smoke, config))
    print(f"📊 Sweep over {psi.label}: {len(rows)} rows")
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def _class_row(name: str, n: int, report: ClassReport) -> BoundReport:
    return BoundReport(
        name,
        n,
        None,
        report.empirical_constant,
        report.cap,
        k_max=report.k_max,
        m_max=report.m_max,
        witness_index=report.witness_index,
    )


def _class_reports(psi: PsiSequence, config: SweepConfig) -> list[BoundReport]:
    top = max(config.n_values)
    k_max = max(2, 4 * top)
    m_max = max(0, math.ceil(math.log2(k_max)))
    reports: list[BoundReport] = []
    try:
        for report in (verify_almost_decreasing(psi, k_max, config.class_cap),
                       verify_B(psi, k_max, config.class_cap)):
            name = "class-B" if report.class_name == "B" else "class-P-almost-decreasing"
            reports.append(_class_row(name, 0, report))
        for n in sorted(set(config.n_values)):
            report = verify_dyadic_variation(psi, n, m_max, config.class_cap)
            reports.append(_class_row("class-P-dyadic", n, report))
    except IndexError as e:
        print(f"⚠️ Skipping class membership rows: {e}")
    return reports


def _worst(pairs: list[tuple[float, float]]) -> tuple[float, float]:
    return max(pairs, key=lambda pair: pair[0] / pair[1] if pair[1] else math.inf)


def _member_reports(
    n: int,
    s_values: list[float],
    params: DerivativeParams,
    members: list[TrigPolynomial],
    oversample: int,
) -> list[BoundReport]:
    """Norm-nesting rows over the random class members; each row keeps the worst member."""
    if not members:
        return []
    grids = [grid_size(f.degree, oversample) for f in members]
    reports = []
    if 1 in s_values:
        pairs = [
            (deviation_norm(f, n, 1, N), nesting_constant(1, 2) * deviation_norm(f, n, 2, N))
            for f, N in zip(members, grids)
        ]
        reports.append(BoundReport("prop2-q1", n, 1.0, *_worst(pairs), CHAIN_TOL))
    for s in s_values:
        pairs = [embedding_sides(f, params, s, N) for f, N in zip(members, grids)]
        reports.append(BoundReport("embedding-st", n, s, *_worst(pairs), CHAIN_TOL))
    return reports


def check_bounds(config: SweepConfig) -> list[BoundReport]:
    """
    Evaluate the explicit inequalities per (n, s).

    A failing inequality is a row with pass=False, never an exception.
    """
    psi = PsiSequence.parse(config.psi)
    params = DerivativeParams(psi, config.beta)
    opts = config.solver_options
    oversample = config.grid_oversample
    reports = _class_reports(psi, config)
    monotone = psi.max_index is None or psi.max_index >= 4 * max(config.n_values)
    monotone = monotone and psi.is_monotone(4 * max(config.n_values))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        for n in sorted(set(config.n_values)):
            witnesses = build_witnesses(psi, n, config)
            sup = witnesses.signs.grid_sup(oversample)
            reports.append(BoundReport("prop3", n, None, sup, witnesses.signs.flatness_bound()))
            membership = class_norm(
                witnesses.f2, params, grid_size(witnesses.f2.degree, oversample)
            )
            reports.append(BoundReport("f2-membership", n, None, membership, 1.0, CHAIN_TOL))
            if monotone:
                reports.append(
                    BoundReport(
                        "f2-monotone-bound",
                        n,
                        None,
                        f2_monotone_bound(psi, n),
                        f2_lower_bound(psi, n, 1.0),
                        EXPLICIT_TOL,
                    )
                )

            members = random_members(params, n, config)
            reports.extend(
                _member_reports(n, sorted(set(config.s_values)), params, members, oversample)
            )

            rho_grid = grid_size(witnesses.f2.degree, oversample)
            for s in sorted(set(config.s_values)):
                best = best_approx(witnesses.f1, n, s, opts)
                warn_unconverged(best, n, s)
                rho_f1 = deviation_norm(witnesses.f1, n, s, grid_size(n, oversample))
                reports.append(
                    BoundReport("eq-q5", n, s, psi(n) / 2, best.certificate, EXPLICIT_TOL)
                )
                reports.append(
                    BoundReport("f1-certificate-vs-value", n, s, best.certificate, best.value, EXPLICIT_TOL)
                )
                reports.append(BoundReport("best-vs-fourier", n, s, best.value, rho_f1, CHAIN_TOL))

                odd, even = orthogonal_pair(witnesses.f2, n, s, oversample)
                rho_f2 = deviation_norm(witnesses.f2, n, s, rho_grid)
                reports.append(BoundReport("orth-2n-vs-odd", n, s, even.value, odd.value, CHAIN_TOL))
                reports.append(BoundReport("orth-vs-fourier", n, s, odd.value, rho_f2, CHAIN_TOL))
                if s == 2:
                    reports.append(
                        BoundReport(
                            "thm2-lower-s2",
                            n,
                            s,
                            f2_lower_bound(psi, n, s),
                            even.value,
                            EXPLICIT_TOL,
                        )
                    )

    # stable: insertion order is kept within one (n, s)
    return sorted(reports, key=lambda r: (r.n, -math.inf if r.s is None else r.s))


def reports_frame(reports: list[BoundReport]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in reports], columns=REPORT_COLUMNS)


def write_report(frame: pd.DataFrame, path: Path) -> None:
    """`schema=N` line, then the CSV with 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(f"schema={SCHEMA_VERSION}\n")
        frame.to_csv(f, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def dump_witnesses(config: SweepConfig, directory: Path) -> list[Path]:
    """Write the f1 and f2 coefficient lists of every n as `k re im` text files."""
    psi = PsiSequence.parse(config.psi)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for n in sorted(set(config.n_values)):
        witnesses = build_witnesses(psi, n, config)
        for name, poly in (("f1", witnesses.f1), ("f2", witnesses.f2)):
            path = directory / f"{name}_n{n}.txt"
            path.write_text(poly.dumps())
            written.append(path)
    return written
