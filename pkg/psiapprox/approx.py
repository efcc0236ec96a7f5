from __future__ import annotations

import math
import warnings
from collections.abc import Iterable
from itertools import combinations

import numpy as np
import scipy.linalg
import scipy.optimize
import scipy.sparse

from .derivative import DerivativeParams, psi_beta_derivative
from .grid import (
    OVERSAMPLE,
    TWO_PI,
    check_exponent,
    grid_size,
    nodes,
    norm_ls,
    synthesize,
)
from .spectrum import TrigPolynomial
from .utils.models import ApproxMethod, ApproxResult, FrequencySet, SolverOptions

# Largest support searched subset by subset.
EXHAUSTIVE_CAP = 16
# Rows of the residual matrix evaluated at once during exhaustive search.
_BATCH = 512


class ConvergenceWarning(UserWarning):
    pass


def _check_order(n: int, name: str = "n") -> int:
    if int(n) < 1:
        raise ValueError(f"{name} must be >= 1, got {n}")
    return int(n)


def _check_grid(f: TrigPolynomial, N: int | None) -> int:
    if N is None:
        return grid_size(f.degree, OVERSAMPLE)
    if N < 2 * f.degree + 1:
        raise ValueError(
            f"grid of {N} points is too coarse for degree {f.degree}; "
            f"need at least {2 * f.degree + 1}"
        )
    return N


def _real_tolerance(f: TrigPolynomial) -> float:
    return 1e-12 * max(1.0, max((abs(c) for c in f.coeffs.values()), default=0.0))


def partial_sum(f: TrigPolynomial, n: int) -> TrigPolynomial:
    """S_{n-1}(f): frequencies |k| <= n-1."""
    n = _check_order(n)
    return f.select(lambda k: abs(k) <= n - 1)


def orthogonal_sum(f: TrigPolynomial, gamma: FrequencySet) -> TrigPolynomial:
    """S_gamma(f): the Fourier coefficients of f on gamma, copied verbatim."""
    return f.restrict(gamma.members)


def deviation_norm(f: TrigPolynomial, n: int, s: float, N: int | None = None) -> float:
    """||f - S_{n-1}(f)||_s on the grid (the rho_n deviation)."""
    N = _check_grid(f, N)
    return norm_ls(synthesize(f - partial_sum(f, n), N), s)


# --- best approximation E_n ---


def dual_lower_bound(
    f: TrigPolynomial,
    t: TrigPolynomial | None,
    n: int,
    s: float,
    j: int,
) -> float:
    """
    2*pi*|(f-t)^(j)| / (2*pi)^{1-1/s}: a lower bound on E_n(f)_s.

    The test harmonic e^{ijt} with |j| >= n is orthogonal to every t of
    degree <= n-1, so the bound does not depend on t.
    """
    n = _check_order(n)
    s = check_exponent(s)
    if abs(j) < n:
        raise ValueError(f"test frequency |j|={abs(j)} must be >= n={n}")
    residual = f if t is None else f - t
    if t is not None and not t.is_zero and t.degree >= n:
        raise ValueError(f"t has degree {t.degree}, outside T_(2n-1) for n={n}")
    return TWO_PI * abs(residual.coefficient(j)) / TWO_PI ** (1 - 1 / s)


def best_dual_bound(f: TrigPolynomial, n: int, s: float) -> float:
    """The dual lower bound maximized over the frequencies |j| >= n of f."""
    tail = [k for k in f.support if abs(k) >= n]
    return max((dual_lower_bound(f, None, n, s, j) for j in tail), default=0.0)


def _trig_design(N: int, n: int) -> np.ndarray:
    """Columns 1, cos kt, sin kt (k = 1..n-1) on the N-point grid."""
    t = nodes(N)
    ks = np.arange(1, n)
    return np.hstack(
        [np.ones((N, 1)), np.cos(np.outer(t, ks)), np.sin(np.outer(t, ks))]
    )


def _real_coeffs_to_poly(x: np.ndarray, n: int) -> TrigPolynomial:
    a0, a, b = x[0], x[1:n], x[n:]
    ks = np.arange(1, n)
    positive = (a - 1j * b) / 2
    return TrigPolynomial.from_arrays(
        np.concatenate([[0], ks, -ks]),
        np.concatenate([[a0], positive, positive.conj()]),
    )


def _grid_ls(residual: np.ndarray, s: float) -> float:
    return float((TWO_PI / residual.size * np.sum(np.abs(residual) ** s)) ** (1 / s))


def _discretization_gap(
    f: TrigPolynomial, n: int, s: float, N: int, x: np.ndarray, value: float
) -> float:
    refined = np.real(synthesize(f, 2 * N).samples) - _trig_design(2 * N, n) @ x
    return abs(_grid_ls(refined, s) - value)


def irls_best_approx(
    f: TrigPolynomial, n: int, s: float, opts: SolverOptions = SolverOptions()
) -> ApproxResult:
    """
    Discretized E_n(f)_s by iteratively reweighted least squares.

    Minimizes the grid L_s norm of f - t over the 2n-1 real coefficients of
    t. Starts from the least-squares solution (the Fourier partial sum), so
    the best iterate never does worse than rho_n on the same grid. For s > 2
    each update is damped by 1/(s-1).

    Near s = 1 the iteration stalls: successive values agree to tol while the
    best iterate can still sit about 1e-5 relative above the grid optimum.
    Use linprog_best_approx when the exact grid L_1 value matters.
    """
    n = _check_order(n)
    s = check_exponent(s)
    N = grid_size(max(f.degree, n - 1), opts.oversample)
    y = synthesize(f, N).samples.real
    A = _trig_design(N, n)

    x = scipy.linalg.lstsq(A, y)[0]
    residual = y - A @ x
    value = _grid_ls(residual, s)
    best_value, best_x = value, x
    step = 1.0 if s <= 2 else 1.0 / (s - 1)
    converged = value == 0.0
    iterations = 0

    while not converged and iterations < opts.max_iter:
        iterations += 1
        weights = np.maximum(np.abs(residual), opts.smoothing) ** (s - 2)
        root = np.sqrt(weights)
        x_ls = scipy.linalg.lstsq(A * root[:, None], y * root)[0]
        x = x + step * (x_ls - x)
        residual = y - A @ x
        new_value = _grid_ls(residual, s)
        if new_value < best_value:
            best_value, best_x = new_value, x
        converged = abs(value - new_value) <= opts.tol * max(value, np.finfo(float).tiny)
        value = new_value

    if not converged:
        warnings.warn(
            f"IRLS for E_{n} in L_{s:g} stopped after {iterations} iterations "
            f"without reaching tol={opts.tol:g}",
            ConvergenceWarning,
            stacklevel=2,
        )

    gap = _discretization_gap(f, n, s, N, best_x, best_value)

    return ApproxResult(
        value=best_value,
        minimizer=_real_coeffs_to_poly(best_x, n),
        method=ApproxMethod.IRLS,
        certificate=None,
        converged=converged,
        iterations=iterations,
        discretization_gap=gap,
    )


def linprog_best_approx(
    f: TrigPolynomial, n: int, opts: SolverOptions = SolverOptions()
) -> ApproxResult:
    """
    Discretized E_n(f)_1 as a linear program, solved exactly by HiGHS.

    Minimizes sum(u) subject to -u <= y - A x <= u on the N-point grid.
    """
    n = _check_order(n)
    N = grid_size(max(f.degree, n - 1), opts.oversample)
    y = synthesize(f, N).samples.real
    A = _trig_design(N, n)
    width = A.shape[1]

    eye = scipy.sparse.identity(N, format="csr")
    A_ub = scipy.sparse.vstack(
        [scipy.sparse.hstack([A, -eye]), scipy.sparse.hstack([-A, -eye])], format="csr"
    )
    cost = np.concatenate([np.zeros(width), np.full(N, TWO_PI / N)])
    bounds = [(None, None)] * width + [(0, None)] * N
    res = scipy.optimize.linprog(
        cost,
        A_ub=A_ub,
        b_ub=np.concatenate([y, -y]),
        bounds=bounds,
        method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.x is None:
        raise RuntimeError(f"linear program for E_{n} in L_1 failed: {res.message}")

    x = res.x[:width]
    value = _grid_ls(y - A @ x, 1.0)
    return ApproxResult(
        value=value,
        minimizer=_real_coeffs_to_poly(x, n),
        method=ApproxMethod.LINPROG,
        certificate=None,
        converged=res.status == 0,
        iterations=int(res.nit),
        discretization_gap=_discretization_gap(f, n, 1.0, N, x, value),
    )


def best_approx(
    f: TrigPolynomial, n: int, s: float, opts: SolverOptions = SolverOptions()
) -> ApproxResult:
    """
    E_n(f)_s: best L_s approximation by real trigonometric polynomials of degree <= n-1.

    s = 2 is solved in closed form (the partial sum, Parseval tail); other s
    by grid IRLS, or at s = 1 by the grid linear program when opts.method
    is linprog. The certificate is the best dual lower bound over the
    frequencies |j| >= n present in f.

    Raises:
        ValueError: when f is not real-valued
    """
    n = _check_order(n)
    s = check_exponent(s)
    if not f.is_real_valued(_real_tolerance(f)):
        raise ValueError("best approximation by real polynomials needs a real-valued f")

    head = partial_sum(f, n)
    tail = f - head
    certificate = best_dual_bound(f, n, s)
    if tail.is_zero:
        return ApproxResult(0.0, f, ApproxMethod.CLOSED_FORM_L2, certificate=0.0)
    if s == 2:
        return ApproxResult(
            value=math.sqrt(TWO_PI * tail.energy()),
            minimizer=head,
            method=ApproxMethod.CLOSED_FORM_L2,
            certificate=certificate,
        )
    if s == 1 and opts.method == ApproxMethod.LINPROG:
        result = linprog_best_approx(f, n, opts)
    else:
        result = irls_best_approx(f, n, s, opts)
    return ApproxResult(
        value=result.value,
        minimizer=result.minimizer,
        method=result.method,
        certificate=certificate,
        converged=result.converged,
        iterations=result.iterations,
        discretization_gap=result.discretization_gap,
    )


# --- best orthogonal m-term approximation ---


def _tie_break_order(f: TrigPolynomial) -> list[int]:
    """Support sorted by decreasing |c_k|, then smaller |k|, then positive k."""
    return sorted(f.support, key=lambda k: (-abs(f.coefficient(k)), abs(k), k < 0))


def _finish(
    f: TrigPolynomial,
    m: int,
    value: float,
    retained: Iterable[int],
    method: ApproxMethod,
    certificate: float | None,
) -> ApproxResult:
    gamma = FrequencySet.of(retained).padded(m, avoid=f.support)
    return ApproxResult(value=value, minimizer=gamma, method=method, certificate=certificate)


def best_orthogonal(
    f: TrigPolynomial,
    m: int,
    s: float,
    method: ApproxMethod | str = ApproxMethod.EXACT_L2,
    N: int | None = None,
    candidates: Iterable[FrequencySet] = (),
) -> ApproxResult:
    """
    e_m^perp(f)_s: smallest ||f - S_gamma(f)||_s over collections gamma of m integers.

    Methods:
        exact_l2    s = 2 only; keep the m largest |c_k| (optimal)
        exhaustive  every retained subset of the support (|support| <= 16)
        greedy      forward selection; the value is an upper bound

    Frequencies outside the support contribute nothing to S_gamma, so only
    subsets of the support of size <= m are searched and the returned gamma
    is padded with absent frequencies. Extra `candidates` (size <= m) are
    evaluated too and win when strictly better.
    """
    m = _check_order(m, "m")
    s = check_exponent(s)
    method = ApproxMethod(method)
    if method not in (ApproxMethod.EXACT_L2, ApproxMethod.EXHAUSTIVE, ApproxMethod.GREEDY):
        raise ValueError(f"unsupported m-term method {method}")
    if method is ApproxMethod.EXACT_L2 and s != 2:
        raise ValueError(f"exact_l2 is only exact for s = 2, got s={s}")
    order = _tie_break_order(f)
    if method is ApproxMethod.EXHAUSTIVE and len(order) > EXHAUSTIVE_CAP:
        raise ValueError(
            f"exhaustive search is capped at {EXHAUSTIVE_CAP} frequencies, "
            f"support has {len(order)}"
        )
    N = _check_grid(f, N)

    if m >= len(order):
        result = _finish(f, m, 0.0, order, method, certificate=0.0)
    elif method is ApproxMethod.EXACT_L2:
        dropped = order[m:]
        value = math.sqrt(TWO_PI * sum(abs(f.coefficient(k)) ** 2 for k in dropped))
        result = _finish(f, m, value, order[:m], method, certificate=value)
    else:
        t = nodes(N)
        ks = np.array(order, dtype=np.int64)
        cs = np.array([f.coefficient(k) for k in order], dtype=np.complex128)
        harmonics = cs[:, None] * np.exp(1j * np.outer(ks, t))
        total = harmonics.sum(axis=0)
        if method is ApproxMethod.EXHAUSTIVE:
            value, retained = _exhaustive(harmonics, total, m, s)
            result = _finish(f, m, value, [order[i] for i in retained], method, value)
        else:
            value, retained = _greedy(harmonics, total, m, s)
            result = _finish(f, m, value, [order[i] for i in retained], method, None)

    for gamma in candidates:
        if gamma.size > m:
            raise ValueError(f"candidate set has {gamma.size} members, more than m={m}")
        value = norm_ls(synthesize(f - orthogonal_sum(f, gamma), N), s)
        if value < result.value:
            result = ApproxResult(
                value=value,
                minimizer=gamma.padded(m, avoid=f.support),
                method=result.method,
                certificate=None,
            )
    return result


def _rows_ls(residuals: np.ndarray, s: float) -> np.ndarray:
    N = residuals.shape[-1]
    return (TWO_PI / N * np.sum(np.abs(residuals) ** s, axis=-1)) ** (1 / s)


def _exhaustive(
    harmonics: np.ndarray, total: np.ndarray, m: int, s: float
) -> tuple[float, tuple[int, ...]]:
    size = harmonics.shape[0]
    top = min(m, size)
    # dropping a harmonic never helps in L2, so only full-size subsets matter there
    sizes = [top] if s == 2 else range(top, -1, -1)
    best_value, best_subset = math.inf, ()
    for r in sizes:
        subsets = combinations(range(size), r)
        while batch := [c for _, c in zip(range(_BATCH), subsets)]:
            index = np.array(batch, dtype=np.int64).reshape(len(batch), r)
            mask = np.zeros((len(batch), size))
            mask[np.arange(len(batch))[:, None], index] = 1.0
            values = _rows_ls(total[None, :] - mask @ harmonics, s)
            i = int(np.argmin(values))
            if values[i] < best_value:
                best_value, best_subset = float(values[i]), batch[i]
    return best_value, best_subset


def _greedy(
    harmonics: np.ndarray, total: np.ndarray, m: int, s: float
) -> tuple[float, list[int]]:
    residual = total
    value = _rows_ls(residual[None, :], s)[0]
    retained: list[int] = []
    available = list(range(harmonics.shape[0]))
    while len(retained) < m and available:
        trial = _rows_ls(residual[None, :] - harmonics[available], s)
        i = int(np.argmin(trial))
        if trial[i] >= value:
            break
        k = available.pop(i)
        retained.append(k)
        residual = residual - harmonics[k]
        value = float(trial[i])
    return float(value), retained


def fourier_sum_ratio(
    f: TrigPolynomial,
    params: DerivativeParams,
    n: int,
    s: float,
    opts: SolverOptions = SolverOptions(),
) -> float:
    """
    rho_n(f)_s / (psi(n) * E_n(f^psi_beta)_s).

    Bounded uniformly in n and f for psi in P and 1 < s < inf; NaN at s = 1.
    """
    s = check_exponent(s)
    if s == 1:
        return math.nan
    deviation = deviation_norm(f, n, s, grid_size(f.degree, opts.oversample))
    best = best_approx(psi_beta_derivative(f, params), n, s, opts).value
    if best == 0:
        return 0.0 if deviation == 0 else math.inf
    return deviation / (params.psi(n) * best)
