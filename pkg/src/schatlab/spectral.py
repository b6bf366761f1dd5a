"""Singular values, Schatten norms, traces, and membership verdicts.

The operator induced by K(x,y) acts on the character basis through the
matrix M[k,m] = H[k,-m]; all spectral data is read off M.  Membership of
the infinite-cutoff operator in S_p is never judged from one truncation:
convolution-family symbols go through the geometric-cutoff classifier,
everything else is reported as evidence (tail exponents) only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels, powers
from .kernels import CoefficientMatrix, KernelSpec
from .torus_fourier import grid_coordinates

# singular values below this fraction of the largest are numerical zeros
SVD_RELATIVE_FLOOR = 1e-13


class NumericalFailure(RuntimeError):
    """Raised when a numerical routine (SVD, eigensolver) does not converge."""


@dataclass(frozen=True)
class MembershipPrediction:
    """Threshold verdict r* = 2n/(n + 2(mu1+mu2)) with optional trace-class call."""

    n: int
    mu1: float
    mu2: float
    r_star: float
    trace_class: bool | None

    def verdict(self, p: float) -> str:
        return "guaranteed" if p > self.r_star else "not-covered"


def predict_membership(n: int, mu1: float, mu2: float, trace_class_query: bool = False) -> MembershipPrediction:
    if n not in (1, 2):
        raise ValueError(f"unsupported dimension {n}")
    if mu1 < 0 or mu2 < 0:
        raise ValueError(f"orders must be nonnegative, got ({mu1}, {mu2})")
    r_star = 2.0 * n / (n + 2.0 * (mu1 + mu2))
    trace_class = (mu1 + mu2 > n / 2.0) if trace_class_query else None
    return MembershipPrediction(n=n, mu1=mu1, mu2=mu2, r_star=r_star, trace_class=trace_class)


def operator_matrix(C: CoefficientMatrix) -> np.ndarray:
    """M[k,m] = H[k,-m]; index negation reverses the lexicographic order."""
    return C.entries[:, ::-1]


def singular_values(M: np.ndarray) -> np.ndarray:
    """Singular values of M, nonincreasing, with relative floor applied."""
    try:
        s = np.linalg.svd(np.asarray(M, dtype=complex), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD failed to converge: {exc}") from exc
    if len(s) and s[0] > 0:
        s = np.where(s < SVD_RELATIVE_FLOOR * s[0], 0.0, s)
    return s


def schatten_norm(s, p: float) -> float:
    """(sum s_j^p)^{1/p} for p > 0; the largest value for p = inf."""
    s = np.asarray(s, dtype=np.float64)
    if len(s) == 0:
        return 0.0
    if np.isinf(p):
        return float(np.max(s))
    if p <= 0:
        raise ValueError(f"need p > 0, got {p}")
    return float(np.sum(s**p) ** (1.0 / p))


def tail_exponent(s, window: tuple[int, int] | None = None) -> tuple[float, float]:
    """Fitted decay exponent beta of s_j ~ j^{-beta}, with 2-sigma halfwidth.

    Least squares of log s_j against log j over j in [J/4, J] by default
    (1-based, positive values only).
    """
    s = np.asarray(s, dtype=np.float64)
    positive = s[s > 0]
    J = len(positive)
    if J < 16:
        raise ValueError(f"need at least 16 positive singular values, got {J}")
    lo, hi = window if window is not None else (max(1, J // 4), J)
    if not (1 <= lo < hi <= J):
        raise ValueError(f"bad window ({lo}, {hi}) for {J} values")
    j = np.arange(lo, hi + 1, dtype=np.float64)
    x, y = np.log(j), np.log(positive[lo - 1 : hi])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    dof = len(x) - 2
    if dof > 0:
        se = np.sqrt((resid @ resid / dof) / np.sum((x - x.mean()) ** 2))
    else:
        se = 0.0
    return float(-slope), float(2.0 * se)


# ---------------------------------------------------------------------------
# traces


def trace_eigensum(M: np.ndarray) -> complex:
    """sum_k <T e_k, e_k> = sum_k M[k,k] on the truncated lattice."""
    return complex(np.trace(np.asarray(M)))


def trace_quadrature(spec: KernelSpec, G: int, series_cutoff: int | None = None) -> complex:
    """Grid quadrature of the raw diagonal, (1/G^n) sum_g K(x_g, x_g).

    Deliberately naive: a kernel corrupted on the measure-zero diagonal
    drags this value away from the trace.
    """
    dim = spec.dim
    if dim == 1:
        vals = kernels.diagonal_evaluate(spec, grid_coordinates(1, G), series_cutoff)
    else:
        X, Y = grid_coordinates(2, G)
        vals = kernels.diagonal_evaluate(spec, (X.ravel(), Y.ravel()), series_cutoff)
    return complex(np.mean(vals))


# ---------------------------------------------------------------------------
# finite matrix inequalities


def lem11_check(M: np.ndarray) -> tuple[float, float]:
    """(nuclear norm, entrywise l1 norm); the first never exceeds the second."""
    M = np.asarray(M, dtype=complex)
    nuclear = schatten_norm(singular_values(M), 1.0)
    entrywise = float(np.sum(np.abs(M)))
    return nuclear, entrywise


def multiplication_check(A: np.ndarray, B: np.ndarray, p: float, q: float) -> tuple[float, float]:
    """(||AB||_{S_r}, ||A||_{S_p} ||B||_{S_q}) with 1/r = 1/p + 1/q."""
    if p <= 0 or q <= 0:
        raise ValueError(f"need p, q > 0, got ({p}, {q})")
    r = 1.0 / (1.0 / p + 1.0 / q)
    lhs = schatten_norm(singular_values(np.asarray(A) @ np.asarray(B)), r)
    rhs = schatten_norm(singular_values(A), p) * schatten_norm(singular_values(B), q)
    return lhs, rhs


def nesting_check(s, p: float, q: float) -> bool:
    """l^q norm <= l^p norm on a finite spectrum, for 0 < p < q."""
    if not 0 < p < q:
        raise ValueError(f"need 0 < p < q, got ({p}, {q})")
    return schatten_norm(s, q) <= schatten_norm(s, p) * (1.0 + 1e-12)


def invariant_s1_equals_symbol_l1(kappa_hat) -> tuple[float, float]:
    """Nuclear norm of the diagonal symbol operator vs sum |kappa_hat(k)|."""
    kappa_hat = np.asarray(kappa_hat, dtype=complex)
    s1 = schatten_norm(singular_values(np.diag(kappa_hat)), 1.0)
    return s1, float(np.sum(np.abs(kappa_hat)))


# ---------------------------------------------------------------------------
# membership evidence at infinite cutoff


def symbol_schatten_classify(
    spec: KernelSpec,
    r: float,
    start: int = powers.DEFAULT_START,
    steps: int = 6,
    factor: int = 4,
) -> powers.ClassifierResult:
    """Classify sum_k |kappa_hat(k)|^r for a convolution family on T^1.

    Cutoffs quadruple by default: Schatten exponents sit closer to their
    critical index than Sobolev ones, and the wider ladder keeps the
    increment ratios clear of the verdict thresholds at distance 0.1.
    """
    if r <= 0:
        raise ValueError(f"need r > 0, got {r}")
    radii = powers.geometric_cutoffs(start, steps, factor)
    K = int(radii[-1])
    sym = kernels.symbol_values(spec, K)
    mags = np.abs(sym) ** r
    folded = mags[K:].copy()
    folded[1:] += mags[K - 1 :: -1]
    partial = np.cumsum(folded)
    return powers.classify_partial_sums(radii, partial[radii])


# ---------------------------------------------------------------------------
# assembled spectra


@dataclass(frozen=True, eq=False)
class SpectralSummary:
    """Spectrum of one truncation: singular values, trace, tail fit."""

    cutoff: int
    singular_values: np.ndarray
    trace_eigensum: complex
    tail_beta: float | None
    tail_halfwidth: float | None

    def schatten(self, p: float) -> float:
        return schatten_norm(self.singular_values, p)


def summarize(C: CoefficientMatrix) -> SpectralSummary:
    """Full spectral summary of a truncated coefficient matrix."""
    M = operator_matrix(C)
    s = singular_values(M)
    trace = trace_eigensum(M)
    try:
        beta, halfwidth = tail_exponent(s)
    except ValueError:
        beta, halfwidth = None, None
    return SpectralSummary(
        cutoff=C.lattice.cutoff,
        singular_values=s,
        trace_eigensum=trace,
        tail_beta=beta,
        tail_halfwidth=halfwidth,
    )
