"""Mixed and isotropic Sobolev norms of kernels, via Fourier weights.

The regularity weight is always built from the Laplacian (order 2): a
coefficient H[k,l] is weighted by (1+|k|^2)^{mu1} (1+|l|^2)^{mu2} in the
mixed norm and by (1+|k|^2+|l|^2)^{mu} in the isotropic one.  Verdicts
about finiteness at infinite cutoff never come from a single truncation;
they come from the geometric-cutoff classifier in `powers`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels, powers
from .kernels import CoefficientMatrix, KernelSpec


@dataclass(frozen=True)
class SobolevOrder:
    """Regularity orders in the x and y variables separately."""

    mu1: float
    mu2: float

    def __post_init__(self):
        if self.mu1 < 0 or self.mu2 < 0:
            raise ValueError(f"orders must be nonnegative, got ({self.mu1}, {self.mu2})")

    @property
    def total(self) -> float:
        return self.mu1 + self.mu2


def mixed_norm(C: CoefficientMatrix, order: SobolevOrder) -> float:
    """( sum_{k,l} (1+|k|^2)^{mu1} (1+|l|^2)^{mu2} |H[k,l]|^2 )^{1/2}."""
    ev = C.lattice.eigenvalues().astype(np.float64)
    w1 = (1.0 + ev) ** order.mu1
    w2 = (1.0 + ev) ** order.mu2
    total = np.einsum("i,ij,j->", w1, np.abs(C.entries) ** 2, w2)
    return float(np.sqrt(total))


def isotropic_norm(C: CoefficientMatrix, mu: float) -> float:
    """( sum_{k,l} (1+|k|^2+|l|^2)^{mu} |H[k,l]|^2 )^{1/2}."""
    ev = C.lattice.eigenvalues().astype(np.float64)
    weights = (1.0 + ev[:, None] + ev[None, :]) ** mu
    return float(np.sqrt(np.sum(weights * np.abs(C.entries) ** 2)))


def inclusion_weight_check(a: float, b: float, order: SobolevOrder) -> tuple[float, float, float]:
    """The three weights whose chain lo <= mid <= hi proves the norm sandwich.

    lo = (1+a+b)^{min(mu1,mu2)}, mid = (1+a)^{mu1} (1+b)^{mu2},
    hi = (1+a+b)^{mu1+mu2}, all with constant 1.
    """
    if a < 0 or b < 0:
        raise ValueError(f"weights need nonnegative eigenvalues, got ({a}, {b})")
    lo = (1.0 + a + b) ** min(order.mu1, order.mu2)
    mid = (1.0 + a) ** order.mu1 * (1.0 + b) ** order.mu2
    hi = (1.0 + a + b) ** order.total
    return lo, mid, hi


@dataclass(frozen=True)
class EllipticEquivalence:
    norm_first: float
    norm_second: float
    min_ratio: float
    max_ratio: float


def elliptic_equivalence_check(C: CoefficientMatrix, mu: float) -> EllipticEquivalence:
    """Same isotropic norm built from two different order-4 elliptic weights.

    First weight (1+|k|^2+|l|^2)^{mu}, second (1+(|k|^2+|l|^2)^2)^{mu/2};
    their entrywise ratio is trapped in [2^{-mu/2}, 1] independently of the
    truncation, which is what makes membership verdicts operator-choice-free.
    """
    if mu < 0:
        raise ValueError(f"order must be nonnegative, got {mu}")
    ev = C.lattice.eigenvalues().astype(np.float64)
    t = ev[:, None] + ev[None, :]
    w_first = (1.0 + t) ** mu
    w_second = (1.0 + t**2) ** (mu / 2.0)
    abs2 = np.abs(C.entries) ** 2
    ratios = w_second / w_first
    return EllipticEquivalence(
        norm_first=float(np.sqrt(np.sum(w_first * abs2))),
        norm_second=float(np.sqrt(np.sum(w_second * abs2))),
        min_ratio=float(ratios.min()),
        max_ratio=float(ratios.max()),
    )


# ---------------------------------------------------------------------------
# finiteness at infinite cutoff


def _fold_symmetric(weights: np.ndarray, K: int) -> np.ndarray:
    """Collapse an array indexed by k = -K..K onto |k| = 0..K."""
    folded = weights[K:].copy()
    folded[1:] += weights[K - 1 :: -1]
    return folded


def _conv_partial_sums(spec: KernelSpec, mu_total: float, radii: np.ndarray) -> np.ndarray:
    K = int(radii[-1])
    sym = kernels.symbol_values(spec, K)
    ks = np.arange(-K, K + 1, dtype=np.float64)
    weighted = (1.0 + ks**2) ** mu_total * np.abs(sym) ** 2
    partial = np.cumsum(_fold_symmetric(weighted, K))
    return partial[radii]


def _axis_partial_sums(mu: float, decay: float, radii: np.ndarray) -> np.ndarray:
    K = int(radii[-1])
    k = np.arange(0, K + 1, dtype=np.float64)
    terms = (1.0 + k**2) ** mu * (1.0 + k) ** (-2.0 * decay)
    terms[1:] *= 2.0  # both signs of k
    partial = np.cumsum(terms)
    return partial[radii]


def _shell_partial_sums(term_of_r2, radii: np.ndarray) -> np.ndarray:
    r2, counts = powers.torus_shells(2, int(radii[-1]))
    partial = np.cumsum(counts * term_of_r2(r2.astype(np.float64)))
    edges = np.searchsorted(r2, radii * radii, side="right")
    return partial[np.maximum(edges - 1, 0)]


def classify_mixed_finiteness(
    spec: KernelSpec,
    order: SobolevOrder,
    start: int = powers.DEFAULT_START,
    doublings: int | None = None,
    factor: int = 2,
) -> powers.ClassifierResult:
    """Classify whether the mixed Sobolev norm of the kernel family is finite.

    Partial sums of the squared norm are taken over geometrically growing
    lattice cutoffs and handed to the increment-ratio classifier.  For
    convolution kernels the squared norm depends on mu1 + mu2 only.
    """
    base = kernels.base_spec(spec)
    if doublings is None:
        doublings = powers.DEFAULT_DOUBLINGS[base.dim]
    radii = powers.geometric_cutoffs(start, doublings, factor)

    if kernels.is_convolution(base):
        if base.dim == 1:
            sums = _conv_partial_sums(base, order.total, radii)
        else:
            a = base.a if isinstance(base, kernels.ConvPower) else None
            if a is None:  # rank-one on T^2: a single mode
                sums = np.ones(len(radii))
            else:
                sums = _shell_partial_sums(
                    lambda r2: (1.0 + r2) ** order.total * (1.0 + np.sqrt(r2)) ** (-2.0 * a), radii
                )
    elif isinstance(base, kernels.ProductRandom):
        if base.dim == 1:
            sums = _axis_partial_sums(order.mu1, base.a, radii) * _axis_partial_sums(
                order.mu2, base.b, radii
            )
        else:
            row = _shell_partial_sums(
                lambda r2: (1.0 + r2) ** order.mu1 * (1.0 + np.sqrt(r2)) ** (-2.0 * base.a), radii
            )
            col = _shell_partial_sums(
                lambda r2: (1.0 + r2) ** order.mu2 * (1.0 + np.sqrt(r2)) ** (-2.0 * base.b), radii
            )
            sums = row * col
    elif isinstance(base, kernels.ModeSum):
        C = kernels.coefficients(base, max(1, _mode_span(base)))
        sums = np.full(len(radii), mixed_norm(C, order) ** 2)
    else:
        raise ValueError(f"no finiteness rule for {type(base).__name__}")
    return powers.classify_partial_sums(radii, sums)


def _mode_span(spec: kernels.ModeSum) -> int:
    span = 0
    for k, l, _ in spec.modes:
        for v in np.atleast_1d(k):
            span = max(span, abs(int(v)))
        for v in np.atleast_1d(l):
            span = max(span, abs(int(v)))
    return span
