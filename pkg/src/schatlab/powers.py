"""Model eigenvalue sequences, Weyl-bound checks, and summability verdicts.

No finite computation decides convergence of an infinite sum, so every
"finite at infinite cutoff" question in this package is answered by one
classifier: evaluate partial sums at geometrically growing cutoffs and
look at the ratios of consecutive increments.  A genuinely convergent
power-law sum has increment ratios bounded away from 1 from below, a
divergent one from above; the thresholds are calibrated so that
exponents at distance >= 0.1 from the critical one classify correctly,
while boundary cases may come back inconclusive (but never convergent).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

RATIO_CONVERGENT = 0.9
RATIO_DIVERGENT = 0.95
RATIO_WINDOW = 3
DEFAULT_START = 64
DEFAULT_DOUBLINGS = {1: 10, 2: 6}

CONVERGENT = "convergent"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class ClassifierResult:
    verdict: str
    cutoffs: np.ndarray
    partial_sums: np.ndarray
    ratios: np.ndarray
    growth_exponent: float


def geometric_cutoffs(start: int = DEFAULT_START, steps: int = 10, factor: int = 2) -> np.ndarray:
    """Cutoffs start * factor^i for i = 0..steps."""
    if start < 1 or steps < RATIO_WINDOW + 1 or factor < 2:
        raise ValueError(f"bad cutoff ladder ({start=}, {steps=}, {factor=})")
    return start * factor ** np.arange(steps + 1, dtype=np.int64)


def classify_partial_sums(cutoffs, partial_sums) -> ClassifierResult:
    """Classify a nondecreasing partial-sum sequence at geometric cutoffs."""
    cutoffs = np.asarray(cutoffs, dtype=np.float64)
    sums = np.asarray(partial_sums, dtype=np.float64)
    if cutoffs.shape != sums.shape or len(sums) < RATIO_WINDOW + 2:
        raise ValueError(f"need at least {RATIO_WINDOW + 2} aligned cutoffs, got {len(sums)}")
    increments = np.maximum(np.diff(sums), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = increments[1:] / increments[:-1]
    ratios[np.isnan(ratios)] = 0.0  # 0/0: the sum stopped moving
    window = ratios[-RATIO_WINDOW:]
    if np.all(window <= RATIO_CONVERGENT):
        verdict = CONVERGENT
    elif np.all(window >= RATIO_DIVERGENT):
        verdict = DIVERGENT
    else:
        verdict = INCONCLUSIVE
    positive = sums > 0
    if np.count_nonzero(positive) >= 2:
        slope = np.polyfit(np.log(cutoffs[positive]), np.log(sums[positive]), 1)[0]
    else:
        slope = 0.0
    return ClassifierResult(
        verdict=verdict,
        cutoffs=cutoffs.astype(np.int64),
        partial_sums=sums,
        ratios=ratios,
        growth_exponent=float(slope),
    )


# ---------------------------------------------------------------------------
# model sequences on the torus


@dataclass(frozen=True)
class TorusSequence:
    """Eigenvalues lambda = |k|^order of a model operator on T^dim.

    Shells are enumerated exhaustively over the integer lattice, so the
    multiplicities are exact.
    """

    label: str
    dim: int
    order: int

    def shells(self, radius_cap: int) -> tuple[np.ndarray, np.ndarray]:
        """(eigenvalues, multiplicities) for all shells with |k| <= radius_cap."""
        r2, counts = _shell_counts(self.dim, int(radius_cap))
        lams = r2.astype(np.float64) ** (self.order // 2)
        return lams, counts

    def pairs(self, count: int):
        """Yield the first `count` shells as (eigenvalue, multiplicity)."""
        radius = 16
        while True:
            lams, mults = self.shells(radius)
            if len(lams) >= count or radius > 1 << 24:
                break
            radius *= 2
        for lam, d in zip(lams[:count], mults[:count]):
            yield float(lam), int(d)


def torus_laplacian_sequence(n: int) -> TorusSequence:
    return TorusSequence(label=f"torus-laplacian-{n}d", dim=n, order=2)


def torus_bilaplacian_sequence(n: int) -> TorusSequence:
    return TorusSequence(label=f"torus-bilaplacian-{n}d", dim=n, order=4)


def torus_shells(dim: int, radius: int) -> tuple[np.ndarray, np.ndarray]:
    """(|k|^2 values, exact counts) over the lattice ball |k| <= radius."""
    return _shell_counts(dim, int(radius))


@functools.lru_cache(maxsize=4)
def _shell_counts(dim: int, R: int) -> tuple[np.ndarray, np.ndarray]:
    """Distinct values of |k|^2 with |k| <= R in Z^dim, with exact counts."""
    if dim == 1:
        r2 = np.arange(R + 1, dtype=np.int64) ** 2
        counts = np.full(R + 1, 2, dtype=np.int64)
        counts[0] = 1
    elif dim == 2:
        size = R * R + 1
        acc = np.zeros(size)
        ax = np.arange(R + 1, dtype=np.int64)
        w = np.where(ax == 0, 1.0, 2.0)
        chunk = max(1, 4_000_000 // (R + 1))
        for s in range(0, R + 1, chunk):
            r2_block = (ax[s : s + chunk] ** 2)[:, None] + (ax**2)[None, :]
            w_block = np.outer(w[s : s + chunk], w)
            inside = r2_block <= R * R
            acc += np.bincount(r2_block[inside], weights=w_block[inside], minlength=size)
        r2 = np.nonzero(acc)[0].astype(np.int64)
        counts = acc[r2].astype(np.int64)
    else:
        raise ValueError(f"unsupported dimension {dim}")
    r2.setflags(write=False)
    counts.setflags(write=False)
    return r2, counts


# ---------------------------------------------------------------------------
# Weyl counting


@dataclass(frozen=True)
class WeylResult:
    count: int
    bound_constant: float


def _radius_for(seq: TorusSequence, lam_max: float) -> int:
    # smallest integer radius r whose ball covers every eigenvalue <= lam_max;
    # lambda = |k|^order and |k| need not be an integer, so round up and let
    # the caller's lambda filter trim the excess shells
    r = int(max(0.0, lam_max) ** (1.0 / seq.order))
    while r**seq.order < lam_max:
        r += 1
    while r > 0 and (r - 1) ** seq.order >= lam_max:
        r -= 1
    return r


def weyl_check(seq: TorusSequence, lam_max: float) -> WeylResult:
    """Exact eigenvalue count up to lam_max and the observed Weyl constant.

    count = sum of multiplicities of shells with lambda <= lam_max;
    bound_constant = max d_j / (1 + lambda_j)^{dim/order} over those shells.
    """
    lams, counts = seq.shells(_radius_for(seq, lam_max))
    keep = lams <= lam_max
    lams, counts = lams[keep], counts[keep]
    if len(lams) == 0:
        return WeylResult(count=0, bound_constant=0.0)
    ratios = counts / (1.0 + lams) ** (seq.dim / seq.order)
    return WeylResult(count=int(counts.sum()), bound_constant=float(ratios.max()))


@dataclass(frozen=True, eq=False)
class WeylTrend:
    lam_grid: np.ndarray
    running_max: np.ndarray
    slope: float


def weyl_bound_trend(seq: TorusSequence, lam_max: float, points: int = 20) -> WeylTrend:
    """Running max of d_j/(1+lambda_j)^{dim/order} on a log grid of thresholds.

    A bounded multiplicity constant shows up as a flat trend: the fitted
    log-log slope of the running max stays near zero.
    """
    lams, counts = seq.shells(_radius_for(seq, lam_max))
    keep = lams <= lam_max
    lams, counts = lams[keep], counts[keep]
    ratios = counts / (1.0 + lams) ** (seq.dim / seq.order)
    running = np.maximum.accumulate(ratios)
    grid = np.geomspace(max(4.0, lams[1] if len(lams) > 1 else 1.0), lam_max, points)
    idx = np.searchsorted(lams, grid, side="right") - 1
    values = running[np.maximum(idx, 0)]
    slope = float(np.polyfit(np.log(grid), np.log(values), 1)[0])
    return WeylTrend(lam_grid=grid, running_max=values, slope=slope)


# ---------------------------------------------------------------------------
# summability and operator powers


def summability_classify(
    seq: TorusSequence,
    q: float,
    start: int = DEFAULT_START,
    doublings: int | None = None,
    factor: int = 2,
) -> ClassifierResult:
    """Classify sum_j d_j (1 + lambda_j)^{-q} over geometric frequency cutoffs.

    Cutoff i admits the shells with |k| <= start * factor^i, i.e. eigenvalues
    up to (start * factor^i)^order; on that ladder a power-law sum has
    increment ratios factor^{dim - order*q}, so distance 0.1 from the
    critical exponent q = dim/order clears the 0.9 / 0.95 thresholds.
    """
    if doublings is None:
        doublings = DEFAULT_DOUBLINGS[seq.dim]
    radii = geometric_cutoffs(start, doublings, factor)
    r2, counts = _shell_counts(seq.dim, int(radii[-1]))
    lams = r2.astype(np.float64) ** (seq.order // 2)
    terms = counts * (1.0 + lams) ** (-q)
    partial = np.cumsum(terms)
    # integer radius comparison keeps the boundary shells exact
    edges = np.searchsorted(r2, radii * radii, side="right")
    sums = np.where(edges > 0, partial[np.maximum(edges - 1, 0)], 0.0)
    return classify_partial_sums(radii, sums)


@dataclass(frozen=True, eq=False)
class PowerSchattenResult:
    alpha: float
    p: float
    q: float
    threshold_alpha: float
    predicted_member: bool
    classification: ClassifierResult
    partial_norms: np.ndarray


def power_schatten(
    seq: TorusSequence,
    alpha: float,
    p: float,
    start: int = DEFAULT_START,
    doublings: int | None = None,
    factor: int = 2,
) -> PowerSchattenResult:
    """Schatten-p evidence for the operator with eigenvalues (1+lambda_j)^{-alpha}.

    Membership holds iff alpha > dim/(p*order); the classifier runs on the
    q = alpha*p summability sum and must agree away from the threshold.
    """
    if alpha < 0 or p <= 0:
        raise ValueError(f"need alpha >= 0 and p > 0, got alpha={alpha}, p={p}")
    q = alpha * p
    res = summability_classify(seq, q, start=start, doublings=doublings, factor=factor)
    norms = res.partial_sums ** (1.0 / p)
    return PowerSchattenResult(
        alpha=alpha,
        p=p,
        q=q,
        threshold_alpha=seq.dim / (p * seq.order),
        predicted_member=alpha > seq.dim / (p * seq.order),
        classification=res,
        partial_norms=norms,
    )
