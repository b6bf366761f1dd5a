"""Figure rendering for the command-line reports.

Every function draws one diagnostic figure for a report path, writes it to
the requested file (PNG at 150 dpi unless the suffix says otherwise), and
returns the path.  The Agg backend is forced before pyplot loads so the
renders work headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .powers import ClassifierResult, WeylTrend
from .spectral import SpectralSummary

DPI = 150


def _save(fig, path: str) -> str:
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    plt.close(fig)
    return str(path)


def spectral_figure(summary: SpectralSummary, path: str, label: str = "kernel") -> str:
    """Log-log singular value decay, with the fitted tail power overlaid."""
    s = np.asarray(summary.singular_values)
    j = np.arange(1, len(s) + 1)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    pos = s > 0
    ax.loglog(j[pos], s[pos], ".", ms=3, label=f"singular values ({label})")
    if summary.tail_beta is not None and pos.any():
        jj = j[pos][len(j[pos]) // 4 :]
        anchor = s[pos][len(j[pos]) // 4]
        fit = anchor * (jj / jj[0]) ** (-summary.tail_beta)
        ax.loglog(jj, fit, "-", lw=1.2, label=f"tail fit: j^(-{summary.tail_beta:.3f})")
    ax.set_xlabel("index j")
    ax.set_ylabel("singular value")
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def classifier_figure(
    result: ClassifierResult, path: str, title: str = "partial sums"
) -> str:
    """Partial sums against cutoffs (log-log) plus the increment ratios."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    cutoffs = np.asarray(result.cutoffs, dtype=np.float64)
    sums = np.asarray(result.partial_sums)
    pos = sums > 0
    ax1.loglog(cutoffs[pos], sums[pos], "o-", ms=4)
    ax1.set_xlabel("cutoff")
    ax1.set_ylabel("partial sum")
    ax1.set_title(f"{title} [{result.verdict}]")
    ratios = np.asarray(result.ratios)
    finite = np.isfinite(ratios)
    # ratios[i] compares increments ending at cutoffs[i+2]
    ratio_x = cutoffs[cutoffs.size - ratios.size :]
    ax2.semilogx(ratio_x[finite], ratios[finite], "s-", ms=4)
    ax2.axhline(1.0, color="gray", lw=0.8, ls="--")
    ax2.set_xlabel("cutoff")
    ax2.set_ylabel("increment ratio")
    ax2.set_title(f"growth exponent {result.growth_exponent:.3f}")
    fig.tight_layout()
    return _save(fig, path)


def trace_figure(
    levels: np.ndarray, averaged: np.ndarray, eigensum: float, path: str
) -> str:
    """Averaged-diagonal traces per dyadic level against the eigenvalue sum."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    err = np.abs(np.asarray(averaged) - eigensum)
    floor = max(np.max(err), 1.0) * 1e-17
    ax.semilogy(levels, np.maximum(err, floor), "o-", ms=4)
    ax.set_xlabel("dyadic level j")
    ax.set_ylabel("|averaged trace - eigenvalue sum|")
    ax.set_title(f"trace comparison (eigenvalue sum {eigensum:.6g})")
    fig.tight_layout()
    return _save(fig, path)


def weyl_figure(trend: WeylTrend, path: str, label: str = "sequence") -> str:
    """Running maximum of the normalized counting function along the grid."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.semilogx(trend.lam_grid, trend.running_max, "o-", ms=4, label=label)
    ax.set_xlabel("eigenvalue threshold")
    ax.set_ylabel("running max of normalized count")
    ax.set_title(f"log-log slope of running max: {trend.slope:.4f}")
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def carleman_figure(
    cutoffs: np.ndarray,
    sup_norms: np.ndarray,
    power_sums: np.ndarray,
    p: float,
    path: str,
) -> str:
    """Sup-norm stabilization next to the diverging coefficient power sums."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    ax1.semilogx(cutoffs, sup_norms, "o-", ms=4)
    ax1.set_xlabel("coefficient cutoff")
    ax1.set_ylabel("sup |partial sum|")
    ax1.set_title("uniform norms (stabilizing)")
    ax2.loglog(cutoffs, power_sums, "s-", ms=4, color="C1")
    ax2.set_xlabel("coefficient cutoff")
    ax2.set_ylabel(f"sum of |c_k|^{p:g}")
    ax2.set_title(f"power sums at p = {p:g} (diverging)")
    fig.tight_layout()
    return _save(fig, path)
