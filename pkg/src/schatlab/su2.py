"""Symbol-level Schatten analysis on SU(2) (equivalently S^3) and SO(3).

Left-invariant operators are diagonal on the Peter-Weyl basis, so their
spectra are read directly off symbol eigenvalue lists: for each dual
point ell the symbol contributes 2*ell+1 eigenvalues, each carried with
multiplicity 2*ell+1 (one per matrix-coefficient row).  SU(2) runs over
half-integer ell, SO(3) over integers; both share the alpha*p > 4
membership threshold for the sub-Laplacian and the Schroedinger family.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import powers

GROUPS = ("su2", "so3")
SCHATTEN_THRESHOLD = 4.0  # alpha * p must exceed this on SU(2)/SO(3)
ORACLE_MAX_ELL = 50


def _check_ell(ell: float) -> float:
    two_ell = 2.0 * ell
    if ell < 0 or two_ell != int(two_ell):
        raise ValueError(f"ell must be a nonnegative half-integer, got {ell}")
    return float(ell)


@dataclass(frozen=True)
class DualPoint:
    """One irreducible representation: ell, its dimension, its Laplacian eigenvalue."""

    ell: float

    def __post_init__(self):
        _check_ell(self.ell)

    @property
    def dimension(self) -> int:
        return int(round(2.0 * self.ell)) + 1

    @property
    def laplace_eig(self) -> float:
        return self.ell * (self.ell + 1.0)


def dual_ells(group: str, l_max: float) -> np.ndarray:
    """All ell values of the group's dual with ell <= l_max, ascending."""
    if group not in GROUPS:
        raise ValueError(f"unknown group {group!r}; expected one of {GROUPS}")
    if group == "su2":
        return np.arange(0, int(2 * l_max) + 1, dtype=np.int64) / 2.0
    return np.arange(0, int(l_max) + 1, dtype=np.int64).astype(np.float64)


def dual_points(group: str, l_max: float) -> list[DualPoint]:
    return [DualPoint(ell=float(e)) for e in dual_ells(group, l_max)]


def _m_values(ell: float) -> np.ndarray:
    ell = _check_ell(ell)
    return np.arange(int(round(2 * ell)) + 1, dtype=np.float64) - ell


def sublaplacian_symbol(ell: float) -> np.ndarray:
    """Eigenvalues ell(ell+1) - m^2 of minus the sub-Laplacian, m = -ell..ell."""
    m = _m_values(ell)
    return ell * (ell + 1.0) - m * m


def hgamma_symbol(gamma: float, ell: float, z_sign: int = -1) -> np.ndarray:
    """Eigenvalues gamma*(ell(ell+1) - m^2) + z_sign*m of the Schroedinger family.

    z_sign fixes the sign convention of the vertical field; the default -1
    reproduces at gamma=1 the characterization set ell(ell+1) - m(m+1).
    Flipping it permutes m <-> -m and changes no membership verdict.
    """
    if gamma <= 0:
        raise ValueError(f"need gamma > 0, got {gamma}")
    if z_sign not in (-1, 1):
        raise ValueError(f"z_sign must be -1 or +1, got {z_sign}")
    m = _m_values(ell)
    return gamma * (ell * (ell + 1.0) - m * m) + z_sign * m


def hgamma_matrix_oracle(gamma: float, ell: float, z_sign: int = -1) -> np.ndarray:
    """Independent check: diagonalize z_sign*J_z + gamma*(J_x^2 + J_y^2).

    Builds the (2*ell+1)-dimensional angular momentum matrices with the
    standard ladder coefficients and returns sorted eigenvalues; matches
    sorted hgamma_symbol to solver precision.
    """
    ell = _check_ell(ell)
    if ell > ORACLE_MAX_ELL:
        raise ValueError(f"oracle supports ell <= {ORACLE_MAX_ELL}, got {ell}")
    if gamma <= 0:
        raise ValueError(f"need gamma > 0, got {gamma}")
    d = int(round(2 * ell)) + 1
    m_desc = ell - np.arange(d, dtype=np.float64)  # basis order m = ell..-ell
    jz = np.diag(m_desc)
    raise_m = m_desc[1:]  # J_+ maps |m> to |m+1>: one step up the basis
    jp = np.diag(np.sqrt(ell * (ell + 1.0) - raise_m * (raise_m + 1.0)), 1)
    jm = jp.T.copy()
    jx = (jp + jm) / 2.0
    jy = (jp - jm) / 2.0j
    H = z_sign * jz + gamma * (jx @ jx + jy @ jy)
    try:
        return np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"diagonalization failed for ell={ell}: {exc}") from exc


# ---------------------------------------------------------------------------
# Schatten classification of inverse powers


@dataclass(frozen=True, eq=False)
class InvariantPowerResult:
    operator: str
    group: str
    alpha: float
    p: float
    gamma: float | None
    predicted_member: bool
    classification: powers.ClassifierResult


def _ell_ladder(l_max: int) -> np.ndarray:
    doublings = 0
    while (l_max >> (doublings + 1)) >= 8:
        doublings += 1
    if doublings < powers.RATIO_WINDOW + 1:
        raise ValueError(f"need l_max >= 128 for a usable cutoff ladder, got {l_max}")
    return np.array([l_max >> (doublings - i) for i in range(doublings + 1)], dtype=np.int64)


def invariant_power_schatten(
    operator: str,
    alpha: float,
    p: float,
    group: str = "su2",
    gamma: float | None = None,
    l_max: int = 512,
    z_sign: int = -1,
) -> InvariantPowerResult:
    """Classify sum over the dual of (2l+1) * |1 + sigma(l,m)|^{-alpha*p/2}.

    These are the Schatten-p partial sums of (I + E)^{-alpha/2} for the
    invariant operator E with symbol sigma; on SU(2)/SO(3) membership
    holds iff alpha*p > 4 for both operators handled here.
    """
    if operator not in ("sublaplacian", "hgamma"):
        raise ValueError(f"unknown operator {operator!r}")
    if alpha < 0 or p <= 0:
        raise ValueError(f"need alpha >= 0 and p > 0, got alpha={alpha}, p={p}")
    if operator == "hgamma":
        if gamma is None or gamma <= 1:
            raise ValueError("the Schroedinger family needs gamma > 1 (global hypoellipticity)")
    elif gamma is not None:
        raise ValueError("gamma applies to the Schroedinger family only")
    ladder = _ell_ladder(int(l_max))
    ells = dual_ells(group, float(l_max))
    q_half = alpha * p / 2.0
    terms = np.empty(len(ells))
    for i, ell in enumerate(ells):
        if operator == "sublaplacian":
            sigma = sublaplacian_symbol(float(ell))
        else:
            sigma = hgamma_symbol(gamma, float(ell), z_sign)
        terms[i] = (2.0 * ell + 1.0) * np.sum(np.abs(1.0 + sigma) ** (-q_half))
    partial = np.cumsum(terms)
    edges = np.searchsorted(ells, ladder.astype(np.float64), side="right")
    cls = powers.classify_partial_sums(ladder, partial[edges - 1])
    return InvariantPowerResult(
        operator=operator,
        group=group,
        alpha=alpha,
        p=p,
        gamma=gamma,
        predicted_member=alpha * p > SCHATTEN_THRESHOLD,
        classification=cls,
    )


# ---------------------------------------------------------------------------
# kernel thresholds and hypoellipticity


@dataclass(frozen=True)
class GroupThresholds:
    general: float
    refined: float
    sharper: str

    @property
    def best(self) -> float:
        return min(self.general, self.refined)


def kernel_membership_threshold_group(n: int, mu1: float, mu2: float) -> GroupThresholds:
    """Both membership thresholds for kernels on a group: 2n/(n + mu) in
    general and the SU(2)/SO(3) refinement 4/(2 + mu), mu = mu1 + mu2."""
    if n != 3:
        raise ValueError(f"group thresholds are instantiated for n = 3 only, got {n}")
    if mu1 < 0 or mu2 < 0:
        raise ValueError(f"orders must be nonnegative, got ({mu1}, {mu2})")
    mu = mu1 + mu2
    general = 2.0 * n / (n + mu)
    refined = 4.0 / (2.0 + mu)
    return GroupThresholds(
        general=general,
        refined=refined,
        sharper="refined" if refined < general else "equal",
    )


@dataclass(frozen=True)
class HypoellipticityResult:
    passed: bool
    witness: tuple[int, int] | None
    certified: bool


def hypoellipticity_check(c, L_max: int) -> HypoellipticityResult:
    """Is 0 outside {c + l(l+1) - m(m+1) : l >= 1, |m| <= l}?

    Exact rational arithmetic: the shift l(l+1) - m(m+1) = (l-m)(l+m+1)
    ranges over exactly the nonnegative even integers, so the answer is
    certified for all l, not just the scanned range.  Failures return the
    smallest witness found by scanning l <= L_max (m >= 0 suffices: m and
    -m-1 give the same shift), or a constructed one beyond it.
    """
    if L_max < 1:
        raise ValueError(f"need L_max >= 1, got {L_max}")
    c = Fraction(c)
    K = -c
    failing = K >= 0 and K.denominator == 1 and K.numerator % 2 == 0
    if not failing:
        return HypoellipticityResult(passed=True, witness=None, certified=True)
    for ell in range(1, L_max + 1):
        shift_base = ell * (ell + 1)
        for m in range(0, ell + 1):
            if c + (shift_base - m * (m + 1)) == 0:
                return HypoellipticityResult(passed=False, witness=(ell, m), certified=True)
    k_int = K.numerator
    witness = (1, 1) if k_int == 0 else (k_int // 2, k_int // 2 - 1)
    return HypoellipticityResult(passed=False, witness=witness, certified=True)
