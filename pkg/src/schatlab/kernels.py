"""Kernel families on T^n x T^n and their truncated coefficient matrices.

A kernel K(x, y) = sum_{k,l} H[k,l] e^{i k.x} e^{i l.y} is represented by
the matrix of its double Fourier coefficients on a truncated lattice.
Convolution families K(x, y) = kappa(x - y) occupy the anti-diagonal
H[k, -k] = kappa_hat(k); they carry the sharpness studies and the
borderline counterexample family.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Union

import numpy as np

from .torus_fourier import FrequencyLattice, build_lattice

# Borderline convolution family: |c_k| = AMPLITUDE * k^{-1/2} up to
# DAMPING_START, then an extra (log k / log DAMPING_START)^{-2} factor so the
# modulus sequence stays square-summable while sum |c_k|^p diverges for every
# p < 2.  Phases are zero on the coherent head (a visible diagonal spike) and
# quadratic with a badly approximable step beyond it, which keeps the partial
# sums of the series uniformly bounded.
CARLEMAN_AMPLITUDE = 0.03
CARLEMAN_COHERENT_HEAD = 10_000
CARLEMAN_DAMPING_START = 1_000_000
CARLEMAN_PHASE_STEP = (np.sqrt(5.0) - 1.0) / 2.0

_U64 = np.uint64


@dataclass(frozen=True)
class ModeSum:
    """Finite explicit expansion: modes is a tuple of (k, l, value) triples.

    For dim=1 the indices k, l are integers; for dim=2 they are integer
    pairs.  Everything about this family is exact closed form.
    """

    modes: tuple
    dim: int = 1

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"unsupported dimension {self.dim}")
        for k, l, _ in self.modes:
            if self.dim == 1 and not (np.isscalar(k) and np.isscalar(l)):
                raise ValueError("dim=1 modes need integer indices")
            if self.dim == 2 and not (len(k) == 2 and len(l) == 2):
                raise ValueError("dim=2 modes need integer index pairs")


@dataclass(frozen=True)
class ConvPower:
    """Convolution kernel with symbol kappa_hat(k) = (1 + |k|)^{-a}."""

    a: float
    dim: int = 1

    def __post_init__(self):
        if self.a <= 0.5:
            raise ValueError(f"conv_power needs a > 1/2 for a square-summable symbol, got a={self.a}")
        if self.dim not in (1, 2):
            raise ValueError(f"unsupported dimension {self.dim}")


@dataclass(frozen=True)
class ConvTable:
    """Convolution kernel with an explicit finite symbol table.

    kappa_hat lists the coefficients for k = -K..K (odd length, centered).
    """

    kappa_hat: tuple
    dim: int = 1

    def __post_init__(self):
        if self.dim != 1:
            raise ValueError("conv_table is supported on T^1 only")
        if len(self.kappa_hat) % 2 != 1:
            raise ValueError("symbol table must have odd length (k = -K..K)")

    @property
    def table_cutoff(self) -> int:
        return (len(self.kappa_hat) - 1) // 2

    def table(self) -> np.ndarray:
        return np.asarray(self.kappa_hat, dtype=complex)


@dataclass(frozen=True)
class ProductRandom:
    """H[k,l] = eps_{k,l} (1+|k|)^{-a} (1+|l|)^{-b} with deterministic signs.

    The sign pattern is a pure function of (seed, k, l), so coefficient
    matrices are reproducible without storing them.
    """

    a: float
    b: float
    seed: int
    dim: int = 1

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"unsupported dimension {self.dim}")


@dataclass(frozen=True)
class RankOne:
    """The constant kernel K = 1: a single coefficient H[0,0] = 1."""

    dim: int = 1

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"unsupported dimension {self.dim}")


@dataclass(frozen=True)
class Carleman:
    """Borderline convolution family on T^1; see carleman_coefficients.

    p_demo is the exponent p < 2 featured by reports demonstrating the
    divergence of sum |c_k|^p.
    """

    p_demo: float = 1.0

    def __post_init__(self):
        if not 0 < self.p_demo < 2:
            raise ValueError(f"demo exponent must lie in (0, 2), got {self.p_demo}")

    @property
    def dim(self) -> int:
        return 1


@dataclass(frozen=True)
class DiagCorrupt:
    """Wrap a base kernel and overwrite its value on the diagonal x == y.

    The corruption lives on a measure-zero set, so coefficients and all
    spectral data agree with the base kernel exactly.
    """

    base: "KernelSpec"
    value: complex

    @property
    def dim(self) -> int:
        return self.base.dim


KernelSpec = Union[ModeSum, ConvPower, ConvTable, ProductRandom, RankOne, Carleman, DiagCorrupt]


def base_spec(spec: KernelSpec) -> KernelSpec:
    """Unwrap diagonal corruption; coefficients never see it."""
    while isinstance(spec, DiagCorrupt):
        spec = spec.base
    return spec


def is_convolution(spec: KernelSpec) -> bool:
    return isinstance(base_spec(spec), (ConvPower, ConvTable, RankOne, Carleman))


# ---------------------------------------------------------------------------
# deterministic signs for the product_random family


def _splitmix64(z: np.ndarray) -> np.ndarray:
    # uint64 arithmetic is modular by construction; silence the wrap warnings
    with np.errstate(over="ignore"):
        z = np.asarray(z, dtype=_U64) + _U64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
        return z ^ (z >> _U64(31))


def _fold_indices(acc: np.ndarray, indices: np.ndarray) -> np.ndarray:
    # two's-complement view of signed lattice indices, folded one axis at a time
    indices = np.asarray(indices)
    if indices.ndim == 1:
        indices = indices[:, None]
    for axis in range(indices.shape[1]):
        acc = _splitmix64(acc ^ indices[:, axis].astype(np.int64).view(_U64))
    return acc


def product_random_signs(seed: int, row_indices: np.ndarray, col_indices: np.ndarray) -> np.ndarray:
    """Matrix of +-1 values, a pure hash of (seed, k, l)."""
    seed_acc = _splitmix64(np.array(seed, dtype=np.int64).view(_U64))
    rows = _fold_indices(np.full(len(row_indices), seed_acc, dtype=_U64), row_indices)
    cols = _fold_indices(np.zeros(len(col_indices), dtype=_U64), col_indices)
    h = _splitmix64(rows[:, None] ^ cols[None, :])
    return 1.0 - 2.0 * (h >> _U64(63)).astype(np.float64)


# ---------------------------------------------------------------------------
# borderline coefficients


@functools.lru_cache(maxsize=4)
def carleman_coefficients(N: int) -> np.ndarray:
    """Coefficients c_k, k = 1..N, of the borderline convolution kernel.

    c_k = 0.03 * k^{-1/2} * A(k) * e^{i phi_k} with A(k) = 1 for
    k <= 10^6 and (log k / log 10^6)^{-2} beyond, phi_k = 0 for
    k <= 10^4 and pi * theta * k^2 mod 2*pi beyond (theta the golden-mean
    fractional part).  By construction sum |c_k|^2 < infinity while
    sum |c_k|^p diverges for every p < 2; bounded quadratic-phase sums
    keep the partial sums of the series uniformly bounded.
    """
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    k = np.arange(1, N + 1, dtype=np.int64)
    amp = CARLEMAN_AMPLITUDE / np.sqrt(k.astype(np.float64))
    damped = k > CARLEMAN_DAMPING_START
    if damped.any():
        amp[damped] *= (np.log(float(CARLEMAN_DAMPING_START)) / np.log(k[damped].astype(np.float64))) ** 2
    phase = np.zeros(N)
    chirp = k > CARLEMAN_COHERENT_HEAD
    if chirp.any():
        kk = k[chirp].astype(np.float64)
        phase[chirp] = np.pi * np.mod(CARLEMAN_PHASE_STEP * kk * kk, 2.0)
    out = amp * np.exp(1j * phase)
    out.setflags(write=False)
    return out


def carleman_power_sums(cutoffs, p: float) -> np.ndarray:
    """Partial sums sum_{k <= N} |c_k|^p at each requested cutoff N."""
    cutoffs = np.asarray(cutoffs, dtype=np.int64)
    c = carleman_coefficients(int(cutoffs.max()))
    partial = np.cumsum(np.abs(c) ** p)
    return partial[cutoffs - 1]


def carleman_sup_norms(cutoffs, resolution: int = 4096) -> np.ndarray:
    """sup over the grid of |sum_{k <= N} c_k e^{i k x}| for each cutoff N.

    The partial sum is evaluated on the uniform grid by folding k modulo the
    resolution, so the cost is one length-G transform per cutoff.
    """
    cutoffs = np.asarray(cutoffs, dtype=np.int64)
    c = carleman_coefficients(int(cutoffs.max()))
    ks = np.arange(1, int(cutoffs.max()) + 1, dtype=np.int64)
    sups = np.empty(len(cutoffs))
    for i, N in enumerate(cutoffs):
        folded_re = np.bincount(ks[:N] % resolution, weights=c[:N].real, minlength=resolution)
        folded_im = np.bincount(ks[:N] % resolution, weights=c[:N].imag, minlength=resolution)
        values = np.fft.ifft(folded_re + 1j * folded_im) * resolution
        sups[i] = np.max(np.abs(values))
    return sups


# ---------------------------------------------------------------------------
# symbols and coefficient matrices


def symbol_values(spec: KernelSpec, K: int) -> np.ndarray:
    """Convolution symbol kappa_hat(k) for k = -K..K on T^1."""
    spec = base_spec(spec)
    if not isinstance(spec, (ConvPower, ConvTable, RankOne, Carleman)):
        raise ValueError(f"{type(spec).__name__} is not a convolution family")
    if spec.dim != 1:
        raise ValueError("symbol tables are one-dimensional")
    ks = np.arange(-K, K + 1, dtype=np.int64)
    if isinstance(spec, ConvPower):
        return (1.0 + np.abs(ks)) ** (-spec.a) + 0j
    if isinstance(spec, RankOne):
        out = np.zeros(2 * K + 1, dtype=complex)
        out[K] = 1.0
        return out
    if isinstance(spec, ConvTable):
        out = np.zeros(2 * K + 1, dtype=complex)
        T = spec.table_cutoff
        m = min(T, K)
        out[K - m : K + m + 1] = spec.table()[T - m : T + m + 1]
        return out
    out = np.zeros(2 * K + 1, dtype=complex)
    if K >= 1:
        out[K + 1 :] = carleman_coefficients(K) if K >= 2 else [CARLEMAN_AMPLITUDE]
    return out


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    """Dense truncated coefficient matrix H[k,l] over a frequency lattice.

    hermitian records whether H[k,l] == conj(H[-k,-l]) exactly, the
    coefficient symmetry of real-valued kernels.
    """

    lattice: FrequencyLattice
    entries: np.ndarray
    hermitian: bool

    @property
    def cutoff(self) -> int:
        return self.lattice.cutoff


def _wrap_matrix(lattice: FrequencyLattice, entries: np.ndarray) -> CoefficientMatrix:
    if not np.all(np.isfinite(entries.view(np.float64))):
        raise ValueError("coefficient matrix has non-finite entries")
    hermitian = bool(np.array_equal(entries, np.conj(entries[::-1, ::-1])))
    entries.setflags(write=False)
    return CoefficientMatrix(lattice=lattice, entries=entries, hermitian=hermitian)


def coefficients(spec: KernelSpec, N: int) -> CoefficientMatrix:
    """Truncated coefficient matrix of the kernel family at cutoff N.

    Diagonal corruption is invisible here: it changes the kernel on a
    measure-zero set only, so the base family's coefficients are returned.
    """
    spec = base_spec(spec)
    lattice = build_lattice(spec.dim, N)
    L = len(lattice)
    entries = np.zeros((L, L), dtype=complex)

    if isinstance(spec, (ConvPower, RankOne)) and spec.dim == 2:
        norms = np.sqrt(lattice.eigenvalues().astype(np.float64))
        sym = np.zeros(L, dtype=complex)
        if isinstance(spec, ConvPower):
            sym[:] = (1.0 + norms) ** (-spec.a)
        else:
            sym[lattice.position((0, 0))] = 1.0
        # negating a lattice index reverses its lexicographic position
        entries[np.arange(L), L - 1 - np.arange(L)] = sym
        return _wrap_matrix(lattice, entries)

    if is_convolution(spec):
        sym = symbol_values(spec, N)
        entries[np.arange(L), L - 1 - np.arange(L)] = sym
        return _wrap_matrix(lattice, entries)

    if isinstance(spec, ModeSum):
        for k, l, value in spec.modes:
            kv = np.atleast_1d(np.asarray(k, dtype=np.int64))
            lv = np.atleast_1d(np.asarray(l, dtype=np.int64))
            if np.max(np.abs(kv)) > N or np.max(np.abs(lv)) > N:
                continue  # truncation drops modes beyond the cutoff
            entries[lattice.position(kv), lattice.position(lv)] += complex(value)
        return _wrap_matrix(lattice, entries)

    if isinstance(spec, ProductRandom):
        if spec.dim == 1:
            norms = np.abs(lattice.indices[:, 0]).astype(np.float64)
        else:
            norms = np.sqrt(lattice.eigenvalues().astype(np.float64))
        row = (1.0 + norms) ** (-spec.a)
        col = (1.0 + norms) ** (-spec.b)
        signs = product_random_signs(spec.seed, lattice.indices, lattice.indices)
        entries[:, :] = signs * np.outer(row, col)
        return _wrap_matrix(lattice, entries)

    raise ValueError(f"unsupported kernel family {type(spec).__name__}")


# ---------------------------------------------------------------------------
# pointwise evaluation


def _require_cutoff(spec: KernelSpec, series_cutoff) -> int:
    if series_cutoff is None:
        raise ValueError(
            f"{type(spec).__name__} has no closed form; pass series_cutoff for truncated evaluation"
        )
    return int(series_cutoff)


def _conv_series(sym: np.ndarray, K: int, z) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    ks = np.arange(-K, K + 1)
    out = np.zeros(z.shape, dtype=complex)
    for start in range(0, len(ks), 512):
        block = slice(start, start + 512)
        out += np.tensordot(sym[block], np.exp(1j * np.multiply.outer(ks[block], z)), axes=(0, 0))
    return out


def evaluate(spec: KernelSpec, x, y, series_cutoff: int | None = None):
    """K(x, y), vectorized over broadcastable x, y (coordinate pairs for dim=2).

    Families without a closed form (conv_power, carleman, product_random)
    are evaluated as truncated series and require series_cutoff.
    """
    if isinstance(spec, DiagCorrupt):
        base_vals = evaluate(spec.base, x, y, series_cutoff)
        if spec.dim == 1:
            on_diag = np.asarray(x) == np.asarray(y)
        else:
            on_diag = (np.asarray(x[0]) == np.asarray(y[0])) & (np.asarray(x[1]) == np.asarray(y[1]))
        return np.where(on_diag, complex(spec.value), base_vals)

    if isinstance(spec, RankOne):
        shape = np.broadcast(np.asarray(x if spec.dim == 1 else x[0]), np.asarray(y if spec.dim == 1 else y[0])).shape
        return np.ones(shape, dtype=complex)

    if isinstance(spec, ModeSum):
        if spec.dim == 1:
            xv, yv = np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)
            out = np.zeros(np.broadcast(xv, yv).shape, dtype=complex)
            for k, l, value in spec.modes:
                out += complex(value) * np.exp(1j * (k * xv + l * yv))
            return out
        x1, x2 = (np.asarray(c, dtype=np.float64) for c in x)
        y1, y2 = (np.asarray(c, dtype=np.float64) for c in y)
        out = np.zeros(np.broadcast(x1, y1).shape, dtype=complex)
        for k, l, value in spec.modes:
            out += complex(value) * np.exp(1j * (k[0] * x1 + k[1] * x2 + l[0] * y1 + l[1] * y2))
        return out

    if isinstance(spec, ConvTable):
        z = np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)
        return _conv_series(spec.table(), spec.table_cutoff, z)

    if isinstance(spec, (ConvPower, Carleman)) and getattr(spec, "dim", 1) == 1:
        K = _require_cutoff(spec, series_cutoff)
        z = np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)
        return _conv_series(symbol_values(spec, K), K, z)

    if isinstance(spec, ConvPower):  # dim == 2
        K = _require_cutoff(spec, series_cutoff)
        C = coefficients(spec, K)
        z1 = np.asarray(x[0], dtype=np.float64) - np.asarray(y[0], dtype=np.float64)
        z2 = np.asarray(x[1], dtype=np.float64) - np.asarray(y[1], dtype=np.float64)
        norms = np.sqrt(C.lattice.eigenvalues().astype(np.float64))
        sym = (1.0 + norms) ** (-spec.a)
        phases = np.multiply.outer(C.lattice.indices[:, 0], z1) + np.multiply.outer(C.lattice.indices[:, 1], z2)
        return np.tensordot(sym, np.exp(1j * phases), axes=(0, 0))

    if isinstance(spec, ProductRandom):
        K = _require_cutoff(spec, series_cutoff)
        C = coefficients(spec, K)
        idx = C.lattice.indices
        if spec.dim == 1:
            xv = np.atleast_1d(np.asarray(x, dtype=np.float64))
            yv = np.atleast_1d(np.asarray(y, dtype=np.float64))
            ex = np.exp(1j * np.multiply.outer(idx[:, 0], xv))
            ey = np.exp(1j * np.multiply.outer(idx[:, 0], yv))
        else:
            ex = np.exp(1j * (np.multiply.outer(idx[:, 0], np.atleast_1d(x[0])) + np.multiply.outer(idx[:, 1], np.atleast_1d(x[1]))))
            ey = np.exp(1j * (np.multiply.outer(idx[:, 0], np.atleast_1d(y[0])) + np.multiply.outer(idx[:, 1], np.atleast_1d(y[1]))))
        vals = np.einsum("kp,kl,lp->p", ex, C.entries, ey)
        return vals if vals.size > 1 else vals.reshape(()).item()

    raise ValueError(f"unsupported kernel family {type(spec).__name__}")


def diagonal_evaluate(spec: KernelSpec, x, series_cutoff: int | None = None):
    """K(x, x); for diagonal-corrupted kernels this is the corrupted value."""
    if isinstance(spec, DiagCorrupt):
        shape = np.asarray(x if spec.dim == 1 else x[0]).shape
        return np.full(shape, complex(spec.value))
    if is_convolution(spec):
        # the diagonal of a convolution kernel is the constant kappa(0)
        base = base_spec(spec)
        if isinstance(base, (ConvTable, RankOne)):
            value = complex(np.sum(symbol_values(base, max(1, getattr(base, "table_cutoff", 1)))))
        elif base.dim == 2:
            K = _require_cutoff(base, series_cutoff)
            k = np.arange(-K, K + 1, dtype=np.float64)
            value = complex(np.sum((1.0 + np.hypot(k[:, None], k[None, :])) ** (-base.a)))
        else:
            value = complex(np.sum(symbol_values(base, _require_cutoff(base, series_cutoff))))
        shape = np.asarray(x if spec.dim == 1 else x[0]).shape
        return np.full(shape, value)
    return evaluate(spec, x, x, series_cutoff)


# ---------------------------------------------------------------------------
# coefficient CSV files


def save_csv(C: CoefficientMatrix, path) -> None:
    """Write nonzero entries as CSV: k1[,k2],l1[,l2],re,im in index order."""
    dim = C.lattice.dim
    header = "k1,l1,re,im" if dim == 1 else "k1,k2,l1,l2,re,im"
    idx = C.lattice.indices
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for i in range(len(idx)):
            row = C.entries[i]
            for j in np.nonzero(row)[0]:
                value = row[j]
                cells = [str(int(v)) for v in idx[i]] + [str(int(v)) for v in idx[j]]
                cells += [repr(float(value.real)), repr(float(value.imag))]
                fh.write(",".join(cells) + "\n")


def load_csv(path) -> CoefficientMatrix:
    """Read a coefficient CSV; the cutoff is the largest index present."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header == "k1,l1,re,im":
            dim = 1
        elif header == "k1,k2,l1,l2,re,im":
            dim = 2
        else:
            raise ValueError(f"unrecognized header {header!r}")
        rows = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != 2 * dim + 2:
                raise ValueError(f"line {lineno}: expected {2 * dim + 2} fields, got {len(cells)}")
            try:
                idx = [int(c) for c in cells[: 2 * dim]]
                re, im = float(cells[-2]), float(cells[-1])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
            rows.append((idx, complex(re, im)))
    N = max((max(abs(v) for v in idx) for idx, _ in rows), default=0)
    lattice = build_lattice(dim, N)
    entries = np.zeros((len(lattice), len(lattice)), dtype=complex)
    for idx, value in rows:
        entries[lattice.position(idx[:dim]), lattice.position(idx[dim:])] = value
    return _wrap_matrix(lattice, entries)
