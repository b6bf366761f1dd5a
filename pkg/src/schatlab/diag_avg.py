"""Dyadic averaging of kernels on T^1 x T^1 and the averaged-diagonal trace.

Level j partitions [0, 2*pi) into 2^j half-open arcs anchored at 0.  The
averaged kernel at (x, y) is the mean of K over the cell pair containing
(x, y); cell means are integrals, so anything supported on a measure-zero
set (like a corrupted diagonal) cannot register, which is exactly what
rescues the trace formula for such kernels.  Averaging is supported on
T^1 only; the two-variable quadrature cost rules T^2 out here.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .kernels import KernelSpec
from .torus_fourier import TWO_PI, GridFunction

MAX_LEVEL = 24
GAUSS_POINTS = 32


def _check_level(j: int) -> None:
    if not 0 <= j <= MAX_LEVEL:
        raise ValueError(f"level must lie in [0, {MAX_LEVEL}], got {j}")


def cell_index(x: float, j: int) -> int:
    """Index of the level-j arc containing x."""
    _check_level(j)
    cells = 1 << j
    return int(np.floor((x % TWO_PI) / (TWO_PI / cells))) % cells


def cell_center(i: int, j: int) -> float:
    return TWO_PI * (i + 0.5) / (1 << j)


def _cell_factor(ks: np.ndarray, h: float) -> np.ndarray:
    """Mean of e^{ikx} over an arc of width h, relative to its center phase.

    Equals sin(kh/2)/(kh/2); np.sinc carries the pi convention.
    """
    return np.sinc(np.asarray(ks, dtype=np.float64) * h / TWO_PI)


def _mode_data(spec: KernelSpec, series_cutoff):
    """(ks, ls, coeffs) arrays of the (possibly truncated) mode expansion."""
    base = kernels.base_spec(spec)
    if isinstance(base, kernels.ModeSum):
        if base.dim != 1:
            raise ValueError("averaging is supported on T^1 only")
        ks = np.array([k for k, _, _ in base.modes], dtype=np.int64)
        ls = np.array([l for _, l, _ in base.modes], dtype=np.int64)
        coeffs = np.array([v for _, _, v in base.modes], dtype=complex)
        return ks, ls, coeffs
    if kernels.is_convolution(base):
        if base.dim != 1:
            raise ValueError("averaging is supported on T^1 only")
        if isinstance(base, kernels.ConvTable):
            K = base.table_cutoff
        elif isinstance(base, kernels.RankOne):
            K = 0
        else:
            if series_cutoff is None:
                raise ValueError(f"{type(base).__name__} needs series_cutoff for averaging")
            K = int(series_cutoff)
        K = max(K, 1)
        sym = kernels.symbol_values(base, K)
        ks = np.arange(-K, K + 1, dtype=np.int64)
        return ks, -ks, sym
    if isinstance(base, kernels.ProductRandom):
        if base.dim != 1:
            raise ValueError("averaging is supported on T^1 only")
        if series_cutoff is None:
            raise ValueError("product_random needs series_cutoff for averaging")
        C = kernels.coefficients(base, int(series_cutoff))
        idx = C.lattice.indices[:, 0]
        kk, ll = np.meshgrid(idx, idx, indexing="ij")
        return kk.ravel(), ll.ravel(), C.entries.ravel().copy()
    raise ValueError(f"unsupported kernel family {type(base).__name__}")


def _closed_average(spec, j, centers_x, centers_y, series_cutoff):
    h = TWO_PI / (1 << j)
    ks, ls, coeffs = _mode_data(spec, series_cutoff)
    damped = coeffs * _cell_factor(ks, h) * _cell_factor(ls, h)
    phases = np.multiply.outer(ks, np.asarray(centers_x, dtype=np.float64)) + np.multiply.outer(
        ls, np.asarray(centers_y, dtype=np.float64)
    )
    return np.tensordot(damped, np.exp(1j * phases), axes=(0, 0))


def _quadrature_average(spec, j, cx, cy, series_cutoff):
    h = TWO_PI / (1 << j)
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_POINTS)
    xq = cx + nodes * h / 2.0
    yq = cy + nodes * h / 2.0
    X, Y = np.meshgrid(xq, yq, indexing="ij")
    # means are integrals: strip measure-zero corruption before evaluating
    values = kernels.evaluate(kernels.base_spec(spec), X, Y, series_cutoff)
    w2 = np.outer(weights, weights) / 4.0  # leggauss weights sum to 2 per axis
    return complex(np.sum(w2 * values))


def average_kernel(spec: KernelSpec, j: int, x: float, y: float, series_cutoff: int | None = None, quadrature: bool = False) -> complex:
    """Mean of K over the level-j cell pair containing (x, y).

    Closed form through the mode expansion by default; quadrature=True
    forces the 32-point Gauss rule per cell per axis instead.
    """
    _check_level(j)
    cx = cell_center(cell_index(x, j), j)
    cy = cell_center(cell_index(y, j), j)
    if quadrature:
        return _quadrature_average(spec, j, cx, cy, series_cutoff)
    return complex(_closed_average(spec, j, [cx], [cy], series_cutoff)[0])


def averaged_diagonal(spec: KernelSpec, j_max: int, G: int, series_cutoff: int | None = None) -> GridFunction:
    """Level-j_max cell average at (x, x) for every grid point x.

    For kernels continuous at the diagonal this converges to the true
    diagonal at rate O(2^{-j_max}); for corrupted ones it recovers the
    base kernel's diagonal.
    """
    _check_level(j_max)
    if G < 1:
        raise ValueError(f"need G >= 1, got {G}")
    cells = (np.arange(G, dtype=np.int64) * (1 << j_max)) // G  # exact cell of 2*pi*g/G
    centers = TWO_PI * (cells.astype(np.float64) + 0.5) / (1 << j_max)
    base = kernels.base_spec(spec)
    if kernels.is_convolution(base):
        # the averaged diagonal of a convolution kernel is cell-independent
        h = TWO_PI / (1 << j_max)
        ks, _, coeffs = _mode_data(base, series_cutoff)
        value = complex(np.sum(coeffs * _cell_factor(ks, h) ** 2))
        samples = np.full(G, value, dtype=complex)
    else:
        uniq, inverse = np.unique(centers, return_inverse=True)
        samples = _closed_average(spec, j_max, uniq, uniq, series_cutoff)[inverse]
    return GridFunction(dim=1, resolution=G, samples=samples)


def trace_averaged(spec: KernelSpec, j_max: int, G: int, series_cutoff: int | None = None) -> complex:
    """Normalized quadrature of the averaged diagonal: the robust trace."""
    diag = averaged_diagonal(spec, j_max, G, series_cutoff)
    return complex(np.mean(diag.samples))
