"""Discrete Fourier analysis on the torus T^n for n in {1, 2}.

Conventions: the torus is [0, 2*pi)^n with the normalized measure
dx / (2*pi)^n, so the characters e^{i k.x} form an orthonormal basis and
Parseval holds without constants.  Frequency lattices are truncated at a
max-norm cutoff N and enumerated in lexicographic order, which fixes the
matrix layouts used by every downstream module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class FrequencyLattice:
    """Truncated lattice of Laplacian frequencies on T^n.

    ``indices`` has shape (count, dim) with integer rows sorted
    lexicographically; the Laplacian eigenvalue of a row k is |k|^2.
    """

    dim: int
    cutoff: int
    indices: np.ndarray

    def __len__(self) -> int:
        return self.indices.shape[0]

    def eigenvalue(self, k) -> int:
        # integer arithmetic before any cast, so large cutoffs stay exact
        return int(sum(int(c) * int(c) for c in np.atleast_1d(k)))

    def eigenvalues(self) -> np.ndarray:
        return np.sum(self.indices.astype(np.int64) ** 2, axis=1)

    def position(self, k) -> int:
        """Row index of lattice point k in lexicographic order."""
        k = np.atleast_1d(k)
        side = 2 * self.cutoff + 1
        pos = 0
        for c in k:
            if abs(int(c)) > self.cutoff:
                raise ValueError(f"index {tuple(int(v) for v in k)} outside cutoff {self.cutoff}")
            pos = pos * side + (int(c) + self.cutoff)
        return pos


def build_lattice(n: int, N: int) -> FrequencyLattice:
    """All integer vectors of max-norm <= N in Z^n, lexicographic order."""
    if n not in (1, 2):
        raise ValueError(f"unsupported dimension {n}; only n in {{1, 2}}")
    if N < 0:
        raise ValueError(f"cutoff must be nonnegative, got {N}")
    axis = np.arange(-N, N + 1, dtype=np.int64)
    if n == 1:
        indices = axis[:, None]
    else:
        k1, k2 = np.meshgrid(axis, axis, indexing="ij")
        indices = np.column_stack([k1.ravel(), k2.ravel()])
    indices.setflags(write=False)
    return FrequencyLattice(dim=n, cutoff=N, indices=indices)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a function on the uniform G^n grid of [0, 2*pi)^n."""

    dim: int
    resolution: int
    samples: np.ndarray


def grid_coordinates(n: int, G: int):
    """Grid coordinates: a 1-d array for n=1, an (X, Y) meshgrid pair for n=2."""
    if n not in (1, 2):
        raise ValueError(f"unsupported dimension {n}")
    x = np.arange(G) * (TWO_PI / G)
    if n == 1:
        return x
    return np.meshgrid(x, x, indexing="ij")


def sample(fn, n: int, G: int) -> GridFunction:
    """Sample a vectorized function of grid coordinates into a GridFunction."""
    coords = grid_coordinates(n, G)
    values = fn(coords) if n == 1 else fn(*coords)
    samples = np.asarray(values, dtype=complex)
    expected = (G,) if n == 1 else (G, G)
    if samples.shape != expected:
        raise ValueError(f"sampled shape {samples.shape}, expected {expected}")
    return GridFunction(dim=n, resolution=G, samples=samples)


def _check_resolution(f: GridFunction, L: FrequencyLattice) -> None:
    if f.dim != L.dim:
        raise ValueError(f"grid dimension {f.dim} does not match lattice dimension {L.dim}")
    if f.resolution < 2 * L.cutoff + 1:
        raise ValueError(
            f"resolution {f.resolution} aliases cutoff {L.cutoff}; need G >= 2N+1"
        )


def forward(f: GridFunction, L: FrequencyLattice) -> np.ndarray:
    """Fourier coefficients f_hat(k) = int f(x) e^{-ik.x} dnu(x) for k in L.

    Exact (up to rounding) for band-limited inputs, by the standard fact
    that the trapezoidal rule integrates trigonometric polynomials of
    degree < G exactly.
    """
    _check_resolution(f, L)
    G = f.resolution
    if L.dim == 1:
        spec = np.fft.fft(f.samples) / G
        ks = L.indices[:, 0]
        return spec[np.mod(ks, G)]
    spec = np.fft.fft2(f.samples) / G**2
    return spec[np.mod(L.indices[:, 0], G), np.mod(L.indices[:, 1], G)]


def inverse(coeffs: np.ndarray, L: FrequencyLattice, resolution: int | None = None) -> GridFunction:
    """Synthesize sum_k coeffs[k] e^{i k.x} on a G^n grid (default G = 2N+1)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (len(L),):
        raise ValueError(f"expected {len(L)} coefficients, got shape {coeffs.shape}")
    G = resolution if resolution is not None else 2 * L.cutoff + 1
    if G < 2 * L.cutoff + 1:
        raise ValueError(f"resolution {G} aliases cutoff {L.cutoff}; need G >= 2N+1")
    if L.dim == 1:
        spec = np.zeros(G, dtype=complex)
        np.add.at(spec, np.mod(L.indices[:, 0], G), coeffs)
        samples = np.fft.ifft(spec) * G
    else:
        spec = np.zeros((G, G), dtype=complex)
        np.add.at(spec, (np.mod(L.indices[:, 0], G), np.mod(L.indices[:, 1], G)), coeffs)
        samples = np.fft.ifft2(spec) * G**2
    return GridFunction(dim=L.dim, resolution=G, samples=samples)


def plancherel_check(f: GridFunction, L: FrequencyLattice) -> tuple[float, float]:
    """(quadrature ||f||_{L^2}^2, sum |f_hat(k)|^2); equal for band-limited f."""
    _check_resolution(f, L)
    lhs = float(np.mean(np.abs(f.samples) ** 2))
    coeffs = forward(f, L)
    rhs = float(np.sum(np.abs(coeffs) ** 2))
    return lhs, rhs
