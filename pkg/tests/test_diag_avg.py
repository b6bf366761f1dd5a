"""Dyadic cell averaging and the corruption-robust trace."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schatlab import diag_avg as da
from schatlab import kernels as kn
from schatlab import spectral as sp

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# cells


@settings(max_examples=60, deadline=None)
@given(st.floats(-20.0, 20.0), st.integers(0, 12))
def test_cell_center_lies_in_its_own_cell(x, j):
    i = da.cell_index(x, j)
    assert 0 <= i < (1 << j)
    assert da.cell_index(da.cell_center(i, j), j) == i


def test_cell_index_wraps_modulo_two_pi():
    assert da.cell_index(0.1, 3) == da.cell_index(0.1 + TWO_PI, 3)
    assert da.cell_index(0.0, 0) == 0


def test_cell_level_validation():
    with pytest.raises(ValueError):
        da.cell_index(0.0, -1)
    with pytest.raises(ValueError):
        da.cell_index(0.0, da.MAX_LEVEL + 1)


# ---------------------------------------------------------------------------
# averages


def test_average_of_constant_kernel_is_the_constant():
    spec = kn.RankOne()
    for j in (0, 3, 8):
        assert da.average_kernel(spec, j, 0.7, 2.1) == pytest.approx(1.0)


def test_closed_average_matches_quadrature_average():
    spec = kn.ConvTable(kappa_hat=(0.25, 0.5, 1.0, 0.5, 0.25))
    for j in (2, 5):
        closed = da.average_kernel(spec, j, 1.0, 2.0)
        quad = da.average_kernel(spec, j, 1.0, 2.0, quadrature=True)
        assert closed == pytest.approx(quad, abs=1e-12)


def test_average_converges_to_smooth_diagonal():
    spec = kn.ConvTable(kappa_hat=(0.5, 1.0, 0.5))
    x = 1.234
    exact = complex(np.asarray(kn.diagonal_evaluate(spec, x)).item())
    errors = [abs(da.average_kernel(spec, j, x, x) - exact) for j in (4, 8, 12)]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 1e-6


def test_average_ignores_measure_zero_corruption():
    base = kn.ConvTable(kappa_hat=(0.5, 1.0, 0.5))
    wrapped = kn.DiagCorrupt(base=base, value=99.0)
    for j in (3, 10):
        a = da.average_kernel(base, j, 0.5, 0.5)
        b = da.average_kernel(wrapped, j, 0.5, 0.5)
        assert a == b


def test_averaged_diagonal_constant_for_convolution():
    spec = kn.ConvPower(a=1.2)
    diag = da.averaged_diagonal(spec, 10, 64, series_cutoff=256)
    assert np.allclose(diag.samples, diag.samples[0])


def test_averaging_rejects_2d_kernels():
    with pytest.raises(ValueError):
        da.average_kernel(kn.ConvPower(a=2.0, dim=2), 3, 0.0, 0.0, series_cutoff=8)


def test_averaging_requires_cutoff_for_series_families():
    with pytest.raises(ValueError):
        da.average_kernel(kn.ConvPower(a=2.0), 3, 0.0, 0.0)


# ---------------------------------------------------------------------------
# traces


def test_trace_averaged_matches_eigensum_smooth():
    spec = kn.ConvPower(a=1.2)
    N = 1024
    eig = float(np.sum((1.0 + np.abs(np.arange(-N, N + 1))) ** -1.2))
    avg = da.trace_averaged(spec, 18, 64, series_cutoff=N)
    assert complex(avg) == pytest.approx(eig, abs=1e-4)


def test_trace_averaged_recovers_corrupted_trace():
    base = kn.ConvTable(kappa_hat=(0.5, 1.0, 0.5))
    spec = kn.DiagCorrupt(base=base, value=99.0)
    eig = sp.trace_eigensum(sp.operator_matrix(kn.coefficients(spec, 1)))
    naive = sp.trace_quadrature(spec, 64)
    avg = da.trace_averaged(spec, 18, 64)
    assert eig == pytest.approx(2.0)
    assert complex(naive) == pytest.approx(99.0)
    assert abs(complex(avg) - 2.0) < 1e-8


def test_trace_averaged_mode_sum_closed_form():
    # single mode k=-l=2: the diagonal phase cancels, leaving only the
    # two cell-mean sinc factors at width h = 2*pi/2^12
    spec = kn.ModeSum(modes=((2, -2, 0.7),))
    avg = da.trace_averaged(spec, 12, 128)
    assert complex(avg) == pytest.approx(0.7 * np.sinc(2.0 / 4096.0) ** 2, rel=1e-10)
