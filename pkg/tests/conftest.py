import numpy as np
import pytest

from chebshock import spectral


TOPHAT_LO, TOPHAT_HI = -0.7, -0.2


def tophat(x, lo=TOPHAT_LO, hi=TOPHAT_HI):
    return ((np.asarray(x) > lo) & (np.asarray(x) < hi)).astype(float)


def tophat_projection_modal(order, lo=TOPHAT_LO, hi=TOPHAT_HI):
    """Exact Chebyshev series coefficients of the tophat, truncated.

    With x = cos(theta) the indicator of (lo, hi) becomes the indicator of
    (arccos(hi), arccos(lo)) in theta and the coefficients integrate in
    closed form.  Serves as the projection-side oracle, as opposed to the
    interpolation coefficients produced by analyze().
    """
    th_lo, th_hi = np.arccos(lo), np.arccos(hi)  # th_lo > th_hi
    k = np.arange(1, order + 1)
    c = np.empty(order + 1)
    c[0] = (th_lo - th_hi) / np.pi
    c[1:] = (2.0 / (np.pi * k)) * (np.sin(k * th_lo) - np.sin(k * th_hi))
    return c


def naive_chebvals(order, x):
    """cos(n arccos x) evaluation table, the test-only oracle for T_n."""
    x = np.asarray(x, dtype=float)
    n = np.arange(order + 1)
    return np.cos(n[None, :] * np.arccos(np.clip(x, -1, 1))[:, None])


@pytest.fixture(scope="session")
def grid60():
    return spectral.build_grid(60)


@pytest.fixture(scope="session")
def tophat_field60(grid60):
    return spectral.SpectralField.from_nodal(grid60, tophat(grid60.nodes))


@pytest.fixture(scope="session")
def tophat_modal60():
    return tophat_projection_modal(60)
