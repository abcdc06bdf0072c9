"""Spectral edge detection and smoothness classification.

Jump-function approximations from concentration factors applied to the
modal coefficients, their minmod combination, peak search with relative
and absolute thresholds, smoothness classification by the convergence
slope of downsampled minmod peak heights, and rejection of spurious
peaks by Gaussian smoothing of the minmod profile.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy import integrate, signal, special

from . import spectral
from ._kernels import cheb_der_eval_many

SI_PI = float(special.sici(np.pi)[0])  # integral of sin(t)/t over [0, pi]


class FactorFamily(str, Enum):
    TRIGONOMETRIC = "Trigonometric"
    POLYNOMIAL = "Polynomial"
    EXPONENTIAL = "Exponential"


@dataclass(frozen=True, eq=False)
class ConcentrationFactor:
    """One concentration factor mu(k/N), possibly Lanczos filtered.

    Every factor is scaled to unit jump response, i.e. the integral of
    mu over (0, 1] equals 1, so each jump approximation estimates the
    same jump height and their minmod retains it.  The one exception is
    the unfiltered trigonometric factor pi*sin(pi*eta)/Si(pi), kept in
    its textbook form (its jump response is 2/Si(pi), about 8% above 1).
    """

    family: FactorFamily
    lanczos_order: int
    values: Callable[[np.ndarray], np.ndarray]

    @property
    def label(self):
        return f"{self.family.value}-l{self.lanczos_order}"


def _trig_shape(eta):
    return np.pi * np.sin(np.pi * eta) / SI_PI


def _poly_shape(eta, degree):
    return degree * np.pi * eta**degree


def _exp_shape(eta):
    eta = np.asarray(eta, dtype=float)
    out = np.zeros_like(eta)
    inner = (eta > 0.0) & (eta < 1.0)
    g = 6.0 * eta[inner] * (eta[inner] - 1.0)
    out[inner] = eta[inner] * np.exp(1.0 / g)
    return out


def _lanczos_power(eta, order):
    return np.sinc(eta) ** order if order else np.ones_like(np.asarray(eta, float))


@functools.lru_cache(maxsize=None)
def build_concentration_factors(poly_degree: int = 1) -> tuple:
    """The 3 factor families crossed with Lanczos filter orders 0..3."""
    shapes = {
        FactorFamily.TRIGONOMETRIC: _trig_shape,
        FactorFamily.POLYNOMIAL: lambda eta: _poly_shape(eta, poly_degree),
        FactorFamily.EXPONENTIAL: _exp_shape,
    }
    factors = []
    for family, shape in shapes.items():
        for ell in range(4):
            raw = lambda eta, s=shape, l=ell: s(eta) * _lanczos_power(eta, l)
            if family is FactorFamily.TRIGONOMETRIC and ell == 0:
                scale = 1.0
            else:
                mass, _ = integrate.quad(lambda t: float(raw(np.array([t]))[0]), 0.0, 1.0)
                scale = 1.0 / mass
            factors.append(
                ConcentrationFactor(
                    family, ell, lambda eta, r=raw, c=scale: c * r(eta)
                )
            )
    return tuple(factors)


def jump_approx(modal, factor: ConcentrationFactor, abscissae, endpoint_mode="zero"):
    """Jump function approximation j_mu on the given abscissae.

    j_mu(x) = (pi sqrt(1-x^2) / N) sum_{k=1..N} mu(k/N) u_k T'_k(x).
    Abscissae must lie in [-1, 1]; at exactly +-1 the prefactor vanishes
    and the value is 0 by default (endpoint_mode="reject" raises instead).
    """
    rows = jump_approx_many(modal, (factor,), abscissae, endpoint_mode)
    return rows[0]


def jump_approx_many(modal, factors, abscissae, endpoint_mode="zero"):
    """Jump approximations for several factors sharing one recurrence pass."""
    modal = np.asarray(modal, dtype=float)
    x = np.asarray(abscissae, dtype=float)
    if x.size and (x.min() < -1.0 or x.max() > 1.0):
        raise ValueError("jump approximation abscissae must lie in [-1, 1]")
    at_end = np.abs(x) == 1.0
    if endpoint_mode == "reject" and np.any(at_end):
        raise ValueError("abscissa at domain endpoint; sqrt(1-x^2) vanishes there")
    order = len(modal) - 1
    eta = np.arange(1, order + 1) / order
    weighted = np.empty((len(factors), order + 1))
    weighted[:, 0] = 0.0
    for r, factor in enumerate(factors):
        weighted[r, 1:] = factor.values(eta) * modal[1:]
    prefactor = np.pi * np.sqrt(np.clip(1.0 - x * x, 0.0, None)) / order
    return cheb_der_eval_many(weighted, x) * prefactor


def minmod_combine(jump_approxs):
    """Pointwise minmod of the rows: min if all positive, max if all
    negative, zero on sign disagreement."""
    rows = np.atleast_2d(np.asarray(jump_approxs, dtype=float))
    if rows.size == 0:
        raise ValueError("minmod needs at least one jump approximation row")
    out = np.where(
        np.all(rows > 0.0, axis=0),
        rows.min(axis=0),
        np.where(np.all(rows < 0.0, axis=0), rows.max(axis=0), 0.0),
    )
    return out


EVAL_EPS = 1e-6  # keep the evaluation grid off the sqrt(1-x^2) zeros
EVAL_DENSITY = 4  # abscissae per retained mode


def default_abscissae(order):
    return np.linspace(-1.0 + EVAL_EPS, 1.0 - EVAL_EPS, EVAL_DENSITY * order + 1)


@dataclass(frozen=True, eq=False)
class MinmodProfile:
    """Jump approximations (one row per factor) and their minmod."""

    abscissae: np.ndarray
    jump_approxs: np.ndarray
    minmod: np.ndarray

    @property
    def spacing(self):
        return self.abscissae[1] - self.abscissae[0]


def minmod_profile(modal, factors=None, abscissae=None) -> MinmodProfile:
    """Build the minmod profile of a modal vector on a dense uniform grid."""
    modal = np.asarray(modal, dtype=float)
    if factors is None:
        factors = build_concentration_factors()
    if abscissae is None:
        abscissae = default_abscissae(len(modal) - 1)
    rows = jump_approx_many(modal, factors, abscissae)
    return MinmodProfile(np.asarray(abscissae, float), rows, minmod_combine(rows))


@dataclass(frozen=True)
class DetectionConfig:
    """Thresholds and sweep parameters for detection and classification."""

    rel_frac: float = 0.1  # peak threshold as fraction of max |minmod|
    abs_floor_frac: float = 0.02  # absolute peak floor as fraction of max |u|
    slope_threshold: float = -0.015  # smooth iff fitted slope is below this
    width_factor: float = 2.0  # max peak width in local collocation spacings
    zero_floor: float = 1e-14  # peak heights are floored here before the log
    sweep_step: int = 2
    sweep_min_order: int = 16
    sweep_min_divisor: int = 4  # sweep starts at max(sweep_min_order, N // this)
    poly_degree: int = 1

    def factors(self):
        return build_concentration_factors(self.poly_degree)

    def sweep_factors(self):
        # the slope calibration (tophat ~ 0, smooth corpus well below the
        # demarcation) holds for the trigonometric subgroup; the mixed set
        # decays too fast for the downsweep to discriminate reliably
        return tuple(
            f
            for f in build_concentration_factors(self.poly_degree)
            if f.family is FactorFamily.TRIGONOMETRIC
        )


@dataclass(frozen=True)
class ResolvedThresholds:
    """Concrete thresholds applied to one field (records go to EdgeReport)."""

    rel_frac: float
    abs_floor: float
    slope_threshold: float
    width_factor: float

    def as_dict(self):
        return {
            "rel_frac": self.rel_frac,
            "abs_floor": self.abs_floor,
            "slope_threshold": self.slope_threshold,
            "width_factor": self.width_factor,
        }


def resolve_thresholds(config: DetectionConfig, scale: float) -> ResolvedThresholds:
    """Fix the absolute peak floor from the field amplitude scale."""
    return ResolvedThresholds(
        config.rel_frac,
        config.abs_floor_frac * abs(scale),
        config.slope_threshold,
        config.width_factor,
    )


@dataclass(frozen=True)
class PeakCandidate:
    location: float
    height: float  # signed minmod value at the extremum
    index: int  # position in the profile abscissae
    bracket: tuple  # collocation interval (x_i, x_{i+1}) containing location


def _search_extrema(abscissae, values, grid, thresholds):
    mags = np.abs(values)
    tau = max(thresholds.rel_frac * mags.max(initial=0.0), thresholds.abs_floor)
    idx, _ = signal.find_peaks(mags, height=tau)
    out = []
    for i in idx:
        loc = float(abscissae[i])
        b = grid.bracket(loc)
        out.append(
            PeakCandidate(
                loc,
                float(values[i]),
                int(i),
                (float(grid.nodes[b]), float(grid.nodes[b + 1])),
            )
        )
    return out


def find_peaks(profile: MinmodProfile, grid, thresholds: ResolvedThresholds):
    """Local extrema of |minmod| above the threshold, as candidates."""
    return _search_extrema(profile.abscissae, profile.minmod, grid, thresholds)


@dataclass(frozen=True, eq=False)
class SlopeFit:
    """Least-squares fit of ln(peak height) against retained order K."""

    sampled_orders: np.ndarray
    peak_heights: np.ndarray
    slope: float
    intercept: float
    degenerate: bool = False  # all heights at the zero floor

    def as_dict(self):
        return {
            "sampled_orders": [int(k) for k in self.sampled_orders],
            "peak_heights": [float(h) for h in self.peak_heights],
            "slope": self.slope,
            "intercept": self.intercept,
            "degenerate": self.degenerate,
        }


def _sweep_peak_height(modal_coarse, parent_order, factors):
    # downsweep profile: factor arguments stay referenced to the parent
    # order ("modes sampled downward" from it), so at K == parent this is
    # the ordinary minmod profile
    coarse_order = len(modal_coarse) - 1
    eta = np.arange(1, coarse_order + 1) / parent_order
    weighted = np.zeros((len(factors), coarse_order + 1))
    for r, factor in enumerate(factors):
        weighted[r, 1:] = factor.values(eta) * modal_coarse[1:]
    x = default_abscissae(coarse_order)
    rows = cheb_der_eval_many(weighted, x) * (
        np.pi * np.sqrt(1.0 - x * x) / coarse_order
    )
    return float(np.abs(minmod_combine(rows)).max(initial=0.0))


def classify_smoothness(modal, config: DetectionConfig = DetectionConfig()):
    """Classify a modal vector as smooth or not by minmod convergence.

    Sweeps downsampled orders K, records the minmod peak height h(K), and
    fits ln h against K.  Smooth means the fitted slope is below the
    configured threshold; fields whose peak heights never clear the
    absolute floor are smooth regardless of slope.
    """
    modal = np.asarray(modal, dtype=float)
    order = len(modal) - 1
    k_min = max(config.sweep_min_order, order // config.sweep_min_divisor)
    if order < k_min + 4:
        raise ValueError(
            f"order {order} too small for a slope sweep starting at {k_min}"
        )
    factors = config.sweep_factors()
    orders = np.arange(k_min, order + 1, config.sweep_step)
    heights = np.empty(len(orders))
    for j, k in enumerate(orders):
        coarse = spectral.downsample(modal, int(k))
        heights[j] = _sweep_peak_height(coarse, order, factors)
    floored = np.maximum(heights, config.zero_floor)
    degenerate = bool(np.all(heights <= config.zero_floor))
    slope, intercept = np.polyfit(orders.astype(float), np.log(floored), 1)
    fit = SlopeFit(orders, floored, float(slope), float(intercept), degenerate)

    scale = float(np.abs(spectral.synthesize(modal, default_abscissae(order))).max())
    below_floor = bool(np.all(heights < config.abs_floor_frac * scale))
    is_smooth = degenerate or below_floor or fit.slope < config.slope_threshold
    return fit, is_smooth


class Label(str, Enum):
    SMOOTH = "Smooth"
    RESOLUTION_LIMITED = "ResolutionLimited"
    DISCONTINUOUS = "Discontinuous"


@dataclass(frozen=True)
class Edge:
    location: float
    height: float
    sign: int

    def as_dict(self):
        return {"location": self.location, "height": self.height, "sign": self.sign}


@dataclass(frozen=True, eq=False)
class EdgeReport:
    """Outcome of the detect/classify/reject pipeline for one field."""

    label: Label
    edges: tuple
    rejected: tuple  # candidate locations discarded by smoothing
    slope_fit: Optional[SlopeFit]
    thresholds_used: dict

    def __post_init__(self):
        if self.label is Label.SMOOTH and self.edges:
            raise ValueError("a Smooth report cannot carry edges")
        if self.label is Label.DISCONTINUOUS and not self.edges:
            raise ValueError("a Discontinuous report must carry edges")
        for e in self.edges:
            if not -1.0 <= e.location <= 1.0:
                raise ValueError(f"edge location {e.location} outside [-1, 1]")

    def as_dict(self):
        return {
            "label": self.label.value,
            "edges": [e.as_dict() for e in self.edges],
            "rejected": [float(r) for r in self.rejected],
            "slope": self.slope_fit.as_dict() if self.slope_fit else None,
            "thresholds": dict(self.thresholds_used),
        }


def smooth_report(slope_fit, thresholds) -> EdgeReport:
    return EdgeReport(Label.SMOOTH, (), (), slope_fit, thresholds.as_dict())


def smooth_minmod(profile: MinmodProfile, center, grid):
    """Convolve the minmod with a Gaussian kernel of grid-local width.

    The kernel width omega is half the collocation interval bracketing
    center; the convolution is a trapezoid rule over the profile
    abscissae with the kernel normalized to unit discrete mass, so
    constants are preserved and peak heights stay comparable.
    """
    if not -1.0 <= center <= 1.0:
        raise ValueError(f"smoothing center {center} outside the domain")
    omega = 0.5 * grid.spacing_at(center)
    x = profile.abscissae
    diff = x[:, None] - x[None, :]
    kernel = np.exp(-(diff * diff) / (2.0 * omega * omega))
    kernel[np.abs(diff) > 6.0 * omega] = 0.0
    w = np.full(len(x), profile.spacing)
    w[0] *= 0.5
    w[-1] *= 0.5
    mass = kernel @ w
    return (kernel @ (w * profile.minmod)) / mass


def _half_prominence_width(abscissae, values, index):
    mags = np.abs(values)
    widths, _, _, _ = signal.peak_widths(mags, [index], rel_height=0.5)
    return float(widths[0]) * (abscissae[1] - abscissae[0])


def reject_spurious(
    profile: MinmodProfile,
    candidates,
    grid,
    thresholds: ResolvedThresholds,
    slope_fit: Optional[SlopeFit] = None,
) -> EdgeReport:
    """Confirm or reject peak candidates by Gaussian smoothing.

    Each candidate is smoothed with its own grid-local kernel and the
    peak search repeated on the smoothed profile; it is confirmed iff a
    peak survives within one local collocation spacing of its location
    and the survivor's half-prominence width is at most width_factor
    local spacings.  At least one confirmed candidate makes the field
    Discontinuous, otherwise it is ResolutionLimited.
    """
    if not candidates:
        raise ValueError("reject_spurious needs a non-empty candidate list")
    confirmed = []
    rejected = []
    for cand in candidates:
        local_dx = cand.bracket[1] - cand.bracket[0]
        smoothed = smooth_minmod(profile, cand.location, grid)
        survivors = _search_extrema(profile.abscissae, smoothed, grid, thresholds)
        ok = False
        for surv in survivors:
            if abs(surv.location - cand.location) > local_dx:
                continue
            width = _half_prominence_width(profile.abscissae, smoothed, surv.index)
            surv_dx = grid.spacing_at(surv.location)
            if width <= thresholds.width_factor * surv_dx:
                ok = True
                break
        if ok:
            confirmed.append(cand)
        else:
            rejected.append(cand.location)
    if confirmed:
        label = Label.DISCONTINUOUS
        edges = tuple(
            Edge(c.location, c.height, 1 if c.height > 0 else -1) for c in confirmed
        )
    else:
        label = Label.RESOLUTION_LIMITED
        edges = ()
    return EdgeReport(label, edges, tuple(rejected), slope_fit, thresholds.as_dict())
