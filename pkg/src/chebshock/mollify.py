"""Gibbs-oscillation removal by adaptive Hermite-Gaussian mollification.

The kernel is the two-parameter family
    phi_{p,delta}(t) = rho_p(t / delta) / delta,
    rho_p(y) = exp(-y^2) * sum_{j=0..p} gamma_j H_{2j}(y),
    gamma_j = (-1)^j / (4^j j! sqrt(pi)),
whose Fourier transform is exp(-w^2/4) * sum_{j<=p} (w^2/4)^j / j!, a flat
passband up to |w| ~ 2 sqrt(p) / delta with a Gaussian-sharp rolloff.  The
local dilation delta(x) shrinks toward the nearest edge (confirmed edges
plus the domain boundaries) and the polynomial order grows with it so the
passband stays a fixed fraction of the resolved band.

Two-sided kernels smooth across everything except the domain boundaries;
one-sided kernels never draw data from beyond a confirmed edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._kernels import cheb_eval, hermite_rho
from .edges import EdgeReport, Label

QUAD_DENSITY = 8  # quadrature points per retained mode
SUPPORT_SIGMAS = 6.0  # kernel window half-width in dilation units


class MollifierKind(str, Enum):
    TWO_SIDED = "TwoSided"
    ONE_SIDED = "OneSided"


class MollifyError(ValueError):
    pass


DEFAULT_P_SCALE = 0.25
ONE_SIDED_THETA = 1.0
TWO_SIDED_THETA = 1.0 / 3.0


@dataclass(frozen=True, eq=False)
class MollifierSpec:
    """Kernel parameters: kind, dilation fraction, order scale, edges.

    The domain boundaries are always present as virtual edges and theta
    sets the dilation as a fraction of the distance to the nearest edge.
    p_scale sets the kernel order; one-sided kernels use the linear
    coupling p = max(1, floor(p_scale*delta*N)), whose aggressive local
    low-pass is what scrubs the ringing next to a confirmed edge.
    Two-sided kernels use p = max(1, floor((p_scale*delta*N)^2)), which
    pins the kernel passband near 2*p_scale*N independently of delta so
    that resolved structure far from any edge survives untouched; with
    the linear rule no (theta, p_scale) preserves a sigma=0.15 Gaussian
    to 1e-3 while still suppressing edge ringing tenfold.
    """

    kind: MollifierKind
    theta: float
    p_scale: float
    edges: tuple
    order: int

    def __post_init__(self):
        if not 0.0 < self.theta <= 1.0:
            raise MollifyError(f"theta must lie in (0, 1], got {self.theta}")
        if self.p_scale <= 0.0:
            raise MollifyError(f"p_scale must be positive, got {self.p_scale}")
        full = np.unique(np.asarray(tuple(self.edges) + (-1.0, 1.0), dtype=float))
        if full.min() < -1.0 or full.max() > 1.0:
            raise MollifyError("edges must lie within [-1, 1]")
        object.__setattr__(self, "edges", tuple(full))

    def dilation(self, x):
        """Local dilation delta(x) = theta * distance to the nearest edge."""
        d = float(np.min(np.abs(np.asarray(self.edges) - x)))
        return self.theta * d

    def degree(self, delta):
        scaled = self.p_scale * delta * self.order
        if self.kind is MollifierKind.ONE_SIDED:
            return max(1, int(np.floor(scaled)))
        return max(1, int(np.floor(scaled * scaled)))

    def segment(self, x):
        """The open interval between the edges bracketing x."""
        e = np.asarray(self.edges)
        left = e[e < x]
        right = e[e > x]
        lo = float(left.max()) if left.size else -1.0
        hi = float(right.min()) if right.size else 1.0
        return lo, hi


def quadrature_grid(order):
    return np.linspace(-1.0, 1.0, QUAD_DENSITY * order + 1)


def _kernel_window(spec, x, quad_x, p=None):
    delta = spec.dilation(x)
    if delta <= 0.0:
        raise MollifyError(f"evaluation point {x} coincides with an edge")
    if p is None:
        p = spec.degree(delta)
    inside = np.abs(quad_x - x) <= SUPPORT_SIGMAS * delta
    if spec.kind is MollifierKind.ONE_SIDED:
        lo, hi = spec.segment(x)
        inside &= (quad_x > lo) & (quad_x < hi)
    idx = np.nonzero(inside)[0]
    if idx.size < 2:
        raise MollifyError(f"kernel support at {x} contains fewer than 2 points")
    xs = quad_x[idx]
    vals = hermite_rho(p, (x - xs) / delta) / delta
    return idx, xs, vals


def _trapezoid_weights(xs):
    w = np.empty(len(xs))
    w[:] = xs[1] - xs[0]
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def build_kernel(spec: MollifierSpec, x, p=None):
    """Sampled kernel (abscissae, values) at x, unit discrete mass.

    The samples live on the uniform convolution quadrature grid,
    restricted to the kernel window (and, for one-sided kernels, to the
    evaluation point's own inter-edge segment), then renormalized so the
    trapezoid-rule mass is exactly 1.
    """
    if not -1.0 < x < 1.0:
        raise MollifyError(f"kernel center {x} must lie strictly inside (-1, 1)")
    quad_x = quadrature_grid(spec.order)
    _, xs, vals = _kernel_window(spec, x, quad_x, p)
    mass = float(_trapezoid_weights(xs) @ vals)
    return xs, vals / mass


def mollify_samples(fine_x, fine_f, points, spec: MollifierSpec):
    """Convolve sampled data with the adaptive kernel at given points.

    fine_x must be the uniform quadrature grid matching spec.order; points
    where the dilation vanishes (an edge, including the domain boundaries)
    receive the raw sample value interpolated from fine_x.
    """
    fine_x = np.asarray(fine_x, dtype=float)
    fine_f = np.asarray(fine_f, dtype=float)
    spacing = fine_x[1] - fine_x[0]
    out = np.empty(len(points))
    for i, x in enumerate(np.asarray(points, dtype=float)):
        delta = spec.dilation(x)
        if SUPPORT_SIGMAS * delta <= spacing:
            # kernel support below grid resolution: delta -> 0 limit is the
            # identity, so points at (or next to) an edge keep raw values
            out[i] = np.interp(x, fine_x, fine_f)
            continue
        idx, xs, vals = _kernel_window(spec, float(x), fine_x)
        w = _trapezoid_weights(xs) * vals
        out[i] = float(w @ fine_f[idx]) / float(w.sum())
    return out


def _spec_for(field, report: EdgeReport, theta, p_scale):
    if report.label is Label.SMOOTH:
        raise MollifyError("smooth fields are not mollified")
    kind = (
        MollifierKind.ONE_SIDED
        if report.label is Label.DISCONTINUOUS
        else MollifierKind.TWO_SIDED
    )
    if theta is None:
        theta = ONE_SIDED_THETA if kind is MollifierKind.ONE_SIDED else TWO_SIDED_THETA
    return MollifierSpec(
        kind,
        theta,
        p_scale,
        tuple(e.location for e in report.edges),
        field.grid.order,
    )


def mollify(field, report: EdgeReport, theta=None, p_scale=DEFAULT_P_SCALE):
    """Mollified nodal values of a non-smooth field.

    Two-sided kernels for resolution-limited fields, one-sided kernels
    anchored at the confirmed edges for discontinuous ones.  theta=None
    picks the per-kind default dilation fraction.
    """
    return mollify_at(field, report, field.grid.nodes, theta, p_scale)


def mollify_at(field, report: EdgeReport, points, theta=None, p_scale=DEFAULT_P_SCALE):
    """Mollified field values at arbitrary points in [-1, 1]."""
    spec = _spec_for(field, report, theta, p_scale)
    fine_x = quadrature_grid(field.grid.order)
    fine_f = cheb_eval(field.modal, fine_x)
    return mollify_samples(fine_x, fine_f, points, spec)
