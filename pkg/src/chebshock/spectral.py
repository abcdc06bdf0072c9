"""Chebyshev-Gauss-Lobatto discretization.

Grids and quadrature weights, nodal<->modal transforms, differentiation
matrices, stable partial-sum evaluation at arbitrary points, and
order-reduction (downsampling) of modal coefficient vectors.

All constructed objects are immutable and cached per expansion order, so
they can be shared freely across threads.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from ._kernels import cheb_eval


def _frozen(a):
    out = np.ascontiguousarray(np.asarray(a, dtype=float))
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class ChebyshevGrid:
    """CGL collocation grid of a given expansion order.

    nodes are x_i = -cos(pi i / N), increasing from -1 to +1; weights are
    the Gauss-Lobatto quadrature weights for the Chebyshev measure
    (1-x^2)^{-1/2}; norms are the discrete inner products (T_n, T_n).
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray
    norms: np.ndarray

    @property
    def size(self):
        return self.order + 1

    def bracket(self, x):
        """Index i of the collocation interval [x_i, x_{i+1}] containing x."""
        i = int(np.searchsorted(self.nodes, x)) - 1
        return min(max(i, 0), self.order - 1)

    def spacing_at(self, x):
        """Length of the collocation interval bracketing x."""
        i = self.bracket(x)
        return self.nodes[i + 1] - self.nodes[i]


@functools.lru_cache(maxsize=None)
def build_grid(order: int) -> ChebyshevGrid:
    """Build the CGL grid for a given order (order >= 1)."""
    if order < 1:
        raise ValueError(f"expansion order must be >= 1, got {order}")
    i = np.arange(order + 1)
    nodes = -np.cos(np.pi * i / order)
    nodes[0], nodes[-1] = -1.0, 1.0
    weights = np.full(order + 1, np.pi / order)
    weights[0] = weights[-1] = np.pi / (2 * order)
    # discrete CGL norms: the top mode aliases, (T_N, T_N) = pi not pi/2
    norms = np.full(order + 1, np.pi / 2)
    norms[0] = norms[-1] = np.pi
    return ChebyshevGrid(order, _frozen(nodes), _frozen(weights), _frozen(norms))


@dataclass(frozen=True, eq=False)
class SpectralOperators:
    """Dense transform and differentiation matrices for one grid.

    analysis maps nodal values to modal coefficients, synthesis is its
    exact inverse with entries T_n(x_i); diff_modal differentiates a
    coefficient vector, diff_nodal = synthesis @ diff_modal @ analysis.
    """

    grid: ChebyshevGrid
    analysis: np.ndarray
    synthesis: np.ndarray
    diff_modal: np.ndarray
    diff_nodal: np.ndarray


def _modal_derivative_matrix(order):
    # T'_n = sum_{m<n, m+n odd} (2n / c_m) T_m with c_0 = 2, c_m = 1
    m = np.zeros((order + 1, order + 1))
    for n in range(1, order + 1):
        for k in range((n - 1) % 2, n, 2):
            m[k, n] = 2.0 * n if k > 0 else float(n)
    return m


@functools.lru_cache(maxsize=None)
def _operators_for(order: int) -> SpectralOperators:
    grid = build_grid(order)
    synthesis = _cheb.chebvander(grid.nodes, order)
    analysis = synthesis.T * grid.weights[None, :] / grid.norms[:, None]
    diff_modal = _modal_derivative_matrix(order)
    diff_nodal = synthesis @ diff_modal @ analysis
    # negative-sum cleanup: rows must annihilate constants exactly, which
    # the composed product misses by ~N^2 ulps at the corner rows
    np.fill_diagonal(diff_nodal, diff_nodal.diagonal() - diff_nodal.sum(axis=1))
    return SpectralOperators(
        grid,
        _frozen(analysis),
        _frozen(synthesis),
        _frozen(diff_modal),
        _frozen(diff_nodal),
    )


def build_operators(grid: ChebyshevGrid) -> SpectralOperators:
    """Transform/differentiation matrices for a grid (cached per order)."""
    return _operators_for(grid.order)


def analyze(nodal, operators: SpectralOperators):
    """Modal coefficients of the interpolant through the nodal values."""
    nodal = np.asarray(nodal, dtype=float)
    if nodal.shape != (operators.grid.size,):
        raise ValueError(
            f"expected {operators.grid.size} nodal values, got {nodal.shape}"
        )
    return operators.analysis @ nodal


def synthesize(modal, points):
    """Evaluate the Chebyshev partial sum at arbitrary points in [-1, 1]."""
    points = np.asarray(points, dtype=float)
    if points.size and (points.min() < -1.0 or points.max() > 1.0):
        raise ValueError("evaluation points must lie in [-1, 1]")
    return cheb_eval(np.asarray(modal, dtype=float), points)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Paired modal coefficients and nodal values of one function."""

    grid: ChebyshevGrid
    modal: np.ndarray
    nodal: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "modal", _frozen(self.modal))
        object.__setattr__(self, "nodal", _frozen(self.nodal))
        if self.modal.shape != (self.grid.size,) or self.nodal.shape != (self.grid.size,):
            raise ValueError("modal/nodal length does not match grid order")
        scale = max(float(np.max(np.abs(self.nodal))), 1e-300)
        resid = np.max(np.abs(synthesize(self.modal, self.grid.nodes) - self.nodal))
        if resid > 1e-10 * scale:
            raise ValueError(
                f"inconsistent field: synthesis residual {resid:.3e} "
                f"exceeds 1e-10 * max|u| = {1e-10 * scale:.3e}"
            )

    @classmethod
    def from_nodal(cls, grid, nodal):
        ops = build_operators(grid)
        return cls(grid, analyze(np.asarray(nodal, dtype=float), ops), nodal)

    @classmethod
    def from_modal(cls, grid, modal):
        modal = np.asarray(modal, dtype=float)
        return cls(grid, modal, synthesize(modal, grid.nodes))

    @classmethod
    def sample(cls, grid, func):
        return cls.from_nodal(grid, func(grid.nodes))


@dataclass(frozen=True, eq=False)
class DownsampleMap:
    """Order-reduction matrix taking order-M coefficients to order K <= M.

    Built as analysis-at-K composed with evaluation of the order-M basis
    on the K-grid nodes; exact for polynomials of degree <= K.
    """

    from_order: int
    to_order: int
    matrix: np.ndarray


@functools.lru_cache(maxsize=None)
def downsample_map(from_order: int, to_order: int) -> DownsampleMap:
    if to_order < 1:
        raise ValueError(f"target order must be >= 1, got {to_order}")
    if to_order > from_order:
        raise ValueError(
            f"cannot downsample order {from_order} to higher order {to_order}"
        )
    coarse = build_operators(build_grid(to_order))
    probe = _cheb.chebvander(coarse.grid.nodes, from_order)
    return DownsampleMap(from_order, to_order, _frozen(coarse.analysis @ probe))


def downsample(modal, to_order: int):
    """Re-collocate an order-M coefficient vector at a lower order K.

    K == M is allowed and is the identity; K > M is rejected.
    """
    modal = np.asarray(modal, dtype=float)
    return downsample_map(len(modal) - 1, to_order).matrix @ modal
