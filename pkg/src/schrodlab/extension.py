"""Adjoint-restriction (Fourier extension) operator on the truncated paraboloid.

``extend`` evaluates integral_{|y|<=1} f(y) exp(i s |y|^2 - i <xi, y>) dy by
the trapezoid rule on a declared quadrature grid over [-1, 1]^d.  The scaled
variant evaluates the pullback (xi, s) -> (s xi / denom, s) on a product
region grid, with the pullback Jacobian available for measure-correct norms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .fields import FrequencyWindow


@dataclass(frozen=True)
class UnitCubeQuadrature:
    """Trapezoid nodes/weights on [-1, 1]^d (endpoints included)."""

    dim: int
    points_per_axis: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        if self.points_per_axis < 4:
            raise ValueError("need at least 4 quadrature points per axis")

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.points_per_axis)

    @property
    def axis_weights(self) -> np.ndarray:
        n = self.points_per_axis
        h = 2.0 / (n - 1)
        w = np.full(n, h)
        w[0] = w[-1] = h / 2
        return w

    def nodes_weights(self):
        """Flattened nodes (Q, d) and weights (Q,)."""
        if self.dim == 1:
            return self.axis[:, None], self.axis_weights
        xx, yy = np.meshgrid(self.axis, self.axis, indexing="ij")
        nodes = np.stack([xx.ravel(), yy.ravel()], axis=-1)
        w = np.outer(self.axis_weights, self.axis_weights).ravel()
        return nodes, w

    def sample(self, f) -> np.ndarray:
        """Evaluate a callable (or pass through samples) on the nodes."""
        nodes, _ = self.nodes_weights()
        if callable(f):
            vals = np.asarray(f(nodes), dtype=np.complex128)
        else:
            vals = np.asarray(f, dtype=np.complex128).ravel()
        if vals.shape != (nodes.shape[0],):
            raise ValueError("sample count does not match the quadrature grid")
        return vals


@dataclass(frozen=True)
class BallQuadrature:
    """Quadrature over a small ball (interval for d = 1, polar for d = 2).

    Used for integrands supported on one bump, where a global [-1,1]^d grid
    would need millions of nodes to resolve the support.
    """

    dim: int
    center: tuple[float, ...]
    radius: float
    points_per_axis: int = 64

    def nodes_weights(self):
        n = self.points_per_axis
        c = np.asarray(self.center, dtype=float)
        if self.dim == 1:
            t = np.linspace(-self.radius, self.radius, n)
            h = 2 * self.radius / (n - 1)
            w = np.full(n, h)
            w[0] = w[-1] = h / 2
            return (c[0] + t)[:, None], w
        # polar grid: radial trapezoid x uniform angles (periodic)
        rr = np.linspace(0.0, self.radius, n)
        hr = self.radius / (n - 1)
        wr = np.full(n, hr)
        wr[0] = wr[-1] = hr / 2
        th = 2 * np.pi * np.arange(n) / n
        wt = np.full(n, 2 * np.pi / n)
        R, T = np.meshgrid(rr, th, indexing="ij")
        nodes = np.stack(
            [c[0] + (R * np.cos(T)).ravel(), c[1] + (R * np.sin(T)).ravel()], axis=-1
        )
        w = (np.outer(wr * rr, wt)).ravel()
        return nodes, w

    def sample(self, f) -> np.ndarray:
        nodes, _ = self.nodes_weights()
        if callable(f):
            vals = np.asarray(f(nodes), dtype=np.complex128)
        else:
            vals = np.asarray(f, dtype=np.complex128).ravel()
        if vals.shape != (nodes.shape[0],):
            raise ValueError("sample count does not match the quadrature grid")
        return vals


def suggested_quad_points(max_s: float, max_xi: float) -> int:
    """Phase advance < pi/4 per cell: n >= 8 (4 max|s| + 2 max|xi|) / (2 pi)."""
    n = int(np.ceil(8.0 * (4.0 * abs(max_s) + 2.0 * abs(max_xi)) / (2 * np.pi)))
    return max(n, 64)


def extend(f, quad: UnitCubeQuadrature, eval_points) -> np.ndarray:
    """Extension integral at rows (xi_1..xi_d, s) of eval_points."""
    pts = np.atleast_2d(np.asarray(eval_points, dtype=float))
    if pts.shape[1] != quad.dim + 1:
        raise ValueError(f"eval points must have {quad.dim + 1} columns")
    if not np.all(np.isfinite(pts)):
        raise ValueError("eval points contain non-finite coordinates")
    nodes, weights = quad.nodes_weights()
    fvals = quad.sample(f)
    return kernels.extension_eval(pts, nodes, weights, fvals)


def galilean_modulate(f, quad: UnitCubeQuadrature, omega) -> np.ndarray:
    """Samples of f^omega(y) = exp(i<omega', y> - i omega_{d+1} |y|^2) f(y).

    Satisfies extend(f^omega)(z) = extend(f)(z - omega) at evaluation points.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (quad.dim + 1,):
        raise ValueError(f"omega must have {quad.dim + 1} components")
    nodes, _ = quad.nodes_weights()
    fvals = quad.sample(f)
    y2 = np.sum(nodes**2, axis=1)
    phase = nodes @ omega[: quad.dim] - omega[quad.dim] * y2
    return fvals * np.exp(1j * phase)


@dataclass(frozen=True)
class ExtensionRegion:
    """Annulus x s-interval region with the parabolic pullback applied.

    With ``scaled`` set, evaluation points (xi, s) are mapped to
    (s xi / denom, s) where denom is the lower end of s_range; the pullback
    has Jacobian determinant (s / denom)^d.
    """

    lam: float
    spatial: FrequencyWindow
    s_range: tuple[float, float]
    scaled: bool = True

    def __post_init__(self):
        if self.lam <= 1:
            raise ValueError("lam must exceed 1")
        if not (0 < self.s_range[0] < self.s_range[1]):
            raise ValueError("s_range must be positive and ordered")
        if not (0 < self.spatial.inner < self.spatial.outer):
            raise ValueError("spatial annulus bounds must be positive and ordered")

    @property
    def denom(self) -> float:
        return self.s_range[0]

    def jacobian(self, s, dim: int) -> np.ndarray:
        """|det| of the pullback (xi, s) -> (s xi/denom, s)."""
        return (np.asarray(s, dtype=float) / self.denom) ** dim

    def product_grid(self, n_xi: int, n_s: int, two_sided: bool = True):
        """Subsampled product grid: xi values (with negatives) and s values."""
        xi = np.linspace(self.spatial.inner, self.spatial.outer, n_xi)
        if two_sided:
            xi = np.concatenate([-xi[::-1], xi])
        s = np.linspace(self.s_range[0], self.s_range[1], n_s)
        return xi, s


def scaled_extension(
    f,
    region: ExtensionRegion,
    quad: UnitCubeQuadrature,
    xi_values: np.ndarray,
    s_values: np.ndarray,
) -> np.ndarray:
    """Pullback evaluation E f(s xi / denom, s) on a product grid.

    Returns an array of shape (len(xi_values), len(s_values)).  Only d = 1
    spatial sections are supported with explicit xi lists; for d = 2 pass
    stacked xi rows.
    """
    xi = np.asarray(xi_values, dtype=float)
    s = np.asarray(s_values, dtype=float)
    if quad.dim == 1:
        xi = xi.reshape(-1, 1)
    elif xi.ndim != 2 or xi.shape[1] != 2:
        raise ValueError("for d = 2 pass xi rows of shape (n, 2)")
    # oscillation budget: the quadrature must resolve s|y|^2 - <s xi/denom, y>
    max_s = float(np.max(np.abs(s)))
    max_xi = float(np.max(np.abs(xi))) * max_s / region.denom if region.scaled else float(np.max(np.abs(xi)))
    needed = suggested_quad_points(max_s, max_xi)
    if quad.points_per_axis < needed:
        raise ValueError(
            f"quadrature grid too coarse for the oscillation scale: "
            f"{quad.points_per_axis} < {needed} points per axis"
        )
    n_xi, n_s = xi.shape[0], s.size
    pts = np.empty((n_xi * n_s, quad.dim + 1))
    scale = s / region.denom if region.scaled else np.ones_like(s)
    for j in range(quad.dim):
        pts[:, j] = (xi[:, j][:, None] * scale[None, :]).ravel()
    pts[:, quad.dim] = np.tile(s, n_xi)
    vals = extend(f, quad, pts)
    return vals.reshape(n_xi, n_s)
