"""Discrete Lebesgue, mixed space-time, Besov and Sobolev norms.

Spatial integrals are Riemann sums with the uniform periodic cell volume;
time integrals use trapezoid weights (endpoints halved, nonuniform spacing
allowed).  The exponent infinity is accepted as ``exponents.INF`` (or the
string ``"inf"``) and never as a float sentinel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exponents import INF, Exponent, as_exponent, exponent_float, _Infinity
from .fields import (
    SampledField,
    SpaceTimeField,
    apply_multiplier,
    forward_transform,
    littlewood_paley_project,
    lp_band_count,
)


def _as_p(p) -> float | None:
    """Return a float exponent, or None for infinity."""
    e = as_exponent(p)
    if isinstance(e, _Infinity):
        return None
    pf = float(e)
    if pf < 1:
        raise ValueError("exponents below 1 are not norms")
    return pf


def trapezoid_weights(times: np.ndarray) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.size == 1:
        return np.ones(1)
    w = np.zeros_like(times)
    dt = np.diff(times)
    w[:-1] += dt / 2
    w[1:] += dt / 2
    return w


@dataclass(frozen=True)
class MixedNormSpec:
    """Outer-in-space L^q of the inner-in-time L^r over `interval`."""

    q: Exponent
    r: Exponent
    interval: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "q", as_exponent(self.q))
        object.__setattr__(self, "r", as_exponent(self.r))
        for e in (self.q, self.r):
            if not isinstance(e, _Infinity) and e < 1:
                raise ValueError("mixed-norm exponents must be >= 1")


def lebesgue_norm(f: SampledField | np.ndarray, p, cell_volume: float | None = None) -> float:
    """(sum |f|^p h^d)^{1/p}; max of |f| for p = inf."""
    if isinstance(f, SampledField):
        vals, vol = f.values, f.grid.cell_volume
    else:
        vals = np.asarray(f)
        if cell_volume is None:
            raise ValueError("cell_volume required for raw arrays")
        vol = cell_volume
    pf = _as_p(p)
    a = np.abs(vals)
    if pf is None:
        return float(a.max())
    return float((np.sum(a**pf) * vol) ** (1.0 / pf))


def time_norms(values: np.ndarray, times: np.ndarray, r) -> np.ndarray:
    """Inner L^r norm in time per spatial point; values has shape (M, ...)."""
    rf = _as_p(r)
    a = np.abs(values)
    if rf is None:
        return a.max(axis=0)
    if len(times) < 2:
        raise ValueError("need at least 2 time samples for finite r")
    w = trapezoid_weights(times)
    acc = np.tensordot(w, a**rf, axes=(0, 0))
    return acc ** (1.0 / rf)


def mixed_norm(u: SpaceTimeField, spec: MixedNormSpec) -> float:
    """L^q in space of the L^r-in-time profile."""
    lo, hi = spec.interval
    if u.times[0] < lo - 1e-12 or u.times[-1] > hi + 1e-12:
        raise ValueError("field times leave the norm interval")
    inner = time_norms(u.values, u.times, spec.r)
    qf = _as_p(spec.q)
    if qf is None:
        return float(inner.max())
    return float((np.sum(inner**qf) * u.grid.cell_volume) ** (1.0 / qf))


def space_time_norm(u: SpaceTimeField, p) -> float:
    """L^p with the product (cell volume x trapezoid) space-time weights."""
    pf = _as_p(p)
    a = np.abs(u.values)
    if pf is None:
        return float(a.max())
    w = trapezoid_weights(u.times)
    total = np.tensordot(w, a**pf, axes=(0, 0)).sum() * u.grid.cell_volume
    return float(total ** (1.0 / pf))


def besov_norm(f: SampledField, p, alpha: float, nu: float, tol: float = 1e-8) -> float:
    """(sum_k 2^{k alpha nu} |P_k f|_p^nu)^{1/nu} over resolved bands."""
    if nu <= 0:
        raise ValueError("nu must be positive")
    grid = f.grid
    kmax = lp_band_count(grid)
    # spectral mass above the last resolved plateau would be mis-weighted
    fh = forward_transform(f)
    rho = np.sqrt(grid.freq_norm2())
    total = np.sum(np.abs(fh.values) ** 2)
    if total > 0:
        lost = np.sum(np.abs(fh.values[rho > 1.125 * 2.0**kmax]) ** 2) / total
        if lost > tol:
            raise ValueError(f"band truncation loses {lost:.2e} of spectral mass")
    terms = []
    for k in range(kmax + 1):
        block = littlewood_paley_project(f, k)
        terms.append((2.0 ** (k * alpha) * lebesgue_norm(block, p)) ** nu)
    return float(sum(terms) ** (1.0 / nu))


def sobolev_norm(f: SampledField, p, alpha: float) -> float:
    """|(I - Laplace)^{alpha/2} f|_p via the (1+|xi|^2)^{alpha/2} multiplier."""

    def m(*meshes):
        rho2 = np.zeros(meshes[0].shape)
        for mm in meshes:
            rho2 = rho2 + mm**2
        return (1.0 + rho2) ** (alpha / 2.0)

    return lebesgue_norm(apply_multiplier(f, m), p)


def plancherel_freq_norm(f: SampledField) -> float:
    """(2pi)^{-d/2}-normalized frequency-side L2 norm; equals |f|_2."""
    fh = forward_transform(f)
    dxi = (2 * np.pi / f.grid.extent) ** f.grid.dim
    return float(np.sqrt(np.sum(np.abs(fh.values) ** 2) * dxi / (2 * np.pi) ** f.grid.dim))
