"""Uniform periodic grids, sampled fields and discrete Fourier transforms.

Conventions.  The domain is the periodic cube [-L/2, L/2)^d sampled at N
points per axis.  The forward transform approximates
``fhat(xi) = integral f(y) exp(-i<y,xi>) dy`` by its Riemann sum, so a point
mass of weight one transforms to the constant 1; the inversion carries the
factor (2pi)^-d.  Frequencies are the exact grid values 2*pi*k/L, stored in
numpy fft layout.  All operations are pure; grids precompute their axes once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Periodic uniform grid on [-L/2, L/2)^dim."""

    dim: int
    points_per_axis: int
    extent: float
    max_frequency: float | None = None

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        if self.points_per_axis < 8 or not _is_power_of_two(self.points_per_axis):
            raise ValueError("points_per_axis must be a power of two, >= 8")
        if not self.extent > 0:
            raise ValueError("extent must be positive")
        if self.max_frequency is not None and self.nyquist <= self.max_frequency:
            raise ValueError(
                f"Nyquist frequency {self.nyquist:.4g} does not exceed the "
                f"declared max_frequency {self.max_frequency:.4g}"
            )

    @property
    def spacing(self) -> float:
        return self.extent / self.points_per_axis

    @property
    def nyquist(self) -> float:
        return np.pi * self.points_per_axis / self.extent

    @property
    def size(self) -> int:
        return self.points_per_axis**self.dim

    @property
    def shape(self):
        return (self.points_per_axis,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    def axis(self) -> np.ndarray:
        """Spatial axis, ascending, starting at -L/2."""
        n = self.points_per_axis
        return -self.extent / 2 + self.spacing * np.arange(n)

    def freq_axis(self) -> np.ndarray:
        """Frequency axis 2*pi*k/L in numpy fft layout."""
        n = self.points_per_axis
        return 2 * np.pi * np.fft.fftfreq(n, d=1.0 / n) / self.extent

    def freq_meshes(self):
        ax = self.freq_axis()
        if self.dim == 1:
            return (ax,)
        return np.meshgrid(ax, ax, indexing="ij")

    def space_meshes(self):
        ax = self.axis()
        if self.dim == 1:
            return (ax,)
        return np.meshgrid(ax, ax, indexing="ij")

    def freq_norm2(self) -> np.ndarray:
        """|xi|^2 on the frequency grid (fft layout)."""
        meshes = self.freq_meshes()
        out = meshes[0] ** 2
        for m in meshes[1:]:
            out = out + m**2
        return out


def _check_values(grid: GridSpec, values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.complex128)
    if values.size != grid.size:
        raise ValueError(f"expected {grid.size} samples, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise ValueError("field contains non-finite entries")
    return values.reshape(grid.shape)


@dataclass(frozen=True)
class SampledField:
    """Complex samples on the spatial grid (index 0 sits at x = -L/2)."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.grid, self.values))

    def copy(self) -> "SampledField":
        return SampledField(self.grid, self.values.copy())


@dataclass(frozen=True)
class SpectralField:
    """Complex samples of the forward transform on the frequency grid.

    Values follow numpy fft layout along each axis (frequency 0 first).
    """

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.grid, self.values))

    def support_indices(self, tol: float = 0.0):
        """Flat indices of modes with |coefficient| > tol."""
        return np.flatnonzero(np.abs(self.values.ravel()) > tol)


@dataclass(frozen=True)
class SpaceTimeField:
    """Field samples on grid x times; values[m] is the slice at times[m]."""

    grid: GridSpec
    times: np.ndarray
    values: np.ndarray
    interval: tuple[float, float] | None = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if times.size == 0:
            raise ValueError("times must be nonempty")
        if times.ndim != 1 or np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        if self.interval is not None:
            lo, hi = self.interval
            if times[0] < lo - 1e-12 or times[-1] > hi + 1e-12:
                raise ValueError("times leave the declared interval")
        values = np.asarray(self.values, dtype=np.complex128)
        if values.size != self.grid.size * times.size:
            raise ValueError("value count must be grid size x time count")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values.reshape((times.size,) + self.grid.shape))


def forward_transform(f: SampledField) -> SpectralField:
    """Riemann-sum Fourier transform; exact for grid frequencies."""
    # index 0 of the x-grid is at -L/2: ifftshift aligns x = 0 with index 0,
    # after which the plain FFT realizes sum f(x) e^{-i x xi} exactly.
    shifted = np.fft.ifftshift(f.values)
    fhat = np.fft.fftn(shifted) * f.grid.cell_volume
    return SpectralField(f.grid, fhat)


def inverse_transform(fh: SpectralField) -> SampledField:
    vals = np.fft.ifftn(fh.values) / fh.grid.cell_volume
    return SampledField(fh.grid, np.fft.fftshift(vals))


Multiplier = Union[np.ndarray, Callable[..., np.ndarray]]


def multiplier_array(grid: GridSpec, m: Multiplier) -> np.ndarray:
    """Evaluate a Fourier multiplier on the frequency grid (fft layout)."""
    if callable(m):
        arr = np.asarray(m(*grid.freq_meshes()))
        arr = np.broadcast_to(arr, grid.shape).astype(np.complex128)
    else:
        arr = np.asarray(m, dtype=np.complex128)
        if arr.shape != grid.shape:
            raise ValueError("multiplier array shape does not match grid")
    if not np.all(np.isfinite(arr)):
        raise ValueError("multiplier takes non-finite values on the grid")
    return arr


def apply_multiplier(f: SampledField, m: Multiplier) -> SampledField:
    """(m fhat)^vee computed spectrally."""
    arr = multiplier_array(f.grid, m)
    fh = forward_transform(f)
    return inverse_transform(SpectralField(f.grid, fh.values * arr))


def evaluate_modes(fh: SpectralField, points: np.ndarray) -> np.ndarray:
    """Evaluate (2pi)^-d * sum fhat(xi) e^{i<x,xi>} dxi at arbitrary points.

    Exact for band-limited data; cost scales with the number of nonzero
    modes, so it is cheap for frequency-localized fields.
    """
    grid = fh.grid
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != grid.dim:
        raise ValueError("points have wrong dimension")
    idx = fh.support_indices()
    coeffs = fh.values.ravel()[idx]
    meshes = [m.ravel()[idx] for m in grid.freq_meshes()]
    phase = np.zeros((pts.shape[0], idx.size))
    for j, m in enumerate(meshes):
        phase += np.outer(pts[:, j], m)
    dxi = (2 * np.pi / grid.extent) ** grid.dim
    return (np.exp(1j * phase) @ coeffs) * dxi / (2 * np.pi) ** grid.dim


# ---------------------------------------------------------------------------
# smooth bump profile and frequency windows
# ---------------------------------------------------------------------------


def bump(s: np.ndarray) -> np.ndarray:
    """C_c^infinity bump exp(1 - 1/(1-s^2)) on (-1,1), peak value 1."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1
    si = s[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - si * si))
    return out


def smooth_step(u: np.ndarray) -> np.ndarray:
    """C^infinity monotone ramp: 0 for u <= 0, 1 for u >= 1."""
    u = np.asarray(u, dtype=float)
    a = np.zeros_like(u)
    pos = u > 0
    a[pos] = np.exp(-1.0 / u[pos])
    b = np.zeros_like(u)
    neg = u < 1
    b[neg] = np.exp(-1.0 / (1.0 - u[neg]))
    return a / (a + b)


WINDOW_KINDS = ("sharp_annulus", "smooth_annulus", "smooth_ball", "smooth_shell")


@dataclass(frozen=True)
class FrequencyWindow:
    """Radial frequency cutoff with support [inner, outer].

    smooth_annulus / smooth_ball equal 1 on the plateau
    [plateau_inner, plateau_outer] and vanish outside [inner, outer];
    smooth_shell is the pure bump profile centred between inner and outer
    (no plateau); sharp_annulus is the indicator of inner <= |xi| <= outer.
    """

    kind: str
    inner: float
    outer: float
    plateau_inner: float | None = None
    plateau_outer: float | None = None
    profile: str = "exp_bump"

    def __post_init__(self):
        if self.kind not in WINDOW_KINDS:
            raise ValueError(f"unknown window kind {self.kind!r}")
        if not (0 <= self.inner < self.outer):
            raise ValueError("need 0 <= inner < outer")
        if self.kind == "smooth_ball" and self.inner != 0:
            raise ValueError("smooth_ball must have inner = 0")
        if self.kind in ("smooth_annulus", "smooth_ball"):
            pi_, po = self._plateau()
            if not (self.inner <= pi_ < po <= self.outer):
                raise ValueError("plateau must sit strictly inside [inner, outer]")

    def _plateau(self):
        span = self.outer - self.inner
        pi_ = self.plateau_inner
        po = self.plateau_outer
        if pi_ is None:
            pi_ = 0.0 if self.kind == "smooth_ball" else self.inner + 0.25 * span
        if po is None:
            po = self.outer - 0.25 * span
        return pi_, po

    def evaluate_radial(self, rho: np.ndarray) -> np.ndarray:
        rho = np.abs(np.asarray(rho, dtype=float))
        if self.kind == "sharp_annulus":
            return ((rho >= self.inner) & (rho <= self.outer)).astype(float)
        if self.kind == "smooth_shell":
            center = 0.5 * (self.inner + self.outer)
            half = 0.5 * (self.outer - self.inner)
            return bump((rho - center) / half)
        pi_, po = self._plateau()
        up = np.ones_like(rho)
        if pi_ > self.inner:
            up = smooth_step((rho - self.inner) / (pi_ - self.inner))
        down = smooth_step((self.outer - rho) / (self.outer - po))
        return up * down

    def __call__(self, *freq_meshes) -> np.ndarray:
        rho2 = np.asarray(freq_meshes[0], dtype=float) ** 2
        for m in freq_meshes[1:]:
            rho2 = rho2 + np.asarray(m, dtype=float) ** 2
        return self.evaluate_radial(np.sqrt(rho2))

    def multiplier(self, grid: GridSpec) -> np.ndarray:
        return self(*grid.freq_meshes()).astype(np.complex128)


def band_window(lam: float, lo: float = 0.2, hi: float = 15.0) -> FrequencyWindow:
    """Sharp annulus {lo*lam <= |xi| <= hi*lam} used by band-norm sweeps."""
    return FrequencyWindow("sharp_annulus", lo * lam, hi * lam)


# ---------------------------------------------------------------------------
# Littlewood-Paley decomposition
# ---------------------------------------------------------------------------

# low-pass shoulder: 1 on [0, 9/8], 0 outside [0, 14/8]; scaled copies tile
# frequency space with plateaus [(14/16) 2^k, (9/8) 2^k].
_LP_ONE = 9.0 / 8.0
_LP_SUP = 14.0 / 8.0


def _lp_lowpass(rho: np.ndarray) -> np.ndarray:
    return smooth_step((_LP_SUP - np.asarray(rho, dtype=float)) / (_LP_SUP - _LP_ONE))


def lp_band_count(grid: GridSpec) -> int:
    """Largest band index k >= 1 with 2^{k+1} below the grid Nyquist."""
    k = int(np.floor(np.log2(grid.nyquist))) - 1
    while 2.0 ** (k + 1) >= grid.nyquist:
        k -= 1
    return max(k, 0)


def lp_multiplier(grid: GridSpec, k: int) -> np.ndarray:
    """Window of the k-th dyadic projection; the family sums to 1 exactly.

    For k >= 1 this is the dyadic annulus window supported in
    (2^{k-1}, 2^{k+1}); the k = 0 window is one minus the sum of every band
    the grid resolves, so the full family is a pointwise partition of unity
    on the frequency grid by construction.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    rho = np.sqrt(grid.freq_norm2())
    if k == 0:
        kmax = lp_band_count(grid)
        out = np.ones_like(rho)
        for j in range(1, kmax + 1):
            out -= _lp_lowpass(rho / 2.0**j) - _lp_lowpass(rho / 2.0 ** (j - 1))
        return out
    if 2.0 ** (k + 1) >= grid.nyquist:
        raise ValueError(f"band k={k} is not resolved by the grid (Nyquist {grid.nyquist:.3g})")
    return _lp_lowpass(rho / 2.0**k) - _lp_lowpass(rho / 2.0 ** (k - 1))


def littlewood_paley_project(f: SampledField, k: int) -> SampledField:
    """P_k f with smooth dyadic annuli; P_0 = I - sum_{k>=1} P_k."""
    return apply_multiplier(f, lp_multiplier(f.grid, k).astype(np.complex128))


def lp_plateau(k: int) -> tuple[float, float]:
    """Radial interval where the k-th window equals 1 exactly (k >= 1)."""
    return (_LP_SUP / 2.0 * 2.0**k, _LP_ONE * 2.0**k)
