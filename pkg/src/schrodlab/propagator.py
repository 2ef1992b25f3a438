"""Free Schrodinger evolution: spectral symbol, oscillatory kernel, rescaling.

The solution of i u_t + Laplace u = 0 with datum f is the Fourier multiplier
exp(-i t |xi|^2) applied to f; on grid frequencies the spectral route is
exact.  The explicit kernel route evaluates
(4 pi i t)^{-d/2} * integral exp(i|x-y|^2 / 4t) f(y) dy by the trapezoid
rule and is useful as an independent cross-check away from t = 0.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exponents import ExponentTriple, inv
from .fields import SampledField, SpaceTimeField, forward_transform


def evolve_spectral(
    f: SampledField,
    times,
    interval: tuple[float, float] | None = None,
) -> SpaceTimeField:
    """Evolution sampled at the given times via the exp(-it|xi|^2) symbol."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.size == 0:
        raise ValueError("times must be nonempty")
    grid = f.grid
    fh = forward_transform(f).values
    xi2 = grid.freq_norm2()
    out = np.empty((times.size,) + grid.shape, dtype=np.complex128)
    for m, t in enumerate(times):
        ut = np.fft.ifftn(fh * np.exp(-1j * t * xi2)) / grid.cell_volume
        out[m] = np.fft.fftshift(ut)
    return SpaceTimeField(grid, times, out, interval=interval)


def evolve_spectral_single(f: SampledField, t: float) -> SampledField:
    u = evolve_spectral(f, [t])
    return SampledField(f.grid, u.values[0])


def boundary_mass_fraction(f: SampledField, cells: int = 2) -> float:
    """Relative L1 mass within `cells` spacings of the cube boundary."""
    a = np.abs(f.values)
    total = a.sum()
    if total == 0:
        return 0.0
    mask = np.zeros(f.grid.shape, dtype=bool)
    for axis in range(f.grid.dim):
        sl = [slice(None)] * f.grid.dim
        sl[axis] = slice(0, cells)
        mask[tuple(sl)] = True
        sl[axis] = slice(-cells, None)
        mask[tuple(sl)] = True
    return float(a[mask].sum() / total)


def evolve_kernel(f: SampledField, t: float) -> SampledField:
    """Quadrature of the explicit oscillatory kernel at a single time t != 0."""
    if t == 0:
        raise ValueError("the explicit kernel is singular at t = 0")
    if boundary_mass_fraction(f) > 1e-6:
        warnings.warn(
            "datum carries more than 1e-6 of its mass within 2 spacings of "
            "the cube boundary; kernel quadrature will see truncation",
            stacklevel=2,
        )
    grid = f.grid
    d = grid.dim
    x = grid.axis()
    amp = (4j * np.pi * t) ** (-d / 2.0)
    vol = grid.cell_volume
    if d == 1:
        diff = x[:, None] - x[None, :]
        kernel = np.exp(1j * diff**2 / (4.0 * t))
        out = amp * vol * (kernel @ f.values)
    else:
        # separable kernel: exp(i|x-y|^2/4t) factors per axis
        k1 = np.exp(1j * (x[:, None] - x[None, :]) ** 2 / (4.0 * t))
        out = amp * vol * (k1 @ f.values @ k1.T)
    return SampledField(grid, out)


def dispersive_bound(f: SampledField, t: float) -> float:
    """Right side of sup_x |u(x,t)| <= (4 pi |t|)^{-d/2} |f|_1."""
    l1 = float(np.sum(np.abs(f.values)) * f.grid.cell_volume)
    return (4 * np.pi * abs(t)) ** (-f.grid.dim / 2.0) * l1


@dataclass(frozen=True)
class TimeRescaling:
    """Rescaled datum plus the factors transporting mixed norms.

    For 0 < b <= 1 the substitution t = b s identifies the L^r(dt) profile
    over [b/2, b] with b^{1/r} times the profile of the rescaled datum
    f(sqrt(b) .) over [1/2, 1] at position x/sqrt(b); lifting to the
    L^q_x-to-L^p ratio multiplies by (sqrt b)^{-d(1/p - 1/q) + 2/r}.
    """

    field: SampledField
    b: float
    time_factor: float
    ratio_factor: float


def resample_scaled(f: SampledField, scale: float) -> SampledField:
    """Samples of y -> f(scale * y) on the same grid, by Fourier interpolation."""
    fh = forward_transform(f)
    idx = fh.support_indices(tol=1e-14 * np.max(np.abs(fh.values)))
    coeffs = fh.values.ravel()[idx]
    meshes = [m.ravel()[idx] for m in f.grid.freq_meshes()]
    pts = np.stack([m.ravel() * scale for m in f.grid.space_meshes()], axis=-1)
    phase = np.zeros((pts.shape[0], idx.size))
    for j, m in enumerate(meshes):
        phase += np.outer(pts[:, j], m)
    dxi = (2 * np.pi / f.grid.extent) ** f.grid.dim
    vals = (np.exp(1j * phase) @ coeffs) * dxi / (2 * np.pi) ** f.grid.dim
    return SampledField(f.grid, vals.reshape(f.grid.shape))


def time_rescale(f: SampledField, lam: float, b: float, triple: ExponentTriple) -> TimeRescaling:
    """Rescale a band-lam datum so [b/2, b] maps onto [1/2, 1]."""
    if not ((8.0 * lam) ** -2 < b <= 1.0):
        raise ValueError(f"b = {b} outside ((8 lam)^-2, 1]")
    root = np.sqrt(b)
    if f.grid.max_frequency is not None and root * f.grid.max_frequency > f.grid.nyquist:
        raise ValueError("grid does not support the rescaled band")
    g = f if b == 1.0 else resample_scaled(f, root)
    d = f.grid.dim
    exponent = -d * (inv(triple.p) - inv(triple.q)) + 2 * inv(triple.r)
    return TimeRescaling(
        field=g,
        b=b,
        time_factor=float(b) ** float(inv(triple.r)),
        ratio_factor=float(root) ** float(exponent),
    )


# ---------------------------------------------------------------------------
# time sampling policies
# ---------------------------------------------------------------------------


def uniform_times(interval: tuple[float, float], count: int) -> np.ndarray:
    lo, hi = interval
    if count < 2:
        raise ValueError("need at least 2 samples")
    return np.linspace(lo, hi, count)


def default_time_count(lam: float, interval: tuple[float, float], cap: int = 4096) -> int:
    """M >= 8 lam^2 |I| / (2 pi), capped; resolves the temporal bandwidth."""
    span = interval[1] - interval[0]
    m = int(np.ceil(8.0 * lam**2 * span / (2 * np.pi)))
    return int(min(max(m, 16), cap))


def merge_times(*groups) -> np.ndarray:
    """Sorted union of time grids with duplicates removed."""
    allt = np.concatenate([np.atleast_1d(np.asarray(g, dtype=float)) for g in groups])
    allt = np.unique(allt)
    return allt


def refined_window(center: float, halfwidth: float, count: int, interval) -> np.ndarray:
    lo, hi = interval
    w = np.linspace(max(lo, center - halfwidth), min(hi, center + halfwidth), count)
    return w


def log_bridge(center: float, inner: float, outer: float, count: int, interval) -> np.ndarray:
    """Log-spaced offsets on both sides of `center` between inner and outer."""
    offs = np.geomspace(inner, outer, count // 2)
    w = np.concatenate([center - offs[::-1], center + offs])
    lo, hi = interval
    return w[(w >= lo) & (w <= hi)]
