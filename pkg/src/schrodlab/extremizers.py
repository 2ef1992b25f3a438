"""Lower-bound data families: focusing, traveling cap, plate, modulated
bump/rectangle families, and the thin spherical multiplier family.

Each constructor builds the frequency-side profile on a grid (or returns
callables on the unit cube for the extension operator).  Frequency supports
of the smooth families land exactly inside their declared windows; the
indicator-based families keep their sharp cutoffs and report spectral
leakage instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .fields import (
    FrequencyWindow,
    GridSpec,
    SampledField,
    SpectralField,
    bump,
    forward_transform,
    inverse_transform,
)
from .packing import RectanglePacking, keich_translations, slab_count


def _pow2_at_least(n: float) -> int:
    return int(2 ** int(np.ceil(np.log2(max(n, 8)))))


def default_grid(lam: float, dim: int, travel: float = 6.0, nyquist: float = 3.0) -> GridSpec:
    """Grid wide enough for a band-lam datum and its group-velocity travel."""
    extent = max(16.0, travel * lam)
    n = _pow2_at_least(nyquist * lam * extent / np.pi)
    return GridSpec(dim, n, extent, max_frequency=None)


def spectral_from_callable(grid: GridSpec, fn) -> SpectralField:
    vals = np.asarray(fn(*grid.freq_meshes()), dtype=np.complex128)
    return SpectralField(grid, vals)


def window_leak(fh: SpectralField, window: FrequencyWindow) -> float:
    """Spectral mass fraction outside the window support."""
    w = window.multiplier(fh.grid).real
    total = np.sum(np.abs(fh.values) ** 2)
    if total == 0:
        return 0.0
    outside = np.sum(np.abs(fh.values[w == 0]) ** 2)
    return float(outside / total)


# ---------------------------------------------------------------------------
# focusing / traveling-cap / plate data
# ---------------------------------------------------------------------------

FOCUSING_WINDOW = FrequencyWindow("smooth_annulus", 1.0, 2.0, 1.25, 1.75)


def focusing_profile(lam: float):
    """Quadratic-phase annulus profile: exp(i|xi|^2/2) eta(xi/lam)."""

    def fn(*meshes):
        rho2 = np.zeros(meshes[0].shape)
        for m in meshes:
            rho2 = rho2 + np.asarray(m, float) ** 2
        return FOCUSING_WINDOW.evaluate_radial(np.sqrt(rho2) / lam) * np.exp(0.5j * rho2)

    return fn


def focusing(lam: float, dim: int, grid: GridSpec | None = None) -> SampledField:
    """Datum refocusing to a point of height ~lam^d at (x, t) = (0, 1/2)."""
    if grid is None:
        grid = default_grid(lam, dim, travel=6.0, nyquist=3.0)
    if grid.nyquist <= 2 * lam:
        raise ValueError("grid Nyquist must exceed 2 lam")
    return inverse_transform(spectral_from_callable(grid, focusing_profile(lam)))


def focusing_box(lam: float, dim: int, margin: float = 0.05):
    """Space-time box |x| <= margin/lam, |t - 1/2| <= margin/lam^2."""
    return margin / lam, margin / lam**2


def knapp_profile(lam: float, eps: float = 0.5):
    """Bump of width eps at lam * e_1: chi(|xi - lam e1|/eps)."""

    def fn(*meshes):
        sq = (np.asarray(meshes[0], float) - lam) ** 2
        for m in meshes[1:]:
            sq = sq + np.asarray(m, float) ** 2
        return bump(np.sqrt(sq) / eps).astype(np.complex128)

    return fn


def knapp_traveling(lam: float, dim: int, eps: float = 0.5, grid: GridSpec | None = None) -> SampledField:
    """Wave-packet datum traveling along the tube x_1 ~ 2 lam t."""
    if grid is None:
        grid = default_grid(lam, dim, travel=4.0, nyquist=2.0)
    if grid.nyquist <= lam + eps:
        raise ValueError("grid Nyquist must exceed lam + eps")
    return inverse_transform(spectral_from_callable(grid, knapp_profile(lam, eps)))


def plate_profile(lam: float):
    """Thin-slab profile phi(|xi'|) * lam phi(lam (xi_1 - lam))."""

    def fn(*meshes):
        xi1 = np.asarray(meshes[0], float)
        out = lam * bump(lam * (xi1 - lam))
        if len(meshes) > 1:
            rho2 = np.zeros(meshes[1].shape)
            for m in meshes[1:]:
                rho2 = rho2 + np.asarray(m, float) ** 2
            out = out * bump(np.sqrt(rho2))
        return out.astype(np.complex128)

    return fn


def plate(lam: float, dim: int, grid: GridSpec | None = None) -> SampledField:
    """Datum with a 1/lam-thick frequency slab at lam e_1."""
    if grid is None:
        grid = default_grid(lam, dim, travel=6.0, nyquist=2.0)
    if grid.nyquist <= lam + 1.0:
        raise ValueError("grid Nyquist must exceed lam + 1")
    return inverse_transform(spectral_from_callable(grid, plate_profile(lam)))


# ---------------------------------------------------------------------------
# modulated-bump family driving the packing lower bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BesicovitchFamily:
    """Bumps g_j = chi_{I_j} exp(i<a_j, y> - i b_j |y|^2) tied to a packing.

    I_j is the ball of radius 1/(100 d lam) at z_j = (j/lam, 0, ...).  The
    modulation parameters (a_j, b_j) are the packing translations shifted by
    `xi_offset` along xi_1, which centers the associated sheared rectangles
    over the evaluation cone.
    """

    lam: int
    dim: int
    packing: RectanglePacking
    xi_offset: float

    @property
    def count(self) -> int:
        return len(self.packing.slabs)

    @property
    def radius(self) -> float:
        return 1.0 / (100.0 * self.dim * self.lam)

    def center(self, j: int) -> np.ndarray:
        z = np.zeros(self.dim)
        z[0] = (j + 1) / self.lam
        return z

    def modulation(self, j: int):
        a, b = self.packing.translations[j]
        return float(a) + self.xi_offset, float(b)

    def bump_callable(self, j: int):
        zj = self.center(j)
        rad = self.radius
        a1, b = self.modulation(j)

        def g(nodes: np.ndarray) -> np.ndarray:
            nodes = np.atleast_2d(nodes)
            d2 = np.sum((nodes - zj) ** 2, axis=1)
            inside = (d2 <= rad * rad).astype(float)
            y2 = np.sum(nodes**2, axis=1)
            return inside * np.exp(1j * (a1 * nodes[:, 0] - b * y2))

        return g

    def ball_volumes(self) -> float:
        if self.dim == 1:
            return self.count * 2 * self.radius
        return self.count * np.pi * self.radius**2

    def square_function_norm(self, p: float) -> float:
        """|(sum_j |g_j|^2)^{1/2}|_p: balls are disjoint, so this is exact."""
        return self.ball_volumes() ** (1.0 / p)

    def disjoint(self) -> bool:
        return 2 * self.radius < 1.0 / self.lam

    def inside_unit_ball(self) -> bool:
        top = (self.count) / self.lam + self.radius
        return top <= 1.0


def besicovitch_family(lam: int, dim: int = 1, xi_offset: float | None = None) -> BesicovitchFamily:
    if lam < 8:
        raise ValueError("lam must be at least 8")
    if slab_count(lam) < 1:
        raise ValueError(f"lam = {lam} gives no admissible bumps")
    packing = keich_translations(lam, dim)
    if xi_offset is None:
        xi_offset = 3.5 * lam * lam
    fam = BesicovitchFamily(lam, dim, packing, float(xi_offset))
    if not fam.disjoint():
        raise ValueError("bump supports are not disjoint at this lam")
    return fam


def besicovitch_datum(
    fam: BesicovitchFamily, grid: GridSpec, signs: np.ndarray | None = None
) -> SampledField:
    """Initial datum whose evolution concentrates along the packing slabs.

    Pullback of the bump family through y -> y/(2 lam): bumps of radius
    1/(50 d) at positions 2(j+1) e_1 carrying the chirps
    exp(i a_j y/(2 lam) - i b_j |y|^2/(4 lam^2)); with the xi_1 offset near
    3.5 lam^2 the local frequencies sit in the band ~[1.3 lam, 2.2 lam].
    """
    if signs is None:
        signs = np.ones(fam.count)
    meshes = grid.space_meshes()
    vals = np.zeros(grid.shape, dtype=np.complex128)
    lam = fam.lam
    y2 = np.zeros(grid.shape)
    for m in meshes:
        y2 = y2 + m**2
    for j in range(fam.count):
        a1, b = fam.modulation(j)
        zj = 2 * lam * fam.center(j)
        d2 = np.zeros(grid.shape)
        for axis, m in enumerate(meshes):
            d2 = d2 + (m - zj[axis]) ** 2
        r = 2 * lam * fam.radius
        inside = d2 <= r * r
        phase = a1 * meshes[0] / (2 * lam) - b * y2 / (4 * lam**2)
        vals[inside] += signs[j] * np.exp(1j * phase[inside])
    return SampledField(grid, vals)


# ---------------------------------------------------------------------------
# thin spherical multiplier family (d = 2)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SphericalMultiplierFamily:
    """Width-delta bump at the unit circle with its wave-packet rectangles."""

    delta: float
    nu_values: tuple[int, ...]
    length_half: float
    width_half: float
    spacing: float

    def direction(self, nu: int) -> np.ndarray:
        root = np.sqrt(self.delta)
        return np.array([root * nu, np.sqrt(1.0 - self.delta * nu * nu)])

    def multiplier(self, xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
        rho2 = xi1**2 + xi2**2
        return bump((1.0 - rho2) / self.delta)

    def sector_multiplier(self, nu: int, xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
        upper = (xi2 > 0).astype(float)
        return (
            self.multiplier(xi1, xi2)
            * bump(xi1 / np.sqrt(self.delta) - nu)
            * upper
        )

    def rectangle_indicator(self, nu: int, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        th = self.direction(nu)
        along = th[0] * x1 + th[1] * x2
        across = -th[1] * x1 + th[0] * x2
        return ((np.abs(along) <= self.length_half) & (np.abs(across) <= self.width_half)).astype(
            float
        )

    def wave_packet(self, nu: int, grid: GridSpec, translate: bool = False) -> SampledField:
        """f_nu = chi_{R_nu} e^{i<theta_nu, y>}, optionally shifted by a_nu."""
        x1, x2 = grid.space_meshes()
        shift = self.translation(nu) if translate else np.zeros(2)
        th = self.direction(nu)
        ind = self.rectangle_indicator(nu, x1 - shift[0], x2 - shift[1])
        phase = th[0] * x1 + th[1] * x2
        return SampledField(grid, ind * np.exp(1j * phase))

    def translation(self, nu: int) -> np.ndarray:
        """Near-disjoint lateral stacking: O(1) overlap of the translates."""
        k = self.nu_values.index(nu)
        offset = (k - (len(self.nu_values) - 1) / 2) * self.spacing
        return np.array([offset, 0.0])

    def apply_sector(self, f: SampledField, nu: int) -> SampledField:
        def m(xi1, xi2):
            return self.sector_multiplier(nu, xi1, xi2).astype(np.complex128)

        fh = forward_transform(f)
        arr = m(*f.grid.freq_meshes())
        return inverse_transform(SpectralField(f.grid, fh.values * arr))


def bochner_riesz_family(delta: float, nu_range_scale: float = 1.0) -> SphericalMultiplierFamily:
    """Family at width delta; directions |nu| <= scale * delta^{-1/2}/100."""
    if not (0 < delta <= 2.0**-4):
        raise ValueError("delta must lie in (0, 2^-4]")
    bound = nu_range_scale * 1e-2 / np.sqrt(delta)
    nu_max = int(np.floor(bound))
    nus = tuple(range(-nu_max, nu_max + 1))
    width_half = 1e-1 / np.sqrt(delta)
    return SphericalMultiplierFamily(
        delta=delta,
        nu_values=nus,
        length_half=1e-2 / delta,
        width_half=width_half,
        spacing=2.05 * width_half,
    )


def bochner_riesz_grid(delta: float, factor: float = 3.0) -> GridSpec:
    """Grid resolving the width-delta multiplier: dxi <= delta/factor."""
    extent = 2 * np.pi * factor / delta
    n = _pow2_at_least(2.6 * extent / np.pi)
    return GridSpec(2, n, extent)


# ---------------------------------------------------------------------------
# tagged construction specs
# ---------------------------------------------------------------------------

EXTREMIZER_KINDS = ("focusing", "knapp_traveling", "plate", "besicovitch_family", "bochner_riesz")


@dataclass(frozen=True)
class ExtremizerSpec:
    """Tagged description of one lower-bound construction."""

    kind: str
    scale: float
    dim: int
    aux: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in EXTREMIZER_KINDS:
            raise ValueError(f"unknown extremizer kind {self.kind!r}")
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        if self.kind == "bochner_riesz":
            if not (0 < self.scale <= 2.0**-4):
                raise ValueError("delta out of range (0, 2^-4]")
            if self.dim != 2:
                raise ValueError("the spherical multiplier family needs d = 2")
        elif self.scale <= 1:
            raise ValueError("scale must exceed 1")

    def build(self, grid: GridSpec | None = None):
        if self.kind == "focusing":
            return focusing(self.scale, self.dim, grid)
        if self.kind == "knapp_traveling":
            return knapp_traveling(self.scale, self.dim, self.aux.get("eps", 0.5), grid)
        if self.kind == "plate":
            return plate(self.scale, self.dim, grid)
        if self.kind == "besicovitch_family":
            return besicovitch_family(int(self.scale), self.dim, self.aux.get("xi_offset"))
        return bochner_riesz_family(self.scale, self.aux.get("nu_range_scale", 1.0))
