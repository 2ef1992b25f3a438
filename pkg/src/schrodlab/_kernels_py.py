"""Pure-numpy implementations of the hot kernels.

Same signatures as the compiled module ``schrodlab._kernels``; the
dispatcher in ``schrodlab.kernels`` picks whichever is available.
"""

from __future__ import annotations

import numpy as np


def accumulate_lr(acc: np.ndarray, u_chunk: np.ndarray, weights: np.ndarray, r: float) -> None:
    """acc += sum_m weights[m] * |u_chunk[m]|^r, in place.

    u_chunk has shape (M, n), acc shape (n,), weights shape (M,).
    """
    a = np.abs(u_chunk)
    if r == 2.0:
        powered = a * a
    else:
        powered = a**r
    acc += np.tensordot(weights, powered, axes=(0, 0))


def accumulate_max(acc: np.ndarray, u_chunk: np.ndarray) -> None:
    """acc = max(acc, max_m |u_chunk[m]|) elementwise, in place."""
    np.maximum(acc, np.abs(u_chunk).max(axis=0), out=acc)


def extension_eval(
    points: np.ndarray,
    nodes: np.ndarray,
    weights: np.ndarray,
    fvals: np.ndarray,
    chunk: int = 512,
) -> np.ndarray:
    """Oscillatory sums sum_y w_y f(y) exp(i (s|y|^2 - <xi, y>)).

    points: (P, d+1) rows (xi_1..xi_d, s); nodes: (Q, d); weights: (Q,);
    fvals: (Q,) complex.  Evaluated in chunks to bound memory.
    """
    pts = np.asarray(points, dtype=float)
    nod = np.asarray(nodes, dtype=float)
    w = np.asarray(weights, dtype=float)
    fv = np.asarray(fvals, dtype=np.complex128)
    d = nod.shape[1]
    y2 = np.sum(nod**2, axis=1)
    wf = w * fv
    out = np.empty(pts.shape[0], dtype=np.complex128)
    for start in range(0, pts.shape[0], chunk):
        pc = pts[start : start + chunk]
        phase = np.outer(pc[:, d], y2) - pc[:, :d] @ nod.T
        out[start : start + chunk] = np.exp(1j * phase) @ wf
    return out


def raster_union_area(
    slabs: np.ndarray,
    s_lo: float,
    s_hi: float,
    x_lo: float,
    x_hi: float,
    ns: int,
    nx: int,
) -> float:
    """Area of a union of sheared slabs, by midpoint rasterization.

    Each slab row is (center, slope, half_width, s_center, s_half):
    the set { |x - center - slope*(s - s_center)| <= half_width,
              |s - s_center| <= s_half }.
    """
    slabs = np.asarray(slabs, dtype=float)
    ds = (s_hi - s_lo) / ns
    dx = (x_hi - x_lo) / nx
    s_mid = s_lo + ds * (np.arange(ns) + 0.5)
    x_mid = x_lo + dx * (np.arange(nx) + 0.5)
    covered = np.zeros((ns, nx), dtype=bool)
    for center, slope, half_w, s_c, s_h in slabs:
        rows = np.flatnonzero(np.abs(s_mid - s_c) <= s_h)
        if rows.size == 0:
            continue
        centers = center + slope * (s_mid[rows] - s_c)
        lo = np.searchsorted(x_mid, centers - half_w, side="left")
        hi = np.searchsorted(x_mid, centers + half_w, side="right")
        for row, l, h in zip(rows, lo, hi):
            covered[row, l:h] = True
    return float(covered.sum()) * ds * dx
