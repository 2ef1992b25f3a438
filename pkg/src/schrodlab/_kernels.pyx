# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: fused mixed-norm accumulation, oscillatory
extension sums, and slab-union rasterization.

Mirrors schrodlab._kernels_py; the dispatcher picks whichever imports.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, cos, sin, sqrt

cnp.import_array()


def accumulate_lr(cnp.ndarray acc_arr, cnp.ndarray u_arr, cnp.ndarray w_arr, double r):
    """acc += sum_m w[m] |u[m]|^r with a single fused pass."""
    cdef double[::1] acc = acc_arr
    cdef cnp.complex128_t[:, ::1] u = np.ascontiguousarray(u_arr, dtype=np.complex128)
    cdef double[::1] w = np.ascontiguousarray(w_arr, dtype=np.float64)
    cdef Py_ssize_t m = u.shape[0], n = u.shape[1]
    cdef Py_ssize_t i, j
    cdef double re, im, a2, wi, val
    cdef bint r2 = r == 2.0
    cdef bint r4 = r == 4.0
    cdef double half = r / 2.0
    for i in range(m):
        wi = w[i]
        for j in range(n):
            re = u[i, j].real
            im = u[i, j].imag
            a2 = re * re + im * im
            if r2:
                val = a2
            elif r4:
                val = a2 * a2
            else:
                val = a2 ** half
            acc[j] += wi * val
    return None


def accumulate_max(cnp.ndarray acc_arr, cnp.ndarray u_arr):
    """acc = elementwise max(acc, |u|) over the chunk."""
    cdef double[::1] acc = acc_arr
    cdef cnp.complex128_t[:, ::1] u = np.ascontiguousarray(u_arr, dtype=np.complex128)
    cdef Py_ssize_t m = u.shape[0], n = u.shape[1]
    cdef Py_ssize_t i, j
    cdef double re, im, a
    for i in range(m):
        for j in range(n):
            re = u[i, j].real
            im = u[i, j].imag
            a = sqrt(re * re + im * im)
            if a > acc[j]:
                acc[j] = a
    return None


def extension_eval(points_arr, nodes_arr, weights_arr, fvals_arr, int chunk=512):
    """sum_y w_y f(y) exp(i (s|y|^2 - <xi, y>)) for rows (xi, s) of points."""
    cdef double[:, ::1] pts = np.ascontiguousarray(points_arr, dtype=np.float64)
    cdef double[:, ::1] nodes = np.ascontiguousarray(nodes_arr, dtype=np.float64)
    cdef double[::1] w = np.ascontiguousarray(weights_arr, dtype=np.float64)
    cdef cnp.complex128_t[::1] fv = np.ascontiguousarray(fvals_arr, dtype=np.complex128)
    cdef Py_ssize_t np_ = pts.shape[0], d = nodes.shape[1], nq = nodes.shape[0]
    out_arr = np.empty(np_, dtype=np.complex128)
    cdef cnp.complex128_t[::1] out = out_arr
    cdef double[::1] y2 = np.sum(np.asarray(nodes_arr, dtype=np.float64) ** 2, axis=1)
    cdef Py_ssize_t i, j, k
    cdef double phase, s, acc_re, acc_im, wre, wim, c, sn
    for i in range(np_):
        s = pts[i, d]
        acc_re = 0.0
        acc_im = 0.0
        for j in range(nq):
            phase = s * y2[j]
            for k in range(d):
                phase -= pts[i, k] * nodes[j, k]
            c = cos(phase)
            sn = sin(phase)
            wre = w[j] * fv[j].real
            wim = w[j] * fv[j].imag
            acc_re += wre * c - wim * sn
            acc_im += wre * sn + wim * c
        out[i].real = acc_re
        out[i].imag = acc_im
    return out_arr


def raster_union_area(slabs_arr, double s_lo, double s_hi, double x_lo, double x_hi,
                      Py_ssize_t ns, Py_ssize_t nx):
    """Midpoint-raster area of a union of sheared slabs."""
    cdef double[:, ::1] slabs = np.ascontiguousarray(slabs_arr, dtype=np.float64)
    cdef double ds = (s_hi - s_lo) / ns
    cdef double dx = (x_hi - x_lo) / nx
    covered_arr = np.zeros((ns, nx), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] covered = covered_arr
    cdef Py_ssize_t k, row, col, lo, hi
    cdef double center, slope, half_w, s_c, s_h, s_mid, c_row, xl, xr
    cdef Py_ssize_t nslab = slabs.shape[0]
    cdef Py_ssize_t total = 0
    for k in range(nslab):
        center = slabs[k, 0]
        slope = slabs[k, 1]
        half_w = slabs[k, 2]
        s_c = slabs[k, 3]
        s_h = slabs[k, 4]
        for row in range(ns):
            s_mid = s_lo + ds * (row + 0.5)
            if s_mid < s_c - s_h or s_mid > s_c + s_h:
                continue
            c_row = center + slope * (s_mid - s_c)
            xl = (c_row - half_w - x_lo) / dx - 0.5
            xr = (c_row + half_w - x_lo) / dx - 0.5
            lo = <Py_ssize_t> (xl + 1.0) if xl >= -1.0 else 0
            while lo > 0 and x_lo + dx * (lo - 1 + 0.5) >= c_row - half_w:
                lo -= 1
            while lo < nx and x_lo + dx * (lo + 0.5) < c_row - half_w:
                lo += 1
            hi = lo
            while hi < nx and x_lo + dx * (hi + 0.5) <= c_row + half_w:
                hi += 1
            for col in range(lo, hi):
                covered[row, col] = 1
    for row in range(ns):
        for col in range(nx):
            if covered[row, col]:
                total += 1
    return float(total) * ds * dx
