# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 march for y' = v, v' = -a*v - b*y."""
import numpy as np
from libc.math cimport isfinite


def rk4_march(double a, double b, double y0, double v0, double x_end, double h, Py_ssize_t n):
    """March ``n`` steps; the last one lands exactly on ``x_end``.

    Returns ``(xs, ys, vs)`` numpy arrays of length ``n + 1``.
    """
    xs_arr = np.empty(n + 1, dtype=np.float64)
    ys_arr = np.empty(n + 1, dtype=np.float64)
    vs_arr = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] xs = xs_arr
    cdef double[::1] ys = ys_arr
    cdef double[::1] vs = vs_arr
    cdef double y = y0, v = v0, step
    cdef double k1y, k1v, k2y, k2v, k3y, k3v, k4y, k4v, ty, tv
    cdef Py_ssize_t i
    xs[0] = 0.0
    ys[0] = y
    vs[0] = v
    for i in range(1, n + 1):
        step = h if i < n else x_end - (n - 1) * h
        k1y = v
        k1v = -a * v - b * y
        ty = y + 0.5 * step * k1y
        tv = v + 0.5 * step * k1v
        k2y = tv
        k2v = -a * tv - b * ty
        ty = y + 0.5 * step * k2y
        tv = v + 0.5 * step * k2v
        k3y = tv
        k3v = -a * tv - b * ty
        ty = y + step * k3y
        tv = v + step * k3v
        k4y = tv
        k4v = -a * tv - b * ty
        y = y + step / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        v = v + step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if not (isfinite(y) and isfinite(v)):
            raise OverflowError(f"RK4 state left the finite range at step {i}")
        xs[i] = x_end if i == n else i * h
        ys[i] = y
        vs[i] = v
    return xs_arr, ys_arr, vs_arr
