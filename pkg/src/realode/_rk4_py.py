"""Pure-Python RK4 march, used when the compiled kernel is unavailable.

Operation order matches ``_rk4.pyx`` so both backends round identically.
"""
import math

import numpy as np


def rk4_march(a, b, y0, v0, x_end, h, n):
    xs = [0.0] * (n + 1)
    ys = [0.0] * (n + 1)
    vs = [0.0] * (n + 1)
    y, v = float(y0), float(v0)
    ys[0], vs[0] = y, v
    isfinite = math.isfinite
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
    return np.array(xs), np.array(ys), np.array(vs)
