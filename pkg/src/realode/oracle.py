"""Independent numerical checks of closed-form solutions.

The integrator only knows the first-order system ``y' = v``,
``v' = -a*v - b*y``; it shares no code with the closed-form solver.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels, solver
from .parser import Coefficients
from .solver import ClosedForm

__all__ = [
    "DEFAULT_H",
    "DEFAULT_SPAN",
    "Trajectory",
    "ComparisonReport",
    "rk4_integrate",
    "residual",
    "scaled_residual",
    "max_scaled_residual",
    "compare",
    "is_growing",
]

DEFAULT_H = 1e-3
DEFAULT_SPAN = 5.0


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Samples ``(x, y, y')`` on ``[0, x_end]``; only the last step may be shorter than ``h``."""

    xs: np.ndarray
    ys: np.ndarray
    vs: np.ndarray
    h: float

    def __post_init__(self):
        n = len(self.xs)
        if n < 2 or len(self.ys) != n or len(self.vs) != n:
            raise ValueError("trajectory needs at least two samples of equal length")
        if np.any(np.diff(self.xs) <= 0):
            raise ValueError("sample points must be strictly increasing")

    def __len__(self):
        return len(self.xs)

    def to_csv(self, path: str | Path | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "v"])
        for x, y, v in zip(self.xs, self.ys, self.vs):
            w.writerow([repr(float(x)), repr(float(y)), repr(float(v))])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, text: str) -> "Trajectory":
        rows = list(csv.DictReader(io.StringIO(text)))
        xs = np.array([float(r["x"]) for r in rows])
        ys = np.array([float(r["y"]) for r in rows])
        vs = np.array([float(r["v"]) for r in rows])
        return cls(xs, ys, vs, float(xs[1] - xs[0]))


@dataclass(frozen=True)
class ComparisonReport:
    max_err_y: float
    max_err_v: float
    relative: bool
    n_samples: int

    @property
    def max_err(self) -> float:
        return max(self.max_err_y, self.max_err_v)

    def to_dict(self) -> dict:
        return {
            "max_err_y": self.max_err_y,
            "max_err_v": self.max_err_v,
            "relative": self.relative,
            "n_samples": self.n_samples,
        }


def _n_steps(x_end: float, h: float) -> int:
    # a last step within rounding of h is kept whole instead of adding a sliver
    return max(1, math.ceil(x_end / h * (1 - 1e-12)))


def rk4_integrate(
    coeffs: Coefficients,
    y0: float,
    v0: float,
    x_end: float = DEFAULT_SPAN,
    h: float = DEFAULT_H,
    *,
    backend: str | None = None,
) -> Trajectory:
    """Classical fixed-step RK4 from ``x = 0`` to ``x_end``.

    Raises ``OverflowError`` if the state leaves the finite range.
    """
    if not (h > 0 and math.isfinite(h)):
        raise ValueError(f"step must be positive and finite, got {h!r}")
    if not (x_end > 0 and math.isfinite(x_end)):
        raise ValueError(f"x_end must be positive and finite, got {x_end!r}")
    if not (math.isfinite(y0) and math.isfinite(v0)):
        raise ValueError("initial values must be finite")
    march = kernels.rk4_march if backend is None else kernels.BACKENDS[backend]
    n = _n_steps(x_end, h)
    xs, ys, vs = march(float(coeffs.a), float(coeffs.b), float(y0), float(v0), float(x_end), float(h), n)
    return Trajectory(xs, ys, vs, float(h))


def residual(coeffs: Coefficients, form: ClosedForm, x: float) -> float:
    """``y'' + a*y' + b*y`` of the closed form at ``x``."""
    y = solver.evaluate(form, x)
    dy = solver.evaluate_derivative(form, x, 1)
    ddy = solver.evaluate_derivative(form, x, 2)
    return ddy + coeffs.a * dy + coeffs.b * y


def scaled_residual(coeffs: Coefficients, form: ClosedForm, x: float) -> float:
    """Residual divided by ``1 + |y| + |y'| + |y''|``."""
    y = solver.evaluate(form, x)
    dy = solver.evaluate_derivative(form, x, 1)
    ddy = solver.evaluate_derivative(form, x, 2)
    return abs(ddy + coeffs.a * dy + coeffs.b * y) / (1 + abs(y) + abs(dy) + abs(ddy))


def max_scaled_residual(coeffs: Coefficients, form: ClosedForm, xs) -> float:
    """Largest ``scaled_residual`` over ``xs``, evaluated in one vectorized pass."""
    y, dy, ddy = (solver.evaluate_array(form, xs, k) for k in (0, 1, 2))
    scaled = np.abs(ddy + coeffs.a * dy + coeffs.b * y) / (1 + np.abs(y) + np.abs(dy) + np.abs(ddy))
    return float(np.max(scaled))


def is_growing(coeffs: Coefficients, tol: float = solver.DEFAULT_TOL) -> bool:
    """True when some solution grows exponentially for ``x > 0``."""
    roots = solver.characteristic_roots(coeffs, tol)
    if roots:
        return roots[0] > 0
    return coeffs.a < 0


def compare(form: ClosedForm, traj: Trajectory, relative: bool | None = None) -> ComparisonReport:
    """Max deviation between the closed form and an RK4 trajectory.

    With ``relative`` each error is divided by ``max(1, running max |y|)``
    (``|y'|`` for the derivative). It defaults to on for growing solutions.
    """
    if relative is None:
        relative = is_growing(form.coeffs)
    y_cf = solver.evaluate_array(form, traj.xs)
    v_cf = solver.evaluate_array(form, traj.xs, 1)
    err_y = np.abs(y_cf - traj.ys)
    err_v = np.abs(v_cf - traj.vs)
    if relative:
        err_y = err_y / np.maximum(1.0, np.maximum.accumulate(np.abs(traj.ys)))
        err_v = err_v / np.maximum(1.0, np.maximum.accumulate(np.abs(traj.vs)))
    return ComparisonReport(float(err_y.max()), float(err_v.max()), bool(relative), len(traj))
