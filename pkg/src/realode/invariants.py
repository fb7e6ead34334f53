"""Conserved quantities of the reduced equation ``z = exp(alpha*x) * y``.

The substitution turns ``y'' + a*y' + b*y = 0`` into ``z'' = beta**2 z``,
``z'' = 0`` or ``z'' = -beta**2 z``. Each case has two first integrals,
functions of ``(x, z, z')`` that are constant along every solution and equal
the constants ``C1`` and ``C2`` of the closed form:

===========  ========================================  ========================================
class        I1                                        I2
===========  ========================================  ========================================
overdamped   ``z*cosh(bx) - z'*sinh(bx)/b``            ``-z*sinh(bx) + z'*cosh(bx)/b``
critical     ``z'``                                    ``z - z'*x``
underdamped  ``z*cos(bx) - z'*sin(bx)/b``              ``z*sin(bx) + z'*cos(bx)/b``
===========  ========================================  ========================================

The hyperbolic integrals amplify rounding in ``z`` by roughly
``exp(2*beta*|x|)``, so the grid checks default to evaluating the solver's
formulas with ``EXTENDED_DPS`` decimal digits (mpmath). Pass ``dps=None`` for
plain double arithmetic.
"""
from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from typing import Sequence

import mpmath

from . import solver
from .solver import ClosedForm, DampingClass, ShapeParams

__all__ = [
    "EXTENDED_DPS",
    "HYPERBOLIC_CLIP",
    "ZState",
    "FirstIntegralPair",
    "ConstancyReport",
    "default_grid",
    "z_state",
    "integrals_from_state",
    "first_integrals",
    "reconstruction_error",
    "check_constancy",
    "check_reconstruction",
]

EXTENDED_DPS = 40
HYPERBOLIC_CLIP = 25.0


@dataclass(frozen=True)
class ZState:
    """``z = exp(alpha*x)*y`` and ``z' = alpha*z + exp(alpha*x)*y'`` at ``x``.

    ``z``/``zprime`` are floats, or mpmath numbers when built with ``dps``.
    """

    z: float
    zprime: float
    x: float


@dataclass(frozen=True)
class FirstIntegralPair:
    i1: float
    i2: float


@dataclass(frozen=True)
class ConstancyReport:
    case: str
    max_dev_I1: float
    max_dev_I2: float
    identified_C1: float
    identified_C2: float
    max_id_dev: float
    max_reconstruction_err: float
    n_points: int
    tol: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "max_dev_I1": self.max_dev_I1,
            "max_dev_I2": self.max_dev_I2,
            "identified_C1": self.identified_C1,
            "identified_C2": self.identified_C2,
            "pass": self.passed,
        }


def default_grid(n: int = 101, lo: float = -5.0, hi: float = 5.0) -> list[float]:
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _arith(dps: int | None):
    if dps is None:
        return math, contextlib.nullcontext()
    return mpmath.mp, mpmath.mp.workdps(dps)


def _z_state(form: ClosedForm, x, lib) -> ZState:
    if lib is math:
        y = solver.evaluate(form, x)
        dy = solver.evaluate_derivative(form, x, 1)
    else:
        x = lib.mpf(x)
        y, dy, _ = solver._jet(form, x, lib)
    grow = lib.exp(form.alpha * x)
    z = grow * y
    return ZState(z=z, zprime=form.alpha * z + grow * dy, x=x)


def z_state(form: ClosedForm, x: float, dps: int | None = None) -> ZState:
    """Reduced state at ``x``; raises ``OverflowError`` for extreme ``alpha*x``."""
    if not form.bound:
        raise solver.FreeConstantsError("z-state needs bound constants")
    lib, ctx = _arith(dps)
    with ctx:
        return _z_state(form, x, lib)


def _integrals(shape: ShapeParams, st: ZState, lib):
    beta, x, z, zp = shape.beta, st.x, st.z, st.zprime
    if shape.damping is DampingClass.OVERDAMPED:
        ch, sh = lib.cosh(beta * x), lib.sinh(beta * x)
        return -zp * sh / beta + z * ch, -z * sh + zp * ch / beta
    if shape.damping is DampingClass.UNDERDAMPED:
        c, s = lib.cos(beta * x), lib.sin(beta * x)
        return -zp * s / beta + z * c, z * s + zp * c / beta
    return zp, z - zp * x


def integrals_from_state(shape: ShapeParams, st: ZState, dps: int | None = None) -> FirstIntegralPair:
    lib, ctx = _arith(dps)
    with ctx:
        i1, i2 = _integrals(shape, st, lib)
        return FirstIntegralPair(float(i1), float(i2))


def first_integrals(form: ClosedForm, x: float, dps: int | None = None) -> FirstIntegralPair:
    """The two conserved quantities at ``x``; both should equal ``(C1, C2)``."""
    lib, ctx = _arith(dps)
    with ctx:
        st = _z_state(form, x, lib)
        i1, i2 = _integrals(form.shape, st, lib)
        return FirstIntegralPair(float(i1), float(i2))


def _reconstruction(shape: ShapeParams, st: ZState, i1, i2, lib):
    p, q, _, _ = solver._basis(shape.damping, shape.beta, st.x, lib)
    return abs(i1 * p + i2 * q - st.z) / max(1, abs(st.z))


def reconstruction_error(form: ClosedForm, x: float, dps: int | None = EXTENDED_DPS) -> float:
    """``|I1*p(bx) + I2*q(bx) - z| / max(1, |z|)`` with ``(p, q)`` the basis pair."""
    lib, ctx = _arith(dps)
    with ctx:
        st = _z_state(form, x, lib)
        i1, i2 = _integrals(form.shape, st, lib)
        return float(_reconstruction(form.shape, st, i1, i2, lib))


def _clip(form: ClosedForm, xs: Sequence[float]) -> list[float]:
    if form.damping is DampingClass.OVERDAMPED:
        return [x for x in xs if abs(form.beta * x) <= HYPERBOLIC_CLIP]
    return list(xs)


def check_constancy(
    form: ClosedForm,
    xs: Sequence[float] | None = None,
    tol: float = 1e-9,
    *,
    states: Sequence[ZState] | None = None,
    dps: int | None = EXTENDED_DPS,
) -> ConstancyReport:
    """Check that both first integrals are flat over ``xs`` and equal ``(C1, C2)``.

    Deviations are taken from the values at the grid point nearest ``x = 0``
    and scaled by ``max(1, |I1(x0)|, |I2(x0)|)``. ``states`` lets the caller
    supply precomputed z-states, which is how a form whose constants no
    longer match its trajectory is caught.
    """
    if not form.bound:
        raise solver.FreeConstantsError("constancy check needs bound constants")
    lib, ctx = _arith(dps)
    with ctx:
        if states is None:
            grid = _clip(form, default_grid() if xs is None else xs)
            if not grid:
                raise ValueError("evaluation grid is empty")
            states = [_z_state(form, x, lib) for x in grid]
        elif not states:
            raise ValueError("evaluation grid is empty")
        pairs = [_integrals(form.shape, st, lib) for st in states]
        ref = min(range(len(states)), key=lambda i: abs(states[i].x))
        r1, r2 = pairs[ref]
        scale = max(1, abs(r1), abs(r2))
        dev1 = max(abs(p[0] - r1) for p in pairs) / scale
        dev2 = max(abs(p[1] - r2) for p in pairs) / scale
        id_dev = max(max(abs(p[0] - form.c1), abs(p[1] - form.c2)) for p in pairs) / scale
        rebuild = max(_reconstruction(form.shape, st, *p, lib) for st, p in zip(states, pairs))
        dev1, dev2, id_dev = float(dev1), float(dev2), float(id_dev)
        return ConstancyReport(
            case=form.damping.value,
            max_dev_I1=dev1,
            max_dev_I2=dev2,
            identified_C1=float(r1),
            identified_C2=float(r2),
            max_id_dev=id_dev,
            max_reconstruction_err=float(rebuild),
            n_points=len(states),
            tol=tol,
            passed=dev1 <= tol and dev2 <= tol and id_dev <= tol,
        )


def check_reconstruction(
    form: ClosedForm,
    xs: Sequence[float] | None = None,
    dps: int | None = EXTENDED_DPS,
) -> float:
    """Largest reconstruction error over the (clipped) grid."""
    return check_constancy(form, xs, dps=dps).max_reconstruction_err
