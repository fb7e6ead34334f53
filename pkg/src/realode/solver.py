"""Real-arithmetic closed-form solutions of ``y'' + a*y' + b*y = 0``.

With ``alpha = a/2`` and ``beta = sqrt(|a**2/4 - b|)`` every solution is

* overdamped  (a**2/4 > b): ``exp(-alpha*x) * (C1*cosh(beta*x) + C2*sinh(beta*x))``
* critical    (a**2/4 = b): ``exp(-alpha*x) * (C1*x + C2)``
* underdamped (a**2/4 < b): ``exp(-alpha*x) * (C1*cos(beta*x) + C2*sin(beta*x))``

Initial conditions are always imposed at ``x = 0``; to impose them at
``x0`` solve in the shifted variable ``t = x - x0`` and evaluate at
``x - x0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .parser import Coefficients

__all__ = [
    "DEFAULT_TOL",
    "EXP_SWITCH",
    "DampingClass",
    "ShapeParams",
    "ClosedForm",
    "ExponentialForm",
    "ClassError",
    "RootCoincidenceError",
    "FreeConstantsError",
    "shape_params",
    "general_solution",
    "fit_initial_conditions",
    "solve_ivp",
    "evaluate",
    "evaluate_derivative",
    "evaluate_array",
    "characteristic_roots",
    "to_exponential_form",
    "from_exponential_form",
    "render",
    "render_exponential",
    "format_number",
]

DEFAULT_TOL = 1e-9
# |beta*x| above which overdamped evaluation uses D1*exp(r1*x) + D2*exp(r2*x).
# Past it the hyperbolic pair cancels against the envelope (error ~ e^(2|beta*x|)
# ulps); below it the exponential pair cancels for sinh-like data (error ~ coth).
EXP_SWITCH = 1.0


class ClassError(ValueError):
    """Operation requested for the wrong damping class."""


class RootCoincidenceError(ValueError):
    pass


class FreeConstantsError(ValueError):
    """Numeric evaluation of a solution whose constants are still free."""


class DampingClass(enum.Enum):
    OVERDAMPED = "overdamped"
    CRITICAL = "critical"
    UNDERDAMPED = "underdamped"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ShapeParams:
    alpha: float
    beta: float
    damping: DampingClass


@dataclass(frozen=True)
class ClosedForm:
    """A member of the general solution family.

    ``c1``/``c2`` are ``None`` while the constants are free.
    """

    shape: ShapeParams
    coeffs: Coefficients
    c1: float | None = None
    c2: float | None = None

    def __post_init__(self):
        if (self.c1 is None) != (self.c2 is None):
            raise ValueError("c1 and c2 must be both bound or both free")

    @property
    def bound(self) -> bool:
        return self.c1 is not None

    @property
    def damping(self) -> DampingClass:
        return self.shape.damping

    @property
    def alpha(self) -> float:
        return self.shape.alpha

    @property
    def beta(self) -> float:
        return self.shape.beta

    def with_constants(self, c1: float, c2: float) -> "ClosedForm":
        return replace(self, c1=float(c1), c2=float(c2))

    def __call__(self, x: float) -> float:
        return evaluate(self, x)

    def to_dict(self) -> dict:
        return {
            "class": self.damping.value,
            "alpha": self.alpha,
            "beta": self.beta,
            "c1": self.c1,
            "c2": self.c2,
            "a": self.coeffs.a,
            "b": self.coeffs.b,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClosedForm":
        shape = ShapeParams(float(d["alpha"]), float(d["beta"]), DampingClass(d["class"]))
        c1 = None if d["c1"] is None else float(d["c1"])
        c2 = None if d["c2"] is None else float(d["c2"])
        return cls(shape, Coefficients(float(d["a"]), float(d["b"])), c1, c2)


@dataclass(frozen=True)
class ExponentialForm:
    """``D1*exp(r1*x) + D2*exp(r2*x)`` with ``r1 > r2``."""

    d1: float
    d2: float
    r1: float
    r2: float

    def evaluate(self, x: float, order: int = 0) -> float:
        return _exp_term(self.d1 * self.r1**order, self.r1 * x) + _exp_term(self.d2 * self.r2**order, self.r2 * x)

    def to_dict(self) -> dict:
        return {"d1": self.d1, "d2": self.d2, "r1": self.r1, "r2": self.r2}


def _exp_term(weight: float, exponent: float) -> float:
    """``weight * exp(exponent)`` without overflowing in the intermediate exp."""
    if weight == 0:
        return 0.0
    try:
        return weight * math.exp(exponent)
    except OverflowError:
        return math.copysign(math.exp(exponent + math.log(abs(weight))), weight)


def _exp_term_array(weight: float, exponent: np.ndarray) -> np.ndarray:
    if weight == 0:
        return np.zeros_like(exponent)
    direct = weight * np.exp(exponent)
    bad = ~np.isfinite(direct)
    if np.any(bad):
        direct[bad] = np.copysign(np.exp(exponent[bad] + math.log(abs(weight))), weight)
    return direct


def shape_params(coeffs: Coefficients, tol: float = DEFAULT_TOL) -> ShapeParams:
    """Classify by the sign of ``a**2/4 - b``.

    A discriminant within ``tol * max(1, a**2/4, |b|)`` of zero is snapped to
    the critical class, where the fitting formulas stay well conditioned.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    a, b = coeffs.a, coeffs.b
    quarter_a2 = a * a / 4.0
    d = quarter_a2 - b
    alpha = a / 2.0 + 0.0
    if abs(d) <= tol * max(1.0, quarter_a2, abs(b)):
        return ShapeParams(alpha, 0.0, DampingClass.CRITICAL)
    damping = DampingClass.OVERDAMPED if d > 0 else DampingClass.UNDERDAMPED
    return ShapeParams(alpha, math.sqrt(abs(d)), damping)


def general_solution(coeffs: Coefficients, tol: float = DEFAULT_TOL) -> ClosedForm:
    return ClosedForm(shape_params(coeffs, tol), coeffs)


def fit_initial_conditions(form: ClosedForm, y0: float, v0: float) -> ClosedForm:
    """Bind the constants so that ``y(0) = y0`` and ``y'(0) = v0``."""
    alpha, beta = form.alpha, form.beta
    if form.damping is DampingClass.CRITICAL:
        return form.with_constants(v0 + alpha * y0, y0)
    return form.with_constants(y0, (v0 + alpha * y0) / beta)


def solve_ivp(coeffs: Coefficients, y0: float, v0: float, tol: float = DEFAULT_TOL) -> ClosedForm:
    return fit_initial_conditions(general_solution(coeffs, tol), y0, v0)


def _require_bound(form: ClosedForm):
    if not form.bound:
        raise FreeConstantsError("constants C1, C2 are free; fit or bind them before evaluating")


def _basis(damping: DampingClass, beta, x, lib=math):
    """Return ``(p, q, p', q')`` for the class's basis pair at ``x``."""
    if damping is DampingClass.OVERDAMPED:
        ch, sh = lib.cosh(beta * x), lib.sinh(beta * x)
        return ch, sh, beta * sh, beta * ch
    if damping is DampingClass.UNDERDAMPED:
        c, s = lib.cos(beta * x), lib.sin(beta * x)
        return c, s, -beta * s, beta * c
    return x, 1, 1, 0


def _jet(form: ClosedForm, x, lib=math):
    """``(y, y', y'')`` of ``exp(-alpha*x) * u(x)`` by the product rule.

    ``u`` is the basis combination; ``u'' = +beta**2 u`` (hyperbolic),
    ``-beta**2 u`` (trigonometric) or ``0`` (critical).
    """
    alpha, beta, damping = form.alpha, form.beta, form.damping
    c1, c2 = form.c1, form.c2
    p, q, dp, dq = _basis(damping, beta, x, lib)
    u = c1 * p + c2 * q
    du = c1 * dp + c2 * dq
    if damping is DampingClass.OVERDAMPED:
        ddu = beta * beta * u
    elif damping is DampingClass.UNDERDAMPED:
        ddu = -beta * beta * u
    else:
        ddu = 0
    envelope = lib.exp(-alpha * x)
    return (
        envelope * u,
        envelope * (du - alpha * u),
        envelope * (ddu - 2 * alpha * du + alpha * alpha * u),
    )


def _derivatives(form: ClosedForm, x, order: int, lib=math):
    return _jet(form, x, lib)[order]


def _checked(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise OverflowError(f"{what} is outside the finite floating-point range")
    return value


def _evaluate(form: ClosedForm, x: float, order: int) -> float:
    _require_bound(form)
    try:
        if form.damping is DampingClass.OVERDAMPED and abs(form.beta * x) > EXP_SWITCH:
            value = to_exponential_form(form).evaluate(x, order)
        else:
            value = _derivatives(form, x, order)
    except OverflowError:
        raise OverflowError(f"y^({order})({x!r}) overflows") from None
    return _checked(value, f"y^({order})({x!r})")


def evaluate(form: ClosedForm, x: float) -> float:
    """Value ``y(x)`` of a solution with bound constants.

    Raises ``OverflowError`` when the result is not representable.
    """
    return _evaluate(form, x, 0)


def evaluate_derivative(form: ClosedForm, x: float, order: int = 1) -> float:
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order!r}")
    return _evaluate(form, x, order)


def evaluate_array(form: ClosedForm, xs, order: int = 0) -> np.ndarray:
    """Vectorized ``evaluate``/``evaluate_derivative`` over an array of points."""
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order!r}")
    _require_bound(form)
    xs = np.asarray(xs, dtype=np.float64)
    with np.errstate(over="ignore", invalid="ignore"):
        out = _derivatives(form, xs, order, np)
        if form.damping is DampingClass.OVERDAMPED:
            far = np.abs(form.beta * xs) > EXP_SWITCH
            if np.any(far):
                exp = to_exponential_form(form)
                xf = xs[far]
                out = np.array(out, dtype=np.float64, copy=True)
                out[far] = _exp_term_array(exp.d1 * exp.r1**order, exp.r1 * xf) + _exp_term_array(
                    exp.d2 * exp.r2**order, exp.r2 * xf
                )
    out = np.broadcast_to(np.asarray(out, dtype=np.float64), xs.shape)
    if not np.all(np.isfinite(out)):
        raise OverflowError(f"y^({order}) overflows on part of the grid")
    return np.array(out)


def characteristic_roots(coeffs: Coefficients, tol: float = DEFAULT_TOL) -> tuple[float, ...]:
    """Distinct real roots of ``r**2 + a*r + b``.

    Returns ``(r1, r2)`` with ``r1 > r2`` when overdamped, ``(r,)`` for the
    double root of the critical class, and ``()`` when there is no real root.
    """
    shape = shape_params(coeffs, tol)
    if shape.damping is DampingClass.OVERDAMPED:
        return (-shape.alpha + shape.beta, -shape.alpha - shape.beta)
    if shape.damping is DampingClass.CRITICAL:
        return (-shape.alpha,)
    return ()


def to_exponential_form(form: ClosedForm) -> ExponentialForm:
    if form.damping is not DampingClass.OVERDAMPED:
        raise ClassError(f"exponential form needs distinct real roots; class is {form.damping}")
    _require_bound(form)
    c1, c2 = form.c1, form.c2
    return ExponentialForm(
        d1=(c1 + c2) / 2,
        d2=(c1 - c2) / 2,
        r1=-form.alpha + form.beta,
        r2=-form.alpha - form.beta,
    )


def from_exponential_form(exp: ExponentialForm, tol: float = DEFAULT_TOL) -> ClosedForm:
    r1, r2 = exp.r1, exp.r2
    if abs(r1 - r2) <= tol * max(1.0, abs(r1), abs(r2)):
        raise RootCoincidenceError(
            f"roots r1={r1!r} and r2={r2!r} coincide; this is the critical class"
        )
    if r1 < r2:
        raise ValueError(f"roots must be ordered r1 > r2, got r1={r1!r}, r2={r2!r}")
    alpha = -(r1 + r2) / 2 + 0.0  # no negative zero
    beta = (r1 - r2) / 2
    shape = ShapeParams(alpha, beta, DampingClass.OVERDAMPED)
    coeffs = Coefficients(a=2 * alpha, b=r1 * r2)
    return ClosedForm(shape, coeffs, exp.d1 + exp.d2, exp.d1 - exp.d2)


def format_number(v: float) -> str:
    """Shortest round-trip decimal, without a trailing ``.0``."""
    v = float(v)
    if v == 0:
        return "0"
    text = repr(v)
    return text[:-2] if text.endswith(".0") else text


def _scaled_var(k: float) -> str:
    """Render ``k*x`` compactly: ``x``, ``-x``, ``0.5x``."""
    if k == 1:
        return "x"
    if k == -1:
        return "-x"
    return f"{format_number(k)}x"


def _combine(terms: list[tuple[str, str]]) -> str:
    """Join ``(coefficient, factor)`` pairs with folded signs."""
    out = ""
    for i, (coef, factor) in enumerate(terms):
        piece = f"{coef}·{factor}" if factor else coef
        if i == 0:
            out = piece
        elif piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


def render(form: ClosedForm) -> str:
    """Human-readable formula, e.g. ``y = e^(-1.5x)·(C1·cosh(0.5x) + C2·sinh(0.5x))``."""
    if form.bound:
        k1, k2 = format_number(form.c1), format_number(form.c2)
    else:
        k1, k2 = "C1", "C2"
    damping = form.damping
    if damping is DampingClass.CRITICAL:
        inner = _combine([(k1, "x"), (k2, "")])
    else:
        arg = _scaled_var(form.beta)
        f1, f2 = ("cosh", "sinh") if damping is DampingClass.OVERDAMPED else ("cos", "sin")
        inner = _combine([(k1, f"{f1}({arg})"), (k2, f"{f2}({arg})")])
    if form.alpha == 0:
        return f"y = {inner}"
    return f"y = e^({_scaled_var(-form.alpha)})·({inner})"


def render_exponential(exp: ExponentialForm) -> str:
    return "y = " + _combine(
        [
            (format_number(exp.d1), f"e^({_scaled_var(exp.r1)})"),
            (format_number(exp.d2), f"e^({_scaled_var(exp.r2)})"),
        ]
    )

