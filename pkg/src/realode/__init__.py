"""Closed-form solutions of ``y'' + a*y' + b*y = 0`` in real arithmetic, with checks."""
from .parser import (
    Coefficients,
    DegenerateOrderError,
    NonzeroRHSError,
    OdeSyntaxError,
    OrderError,
    ParseError,
    RawEquation,
    normalize,
    parse_coefficients,
    parse_ode,
)
from .solver import (
    ClosedForm,
    DampingClass,
    ExponentialForm,
    ShapeParams,
    characteristic_roots,
    evaluate,
    evaluate_array,
    evaluate_derivative,
    fit_initial_conditions,
    from_exponential_form,
    general_solution,
    render,
    shape_params,
    solve_ivp,
    to_exponential_form,
)

__version__ = "0.1.0"
