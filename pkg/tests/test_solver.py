import math

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from conftest import CONSTANTS, COEFF_GRID, ICS, ulps
from realode import oracle
from realode.parser import Coefficients
from realode.solver import (
    EXP_SWITCH,
    ClassError,
    ClosedForm,
    DampingClass,
    ExponentialForm,
    FreeConstantsError,
    RootCoincidenceError,
    ShapeParams,
    characteristic_roots,
    evaluate,
    evaluate_array,
    evaluate_derivative,
    fit_initial_conditions,
    format_number,
    from_exponential_form,
    general_solution,
    render,
    render_exponential,
    shape_params,
    solve_ivp,
    to_exponential_form,
)

OVER, CRIT, UNDER = DampingClass.OVERDAMPED, DampingClass.CRITICAL, DampingClass.UNDERDAMPED


@pytest.mark.parametrize(
    "a, b, alpha, beta, damping",
    [(3, 2, 1.5, 0.5, OVER), (2, 1, 1, 0, CRIT), (0, 1, 0, 1, UNDER), (0, 0, 0, 0, CRIT), (0, -1, 0, 1, OVER)],
)
def test_shape_params(a, b, alpha, beta, damping):
    assert shape_params(Coefficients(a, b), 1e-9) == ShapeParams(alpha, beta, damping)


def test_snapping_band():
    assert shape_params(Coefficients(2, 1 + 1e-12)).damping is CRIT
    assert shape_params(Coefficients(2, 1 - 1e-12)).damping is CRIT
    assert shape_params(Coefficients(2, 1 + 1e-6)).damping is UNDER
    assert shape_params(Coefficients(2, 1 - 1e-6)).damping is OVER
    assert shape_params(Coefficients(2, 1 + 1e-12), tol=0).damping is UNDER
    # band scales with max(1, a^2/4, |b|)
    assert shape_params(Coefficients(2000, 1e6 + 1e-4)).damping is CRIT


def test_negative_tol_rejected():
    with pytest.raises(ValueError):
        shape_params(Coefficients(1, 1), -1)


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_trichotomy(a, b):
    shape = shape_params(Coefficients(a, b))
    assert shape.damping in DampingClass
    assert shape.beta >= 0
    assert shape.alpha == a / 2
    assert (shape.beta == 0) == (shape.damping is CRIT)


def test_general_solution_is_free():
    form = general_solution(Coefficients(0, 0))
    assert not form.bound and form.c1 is None and form.c2 is None
    assert form.damping is CRIT and form.alpha == 0
    with pytest.raises(FreeConstantsError):
        evaluate(form, 1.0)


def test_half_bound_rejected():
    with pytest.raises(ValueError):
        ClosedForm(ShapeParams(0, 1, UNDER), Coefficients(0, 1), 1.0, None)


@pytest.mark.parametrize(
    "a, b, y0, v0, c1, c2",
    [(3, 2, 1, -1, 1, 1), (0, 1, 1, 0, 1, 0), (2, 1, 0, 1, 1, 0), (0, 0, 1, 2, 2, 1), (0, 4, 0, 2, 0, 1)],
)
def test_fit(a, b, y0, v0, c1, c2):
    form = solve_ivp(Coefficients(a, b), y0, v0)
    assert (form.c1, form.c2) == (c1, c2)


def test_refit_uses_only_shape():
    form = solve_ivp(Coefficients(3, 2), 1, -1)
    assert fit_initial_conditions(form, 2, -2) == solve_ivp(Coefficients(3, 2), 2, -2)


@pytest.mark.parametrize("a, b", COEFF_GRID)
@pytest.mark.parametrize("y0, v0", ICS)
def test_fit_exact_at_origin(a, b, y0, v0):
    form = solve_ivp(Coefficients(a, b), y0, v0)
    assert ulps(evaluate(form, 0.0), y0) <= 4 or abs(evaluate(form, 0.0) - y0) <= 4 * math.ulp(1.0)
    dv = evaluate_derivative(form, 0.0, 1)
    assert ulps(dv, v0) <= 4 or abs(dv - v0) <= 4 * math.ulp(max(1.0, abs(form.alpha * y0)))


def test_evaluate_examples():
    cos = solve_ivp(Coefficients(0, 1), 1, 0)
    assert abs(evaluate(cos, math.pi / 2)) <= 1e-12
    xex = solve_ivp(Coefficients(2, 1), 0, 1)
    assert evaluate(xex, 1.0) == pytest.approx(0.36787944117, abs=1e-11)
    emx = solve_ivp(Coefficients(3, 2), 1, -1)
    assert evaluate(emx, 2.0) == pytest.approx(0.13533528324, abs=1e-11)
    assert evaluate(emx, 2.0) == pytest.approx(math.exp(-2), rel=1e-14)
    assert emx(2.0) == evaluate(emx, 2.0)


def test_derivative_examples():
    assert evaluate_derivative(solve_ivp(Coefficients(0, 1), 1, 0), 0.0, 1) == 0
    assert evaluate_derivative(solve_ivp(Coefficients(2, 1), 0, 1), 0.0, 1) == 1
    assert evaluate_derivative(solve_ivp(Coefficients(3, 2), 1, -1), 0.0, 2) == pytest.approx(1, abs=1e-15)
    with pytest.raises(ValueError):
        evaluate_derivative(solve_ivp(Coefficients(0, 1), 1, 0), 0.0, 3)


def _sympy_solution(form):
    """Closed form as a sympy expression, built independently of the solver."""
    x = sp.Symbol("x")
    alpha, beta = sp.nsimplify(form.alpha), sp.sqrt(sp.nsimplify(abs(form.coeffs.a**2 / 4 - form.coeffs.b)))
    c1, c2 = sp.nsimplify(form.c1), sp.nsimplify(form.c2)
    basis = {
        OVER: (sp.cosh(beta * x), sp.sinh(beta * x)),
        CRIT: (x, sp.Integer(1)),
        UNDER: (sp.cos(beta * x), sp.sin(beta * x)),
    }[form.damping]
    return x, sp.exp(-alpha * x) * (c1 * basis[0] + c2 * basis[1])


@pytest.mark.parametrize("a, b", [(3, 2), (2, 1), (0, 1), (-1, -2), (0.5, 4), (-4, 4), (4, -4), (-0.5, 0)])
def test_derivatives_match_symbolic(a, b):
    coeffs = Coefficients(a, b)
    form = general_solution(coeffs).with_constants(2, -1)
    x, expr = _sympy_solution(form)
    exprs = [expr, sp.diff(expr, x), sp.diff(expr, x, 2)]
    # residual is identically zero symbolically
    residual = sp.simplify(exprs[2] + sp.nsimplify(a) * exprs[1] + sp.nsimplify(b) * exprs[0])
    assert residual == 0
    for xv in [-3.0, -0.7, 0.0, 0.3, 1.9, 4.5]:
        want = [float(e.subs(x, sp.Rational(xv)).evalf(30)) for e in exprs]
        got = [evaluate(form, xv), evaluate_derivative(form, xv, 1), evaluate_derivative(form, xv, 2)]
        for g, w in zip(got, want):
            assert g == pytest.approx(w, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("a, b", COEFF_GRID)
def test_forward_solution_property(a, b):
    coeffs = Coefficients(a, b)
    xs = np.linspace(-5, 5, 101)
    for c1 in CONSTANTS:
        for c2 in CONSTANTS:
            form = general_solution(coeffs).with_constants(c1, c2)
            worst = max(oracle.scaled_residual(coeffs, form, x) for x in xs)
            assert worst <= 1e-9


@pytest.mark.parametrize("a, b", [(3, 2), (-4, 0), (0, -1), (2, 1), (0, 1), (-1, -2)])
def test_evaluate_array_matches_scalar(a, b):
    form = general_solution(Coefficients(a, b)).with_constants(1.5, -0.5)
    xs = np.linspace(-8, 8, 97)
    for order in (0, 1, 2):
        scalar = [evaluate(form, x) if order == 0 else evaluate_derivative(form, x, order) for x in xs]
        np.testing.assert_allclose(evaluate_array(form, xs, order), scalar, rtol=1e-13, atol=1e-300)


def test_overflow_reported():
    form = solve_ivp(Coefficients(-1, -20), 1, 0)
    assert math.isfinite(evaluate(form, 100))
    with pytest.raises(OverflowError):
        evaluate(form, 1000)
    with pytest.raises(OverflowError):
        evaluate_array(form, [0.0, 1000.0])
    with pytest.raises(OverflowError):
        evaluate(solve_ivp(Coefficients(-10, 1), 1, 0), 200)


def test_far_overdamped_uses_exponential_pair():
    # y == 1 written as e^(2x)(cosh 2x - sinh 2x): the hyperbolic pair cancels catastrophically
    form = solve_ivp(Coefficients(-4, 0), 1, 0)
    for x in [5.0, 10.0, 50.0, 300.0]:
        assert evaluate(form, x) == 1.0
    assert np.all(evaluate_array(form, [5.0, 50.0, 300.0]) == 1.0)
    tiny = general_solution(Coefficients(-4, 0)).with_constants(1e-300, 1e-300)
    # D1 = 1e-300, r1 = 4
    assert evaluate(tiny, 200.0) == pytest.approx(float(mpmath.mpf(1e-300) * mpmath.exp(800)), rel=1e-12)
    # sinh-like data near 0 keeps the hyperbolic pair accurate
    sinh = general_solution(Coefficients(0, -1)).with_constants(0, 1)
    assert evaluate(sinh, 1e-10) == 1e-10
    assert abs(1e-10 * sinh.beta) < EXP_SWITCH


@pytest.mark.parametrize(
    "a, b, roots",
    [(3, 2, (-1, -2)), (2, 1, (-1,)), (0, 1, ()), (0, 0, (0,)), (0, -4, (2, -2)), (-3, 2, (2, 1))],
)
def test_characteristic_roots(a, b, roots):
    assert characteristic_roots(Coefficients(a, b)) == roots


@pytest.mark.parametrize("a, b", COEFF_GRID)
def test_roots_satisfy_characteristic_equation(a, b):
    roots = characteristic_roots(Coefficients(a, b))
    for r in roots:
        assert abs(r * r + a * r + b) <= 1e-9 * max(1, r * r, abs(a * r), abs(b))
    if len(roots) == 2:
        assert roots[0] > roots[1]


@pytest.mark.parametrize(
    "c1, c2, d1, d2", [(1, 1, 1, 0), (1, -1, 0, 1), (2, 0, 1, 1)]
)
def test_to_exponential_form(c1, c2, d1, d2):
    form = general_solution(Coefficients(3, 2)).with_constants(c1, c2)
    assert to_exponential_form(form) == ExponentialForm(d1, d2, -1, -2)


def test_to_exponential_form_wrong_class():
    for a, b in [(2, 1), (0, 1)]:
        with pytest.raises(ClassError):
            to_exponential_form(general_solution(Coefficients(a, b)).with_constants(1, 1))


def test_from_exponential_form():
    form = from_exponential_form(ExponentialForm(1, 0, -1, -2))
    assert (form.c1, form.c2, form.alpha, form.beta) == (1, 1, 1.5, 0.5)
    assert form.coeffs == Coefficients(3, 2)
    cosh = from_exponential_form(ExponentialForm(0.5, 0.5, 1, -1))
    assert (cosh.c1, cosh.c2, cosh.alpha, cosh.beta) == (1, 0, 0, 1)
    assert math.copysign(1, cosh.alpha) == 1
    assert evaluate(cosh, 0.7) == pytest.approx(math.cosh(0.7), rel=1e-15)
    with pytest.raises(RootCoincidenceError):
        from_exponential_form(ExponentialForm(1, 1, -1, -1))
    with pytest.raises(ValueError):
        from_exponential_form(ExponentialForm(1, 1, -2, -1))


@pytest.mark.parametrize("a, b", [ab for ab in COEFF_GRID if ab[0] ** 2 / 4 > ab[1]])
def test_basis_round_trip_and_pointwise(a, b):
    xs = np.linspace(-5, 5, 101)
    for c1 in CONSTANTS:
        for c2 in CONSTANTS:
            form = general_solution(Coefficients(a, b)).with_constants(c1, c2)
            exp = to_exponential_form(form)
            back = from_exponential_form(exp)
            for got, want in [(back.alpha, form.alpha), (back.beta, form.beta), (back.c1, c1), (back.c2, c2)]:
                assert ulps(got, want) <= 4
            for x in xs:
                y = evaluate(form, x)
                assert abs(exp.evaluate(x) - y) <= 1e-10 * max(1, abs(y))


@pytest.mark.parametrize(
    "form, text",
    [
        (general_solution(Coefficients(0, 1)), "y = C1·cos(x) + C2·sin(x)"),
        (general_solution(Coefficients(2, 1)), "y = e^(-x)·(C1·x + C2)"),
        (general_solution(Coefficients(3, 2)), "y = e^(-1.5x)·(C1·cosh(0.5x) + C2·sinh(0.5x))"),
        (general_solution(Coefficients(0, 0)), "y = C1·x + C2"),
        (general_solution(Coefficients(-2, 5)), "y = e^(x)·(C1·cos(2x) + C2·sin(2x))"),
        (solve_ivp(Coefficients(2, 1), 0, 1), "y = e^(-x)·(1·x + 0)"),
        (solve_ivp(Coefficients(0, 1), 1, -3), "y = 1·cos(x) - 3·sin(x)"),
        (solve_ivp(Coefficients(3, 2), 1, -1), "y = e^(-1.5x)·(1·cosh(0.5x) + 1·sinh(0.5x))"),
    ],
)
def test_render(form, text):
    assert render(form) == text


def test_render_exponential():
    exp = to_exponential_form(solve_ivp(Coefficients(3, 2), 1, 0))
    assert render_exponential(exp) == "y = 2·e^(-x) - 1·e^(-2x)"


@pytest.mark.parametrize("v, text", [(1.0, "1"), (-0.5, "-0.5"), (0.0, "0"), (-0.0, "0"), (0.1, "0.1"), (1e-20, "1e-20")])
def test_format_number(v, text):
    assert format_number(v) == text


def test_serialization_round_trip():
    for form in [general_solution(Coefficients(3, 2)), solve_ivp(Coefficients(0, 1), 1, 0)]:
        d = form.to_dict()
        assert list(d) == ["class", "alpha", "beta", "c1", "c2", "a", "b"]
        assert ClosedForm.from_dict(d) == form
    assert general_solution(Coefficients(3, 2)).to_dict()["c1"] is None
