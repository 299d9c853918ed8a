import itertools
import math
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from liecurv.curvature import ricci_closed_form
from liecurv.einstein import (CASE_A_FIRST, CASE_A_SECOND, CASE_B_QUADRATIC, CASE_C_REALITY,
                              NewtonError, bracket_real_roots, canonical_key, case_a_quartic,
                              cubic_discriminant, enumerate_solutions, evaluate_system,
                              newton_refine, rational_roots, residual, solve_case_A,
                              solve_case_B, solve_case_C)

F = Fraction
u1, u2, u3, u4 = sp.symbols("u1 u2 u3 u4", positive=True)
pos_frac = st.fractions(min_value=F(1, 4), max_value=4, max_denominator=60)
metric = st.tuples(pos_frac, pos_frac, pos_frac, pos_frac)


def _sym_system(a, b, c, d):
    a, b, c, d = map(sp.sympify, (a, b, c, d))
    p = b * c * d
    return [
        -3 / a - a / (2 * b ** 2) - a / (2 * c ** 2) - a / (2 * d ** 2),
        sp.Rational(7, 2) * a / b ** 2 - 9 / b + (c ** 2 + d ** 2 - b ** 2) / p,
        sp.Rational(7, 2) * a / c ** 2 - 9 / c + (b ** 2 + d ** 2 - c ** 2) / p,
        sp.Rational(7, 2) * a / d ** 2 - 9 / d + (b ** 2 + c ** 2 - d ** 2) / p,
    ]


def _proportional(expr, target):
    q = sp.cancel(sp.factor(expr) / target)
    return q.is_number and q != 0


def _bivariate(poly):
    return sum(c * u1 ** i * u4 ** j for (i, j), c in poly.items())


def test_examples():
    assert evaluate_system((1, 1, 1, 1)) == (F(-9, 2),) * 4
    assert evaluate_system((F(3, 5), 1, 1, 1)) == (F(-59, 10),) * 4
    e = evaluate_system((1, 1, 1, 2))
    assert e[1] == e[2] == F(-7, 2)
    assert e[3] == F(-37, 8)
    assert residual((1, 1, 1, 2)) > 0
    with pytest.raises(ValueError):
        evaluate_system((1, -1, 1, 1))


@settings(max_examples=60, deadline=None)
@given(metric)
def test_system_is_minus_ricci(model, u):
    e = evaluate_system(u)
    r = ricci_closed_form(u, model.casimir).r
    assert all(a == -b for a, b in zip(e, r))


@settings(max_examples=30, deadline=None)
@given(metric)
def test_permutation_equivariance(u):
    base = evaluate_system(u)
    for perm in itertools.permutations((1, 2, 3)):
        v = (u[0],) + tuple(u[k] for k in perm)
        e = evaluate_system(v)
        assert e[0] == base[0]
        assert [e[1 + i] for i in range(3)] == [base[k] for k in perm]
        assert residual(v) == residual(u)


@settings(max_examples=30, deadline=None)
@given(metric, st.fractions(min_value=F(1, 10), max_value=10, max_denominator=20))
def test_residual_scaling(u, c):
    assert residual([c * x for x in u]) == residual(u) / c


def test_case_a_equations_oracle():
    e = _sym_system(u1, 1, 1, u4)
    first = sp.numer(sp.together(e[0] - e[1]))
    second = sp.numer(sp.together(e[1] - e[3]))
    assert _proportional(first, _bivariate(CASE_A_FIRST))
    assert _proportional(second, _bivariate(CASE_A_SECOND))
    assert sp.expand(_bivariate(CASE_A_SECOND)
                     - (7 * u1 * (u4 ** 2 - 1) + 2 * u4 * (2 * u4 - 7) * (u4 - 1))) == 0


def test_case_a_quartic_factorization():
    x = sp.Symbol("x")
    q = sum(c * x ** k for k, c in enumerate(case_a_quartic()))
    assert sp.factor(q) == sp.factor((11 * x - 7) * (4 * x ** 3 - 14 * x ** 2 + 37 * x - 35))
    # direct elimination as an oracle
    sub = _bivariate(CASE_A_FIRST).subs(u1, 2 * u4 * (7 - 2 * u4) / (7 * u4 + 7))
    num = sp.factor(sp.numer(sp.together(sub)))
    assert sp.simplify(num / q.subs(x, u4)).free_symbols <= {u4}
    assert sp.degree(sp.cancel(num / q.subs(x, u4)), u4) <= 2


def test_cubic_has_one_real_root():
    cubic = [-35, 37, -14, 4]
    assert cubic_discriminant(cubic) < 0
    x = sp.Symbol("x")
    roots = sp.real_roots(4 * x ** 3 - 14 * x ** 2 + 37 * x - 35)
    assert len(roots) == 1
    assert 1.38 < float(roots[0]) < 1.39
    assert [(a, b) for a, b in bracket_real_roots(cubic) if a <= float(roots[0]) <= b]


def test_rational_roots():
    assert rational_roots(case_a_quartic()) == [F(7, 11)]
    assert rational_roots([-6, 11, -6, 1]) == [1, 2, 3]


def test_solve_case_a():
    rep = solve_case_A()
    exact = [s for s in rep.solutions if all(isinstance(x, Fraction) for x in s)]
    assert exact == [(1, 1, 1, 1), (F(3, 5), 1, 1, 1), (F(7, 11), 1, 1, F(7, 11))]
    numeric = [s for s in rep.solutions if s not in exact]
    assert len(numeric) == 1
    a, _, _, d = numeric[0]
    assert abs(a - 0.70193) < 1e-5 and abs(d - 1.38421) < 1e-5
    assert residual(numeric[0]) < 1e-12


def test_case_b_oracle():
    e = _sym_system(1, 1, u3, u4)
    diff = sp.numer(sp.together(e[0] - e[1]))
    assert _proportional(diff, (u3 - u4) ** 2 * (2 * u3 * u4 + 1))
    x = sp.Symbol("x")
    ee = _sym_system(1, 1, x, x)
    a, b, c = CASE_B_QUADRATIC
    assert _proportional(sp.numer(sp.together(ee[0] - ee[2])), a * x ** 2 + b * x + c)
    assert solve_case_B().solutions == [(1, 1, 1, 1), (1, 1, F(11, 7), F(11, 7))]


def test_case_c_oracle():
    e = _sym_system(1, u2, u3, u4)
    a = sp.cancel(sp.numer(sp.together(e[1] - e[2])) / (u2 - u3))
    b = sp.cancel(sp.numer(sp.together(e[2] - e[3])) / (u3 - u4))
    # with u2, u3, u4 distinct, a = b = 0 forces u2 + u3 + u4 = 7/4
    assert _proportional(a - b, u3 * (u2 - u4) * (4 * u2 + 4 * u3 + 4 * u4 - 7))
    # a = 0 in terms of s = u2 + u3 and p = u2 u3 pins the product
    assert _proportional(a, 4 * u2 * u3 * (u2 + u3) - 18 * u2 * u3 * u4 + 7 * u4 * (u2 + u3))
    s_, p_ = sp.symbols("s p")
    sol = sp.solve(sp.expand(-4 * p_ * s_ + 18 * p_ * u4 - 7 * u4 * s_), p_)
    assert sp.simplify(sol[0].subs(s_, sp.Rational(7, 4) - u4)
                       - 7 * u4 * (sp.Rational(7, 4) - u4) / (22 * u4 - 7)) == 0
    # reality of (u2, u3) from their sum and product
    s = sp.Rational(7, 4) - u4
    p = 7 * u4 * s / (22 * u4 - 7)
    cond = sp.expand(sp.cancel((s ** 2 - 4 * p) * (22 * u4 - 7) / s))
    c0, c1, c2 = CASE_C_REALITY
    assert sp.expand(cond - (c0 + c1 * u4 + c2 * u4 ** 2)) == 0


def test_case_c_sweep():
    rep = solve_case_C(step=1e-4)
    assert rep.candidates == []
    assert rep.real_points == 0
    assert rep.certified_empty


def test_newton():
    r = newton_refine((0.70, 1, 1, 1.38))
    assert r.residual < 1e-12
    assert abs(r.u[0] - 0.701927287) < 1e-8 and r.u[1] == 1.0
    fixed = newton_refine((1, 1, 1, 1))
    assert fixed.iterations == 0 and fixed.step_norm == 0
    with pytest.raises(NewtonError):
        newton_refine((1e-6, 1, 1, 1))


def test_gauge_is_restored():
    r = newton_refine((1.4, 2, 2, 2.76))
    assert r.u[1] == 1.0 and r.residual < 1e-12


def test_dedup_key():
    assert canonical_key((1, 1, F(11, 7), F(11, 7))) == canonical_key((F(7, 11), 1, 1, F(7, 11)))
    assert canonical_key((1, 2, 3, 4)) == canonical_key((2, 8, 4, 6))


@pytest.fixture(scope="module")
def solutions():
    return enumerate_solutions()


def test_four_classes(solutions):
    assert len(solutions) == 4
    assert [s.u for s in solutions[:3]] == [(1, 1, 1, 1), (F(3, 5), 1, 1, 1),
                                            (F(7, 11), 1, 1, F(7, 11))]
    assert all(s.residual == 0 and s.exact for s in solutions[:3])
    last = solutions[3]
    assert not last.exact and last.residual < 1e-12
    assert abs(last.u[0] - 0.7019) <= 1e-4 and abs(last.u[3] - 1.3842) <= 1e-4


def test_solution_metadata(solutions):
    kinds = [s.classification.kind for s in solutions]
    assert kinds == ["bi-invariant", "case-1", "case-2", "non-naturally-reductive"]
    assert all(s.einstein_constant > 0 for s in solutions)
    assert all(s.ricci_check < 1e-10 for s in solutions)
    assert solutions[3].provenance == "newton"
    d = solutions[1].as_dict()
    assert d["u"] == ["3/5", "1", "1", "1"] and d["constant"] == "59/10"


def test_loose_tolerance_same_classes(solutions):
    assert [canonical_key(s.u) for s in enumerate_solutions(tol=1e-6)] == \
        [canonical_key(s.u) for s in solutions]


def test_constants(solutions):
    assert [s.einstein_constant for s in solutions[:3]] == [F(9, 2), F(59, 10), F(135, 22)]
    assert math.isclose(solutions[3].einstein_constant, 5.159046357, rel_tol=1e-9)
