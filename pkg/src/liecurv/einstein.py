"""Einstein metrics in the four-parameter family on F4.

The Einstein condition is the equality of the four block expressions
returned by ``evaluate_system`` (each is minus the Ricci eigenvalue on its
block). Solutions are found by the three-way case split u2 = u3, u1 = u2,
all distinct, with the irrational root polished by Newton's method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .curvature import (CLASS_RANK, Classification, MetricParams, _params,
                        naturally_reductive_test)

BRACKET_TOL = 1e-14
NEWTON_TOL = 1e-12
ACCEPT_TOL = 1e-10


class NewtonError(ArithmeticError):
    pass


def evaluate_system(u) -> tuple:
    p = _params(u)
    u1, u2, u3, u4 = (Fraction(x) for x in p.u) if p.exact else p.u
    prod = u2 * u3 * u4
    e1 = -3 / u1 - u1 / (2 * u2 ** 2) - u1 / (2 * u3 ** 2) - u1 / (2 * u4 ** 2)
    e2 = 7 * u1 / (2 * u2 ** 2) - 9 / u2 + (u3 ** 2 + u4 ** 2 - u2 ** 2) / prod
    e3 = 7 * u1 / (2 * u3 ** 2) - 9 / u3 + (u2 ** 2 + u4 ** 2 - u3 ** 2) / prod
    e4 = 7 * u1 / (2 * u4 ** 2) - 9 / u4 + (u2 ** 2 + u3 ** 2 - u4 ** 2) / prod
    return e1, e2, e3, e4


def residual(u):
    e = evaluate_system(u)
    return max(abs(a - b) for a in e for b in e)


def einstein_constant(u):
    """Common positive Ricci eigenvalue (meaningful at a solution)."""
    return -evaluate_system(u)[0]


# -- exact univariate polynomials (coefficient lists, low degree first) ------

def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def padd(p, q):
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def pmul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def ppow(p, k):
    out = [Fraction(1)]
    for _ in range(k):
        out = pmul(out, p)
    return out


def pdivmod(p, q):
    p = [Fraction(x) for x in p]
    q = _trim(q)
    out = [Fraction(0)] * max(1, len(p) - len(q) + 1)
    while len(p) >= len(q) and any(p):
        c = p[-1] / q[-1]
        k = len(p) - len(q)
        out[k] = c
        for i, b in enumerate(q):
            p[i + k] -= c * b
        p = _trim(p)
        if len(p) == len(q) - 1 or (len(p) == 1 and p[0] == 0):
            break
    return _trim(out), _trim(p)


def peval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pderiv(p):
    return _trim([i * c for i, c in enumerate(p)][1:] or [0])


def primitive(p):
    """Integer polynomial with positive leading coefficient and content 1."""
    den = math.lcm(*(Fraction(c).denominator for c in p))
    ints = [int(Fraction(c) * den) for c in p]
    g = math.gcd(*ints)
    sign = 1 if ints[-1] > 0 else -1
    return [sign * c // g for c in ints]


def _divisors(n):
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]


def rational_roots(p):
    """All rational roots of a polynomial with rational coefficients."""
    p = primitive(p)
    shift = 0
    while p[0] == 0:
        p = p[1:]
        shift += 1
    roots = {Fraction(0)} if shift else set()
    for a in _divisors(p[0]):
        for b in _divisors(p[-1]):
            for s in (1, -1):
                x = Fraction(s * a, b)
                if peval(p, x) == 0:
                    roots.add(x)
    return sorted(roots)


def cubic_discriminant(p):
    d, c, b, a = (Fraction(x) for x in p)
    return 18 * a * b * c * d - 4 * b ** 3 * d + b * b * c * c - 4 * a * c ** 3 - 27 * a * a * d * d


def bracket_real_roots(p, lo=0.0, hi=8.0, step=1 / 64):
    """Sign-change intervals on a uniform grid."""
    out = []
    x = lo
    fx = float(peval(p, Fraction(x)))
    while x < hi:
        y = x + step
        fy = float(peval(p, Fraction(y)))
        if fx == 0:
            out.append((x, x))
        elif fx * fy < 0:
            out.append((x, y))
        x, fx = y, fy
    return out


def refine_root(p, a, b, tol=BRACKET_TOL):
    """Bisection to width ``tol`` followed by Newton polish."""
    f = [float(c) for c in p]
    df = [float(c) for c in pderiv(p)]
    fa = peval(f, a)
    while b - a > tol:
        m = 0.5 * (a + b)
        fm = peval(f, m)
        if fm == 0:
            a = b = m
            break
        if (fa < 0) == (fm < 0):
            a, fa = m, fm
        else:
            b = m
    x = 0.5 * (a + b)
    for _ in range(3):
        d = peval(df, x)
        if d == 0:
            break
        x -= peval(f, x) / d
    return x


def solve_quadratic(a, b, c):
    """Real roots of a x^2 + b x + c, exact when the discriminant is a rational square."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    rn, rd = math.isqrt(disc.numerator), math.isqrt(disc.denominator)
    if rn * rn == disc.numerator and rd * rd == disc.denominator:
        s = Fraction(rn, rd)
        return sorted({(-b - s) / (2 * a), (-b + s) / (2 * a)})
    s = math.sqrt(disc)
    return sorted([float((-b - s) / (2 * a)), float((-b + s) / (2 * a))])


# -- the case analysis -------------------------------------------------------

# u2 = u3 = 1: the two reduced equations, as {(deg u1, deg u4): coeff}
CASE_A_FIRST = {(2, 2): 9, (1, 2): -18, (1, 3): 2, (0, 2): 6, (2, 0): 1}
CASE_A_SECOND = {(1, 2): 7, (1, 0): -7, (0, 3): 4, (0, 2): -18, (0, 1): 14}
# 7u1(u4^2 - 1) + 2u4(2u4 - 7)(u4 - 1), expanded


def _bivariate_at_u4(poly, u4):
    """Substitute u4, giving a polynomial in u1."""
    deg = max(i for i, _ in poly)
    out = [Fraction(0)] * (deg + 1)
    for (i, j), c in poly.items():
        out[i] += c * Fraction(u4) ** j
    return _trim(out)


def _bivariate_substitute_u1(poly, num, den):
    """Substitute u1 = num/den (polynomials in u4), clearing den^deg."""
    deg = max(i for i, _ in poly)
    out = [Fraction(0)]
    for (i, j), c in poly.items():
        term = pmul(pmul(ppow(num, i), ppow(den, deg - i)), [Fraction(0)] * j + [Fraction(c)])
        out = padd(out, term)
    return out


@dataclass
class CaseReport:
    """Solutions of one branch plus the intermediate algebra, for display."""
    solutions: list[tuple]
    notes: dict = field(default_factory=dict)


def case_a_quartic():
    """Quartic in u4 left after eliminating u1 on the branch u4 != 1."""
    num = [Fraction(0), Fraction(14), Fraction(-4)]  # 2u4(7 - 2u4)
    den = [Fraction(7), Fraction(7)]                  # 7u4 + 7
    p = _bivariate_substitute_u1(CASE_A_FIRST, num, den)
    while p[0] == 0:  # divide out powers of u4
        p = p[1:]
    return primitive(p)


def case_a_u1(u4):
    return 2 * u4 * (7 - 2 * u4) / (7 * u4 + 7)


def solve_case_A() -> CaseReport:
    sols = []
    # branch u4 = 1: the second equation vanishes identically
    assert not any(_bivariate_at_u4(CASE_A_SECOND, 1))
    quad = _bivariate_at_u4(CASE_A_FIRST, 1)
    branch1 = [x for x in solve_quadratic(quad[2], quad[1], quad[0]) if x > 0]
    for u1 in sorted(branch1, reverse=True):
        sols.append((u1, Fraction(1), Fraction(1), Fraction(1)))
    quartic = case_a_quartic()
    rat = [x for x in rational_roots(quartic) if x > 0 and x != 1]
    rest = [Fraction(c) for c in quartic]
    for x in rat:
        rest, rem = pdivmod(rest, [-x, Fraction(1)])
        assert rem == [0]
    cubic = primitive(rest)
    for x in rat:
        u1 = case_a_u1(x)
        if u1 > 0:
            sols.append((u1, Fraction(1), Fraction(1), x))
    brackets = bracket_real_roots(cubic)
    cubic_roots = [refine_root(cubic, a, b) for a, b in brackets]
    for x in cubic_roots:
        u1 = case_a_u1(x)
        if x > 0 and u1 > 0:
            sols.append((u1, 1.0, 1.0, x))
    notes = {
        "u4=1 quadratic": primitive(quad),
        "quartic": quartic,
        "rational roots": rat,
        "cubic": cubic,
        "cubic discriminant": cubic_discriminant(cubic),
        "cubic brackets": brackets,
        "cubic roots": cubic_roots,
    }
    return CaseReport(sols, notes)


CASE_B_QUADRATIC = (7, -18, 11)  # in u3 = u4, with u1 = u2 = 1


def solve_case_B() -> CaseReport:
    # (u3 - u4)^2 (2 u3 u4 + 1) = 0 with the second factor positive forces u3 = u4
    roots = [x for x in solve_quadratic(*CASE_B_QUADRATIC) if x > 0]
    sols = [(Fraction(1), Fraction(1), x, x) for x in roots]
    return CaseReport(sols, {"quadratic": list(CASE_B_QUADRATIC)})


# s^2 - 4p >= 0 with s = 7/4 - u4, p = 7 u4 s/(22 u4 - 7), multiplied through by
# (22 u4 - 7)/s > 0, reads CASE_C_REALITY(u4) >= 0
CASE_C_REALITY = (Fraction(-49, 4), Fraction(35, 2), Fraction(-22))


@dataclass
class CaseCReport:
    grid_points: int
    real_points: int
    candidates: list[tuple]
    min_residual: float
    sign_changes: list[tuple]
    step: float
    reality_discriminant: Fraction = field(
        default_factory=lambda: CASE_C_REALITY[1] ** 2 - 4 * CASE_C_REALITY[0] * CASE_C_REALITY[2])

    @property
    def certified_empty(self) -> bool:
        """The reality condition is a downward parabola with no real zero."""
        return self.reality_discriminant < 0 and CASE_C_REALITY[2] < 0


def _residual_array(u1, u2, u3, u4):
    prod = u2 * u3 * u4
    e1 = -3 / u1 - u1 / (2 * u2 ** 2) - u1 / (2 * u3 ** 2) - u1 / (2 * u4 ** 2)
    e2 = 7 * u1 / (2 * u2 ** 2) - 9 / u2 + (u3 ** 2 + u4 ** 2 - u2 ** 2) / prod
    e3 = 7 * u1 / (2 * u3 ** 2) - 9 / u3 + (u2 ** 2 + u4 ** 2 - u3 ** 2) / prod
    e4 = 7 * u1 / (2 * u4 ** 2) - 9 / u4 + (u2 ** 2 + u3 ** 2 - u4 ** 2) / prod
    e = np.stack([e1, e2, e3, e4])
    return e.max(axis=0) - e.min(axis=0), e1 - e2


def solve_case_C(step: float = 1e-5, tol: float = 1e-6, distinct_tol: float = 1e-9) -> CaseCReport:
    """Sweep u4 over (0, 7/4) with u1 = 1, u2 + u3 = 7/4 - u4 and
    u2 u3 = 7 u4 (7/4 - u4) / (22 u4 - 7); report near-solutions."""
    n = int(round(1.75 / step))
    u4 = np.arange(1, n) * step
    u4 = u4[np.abs(22 * u4 - 7) > 1e-12]  # pole at u4 = 7/22
    s = 1.75 - u4
    p = 7 * u4 * s / (22 * u4 - 7)
    disc = s * s - 4 * p
    ok = (disc >= 0) & (p > 0)
    u4r, sr, dr = u4[ok], s[ok], np.sqrt(np.where(ok, disc, 0))[ok]
    u2 = 0.5 * (sr + dr)
    u3 = 0.5 * (sr - dr)
    pos = (u2 > 0) & (u3 > 0)
    u2, u3, u4r = u2[pos], u3[pos], u4r[pos]
    ones = np.ones_like(u2)
    res, gap = _residual_array(ones, u2, u3, u4r)
    vals = np.stack([ones, u2, u3, u4r])
    distinct = np.ones(len(u2), dtype=bool)
    for i in range(4):
        for j in range(i + 1, 4):
            distinct &= np.abs(vals[i] - vals[j]) > distinct_tol
    hit = distinct & (res < tol)
    cands = [tuple(float(x) for x in vals[:, k]) + (float(res[k]),) for k in np.flatnonzero(hit)]
    # sign changes of E1 - E2 between consecutive grid points of a real branch
    changes = []
    idx = np.flatnonzero(np.diff(np.sign(gap)) != 0)
    for k in idx:
        if u4r[k + 1] - u4r[k] <= 1.5 * step and res[k] < 1 and res[k + 1] < 1:
            changes.append((float(u4r[k]), float(u4r[k + 1])))
    return CaseCReport(
        grid_points=len(u4), real_points=int(pos.sum()), candidates=cands,
        min_residual=float(res[distinct].min()) if distinct.any() else math.inf,
        sign_changes=changes, step=step)


# -- Newton refinement -------------------------------------------------------

def _gauge(u):
    u = [float(x) for x in _params(u).u]
    return [x / u[1] for x in u]


def _F(z):
    u1, u3, u4 = z
    e = evaluate_system((u1, 1.0, u3, u4))
    return np.array([e[0] - e[1], e[1] - e[2], e[2] - e[3]])


@dataclass
class NewtonResult:
    u: tuple
    residual: float
    iterations: int
    step_norm: float


def newton_refine(u0, tol: float = NEWTON_TOL, max_iter: int = 20) -> NewtonResult:
    """Newton on (E1-E2, E2-E3, E3-E4) in (u1, u3, u4) with u2 fixed to 1."""
    u = _gauge(u0)
    z = np.array([u[0], u[2], u[3]])
    last = 0.0
    for it in range(max_iter + 1):
        res = residual((z[0], 1.0, z[1], z[2]))
        if not np.isfinite(res):
            raise NewtonError(f"non-finite residual at {z.tolist()}")
        if res < tol:
            return NewtonResult((float(z[0]), 1.0, float(z[1]), float(z[2])), float(res), it, last)
        f = _F(z)
        jac = np.empty((3, 3))
        for k in range(3):
            h = 1e-7 * max(1.0, abs(z[k]))
            zp, zm = z.copy(), z.copy()
            zp[k] += h
            zm[k] -= h
            jac[:, k] = (_F(zp) - _F(zm)) / (2 * h)
        if not np.all(np.isfinite(jac)) or np.linalg.cond(jac) > 1e14:
            raise NewtonError(f"singular Jacobian at {z.tolist()}")
        dz = np.linalg.solve(jac, -f)
        z = z + dz
        last = float(np.linalg.norm(dz))
        if np.any(z <= 0):
            raise NewtonError(f"left the positive orthant at {z.tolist()}")
    raise NewtonError(f"no convergence in {max_iter} iterations (residual {res:.3e})")


# -- enumeration -------------------------------------------------------------

@dataclass
class EinsteinSolution:
    u: tuple
    einstein_constant: object
    residual: object
    exact: bool
    classification: Classification
    provenance: str
    ricci_check: float | None = None

    def as_dict(self):
        from .report import fmt
        return {
            "u": [fmt(x) for x in self.u],
            "constant": fmt(self.einstein_constant),
            "residual": fmt(self.residual),
            "exact": self.exact,
            "classification": self.classification.kind,
            "provenance": self.provenance,
        }


def canonical_key(u, digits: int = 9):
    """Class of u modulo scaling and permutations of (u2, u3, u4)."""
    u = [float(x) for x in _params(u).u]
    tail = sorted(u[1:])
    return tuple(round(x / tail[0], digits) for x in [u[0]] + tail)


def _make_solution(u, provenance, tol):
    p = MetricParams(tuple(u))
    res = residual(p)
    if p.exact:
        if res != 0:
            raise ArithmeticError(f"exact candidate {u} has residual {res}")
    elif res >= tol:
        raise ArithmeticError(f"numeric candidate {u} has residual {res:.3e}")
    return EinsteinSolution(p.u, einstein_constant(p), res, p.exact,
                            naturally_reductive_test(p), provenance)


def enumerate_solutions(tol: float = ACCEPT_TOL, verify: bool = True,
                        sweep_step: float = 1e-5) -> list[EinsteinSolution]:
    found: dict = {}

    def add(sol):
        key = canonical_key(sol.u)
        if key not in found:
            found[key] = sol

    for u in solve_case_A().solutions:
        p = MetricParams(u)
        if p.exact:
            add(_make_solution(u, "case-A", tol))
        else:
            ref = newton_refine(u)
            add(_make_solution(ref.u, "newton", tol))
    for u in solve_case_B().solutions:
        add(_make_solution(u, "case-B", tol))
    for cand in solve_case_C(step=sweep_step).candidates:
        ref = newton_refine(cand[:4])
        add(_make_solution(ref.u, "case-C", tol))
    sols = sorted(found.values(), key=lambda s: (CLASS_RANK[s.classification.kind],
                                                 [float(x) for x in s.u]))
    if verify:
        from .model import f4_model
        from .curvature import ricci_connection_path
        m = f4_model()
        for s in sols:
            ric = ricci_connection_path(s.u, m.cb, m.decomp)
            s.ricci_check = max(abs(r - float(s.einstein_constant)) for r in ric.r)
            if s.ricci_check >= tol * max(1.0, float(s.einstein_constant)):
                raise ArithmeticError(f"connection-path Ricci disagrees at {s.u}")
    return sols
