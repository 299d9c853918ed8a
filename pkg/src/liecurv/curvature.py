"""Ricci curvature of the metrics u1 B|h1 + u2 B|h2 + u3 B|h3 + u4 B|h4.

Three routes are provided and cross-checked in the tests:

* ``ricci_closed_form`` - block formulas driven by the Casimir matrix,
* ``ricci_triple_bracket`` - the generic block formula in the [k; ij] sums,
* ``ricci_connection_path`` - the Levi-Civita connection and curvature tensor
  assembled on the full 52-dimensional algebra.

Ricci eigenvalues are reported with the positive sign (r_k > 0 on compact
groups). B is normalized so long roots have squared length 2 unless stated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .chevalley import CompactBasis, invariant_form
from .involution import GradedDecomposition
from .root_system import LONG_ROOT_2, NEGATIVE_KILLING

BI_INVARIANT = "bi-invariant"
CASE_1 = "case-1"
CASE_2 = "case-2"
NON_NATURALLY_REDUCTIVE = "non-naturally-reductive"
CLASS_RANK = {BI_INVARIANT: 0, CASE_1: 1, CASE_2: 2, NON_NATURALLY_REDUCTIVE: 3}


class CasimirError(ArithmeticError):
    pass


@dataclass(frozen=True)
class MetricParams:
    u: tuple

    def __post_init__(self):
        u = tuple(x if isinstance(x, (Rational, float)) else float(x) for x in self.u)
        if all(isinstance(x, Rational) for x in u):
            u = tuple(Fraction(x) for x in u)
        if not u or any(x <= 0 for x in u):
            shown = ", ".join(str(x) for x in self.u)
            raise ValueError(f"metric coefficients must be positive, got ({shown})")
        object.__setattr__(self, "u", u)

    @classmethod
    def parse(cls, text: str) -> MetricParams:
        vals = []
        for part in text.split(","):
            part = part.strip()
            try:
                vals.append(Fraction(part) if "e" not in part.lower() else float(part))
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"bad metric coefficient {part!r}") from None
        return cls(tuple(vals))

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Rational) for x in self.u)

    def scaled(self, c) -> MetricParams:
        return MetricParams(tuple(c * x for x in self.u))

    def __len__(self):
        return len(self.u)

    def __getitem__(self, k):
        return self.u[k]


def _params(u) -> MetricParams:
    return u if isinstance(u, MetricParams) else MetricParams(tuple(u))


@dataclass
class CasimirMatrix:
    """c[i][j]: sum over a B-orthonormal basis of h_i of ad(e)^2 on h_j is -c[i][j] Id."""
    c: list[list[Fraction]]

    def column_sums(self):
        return [sum(self.c[i][j] for i in range(len(self.c))) for j in range(len(self.c))]


@dataclass
class TripleBracketTable:
    """values[k][i][j] = [k; ij], the sum of squared structure constants
    B([e_a, e_b], e_c)^2 over orthonormal e_a in h_i, e_b in h_j, e_c in h_k."""
    values: list[list[list[Fraction]]]
    normalization: str

    def nonzero(self):
        n = len(self.values)
        return [((k, i, j), self.values[k][i][j]) for k in range(n) for i in range(n)
                for j in range(n) if self.values[k][i][j]]


@dataclass
class RicciComponents:
    r: tuple
    path: str
    max_offblock: float = 0.0
    max_spread: float = 0.0

    def disagreement(self, other: RicciComponents) -> float:
        return max(abs(float(a) - float(b)) for a, b in zip(self.r, other.r))

    def is_einstein(self, tol: float = 1e-10) -> bool:
        return max(self.r) - min(self.r) <= tol * max(1.0, abs(float(max(self.r))))


def casimir_matrix(decomp: GradedDecomposition, cb: CompactBasis) -> CasimirMatrix:
    t = cb.table
    nb = len(decomp.blocks)
    c = [[None] * nb for _ in range(nb)]
    for i, src in enumerate(decomp.blocks):
        for j, dst in enumerate(decomp.blocks):
            value = None
            for y in dst:
                img: dict[int, Fraction] = {}
                for e in src:
                    for m, a in t.bracket(e, y).items():
                        for q, b in t.bracket(e, m).items():
                            img[q] = img.get(q, 0) + a * b / cb.norms[e]
                img = {q: v for q, v in img.items() if v}
                if set(img) - {y}:
                    raise CasimirError(f"block operator ({i + 1},{j + 1}) is not scalar")
                val = -img.get(y, Fraction(0))
                if value is None:
                    value = val
                elif val != value:
                    raise CasimirError(f"block operator ({i + 1},{j + 1}) is not scalar")
            c[i][j] = value
    return CasimirMatrix(c)


def triple_brackets(decomp: GradedDecomposition, cb: CompactBasis,
                    normalization: str = LONG_ROOT_2) -> TripleBracketTable:
    nb = len(decomp.blocks)
    v = [[[Fraction(0)] * nb for _ in range(nb)] for _ in range(nb)]
    n, blk = cb.norms, decomp.block_of
    for (a, b), res in cb.table.brackets.items():
        for g, c in res.items():
            # orthonormal A = c * n_g / sqrt(n_a n_b n_g)
            v[blk[g]][blk[a]][blk[b]] += c * c * n[g] / (n[a] * n[b])
    if normalization == NEGATIVE_KILLING:
        scale = invariant_form(cb, NEGATIVE_KILLING).scale
        v = [[[x / scale for x in row] for row in plane] for plane in v]
    elif normalization != LONG_ROOT_2:
        raise ValueError(f"unknown normalization {normalization!r}")
    return TripleBracketTable(v, normalization)


def connection_table(u) -> list[list]:
    """kappa[i][j] with nabla_x y = kappa[i][j] [x, y] for x in h_i, y in h_j."""
    u1, u2, u3, u4 = _params(u).u
    half = Fraction(1, 2) if _params(u).exact else 0.5
    k = [[half] * 4 for _ in range(4)]
    for i, ui in ((1, u2), (2, u3), (3, u4)):
        k[0][i] = (2 * ui - u1) / (2 * ui)
    k[1][2] = (u3 + u4 - u2) / (2 * u4)
    k[1][3] = (u3 + u4 - u2) / (2 * u3)
    k[2][3] = (u2 + u4 - u3) / (2 * u2)
    # torsion-free: kappa[j][i] = 1 - kappa[i][j]
    for i in range(4):
        for j in range(i + 1, 4):
            k[j][i] = 1 - k[i][j]
    return k


def _mixed_coefficient(u, a, b):
    """Coefficient of the h_b Casimir term in Ric on h_a (a, b in 1..3, a != b)."""
    c = 6 - a - b
    ua, ub, uc = u[a], u[b], u[c]
    p = 2 * uc * (uc - ua - ub) + uc * uc - (ua - ub) ** 2
    return p / (4 * u[1] * u[2] * u[3])


def ricci_closed_form(u, cm: CasimirMatrix) -> RicciComponents:
    u = _params(u).u
    if len(u) != 4:
        raise ValueError("closed form needs four coefficients")
    c = cm.c
    u1 = u[0]
    r = [sum(u1 * c[j][0] / (4 * u[j] ** 2) for j in range(4))]
    for a in (1, 2, 3):
        coeff = [-u1 / (4 * u[a] ** 2), None, None, None]
        coeff[a] = -(4 * u[a] - 3 * u1) / (4 * u[a] ** 2)
        for b in (1, 2, 3):
            if b != a:
                coeff[b] = _mixed_coefficient(u, a, b)
        r.append(-sum(coeff[j] * c[j][a] for j in range(4)))
    return RicciComponents(tuple(r), "closed")


def ricci_triple_bracket(y, tb: TripleBracketTable, dims) -> RicciComponents:
    """Block Ricci formula; y are coefficients against the negative Killing form."""
    if tb.normalization != NEGATIVE_KILLING:
        raise ValueError("triple-bracket formula needs the negative-Killing normalization")
    y = _params(y).u
    v = tb.values
    n = len(y)
    if len(dims) != n or len(v) != n:
        raise ValueError("block count mismatch")
    r = []
    for k in range(n):
        s1 = sum(y[k] / (y[j] * y[i]) * v[k][j][i] for i in range(n) for j in range(n))
        s2 = sum(y[j] / (y[k] * y[i]) * v[j][k][i] for i in range(n) for j in range(n))
        r.append(1 / (2 * y[k]) + s1 / (4 * dims[k]) - s2 / (2 * dims[k]))
    return RicciComponents(tuple(r), "brackets")


def ricci_triple_bracket_u(u, tb: TripleBracketTable, dims, killing_scale) -> RicciComponents:
    """Same metric written against B (long-root-2): y = u / killing_scale."""
    return ricci_triple_bracket([x / killing_scale for x in _params(u).u], tb, dims)


class _Frame:
    """Float structure data for the full algebra, cached per compact basis."""

    def __init__(self, cb: CompactBasis, decomp: GradedDecomposition):
        self.ad = cb.table.ad_matrices()
        self.norms = np.array([float(x) for x in cb.norms])
        self.block = np.array([decomp.block_of[k] for k in range(cb.dim)])


_FRAMES: dict = {}


def _frame(cb, decomp) -> _Frame:
    key = (id(cb), id(decomp))
    if key not in _FRAMES:
        _FRAMES[key] = _Frame(cb, decomp)
    return _FRAMES[key]


def metric_diagonal(u, cb, decomp) -> np.ndarray:
    f = _frame(cb, decomp)
    uu = np.array([float(x) for x in _params(u).u])
    return uu[f.block] * f.norms


def nabla_from_table(u, cb, decomp) -> np.ndarray:
    """nab[a][:, b] = coordinates of nabla_{e_a} e_b."""
    f = _frame(cb, decomp)
    k = np.array(connection_table(u), dtype=float)
    return f.ad * k[f.block[:, None, None], f.block[None, None, :]]


def nabla_koszul(u, cb, decomp) -> np.ndarray:
    """Levi-Civita connection from the Koszul formula for left-invariant fields."""
    f = _frame(cb, decomp)
    g = metric_diagonal(u, cb, decomp)
    # L[a, b, z] = <[e_a, e_b], e_z>
    L = f.ad.transpose(0, 2, 1) * g
    # <nabla_a b, z> = (L[a,b,z] - L[b,z,a] + L[z,a,b]) / 2
    lower = 0.5 * (L - L.transpose(2, 0, 1) + L.transpose(1, 2, 0))
    return (lower / g).transpose(0, 2, 1)


def _ricci_matrix_curvature(nab, ad) -> np.ndarray:
    """Ric(x, y) = trace of z -> R(z, x) y."""
    tr = np.einsum("kkm->m", nab)
    t1 = np.einsum("m,xmy->xy", tr, nab)
    t2 = np.einsum("xkm,kmy->xy", nab, nab)
    t3 = np.einsum("kcx,cky->xy", ad, nab)
    return t1 - t2 - t3


def _ricci_matrix_trace(nab, ad) -> np.ndarray:
    """Ric(x, y) = -tr (nabla_x - ad x)(nabla_y - ad y)."""
    m = nab - ad
    return -np.einsum("aij,bji->ab", m, m)


def _components(ric, u, cb, decomp, path) -> RicciComponents:
    f = _frame(cb, decomp)
    g = metric_diagonal(u, cb, decomp)
    diag = np.diag(ric) / g
    r, spread = [], 0.0
    for b in range(len(decomp.blocks)):
        vals = diag[f.block == b]
        r.append(float(vals.mean()))
        spread = max(spread, float(vals.max() - vals.min()))
    normed = ric / np.sqrt(np.outer(g, g))
    same = f.block[:, None] == f.block[None, :]
    eye = np.eye(len(g), dtype=bool)
    off = float(np.abs(normed[~same]).max()) if (~same).any() else 0.0
    off = max(off, float(np.abs(normed[same & ~eye]).max()))
    return RicciComponents(tuple(r), path, max_offblock=off, max_spread=spread)


def ricci_connection_path(u, cb: CompactBasis, decomp: GradedDecomposition,
                          connection: str = "table", formula: str = "curvature") -> RicciComponents:
    """Ricci from the connection and the full curvature tensor.

    ``connection`` is "table" (the block-wise coefficients) or "koszul";
    ``formula`` is "curvature" (trace of R(., x)y against the dual basis) or
    "trace" (minus the trace of (nabla_x - ad x)(nabla_y - ad y)).
    """
    if connection == "table":
        nab = nabla_from_table(u, cb, decomp)
    elif connection == "koszul":
        nab = nabla_koszul(u, cb, decomp)
    else:
        raise ValueError(f"unknown connection {connection!r}")
    ad = _frame(cb, decomp).ad
    if formula == "curvature":
        ric = _ricci_matrix_curvature(nab, ad)
    elif formula == "trace":
        ric = _ricci_matrix_trace(nab, ad)
    else:
        raise ValueError(f"unknown formula {formula!r}")
    return _components(ric, u, cb, decomp, f"connection-{connection}-{formula}")


def metric_compatibility_defects(u, cb: CompactBasis, decomp: GradedDecomposition):
    """Pairs where <nabla_z x, y> + <x, nabla_z y> != 0, computed exactly for rational u."""
    p = _params(u)
    k = connection_table(p)
    blk = decomp.block_of
    g = [p.u[blk[i]] * cb.norms[i] for i in range(cb.dim)]
    nab: dict[tuple[int, int], dict[int, object]] = {}
    for (z, x), res in cb.table.brackets.items():
        kz = k[blk[z]][blk[x]]
        nab[(z, x)] = {m: kz * c for m, c in res.items()}
    tol = 0 if p.exact else 1e-12
    bad = []
    for (z, x), col in nab.items():
        for y, val in col.items():
            other = nab.get((z, y), {}).get(x, 0)
            defect = g[y] * val + g[x] * other
            if abs(defect) > tol * max(1.0, abs(float(g[y] * val))):
                bad.append((z, x, y, defect))
    return bad


@dataclass(frozen=True)
class Classification:
    kind: str
    i2: int | None = None  # for case-2: the block paired with h1

    def __str__(self):
        if self.kind == CASE_2:
            return f"{self.kind} (i2={self.i2})"
        return self.kind

    @property
    def naturally_reductive(self) -> bool:
        return self.kind != NON_NATURALLY_REDUCTIVE


def naturally_reductive_test(u, rel_tol: float = 1e-9) -> Classification:
    p = _params(u)
    vals = p.u
    if p.exact:
        def eq(a, b):
            return a == b
    else:
        def eq(a, b):
            return abs(a - b) <= rel_tol * max(abs(a), abs(b))
    u1, u2, u3, u4 = vals
    if eq(u1, u2) and eq(u2, u3) and eq(u3, u4):
        return Classification(BI_INVARIANT)
    if eq(u2, u3) and eq(u3, u4):
        return Classification(CASE_1)
    for i2, (i3, i4) in ((2, (3, 4)), (3, (2, 4)), (4, (2, 3))):
        if eq(u1, vals[i2 - 1]) and eq(vals[i3 - 1], vals[i4 - 1]):
            return Classification(CASE_2, i2)
    return Classification(NON_NATURALLY_REDUCTIVE)
