"""Chevalley basis structure constants and the compact real form.

Signs of N_{a,b} are fixed by declaring every extraspecial pair positive and
propagating through the standard relations between structure constants; the
Jacobi scan certifies the result.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _linalg
from .root_system import (LONG_ROOT_2, NEGATIVE_KILLING, CartanType, RootSystemData,
                          RootVector, build_root_system)


@dataclass(eq=False)
class StructureTable:
    """Sparse structure constants: brackets[(i, j)] = {k: c} for [e_i, e_j]."""
    dim: int
    labels: list[str]
    brackets: dict[tuple[int, int], dict[int, Fraction]]

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        return self.brackets.get((i, j), {})

    def bracket_vec(self, x: dict, y: dict) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.bracket(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: v for k, v in out.items() if v != 0}

    def ad_matrices(self) -> np.ndarray:
        """ad[a][k, b] = coefficient of e_k in [e_a, e_b]."""
        ad = np.zeros((self.dim, self.dim, self.dim))
        for (a, b), res in self.brackets.items():
            for k, c in res.items():
                ad[a, k, b] = float(c)
        return ad

    def restrict(self, indices) -> StructureTable:
        """Sub-table on a bracket-closed subset of basis indices."""
        indices = list(indices)
        pos = {g: n for n, g in enumerate(indices)}
        br = {}
        for a in indices:
            for b in indices:
                res = self.bracket(a, b)
                if not res:
                    continue
                if any(k not in pos for k in res):
                    raise ValueError(f"subset not closed: [{self.labels[a]}, {self.labels[b]}]")
                br[(pos[a], pos[b])] = {pos[k]: c for k, c in res.items()}
        return StructureTable(len(indices), [self.labels[g] for g in indices], br)

    def to_json(self) -> str:
        """Deterministic listing of the nonzero constants as (i, j, k, "p/q")."""
        rows = sorted((i, j, k, str(Fraction(c)))
                      for (i, j), res in self.brackets.items() for k, c in res.items())
        return json.dumps({"dim": self.dim, "labels": self.labels, "constants": rows},
                          separators=(",", ":"))


@dataclass(eq=False)
class ChevalleyAlgebra:
    """Basis order: h_1..h_l, then x_a for the roots in rs.roots order."""
    rs: RootSystemData
    table: StructureTable
    root_index: dict[tuple[int, ...], int]
    N: dict[tuple[tuple[int, ...], tuple[int, ...]], int]

    def h(self, i: int) -> int:
        return i

    def x(self, root) -> int:
        return self.root_index[tuple(getattr(root, "coeffs", root))]


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _neg(a):
    return tuple(-x for x in a)


class _StructureConstants:
    """N_{a,b} on the full root system, determined by extraspecial signs."""

    def __init__(self, rs: RootSystemData):
        self.rs = rs
        self.roots = {r.coeffs for r in rs.roots}
        self.order = {r.coeffs: n for n, r in enumerate(rs.positive_roots)}
        gram = rs.form.gram
        self.len2 = {r: _linalg.bilinear(list(map(Fraction, r)), gram, list(map(Fraction, r)))
                     for r in self.roots}
        self.extraspecial = {}
        for xi in rs.positive_roots:
            for a in rs.positive_roots:
                b = tuple(x - y for x, y in zip(xi.coeffs, a.coeffs))
                if b in self.order:
                    self.extraspecial[xi.coeffs] = (a.coeffs, b)
                    break
        self.cache = {}

    def p(self, a, b):
        """Largest p with b - p a a root."""
        p, cur = 0, b
        while True:
            cur = tuple(x - y for x, y in zip(cur, a))
            if cur in self.roots:
                p += 1
            else:
                return p

    def __call__(self, a, b) -> int:
        key = (a, b)
        if key not in self.cache:
            self.cache[key] = self._compute(a, b)
        return self.cache[key]

    def _compute(self, a, b) -> int:
        s = _add(a, b)
        if s not in self.roots:
            return 0
        apos, bpos = a in self.order, b in self.order
        if apos and bpos:
            if self.order[a] > self.order[b]:
                return -self(b, a)
            if self.extraspecial[s] == (a, b):
                return self.p(a, b) + 1
            g, d = self.extraspecial[s]
            ng, nd = _neg(g), _neg(d)
            # four-root relation on (a, b, -g, -d); terms with non-root sums vanish
            bg, ag = _add(b, ng), _add(a, ng)
            t1 = Fraction(self(b, ng) * self(a, nd), self.len2[bg]) if bg in self.roots else 0
            t2 = Fraction(self(ng, a) * self(b, nd), self.len2[ag]) if ag in self.roots else 0
            val = -self.len2[s] * (t1 + t2) / self(ng, nd)
            assert val.denominator == 1
            return int(val)
        if not apos and not bpos:
            return -self(_neg(a), _neg(b))
        # mixed signs: a + b + c = 0 with N_ab/(c,c) = N_bc/(a,a) = N_ca/(b,b)
        c = _neg(s)
        if (c in self.order) == apos:
            val = self.len2[c] * self(c, a) / self.len2[b]
        else:
            val = self.len2[c] * self(b, c) / self.len2[a]
        assert val.denominator == 1
        return int(val)


@lru_cache(maxsize=None)
def build_chevalley(rs: RootSystemData) -> ChevalleyAlgebra:
    n = rs.rank
    roots = [r.coeffs for r in rs.roots]
    root_index = {r: n + k for k, r in enumerate(roots)}
    labels = [f"h{i + 1}" for i in range(n)] + [f"x{r}".replace(" ", "") for r in roots]
    nfun = _StructureConstants(rs)
    len2 = nfun.len2
    simple_len2 = rs.simple_root_lengths()
    br: dict[tuple[int, int], dict[int, Fraction]] = {}

    def put(i, j, res):
        res = {k: Fraction(v) for k, v in res.items() if v != 0}
        if res:
            br[(i, j)] = res
            br[(j, i)] = {k: -v for k, v in res.items()}

    for r in roots:
        labels_r = rs.dynkin_labels(RootVector(r))
        for i in range(n):
            put(i, root_index[r], {root_index[r]: labels_r[i]})
    N = {}
    for ai, a in enumerate(roots):
        for b in roots[ai + 1:]:
            s = _add(a, b)
            if not any(s):
                # [x_a, x_-a] = h_a = sum_i c_i (a_i, a_i)/(a, a) h_i
                put(root_index[a], root_index[b],
                    {i: Fraction(a[i]) * simple_len2[i] / len2[a] for i in range(n)})
            elif s in root_index:
                N[(a, b)] = nfun(a, b)
                N[(b, a)] = -N[(a, b)]
                put(root_index[a], root_index[b], {root_index[s]: N[(a, b)]})
    table = StructureTable(n + len(roots), labels, br)
    return ChevalleyAlgebra(rs, table, root_index, N)


@dataclass
class JacobiReport:
    ok: bool
    triples_checked: int
    witness: tuple[int, int, int] | None = None
    jacobi_sum: dict | None = None

    def __bool__(self):
        return self.ok


def _jacobi_chunk(args):
    table, rows = args
    count = 0
    for i in rows:
        for j in range(i, table.dim):
            for k in range(j, table.dim):
                count += 1
                s = _jacobi_sum(table, i, j, k)
                if s:
                    return count, (i, j, k), s
    return count, None, None


def _jacobi_sum(t: StructureTable, i, j, k):
    total: dict[int, Fraction] = {}
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        for m, x in t.bracket(b, c).items():
            for q, y in t.bracket(a, m).items():
                total[q] = total.get(q, 0) + x * y
    return {q: v for q, v in total.items() if v != 0}


def jacobi_check(t: StructureTable, workers: int | None = None) -> JacobiReport:
    """Exhaustive Jacobi scan over all i <= j <= k triples (degenerate included)."""
    if workers is None:
        workers = int(os.environ.get("LIECURV_THREADS", "1") or 1)
    rows = list(range(t.dim))
    if workers <= 1:
        chunks = [rows]
    else:
        chunks = [rows[w::workers] for w in range(workers)]
    total = 0
    if workers <= 1:
        results = map(_jacobi_chunk, [(t, c) for c in chunks])
    else:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_jacobi_chunk, [(t, c) for c in chunks]))
    for count, witness, s in results:
        total += count
        if witness is not None:
            return JacobiReport(False, total, witness, s)
    return JacobiReport(True, total)


class _QI:
    """Gaussian rational re + i*im."""
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re, self.im = Fraction(re), Fraction(im)

    def __add__(self, o):
        return _QI(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return _QI(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        if not isinstance(o, _QI):
            return _QI(self.re * o, self.im * o)
        return _QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.re or self.im)


I = _QI(0, 1)


@dataclass(eq=False)
class CompactBasis:
    """B-orthogonal basis of the compact real form.

    Order: orthogonalized Cartan elements (rational combinations of i*h_k),
    then u_a = x_a - x_-a and v_a = i(x_a + x_-a) for each positive root a.
    ``norms[k]`` is B(e_k, e_k) with B normalized so long roots have length 2.
    """
    algebra: ChevalleyAlgebra
    table: StructureTable
    norms: list[Fraction]
    cartan_coords: list[list[Fraction]]  # rows: H'_k in the i*h_j basis
    root_of: list[tuple[int, ...] | None]  # positive root carried by each element
    kind: list[str]

    @property
    def dim(self):
        return self.table.dim

    @property
    def rank(self):
        return len(self.cartan_coords)

    def index(self, kind: str, root) -> int:
        root = tuple(getattr(root, "coeffs", root))
        for n, (k, r) in enumerate(zip(self.kind, self.root_of)):
            if k == kind and r == root:
                return n
        raise KeyError((kind, root))


def _cartan_gram(rs: RootSystemData):
    """(h_i, h_j) = 4 (a_i, a_j) / ((a_i, a_i)(a_j, a_j))."""
    g = rs.form.gram
    n = rs.rank
    return [[4 * g[i][j] / (g[i][i] * g[j][j]) for j in range(n)] for i in range(n)]


@lru_cache(maxsize=None)
def compact_form(alg: ChevalleyAlgebra) -> CompactBasis:
    rs, t = alg.rs, alg.table
    n = rs.rank
    hgram = _cartan_gram(rs)
    cart, cnorms = _linalg.gram_schmidt([[int(i == j) for j in range(n)] for i in range(n)],
                                        hgram)
    cinv = _linalg.inverse(cart)
    elements: list[dict[int, _QI]] = []
    norms, root_of, kind, labels = [], [], [], []
    for k in range(n):
        elements.append({j: I * cart[k][j] for j in range(n) if cart[k][j]})
        norms.append(cnorms[k])
        root_of.append(None)
        kind.append("H")
        labels.append(f"H{k + 1}")
    for r in rs.positive_roots:
        a, b = alg.x(r), alg.x(-r)
        l2 = rs.root_length2(r)
        c = str(r.coeffs).replace(" ", "")
        elements.append({a: _QI(1), b: _QI(-1)})
        elements.append({a: I, b: I})
        norms += [4 / l2, 4 / l2]
        root_of += [r.coeffs, r.coeffs]
        kind += ["u", "v"]
        labels += [f"u{c}", f"v{c}"]
    neg_index = {alg.x(r): alg.x(-r) for r in rs.positive_roots}
    pos_elem = {alg.x(r): 2 * i + n for i, r in enumerate(rs.positive_roots)}

    def to_compact(vec: dict[int, _QI]) -> dict[int, Fraction]:
        out = {}
        # Cartan part: coefficient on h_j is i * r_j
        rvec = []
        for j in range(n):
            c = vec.get(j, _QI())
            if c.re:
                raise ArithmeticError("bracket left the compact form")
            rvec.append(c.im)
        for k, v in enumerate(_linalg.vecmat(rvec, cinv)):
            if v:
                out[k] = v
        for xa, xb in neg_index.items():
            a, b = vec.get(xa, _QI()), vec.get(xb, _QI())
            if not (a or b):
                continue
            p = (a - b) * Fraction(1, 2)
            q = (a + b) * _QI(0, Fraction(-1, 2))  # (a + b) / (2i)
            if p.im or q.im:
                raise ArithmeticError("bracket left the compact form")
            if p.re:
                out[pos_elem[xa]] = p.re
            if q.re:
                out[pos_elem[xa] + 1] = q.re
        return out

    dim = len(elements)
    br = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            acc: dict[int, _QI] = {}
            for a, ca in elements[i].items():
                for b, cb in elements[j].items():
                    for k, c in t.bracket(a, b).items():
                        acc[k] = acc.get(k, _QI()) + ca * cb * c
            res = to_compact({k: v for k, v in acc.items() if v})
            if res:
                br[(i, j)] = res
                br[(j, i)] = {k: -v for k, v in res.items()}
    table = StructureTable(dim, labels, br)
    return CompactBasis(alg, table, norms, cart, root_of, kind)


@dataclass
class InvariantFormData:
    diag: list[Fraction]
    normalization: str
    scale: Fraction = field(default=Fraction(1))  # relative to long-root-2


def killing_diagonal(cb: CompactBasis) -> list[Fraction]:
    """B_K(e, e) = -tr(ad e)^2, computed from the structure constants."""
    t = cb.table
    out = []
    for a in range(t.dim):
        s = Fraction(0)
        for b in range(t.dim):
            for k, c in t.bracket(a, b).items():
                s += c * t.bracket(a, k).get(b, 0)
        out.append(-s)
    return out


def invariant_form(cb: CompactBasis, normalization: str = LONG_ROOT_2) -> InvariantFormData:
    if normalization == LONG_ROOT_2:
        return InvariantFormData(list(cb.norms), LONG_ROOT_2)
    if normalization == NEGATIVE_KILLING:
        diag = killing_diagonal(cb)
        ratios = {d / n for d, n in zip(diag, cb.norms)}
        if len(ratios) != 1:
            raise ArithmeticError("trace form not proportional to B")
        return InvariantFormData(diag, NEGATIVE_KILLING, ratios.pop())
    raise ValueError(f"unknown normalization {normalization!r}")


def associativity_defects(cb: CompactBasis, diag=None) -> list[tuple[int, int, int]]:
    """Triples where B([x,y],z) != B(x,[y,z]); empty when B is invariant."""
    diag = diag or cb.norms
    t = cb.table
    bad = []
    for x in range(t.dim):
        for y in range(t.dim):
            for z, c in t.bracket(x, y).items():
                if c * diag[z] != t.bracket(y, z).get(x, 0) * diag[x]:
                    bad.append((x, y, z))
    return bad


def adjoint_casimir_operator(cb: CompactBasis) -> np.ndarray:
    """Matrix of sum_k ad(e_k)^2 / B(e_k, e_k) (exact entries as floats)."""
    t = cb.table
    out = [[Fraction(0)] * t.dim for _ in range(t.dim)]
    for y in range(t.dim):
        for k in range(t.dim):
            for m, c in t.bracket(k, y).items():
                for q, d in t.bracket(k, m).items():
                    out[q][y] += c * d / cb.norms[k]
    return out


def build_algebra(kind: str = "F4"):
    rs = build_root_system(CartanType.parse(kind))
    alg = build_chevalley(rs)
    return rs, alg, compact_form(alg)
