"""Inner automorphisms given by marked simple roots, and the joint eigenspace
decomposition of a commuting pair of involutions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .chevalley import CompactBasis, StructureTable
from .root_system import (CartanType, UnsupportedTypeError, _positive_roots,
                          _simple_root_lengths, cartan_matrix)


class InvolutionError(ValueError):
    pass


@dataclass(frozen=True)
class InvolutionSpec:
    """marks[i] is <H, a_i> in units of pi*sqrt(-1)."""
    marks: tuple[Fraction, ...]

    @classmethod
    def parse(cls, text: str) -> InvolutionSpec:
        text = text.strip()
        if "," in text:
            parts = text.split(",")
        else:
            parts = list(text)
        try:
            return cls(tuple(Fraction(p) for p in parts))
        except (ValueError, ZeroDivisionError):
            raise InvolutionError(f"bad marks {text!r}") from None

    def __str__(self):
        if all(m.denominator == 1 and 0 <= m <= 9 for m in self.marks):
            return "".join(str(m) for m in self.marks)
        return ",".join(str(m) for m in self.marks)


@dataclass(eq=False)
class AutomorphismMatrix:
    """exp(ad H): multiplies x_a by exp(i*pi*phase(a)), identity on the Cartan.

    ``phase`` maps each positive root to sum_i c_i marks_i, reduced mod 2.
    """
    spec: InvolutionSpec
    phase: dict[tuple[int, ...], Fraction]

    def signature(self) -> dict[tuple[int, ...], int]:
        """Sign on every root space; only defined when the map is involutive."""
        if any(p.denominator != 1 for p in self.phase.values()):
            raise InvolutionError(f"marks {self.spec} do not define an involution")
        return {r: (-1) ** int(p) for r, p in self.phase.items()}

    def matrix(self, cb: CompactBasis) -> dict[int, dict[int, int]]:
        """Sparse columns: image of basis element k as {row: coeff}."""
        cols: dict[int, dict[int, int]] = {}
        cos_sin = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}
        for k in range(cb.dim):
            kind, root = cb.kind[k], cb.root_of[k]
            if kind == "H":
                cols[k] = {k: 1}
                continue
            q = 2 * self.phase[root]
            if q.denominator != 1:
                raise InvolutionError("phases must be multiples of pi/2 for an exact action")
            c, s = cos_sin[int(q) % 4]
            # u -> c u + s v,  v -> -s u + c v
            if kind == "u":
                cols[k] = {k: c, k + 1: s}
            else:
                cols[k] = {k - 1: -s, k: c}
            cols[k] = {i: v for i, v in cols[k].items() if v}
        return cols


def involution_from_marks(rs, spec: InvolutionSpec) -> AutomorphismMatrix:
    if len(spec.marks) != rs.rank:
        raise InvolutionError(f"expected {rs.rank} marks, got {len(spec.marks)}")
    phase = {}
    for r in rs.positive_roots:
        p = sum((c * m for c, m in zip(r.coeffs, spec.marks)), Fraction(0))
        phase[r.coeffs] = p % 2
    return AutomorphismMatrix(spec, phase)


def _apply(cols, vec: dict) -> dict:
    out: dict = {}
    for k, a in vec.items():
        for i, c in cols[k].items():
            out[i] = out.get(i, 0) + a * c
    return {i: v for i, v in out.items() if v != 0}


def _compose(f, g):
    """Columns of f o g."""
    return {k: _apply(f, col) for k, col in g.items()}


def is_identity(a: AutomorphismMatrix) -> bool:
    return all(p == 0 for p in a.phase.values())


def check_involution(a: AutomorphismMatrix, cb: CompactBasis) -> bool:
    """a^2 = Id, a is a bracket homomorphism, and a preserves B."""
    try:
        m = a.matrix(cb)
    except InvolutionError:
        return False
    t = cb.table
    sq = _compose(m, m)
    if any(sq[k] != {k: 1} for k in range(cb.dim)):
        return False
    for x in range(cb.dim):
        for y in range(cb.dim):
            lhs = _apply(m, t.bracket(x, y))
            rhs = t.bracket_vec(m[x], m[y])
            if lhs != rhs:
                return False
            bxy = sum(c * m[y].get(k, 0) * cb.norms[k] for k, c in m[x].items())
            if bxy != (cb.norms[x] if x == y else 0):
                return False
    return True


def compose(a: AutomorphismMatrix, b: AutomorphismMatrix) -> AutomorphismMatrix:
    spec = InvolutionSpec(tuple(x + y for x, y in zip(a.spec.marks, b.spec.marks)))
    return AutomorphismMatrix(spec, {r: (a.phase[r] + b.phase[r]) % 2 for r in a.phase})


def commute(a: AutomorphismMatrix, b: AutomorphismMatrix, cb: CompactBasis) -> bool:
    ma, mb = a.matrix(cb), b.matrix(cb)
    return _compose(ma, mb) == _compose(mb, ma)


def _eigen_sign(a: AutomorphismMatrix, cb: CompactBasis) -> list[int]:
    sig = a.signature()
    return [1 if cb.kind[k] == "H" else sig[cb.root_of[k]] for k in range(cb.dim)]


BLOCK_SIGNS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass
class GradedDecomposition:
    """Blocks h1..h4 = (theta, tau) eigenvalues (++, +-, -+, --)."""
    blocks: list[list[int]]
    signs: tuple[tuple[int, int], ...] = BLOCK_SIGNS
    block_of: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.block_of = {k: b for b, idx in enumerate(self.blocks) for k in idx}

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def boundaries(self) -> tuple[int, ...]:
        """i1 < i2 < i3 < i4 = n once the basis is reordered block by block."""
        return tuple(itertools.accumulate(self.dims))

    @property
    def order(self) -> list[int]:
        return [k for b in self.blocks for k in b]

    def target(self, i: int, j: int) -> int:
        """Block that must contain [h_i, h_j]."""
        s = (self.signs[i][0] * self.signs[j][0], self.signs[i][1] * self.signs[j][1])
        return self.signs.index(s)


def joint_decomposition(theta: AutomorphismMatrix, tau: AutomorphismMatrix,
                        cb: CompactBasis) -> GradedDecomposition:
    for name, a in (("theta", theta), ("tau", tau)):
        if is_identity(a):
            raise InvolutionError(f"{name} is the identity")
        if not check_involution(a, cb):
            raise InvolutionError(f"{name} ({a.spec}) is not an involution")
    if not commute(theta, tau, cb):
        raise InvolutionError("theta and tau do not commute")
    st, su = _eigen_sign(theta, cb), _eigen_sign(tau, cb)
    blocks = [[k for k in range(cb.dim) if (st[k], su[k]) == s] for s in BLOCK_SIGNS]
    if any(not b for b in blocks):
        raise InvolutionError(
            f"degenerate pair: block dimensions {tuple(len(b) for b in blocks)}")
    return GradedDecomposition(blocks)


def grading_matrix(decomp: GradedDecomposition, cb: CompactBasis):
    """observed[i][j] = sorted blocks met by [h_i, h_j] (1-based)."""
    t = cb.table
    seen = [[set() for _ in range(4)] for _ in range(4)]
    for (a, b), res in t.brackets.items():
        i, j = decomp.block_of[a], decomp.block_of[b]
        seen[i][j].update(decomp.block_of[k] for k in res)
    return [[sorted(x + 1 for x in s) for s in row] for row in seen]


def check_grading(decomp: GradedDecomposition, cb: CompactBasis) -> bool:
    obs = grading_matrix(decomp, cb)
    return all(set(obs[i][j]) <= {decomp.target(i, j) + 1}
               for i in range(4) for j in range(4))


def blocks_orthogonal(decomp: GradedDecomposition, cb: CompactBasis) -> bool:
    # the compact basis is B-orthogonal and each element lies in one block
    return sorted(decomp.order) == list(range(cb.dim))


def fixed_subalgebra(cb: CompactBasis, *autos: AutomorphismMatrix):
    """Basis indices fixed by every automorphism, with the restricted table."""
    keep = list(range(cb.dim))
    for a in autos:
        sign = _eigen_sign(a, cb)
        keep = [k for k in keep if sign[k] == 1]
    return keep, cb.table.restrict(keep)


def block_subtable(decomp: GradedDecomposition, cb: CompactBasis, block: int = 0):
    return cb.table.restrict(decomp.blocks[block])


def module_commutant_dimension(decomp: GradedDecomposition, cb: CompactBasis,
                               block: int, acting: int = 0) -> int:
    """Dimension of the maps on h_block commuting with ad(h_acting).

    Equal to 1 exactly when h_block is an absolutely irreducible module.
    """
    t = cb.table
    idx = decomp.blocks[block]
    pos = {k: n for n, k in enumerate(idx)}
    d = len(idx)
    eqs = []
    for x in decomp.blocks[acting]:
        a = np.zeros((d, d))
        for k in idx:
            for m, c in t.bracket(x, k).items():
                a[pos[m], pos[k]] = float(c)
        # A M - M A = 0, vectorized row-major
        eqs.append(np.kron(a, np.eye(d)) - np.kron(np.eye(d), a.T))
    sv = np.linalg.svd(np.vstack(eqs), compute_uv=False)
    return int(np.sum(sv < 1e-9 * max(1.0, sv[0])))


def module_weights(decomp: GradedDecomposition, cb: CompactBasis, block: int):
    """Weights (roots of the ambient algebra) carried by a block."""
    return sorted({cb.root_of[k] for k in decomp.blocks[block] if cb.root_of[k]})


# -- type recognition -------------------------------------------------------

def _null_space(m, tol=1e-9):
    u, s, vt = np.linalg.svd(m)
    rank = int(np.sum(s > tol * max(1.0, s[0] if len(s) else 1.0)))
    return vt[rank:].T


def _recognize(cartan) -> CartanType:
    n = len(cartan)
    pos = _positive_roots(cartan)
    d = _simple_root_lengths(cartan)
    lengths = []
    for r in pos:
        v = [Fraction(x) for x in r]
        lengths.append(sum(v[i] * cartan[i][j] * d[j] / 2 * v[j]
                           for i in range(n) for j in range(n)))
    nroots = 2 * len(pos)
    nlong = 2 * sum(1 for x in lengths if x == max(lengths))
    candidates = {"A": n >= 1, "B": n >= 2, "C": n >= 3, "D": n >= 4, "F": n == 4}
    for series, ok in candidates.items():
        if not ok:
            continue
        t = CartanType(series, n)
        ref = cartan_matrix(t)
        rpos = _positive_roots(ref)
        rd = _simple_root_lengths(ref)
        rl = []
        for r in rpos:
            v = [Fraction(x) for x in r]
            rl.append(sum(v[i] * ref[i][j] * rd[j] / 2 * v[j]
                          for i in range(n) for j in range(n)))
        if 2 * len(rpos) == nroots and 2 * sum(1 for x in rl if x == max(rl)) == nlong:
            return t
    raise UnsupportedTypeError(f"unrecognized simple factor of rank {n} with {nroots} roots")


def identify_type(sub: StructureTable, seed: int = 0, tol: float = 1e-7):
    """Cartan type of a compact semisimple structure table.

    Returns a CartanType when simple, otherwise the list of simple factors.
    Works numerically: a generic element's centralizer gives a Cartan
    subalgebra, its eigen-decomposition gives the roots, and the Cartan
    matrix is rebuilt from the Killing form.
    """
    ad = sub.ad_matrices()
    dim = sub.dim
    kill = np.einsum("aij,bji->ab", ad, ad)
    ev = np.linalg.eigvalsh(kill)
    if ev.max() > -tol:
        raise ValueError("not semisimple of compact type (Killing form not negative definite)")
    rng = np.random.default_rng(seed)
    x = np.einsum("a,aij->ij", rng.standard_normal(dim), ad)
    cartan = _null_space(x)
    rank = cartan.shape[1]
    hs = [np.einsum("a,aij->ij", cartan[:, k], ad) for k in range(rank)]
    vals, vecs = np.linalg.eig(x)
    scale = np.abs(vals).max()
    roots = []
    for lam, v in zip(vals, vecs.T):
        if abs(lam) < tol * scale:
            continue
        roots.append([(np.vdot(v, h @ v) / np.vdot(v, v)).imag for h in hs])
    roots = np.array(roots)
    g = -cartan.T @ kill @ cartan
    ginv = np.linalg.inv(g)
    f = rng.standard_normal(rank)
    pos = roots[roots @ f > 0]

    def is_root(v):
        return np.min(np.linalg.norm(pos - v, axis=1)) < 1e-6 * scale

    simple = [a for a in pos
              if not any(is_root(a - b) for b in pos if np.linalg.norm(a - b) > 1e-6 * scale)]
    if len(simple) != rank:
        raise ValueError("not semisimple (centre detected)")
    ip = np.array([[a @ ginv @ b for b in simple] for a in simple])
    cm = np.rint(2 * ip / np.diag(ip)[None, :]).astype(int)
    # connected components of the Dynkin diagram
    comps, seen = [], set()
    for s in range(rank):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(rank):
                if j not in seen and cm[i, j]:
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    factors = [_recognize([[int(cm[i, j]) for j in c] for i in c]) for c in comps]
    factors.sort()
    return factors[0] if len(factors) == 1 else factors
