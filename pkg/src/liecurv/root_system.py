"""Root systems of the classical series and F4, generated from Cartan matrices.

All inner products are exact rationals, normalized so that long roots have
squared length 2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import _linalg

SERIES = ("A", "B", "C", "D", "F")

LONG_ROOT_2 = "long-root-2"
NEGATIVE_KILLING = "negative-killing"


class UnsupportedTypeError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CartanType:
    series: str
    rank: int

    def __post_init__(self):
        if self.series not in SERIES:
            raise UnsupportedTypeError(f"unsupported type {self.series}{self.rank}")
        minimum = {"A": 1, "B": 2, "C": 2, "D": 3, "F": 4}[self.series]
        if self.rank < minimum or (self.series == "F" and self.rank != 4):
            raise UnsupportedTypeError(f"unsupported type {self.series}{self.rank}")

    @classmethod
    def parse(cls, text: str) -> CartanType:
        m = re.fullmatch(r"\s*([A-Za-z])\s*(\d+)\s*", text)
        if not m:
            raise UnsupportedTypeError(f"unsupported type {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self):
        return f"{self.series}{self.rank}"


@dataclass(frozen=True)
class RootVector:
    """Integer coordinates over the simple roots."""
    coeffs: tuple[int, ...]
    system: CartanType | None = field(default=None, compare=False)

    def __neg__(self):
        return RootVector(tuple(-c for c in self.coeffs), self.system)

    def __add__(self, other):
        return RootVector(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                          self.system)

    def __sub__(self, other):
        return self + (-other)

    @property
    def height(self):
        return sum(self.coeffs)

    def is_positive(self):
        return all(c >= 0 for c in self.coeffs) and any(self.coeffs)


@dataclass(frozen=True)
class WeightVector:
    """Rational coordinates over the fundamental weights (Dynkin labels)."""
    coords: tuple[Fraction, ...]
    system: CartanType | None = field(default=None, compare=False)

    def is_dominant(self):
        return all(c >= 0 for c in self.coords)


@dataclass(frozen=True)
class BilinearFormData:
    gram: tuple[tuple[Fraction, ...], ...]
    normalization: str = LONG_ROOT_2


@dataclass(frozen=True)
class RootSystemData:
    cartan_type: CartanType
    cartan: tuple[tuple[int, ...], ...]  # cartan[i][j] = <alpha_i, alpha_j^vee>
    simple_roots: tuple[RootVector, ...]
    positive_roots: tuple[RootVector, ...]
    roots: tuple[RootVector, ...]
    highest_root: RootVector
    weyl_vector: WeightVector
    fundamental_weights: tuple[WeightVector, ...]
    form: BilinearFormData
    cartan_inverse: tuple[tuple[Fraction, ...], ...] = field(repr=False, compare=False, default=())

    @property
    def rank(self):
        return self.cartan_type.rank

    @property
    def dimension(self):
        return len(self.roots) + self.rank

    def root_set(self):
        return frozenset(r.coeffs for r in self.roots)

    def root_length2(self, r: RootVector) -> Fraction:
        return inner_product(self, r, r)

    def dynkin_labels(self, r: RootVector) -> tuple[int, ...]:
        """<r, alpha_j^vee> for every simple root."""
        n = self.rank
        return tuple(sum(r.coeffs[i] * self.cartan[i][j] for i in range(n))
                     for j in range(n))

    def simple_root_lengths(self):
        return tuple(self.form.gram[i][i] for i in range(self.rank))


def cartan_matrix(t: CartanType) -> list[list[int]]:
    """Bourbaki labelling; entry [i][j] = 2(a_i, a_j)/(a_j, a_j)."""
    n = t.rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    if t.series == "B":
        a[n - 2][n - 1] = -2
    elif t.series == "C":
        a[n - 1][n - 2] = -2
    elif t.series == "D":
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
    elif t.series == "F":
        a[1][2] = -2
    return a


def _simple_root_lengths(cartan):
    """Squared lengths d_i with cartan[i][j] d_j = cartan[j][i] d_i, max = 2."""
    n = len(cartan)
    d = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and cartan[i][j] and d[j] is None:
                d[j] = d[i] * Fraction(cartan[j][i], cartan[i][j])
                stack.append(j)
    if any(x is None for x in d):
        raise UnsupportedTypeError("disconnected Cartan matrix")
    scale = 2 / max(d)
    return [x * scale for x in d]


def _positive_roots(cartan):
    """Breadth-first closure over simple-root strings, height by height."""
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    layer = list(simple)
    ordered = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            labels = [sum(beta[k] * cartan[k][j] for k in range(n)) for j in range(n)]
            for i in range(n):
                if beta == simple[i]:
                    continue
                p = 0
                probe = list(beta)
                while True:
                    probe[i] -= 1
                    if tuple(probe) in found:
                        p += 1
                    else:
                        break
                q = p - labels[i]
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in found:
                        found.add(up)
                        nxt.append(up)
        nxt.sort(reverse=True)
        ordered.extend(nxt)
        layer = nxt
    return ordered


@lru_cache(maxsize=None)
def build_root_system(t: CartanType) -> RootSystemData:
    if not isinstance(t, CartanType):
        t = CartanType.parse(str(t))
    cartan = cartan_matrix(t)
    n = t.rank
    d = _simple_root_lengths(cartan)
    gram = tuple(tuple(Fraction(cartan[i][j]) * d[j] / 2 for j in range(n))
                 for i in range(n))
    pos = [RootVector(c, t) for c in _positive_roots(cartan)]
    pos.sort(key=lambda r: (r.height, tuple(-c for c in r.coeffs)))
    roots = tuple(pos) + tuple(-r for r in pos)
    inv = _linalg.inverse(cartan)
    fund = tuple(WeightVector(tuple(Fraction(int(i == j)) for j in range(n)), t)
                 for i in range(n))
    half = [sum((Fraction(r.coeffs[i]) for r in pos), Fraction(0)) / 2 for i in range(n)]
    delta = WeightVector(tuple(_linalg.vecmat(half, cartan)), t)
    top = max(pos, key=lambda r: r.height)
    rs = RootSystemData(
        cartan_type=t,
        cartan=tuple(tuple(row) for row in cartan),
        simple_roots=tuple(pos[:n]),
        positive_roots=tuple(pos),
        roots=roots,
        highest_root=top,
        weyl_vector=delta,
        fundamental_weights=fund,
        form=BilinearFormData(gram),
        cartan_inverse=tuple(tuple(row) for row in inv),
    )
    return rs


def _root_coords(rs: RootSystemData, v) -> list[Fraction]:
    if v.system is not None and v.system != rs.cartan_type:
        raise ValueError(f"vector belongs to {v.system}, not {rs.cartan_type}")
    if isinstance(v, RootVector):
        coeffs = v.coeffs
    elif isinstance(v, WeightVector):
        coeffs = _linalg.vecmat(list(v.coords), rs.cartan_inverse)
    else:
        raise TypeError(f"cannot take inner product of {type(v).__name__}")
    if len(coeffs) != rs.rank:
        raise ValueError(f"vector of length {len(coeffs)} over rank {rs.rank} system")
    return [Fraction(c) for c in coeffs]


def inner_product(rs: RootSystemData, v, w) -> Fraction:
    return _linalg.bilinear(_root_coords(rs, v), rs.form.gram, _root_coords(rs, w))


def highest_root(rs: RootSystemData) -> RootVector:
    return rs.highest_root


def fundamental_weights(rs: RootSystemData) -> list[WeightVector]:
    return list(rs.fundamental_weights)


def to_weight(rs: RootSystemData, r: RootVector) -> WeightVector:
    return WeightVector(tuple(Fraction(x) for x in rs.dynkin_labels(r)), rs.cartan_type)


def weight(rs: RootSystemData, *labels) -> WeightVector:
    return WeightVector(tuple(Fraction(x) for x in labels), rs.cartan_type)


def casimir_constant(rs: RootSystemData, lam) -> Fraction:
    """(lam + delta, lam + delta) - (delta, delta) for a dominant weight."""
    if isinstance(lam, RootVector):
        lam = to_weight(rs, lam)
    if not lam.is_dominant():
        raise ValueError(f"weight {tuple(map(str, lam.coords))} is not dominant")
    delta = rs.weyl_vector
    shifted = WeightVector(tuple(a + 2 * b for a, b in zip(lam.coords, delta.coords)),
                           rs.cartan_type)
    return inner_product(rs, lam, shifted)


def adjoint_casimir(rs: RootSystemData) -> Fraction:
    return casimir_constant(rs, rs.highest_root)


def dual_coxeter_number(rs: RootSystemData) -> Fraction:
    return adjoint_casimir(rs) / 2


def reflect(rs: RootSystemData, i: int, r: RootVector) -> RootVector:
    k = rs.dynkin_labels(r)[i]
    c = list(r.coeffs)
    c[i] -= k
    return RootVector(tuple(c), rs.cartan_type)
