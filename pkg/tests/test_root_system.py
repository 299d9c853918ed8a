import itertools
from fractions import Fraction

import pytest

from liecurv.root_system import (CartanType, RootVector, UnsupportedTypeError, adjoint_casimir,
                                 build_root_system, casimir_constant, dual_coxeter_number,
                                 inner_product, reflect, to_weight, weight)


def _f4_euclidean():
    """F4 roots in R^4: +-e_i, +-e_i +- e_j, (+-1/2, ..., +-1/2)."""
    out = set()
    for i in range(4):
        for s in (1, -1):
            v = [0] * 4
            v[i] = s
            out.add(tuple(map(Fraction, v)))
    for i, j in itertools.combinations(range(4), 2):
        for s, t in itertools.product((1, -1), repeat=2):
            v = [0] * 4
            v[i], v[j] = s, t
            out.add(tuple(map(Fraction, v)))
    for signs in itertools.product((1, -1), repeat=4):
        out.add(tuple(Fraction(s, 2) for s in signs))
    return out


@pytest.mark.parametrize("name,dim,nroots", [
    ("A1", 3, 2), ("A3", 15, 12), ("B2", 10, 8), ("B4", 36, 32), ("C3", 21, 18),
    ("D4", 28, 24), ("D5", 45, 40), ("F4", 52, 48),
])
def test_counts(name, dim, nroots):
    rs = build_root_system(CartanType.parse(name))
    assert rs.dimension == dim
    assert len(rs.roots) == nroots
    assert len(rs.positive_roots) == nroots // 2


def test_f4_matches_euclidean_model(f4):
    euclid = _f4_euclidean()
    assert len(euclid) == 48
    lengths = sorted(sum(x * x for x in v) for v in euclid)
    ours = sorted(f4.root_length2(r) for r in f4.roots)
    assert ours == lengths
    assert ours.count(2) == 24 and ours.count(1) == 24


def test_f4_gram_and_highest_root(f4):
    g = f4.form.gram
    assert [g[i][i] for i in range(4)] == [2, 2, 1, 1]
    assert (g[0][1], g[1][2], g[2][3]) == (-1, -1, Fraction(-1, 2))
    assert f4.highest_root.coeffs == (2, 3, 4, 2)
    assert f4.weyl_vector.coords == (1, 1, 1, 1)


def test_b4_highest_root():
    rs = build_root_system(CartanType("B", 4))
    assert rs.highest_root.coeffs == (1, 2, 2, 2)


def test_root_set_closed_under_reflections(f4):
    roots = f4.root_set()
    for i in range(4):
        for r in f4.roots:
            assert reflect(f4, i, r).coeffs in roots


def test_cartan_entries_from_form(f4):
    for i, j in itertools.product(range(4), repeat=2):
        ai, aj = f4.simple_roots[i], f4.simple_roots[j]
        assert f4.cartan[i][j] == 2 * inner_product(f4, ai, aj) / inner_product(f4, aj, aj)


@pytest.mark.parametrize("name,labels,value", [
    ("B4", (0, 0, 0, 1), 9), ("B4", None, 14), ("D4", None, 12), ("D4", (1, 0, 0, 0), 7),
    ("D4", (0, 0, 1, 0), 7), ("D4", (0, 0, 0, 1), 7), ("F4", None, 18), ("A1", None, 4),
])
def test_casimir(name, labels, value):
    rs = build_root_system(CartanType.parse(name))
    got = adjoint_casimir(rs) if labels is None else casimir_constant(rs, weight(rs, *labels))
    assert got == value


def test_dual_coxeter(f4):
    assert dual_coxeter_number(f4) == 9


def test_highest_root_is_dominant(f4):
    assert to_weight(f4, f4.highest_root).coords == (1, 0, 0, 0)


def test_errors(f4):
    with pytest.raises(UnsupportedTypeError, match="unsupported type"):
        CartanType.parse("e8")
    with pytest.raises(UnsupportedTypeError):
        CartanType("F", 5)
    with pytest.raises(ValueError, match="not dominant"):
        casimir_constant(f4, weight(f4, -1, 0, 0, 0))
    b4 = build_root_system(CartanType("B", 4))
    with pytest.raises(ValueError):
        inner_product(f4, f4.simple_roots[0], b4.simple_roots[0])
    with pytest.raises(ValueError):
        inner_product(f4, RootVector((1, 0)), f4.simple_roots[0])
