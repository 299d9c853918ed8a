from fractions import Fraction

import numpy as np
import pytest

from liecurv.chevalley import (StructureTable, adjoint_casimir_operator, associativity_defects,
                               build_chevalley, compact_form, invariant_form, jacobi_check)
from liecurv.root_system import NEGATIVE_KILLING, CartanType, RootVector, build_root_system

TYPES = ["A1", "A2", "B2", "C3", "D4", "B4", "F4"]


def _alg(name):
    return build_chevalley(build_root_system(CartanType.parse(name)))


@pytest.mark.parametrize("name", TYPES)
def test_jacobi(name):
    alg = _alg(name)
    assert jacobi_check(alg.table).ok
    assert jacobi_check(compact_form(alg).table).ok


def test_jacobi_detects_a_sign_flip():
    alg = _alg("F4")
    br = {k: dict(v) for k, v in alg.table.brackets.items()}
    a, b = alg.x((1, 0, 0, 0)), alg.x((0, 1, 0, 0))
    target = alg.x((1, 1, 0, 0))
    br[(a, b)][target] *= -1
    br[(b, a)][target] *= -1
    bad = StructureTable(alg.table.dim, alg.table.labels, br)
    rep = jacobi_check(bad)
    assert not rep.ok and rep.witness is not None


def test_jacobi_parallel_matches():
    alg = _alg("B2")
    assert jacobi_check(alg.table, workers=2).triples_checked == jacobi_check(alg.table).triples_checked


def test_sl2():
    alg = _alg("A1")
    h, e, f = 0, alg.x((1,)), alg.x((-1,))
    t = alg.table
    assert t.bracket(e, f) == {h: 1}
    assert t.bracket(h, e) == {e: 2}
    assert t.bracket(h, f) == {f: -2}


def test_structure_constant_magnitudes():
    """|N_ab| = p + 1 with p maximal such that b - p a is a root."""
    alg = _alg("F4")
    roots = alg.rs.root_set()
    for (a, b), n in alg.N.items():
        p = 0
        while tuple(y - (p + 1) * x for x, y in zip(a, b)) in roots:
            p += 1
        assert abs(n) == p + 1


def test_killing_form_oracle():
    """tr(ad x ad y) on the compact basis equals -18 B, diagonal."""
    cb = compact_form(_alg("F4"))
    ad = cb.table.ad_matrices()
    kill = np.einsum("aij,bji->ab", ad, ad)
    expected = -18 * np.diag([float(x) for x in cb.norms])
    assert np.abs(kill - expected).max() < 1e-9
    assert invariant_form(cb, NEGATIVE_KILLING).scale == 18


@pytest.mark.parametrize("name,scale", [("B4", 14), ("D4", 12), ("A1", 4), ("C3", 8)])
def test_killing_scale(name, scale):
    cb = compact_form(_alg(name))
    assert invariant_form(cb, NEGATIVE_KILLING).scale == scale


def test_form_is_invariant():
    cb = compact_form(_alg("F4"))
    assert associativity_defects(cb) == []


def test_casimir_operator_is_scalar():
    cb = compact_form(_alg("F4"))
    c = adjoint_casimir_operator(cb)
    n = len(c)
    assert all(c[i][j] == (-18 if i == j else 0) for i in range(n) for j in range(n))


def test_compact_norms():
    cb = compact_form(_alg("F4"))
    rs = cb.algebra.rs
    for k, (kind, r) in enumerate(zip(cb.kind, cb.root_of)):
        if kind in ("u", "v"):
            assert cb.norms[k] == Fraction(4) / rs.root_length2(RootVector(r))


def test_restrict_rejects_open_subset():
    t = _alg("A2").table
    with pytest.raises(ValueError, match="not closed"):
        t.restrict([2, 3])


def test_json_is_deterministic():
    t = _alg("B2").table
    assert t.to_json() == t.to_json()
    assert '"dim":10' in t.to_json()


def test_antisymmetry():
    t = _alg("F4").table
    for (a, b), res in t.brackets.items():
        assert t.bracket(b, a) == {k: -c for k, c in res.items()}
