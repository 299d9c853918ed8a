"""The F4 setup used throughout: algebra, the involution pair 0001/0010,
the four blocks and their curvature tables, built once and cached."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .chevalley import CompactBasis, ChevalleyAlgebra, build_algebra
from .curvature import CasimirMatrix, TripleBracketTable, casimir_matrix, triple_brackets
from .involution import (AutomorphismMatrix, GradedDecomposition, InvolutionSpec,
                         involution_from_marks, joint_decomposition)
from .root_system import LONG_ROOT_2, NEGATIVE_KILLING, RootSystemData

THETA_MARKS = "0001"
TAU_MARKS = "0010"


@dataclass(eq=False)
class F4Model:
    rs: RootSystemData
    alg: ChevalleyAlgebra
    cb: CompactBasis
    theta: AutomorphismMatrix
    tau: AutomorphismMatrix
    decomp: GradedDecomposition
    casimir: CasimirMatrix
    brackets: TripleBracketTable
    brackets_killing: TripleBracketTable


def build_model(theta: str = THETA_MARKS, tau: str = TAU_MARKS) -> F4Model:
    rs, alg, cb = build_algebra("F4")
    th = involution_from_marks(rs, InvolutionSpec.parse(theta))
    ta = involution_from_marks(rs, InvolutionSpec.parse(tau))
    decomp = joint_decomposition(th, ta, cb)
    return F4Model(rs, alg, cb, th, ta, decomp, casimir_matrix(decomp, cb),
                   triple_brackets(decomp, cb, LONG_ROOT_2),
                   triple_brackets(decomp, cb, NEGATIVE_KILLING))


@lru_cache(maxsize=None)
def f4_model() -> F4Model:
    return build_model()
