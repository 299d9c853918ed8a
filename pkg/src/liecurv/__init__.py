"""Exact F4 structure data and Einstein metrics from a commuting involution pair."""

from .root_system import (CartanType, RootVector, WeightVector, build_root_system,
                          casimir_constant, inner_product)
from .chevalley import build_chevalley, compact_form, jacobi_check
from .involution import InvolutionSpec, involution_from_marks, joint_decomposition
from .curvature import (MetricParams, casimir_matrix, naturally_reductive_test,
                        ricci_closed_form, ricci_connection_path, triple_brackets)
from .einstein import EinsteinSolution, enumerate_solutions, evaluate_system, residual
from .model import f4_model

__all__ = [
    "CartanType", "RootVector", "WeightVector", "build_root_system", "casimir_constant",
    "inner_product", "build_chevalley", "compact_form", "jacobi_check", "InvolutionSpec",
    "involution_from_marks", "joint_decomposition", "MetricParams", "casimir_matrix",
    "naturally_reductive_test", "ricci_closed_form", "ricci_connection_path",
    "triple_brackets", "EinsteinSolution", "enumerate_solutions", "evaluate_system",
    "residual", "f4_model",
]
