# src/flows/__init__.py
"""
Continuous-time machinery: Bures-Wasserstein ODE right-hand sides, forward Euler,
Langevin particles, f-divergence probability-flow fields and distillation.
"""

from .bw_ode import RHS_FORMS, bw_rhs_hessian, bw_rhs_hessian_free, covariance_rhs_variant, sarkka_rhs, scale_rhs
from .f_flow import distill_step, f_flow_vector_field
from .integrate import forward_euler
from .langevin import langevin_step, run_langevin
from .state import COV, SCALE, FlowState, ParticleCloud

__all__ = [
    "COV",
    "FlowState",
    "ParticleCloud",
    "RHS_FORMS",
    "SCALE",
    "bw_rhs_hessian",
    "bw_rhs_hessian_free",
    "covariance_rhs_variant",
    "distill_step",
    "f_flow_vector_field",
    "forward_euler",
    "langevin_step",
    "run_langevin",
    "sarkka_rhs",
    "scale_rhs",
]
