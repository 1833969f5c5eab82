"""Exact simulation and verification for the classical bi-Poisson process."""
from .bridge import BridgeLaw, BridgeQuery, UnsupportedBridgeError, bridge_law, bridge_log_mass, conditional_moments
from .dists import (
    Binomial,
    DivergenceError,
    Gamma,
    LawDomainError,
    NegativeBinomial,
    Poisson,
    TransitionLaw,
)
from .kernel import (
    DegenerateParametersError,
    KernelLaw,
    PhaseError,
    ProcessParams,
    Reduction,
    conditional_mgf,
    forward_kernel,
    kernel_log_mass,
    marginal,
    reduce_params,
    verify_ck,
)
from .mgf import JointMgfQuery, joint_log_mgf, joint_mgf
from .report import VerificationReport
from .trajectory import (
    Trajectory,
    delta_jump_log_density,
    gamma_jump_log_density,
    sample_fdd,
    simulate_by_representation,
    simulate_death_given_z1,
    simulate_forward,
    x_to_z,
    z_to_x,
)
from .verify import run_suite

__all__ = [name for name in dir() if not name.startswith("_")]
