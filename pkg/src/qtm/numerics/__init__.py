"""First-principles engine: Lindblad generators, steady states and observables."""

from .collision import (CollisionChannel, CollisionTrajectory, collision_channel,
                        collision_current, collision_simulate)
from .hilbert import HilbertSpec, dim_cap, gibbs_state, oscillator_dim
from .liouvillian import (GLOBAL, LOCAL, Liouvillian, build_chain_liouvillian,
                          build_global_liouvillian, build_local_liouvillian, eigenoperators)
from .moments import Moments, integrate_moments, moment_ode_steady, moments_closed_form
from .observables import (EntropyReport, TransportReport, coherence, concurrence,
                          concurrence_wootters, concurrence_x, critical_current,
                          entropy_production, entropy_rate, heat_current_numeric, heat_flows,
                          hopping_expectation, local_current, populations,
                          populations_closed_form, rectification_ratio, transport_report)
from .solver import steady_state
from .states import DensityMatrix

__all__ = [
    "CollisionChannel", "CollisionTrajectory", "collision_channel", "collision_current",
    "collision_simulate", "HilbertSpec", "dim_cap", "gibbs_state", "oscillator_dim",
    "GLOBAL", "LOCAL", "Liouvillian", "build_chain_liouvillian", "build_global_liouvillian",
    "build_local_liouvillian", "eigenoperators", "Moments", "integrate_moments",
    "moment_ode_steady", "moments_closed_form", "EntropyReport", "TransportReport",
    "coherence", "concurrence", "concurrence_wootters", "concurrence_x", "critical_current",
    "entropy_production", "entropy_rate", "heat_current_numeric", "heat_flows",
    "hopping_expectation", "local_current", "populations", "populations_closed_form",
    "rectification_ratio", "transport_report", "steady_state", "DensityMatrix",
]
