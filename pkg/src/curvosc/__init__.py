"""Classical and quantum harmonic oscillator on constant-curvature surfaces.

Negative curvature parameter ``lam`` gives the sphere (radial domain
``0 < r < 1/sqrt(-lam)``), positive ``lam`` the hyperbolic plane.
"""

from .errors import (ContractError, CurvOscError, DomainError, InconsistentParametersError,
                     IntegrationError, OutOfRangeError, PeriodDetectionError, PreconditionError,
                     QuadratureError, TruncationError)
from .model import (ClassicalState, ModelParams, MotionConstants, Regime, classify, energy,
                    energy_of_state, motion_constants, radial_domain, v_eff, v_eff_extremum)
from .closed_form import (ClosedFormTrajectory, Variant, bounded_trajectory, eval_r2, eval_state,
                          limiting_trajectory, phase_from_initial, sample_cartesian, sample_polar,
                          trajectory, trajectory_from_state, unbounded_trajectory)
from .cartesian import (BridgeReport, CartesianAmplitudes, CartesianInvariants, CartesianVariant, bridge,
                     cartesian_invariants, cartesian_motion, tan_coefficient_residuals, verify_bridge)
from .integrator import (IntegrationConfig, SampledTrajectory, compare_with_closed_form, integrate,
                        integrate_backward, measure_period)
from .jacobi import jacobi_derivative, jacobi_eval
from .quantum import (Level, QuantumParams, RadialEigenstate, eigenstate, energy_level, energy_levels,
                      full_wavefunction, inner_product, n_max, node_count, normalized_radial,
                      ode_residual, radial_wavefunction)

__version__ = "0.1.0"
