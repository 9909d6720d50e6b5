"""Most likely transition paths for McKean-Vlasov systems via the adaptive minimum action method."""

from . import models  # noqa: F401  registers the builtins
from .action import action, action_gradient_fd
from .amam import (
    DiscretePath,
    MeshWeights,
    QuasiPotentialTable,
    SolveReport,
    SolverConfig,
    amam_step,
    build_initial_path,
    el_residual,
    monitor,
    quasi_potential_scan,
    remesh,
    solve_mlp,
    thomas_solve,
)
from .equilibria import FixedPoint, classify, eigen_real_parts, find_fixed_points, sign_change_cells
from .estimators import FixedPointFinder, MinimumActionPath, QuasiPotentialEstimator
from .exceptions import (
    ConfigurationError,
    InvalidArgumentError,
    MVMAMError,
    NumericalBlowupError,
    NumericalError,
)
from .model import ModelSpec, eval_b, eval_F, eval_V, jac_b_x, jac_b_y, register_field, register_interaction
from .models import build_model, double_well_model, figure1_model, figure2_model
from .particles import (
    EnsembleState,
    SimConfig,
    empirical_transition_stats,
    simulate_corresponding_sde,
    simulate_particles,
)
from .skeleton import Trajectory, equipotential_field, integrate_flow, integrate_skeleton

__version__ = "0.1.0"
