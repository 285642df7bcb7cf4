"""Shot-budget-aware finite-difference step selection for VQE simulations."""

from .experiment import RunConfig, RunTrace, run_vqe, sweep
from .gradient import GradientEstimate, forward_diff, parameter_shift_grad, second_derivative_exact
from . import kernels
from .kernels import set_backend
from .measurement import EnergyEstimator, NoiseBackend, ShotBudget, exact_sigma, sample_energy, split_shots
from .models import builtin_h2, builtin_hw_efficient
from .optimize import OptimizerState, Schedule, init_state, rate_at, update
from .pauli import (
    Hamiltonian,
    MeasurementGrouping,
    PauliString,
    curvature_bound,
    dense_matrix,
    ground_energy,
    group_qubitwise,
    norm_bound,
    parse_pauli,
)
from .simulator import CNOT, Ansatz, PauliRotation, RotY, RotZ, StateVector, exact_energy, exact_energy_at, prepare
from .stepsize import TunerConfig, TunerResult, error_bound, optimal_step, performance_profile, scale_step, tune

__version__ = "0.1.0"
