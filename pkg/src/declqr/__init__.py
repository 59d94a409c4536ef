"""declqr: decide and design completely decentralized LQR state feedback.

Solves continuous-time LQR problems with an eigensolver-free Newton-Kleinman
Riccati solver, tests whether the unconstrained optimal gain respects a given
information pattern, evaluates and synthesizes analytic decentralization
conditions for 2x2, circulant, and second-order block systems, and sweeps
cost/dynamics parameters to map optimal-cost landscapes against the
decentralization loci.
"""

from .decentral import (
    DecentralReport,
    DiagonalCost2x2,
    MonicQuadratic,
    circulant_lqr_problem,
    circulant_pair_conditions,
    common_quadratic_roots,
    diagonal_cost_conditions,
    diagonal_riccati_roots,
    find_uniform_gain,
    oracle_check,
    pattern_decentralized,
    position_velocity_neighborhoods,
    single_station_neighborhoods,
    synthesize_diagonal_cost,
    uniform_gain_candidates,
)
from .errors import (
    InputError,
    NonconvergentError,
    ResonantSpectrumError,
    SolverError,
    UnstabilizableError,
)
from .lqr import LqrProblem, LqrSolution, closed_loop, solve_lqr
from .matcore import (
    CareResult,
    bass_stabilizing_gain,
    is_hurwitz,
    solve_care,
    solve_lyapunov,
)
from .models import (
    ChamberParams,
    ChamberSystem,
    PredatorPreyParams,
    chamber_system,
    diffusion_decentralizing_cost,
    diffusion_operator,
    forward_difference_operator,
    perf_example_system,
    predator_prey_jacobian,
)
from .secondorder import (
    SecondOrderSolution,
    SecondOrderSystem,
    augment,
    check_second_order_decentral,
    reduce_and_solve,
)
from .spectral import (
    CirculantSpec,
    circulant_eigenvalues,
    circulant_materialize,
    dft_apply,
    dft_inverse,
    dft_matrix,
    identity_spec,
    is_circulant,
)
from .sweep import SweepAxis, SweepConfig, SweepResult, run_sweep, sweep_qa_with_curve, sweep_qr

__version__ = "0.1.0"
