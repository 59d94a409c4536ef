"""Second-order (position/velocity) dynamics.

For x'' = A1 x + A2 x' + B0 u with cost weights Q0 (positions), Q2
(velocities) and R0 (inputs), the augmented 2n-state problem is assembled and
solved, and — in parallel — a two-stage reduction is run: P1 from the smaller
Riccati equation (A1, B0, Q0, R0), then P2 from (A2, B0, Qbar, R0) with
Qbar = Q2 + P1 + P1'. The gain blocks R0^{-1} B0' P1 and R0^{-1} B0' P2 from
the reduction are compared against the blocks of the full solve; the gap is
recorded as agreement_residual rather than assumed zero, because the corner
block of the full solution is not symmetric in general and the stage solves
are symmetric by construction. On circulant-symmetric data the two routes
coincide to solver precision.
"""

from dataclasses import dataclass

import numpy as np

from .decentral import (
    DecentralReport,
    ORACLE_TOL,
    pattern_decentralized,
    position_velocity_neighborhoods,
)
from .errors import InputError, SolverError
from .lqr import LqrProblem
from .matcore import as_matrix, is_positive_definite, require_spd, solve_care


@dataclass
class SecondOrderSystem:
    """Blocks (A1, A2, B0, Q0, Q2, R0), all n x n, with SPD weights."""

    A1: np.ndarray
    A2: np.ndarray
    B0: np.ndarray
    Q0: np.ndarray
    Q2: np.ndarray
    R0: np.ndarray

    def __post_init__(self):
        self.A1 = as_matrix(self.A1, "A1", square=True)
        n = self.A1.shape[0]
        self.A2 = as_matrix(self.A2, "A2", rows=n, cols=n)
        self.B0 = as_matrix(self.B0, "B0", rows=n, cols=n)
        self.Q0 = require_spd(self.Q0, "Q0")
        self.Q2 = require_spd(self.Q2, "Q2")
        self.R0 = require_spd(self.R0, "R0")
        for name in ("Q0", "Q2", "R0"):
            if getattr(self, name).shape[0] != n:
                raise InputError(f"{name} must be {n}x{n}")

    @property
    def n(self):
        return self.A1.shape[0]


@dataclass
class SecondOrderSolution:
    """Reduction artifacts and the full-solve cross-check.

    gain_pos = R0^{-1} B0' P1 and gain_vel = R0^{-1} B0' P2 come from the
    two-stage reduction; full_P and full_gain from the augmented 2n solve.
    agreement_residual is the larger Frobenius gap between corresponding gain
    blocks, and corner_asymmetry records ||C - C'||_F for the full solution's
    upper-right n x n block C.
    """

    P1: np.ndarray
    P2: np.ndarray
    Qbar: np.ndarray
    gain_pos: np.ndarray
    gain_vel: np.ndarray
    full_P: np.ndarray
    full_gain: np.ndarray
    agreement_residual: float
    corner_asymmetry: float


def augment(sys):
    """Assemble the 2n-state problem: A = [[0, I], [A1, A2]], B = [0; B0],
    Q = blockdiag(Q0, Q2), R = R0."""
    n = sys.n
    zero = np.zeros((n, n))
    A = np.block([[zero, np.eye(n)], [sys.A1, sys.A2]])
    B = np.vstack([zero, sys.B0])
    Q = np.block([[sys.Q0, zero], [zero, sys.Q2]])
    return LqrProblem(A=A, B=B, Q=Q, R=sys.R0)


def _staged(stage, fn):
    try:
        return fn()
    except InputError as exc:
        raise InputError(f"{stage}: {exc}") from exc
    except SolverError as exc:
        raise SolverError(f"{stage}: {exc}") from exc


def reduce_and_solve(sys):
    """Run the two-stage reduction and the full augmented solve.

    Raises the underlying solver error labeled with the failing stage
    ("stage-P1", "stage-P2" or "stage-full").
    """
    n = sys.n
    care1 = _staged("stage-P1", lambda: solve_care(sys.A1, sys.B0, sys.Q0, sys.R0))
    P1 = care1.P
    Qbar = sys.Q2 + P1 + P1.T
    if not is_positive_definite(Qbar):
        raise SolverError("stage-P2: Qbar = Q2 + P1 + P1' is not positive definite")
    care2 = _staged("stage-P2", lambda: solve_care(sys.A2, sys.B0, Qbar, sys.R0))
    P2 = care2.P

    gain_pos = np.linalg.solve(sys.R0, sys.B0.T @ P1)
    gain_vel = np.linalg.solve(sys.R0, sys.B0.T @ P2)

    full = _staged("stage-full", lambda: solve_care(*_augmented_tuple(sys)))
    full_gain = full.K
    agreement = max(
        float(np.linalg.norm(full_gain[:, :n] - gain_pos)),
        float(np.linalg.norm(full_gain[:, n:] - gain_vel)),
    )
    corner = full.P[:n, n:]
    return SecondOrderSolution(
        P1=P1,
        P2=P2,
        Qbar=Qbar,
        gain_pos=gain_pos,
        gain_vel=gain_vel,
        full_P=full.P,
        full_gain=full_gain,
        agreement_residual=agreement,
        corner_asymmetry=float(np.linalg.norm(corner - corner.T)),
    )


def _augmented_tuple(sys):
    prob = augment(sys)
    return prob.A, prob.B, prob.Q, prob.R


def check_second_order_decentral(solution, tol=ORACLE_TOL):
    """Judge the solved gain against neighborhoods N_i = {x_i, x'_i}.

    Decentralization of the 2n-column gain is equivalent to both gain blocks
    being diagonal. The verdict is taken from the full-solve gain (the ground
    truth); the reduced blocks' own pattern test and the reduction agreement
    are attached as witnesses.
    """
    n = solution.gain_pos.shape[1]
    nbhd = position_velocity_neighborhoods(n)
    full_ok, full_mass = pattern_decentralized(solution.full_gain, nbhd, tol)
    reduced = np.hstack([solution.gain_pos, solution.gain_vel])
    red_ok, red_mass = pattern_decentralized(reduced, nbhd, tol)
    scale = max(
        1.0,
        float(np.linalg.norm(solution.gain_pos)),
        float(np.linalg.norm(solution.gain_vel)),
    )
    verdicts = [
        ("reduced_gain_blocks_diagonal", red_ok, {"offdiag_mass": red_mass}),
        (
            "reduction_matches_full_solve",
            solution.agreement_residual <= 1e-7 * scale,
            {
                "agreement_residual": solution.agreement_residual,
                "corner_asymmetry": solution.corner_asymmetry,
            },
        ),
    ]
    return DecentralReport(
        oracle_decentralized=full_ok,
        offdiag_mass=full_mass,
        analytic_verdicts=verdicts,
        K=solution.full_gain,
    )
