"""Dense linear-algebra core: Lyapunov solves, a Newton-Kleinman Riccati solver,
Bass stabilizing gains, and a Lyapunov-certificate stability test.

All matrices are real float64 numpy arrays, row-major. The Lyapunov equation is
solved by Kronecker vectorization into an n^2 x n^2 linear system with
partial-pivot elimination, which keeps everything eigensolver-free and is
plenty fast at desk scale (n up to a few tens).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    InputError,
    NonconvergentError,
    ResonantSpectrumError,
    SolverError,
    UnstabilizableError,
)

# Relative step tolerance that stops the Newton-Kleinman iteration.
CARE_STEP_TOL = 1e-12
# Acceptance bound on the Riccati residual, relative to max(1, ||Q||_F).
CARE_RESIDUAL_TOL = 1e-8
# Iteration cap for the Newton-Kleinman loop.
CARE_MAX_ITER = 200
# Condition estimate above which the vectorized Lyapunov operator is treated
# as singular (resonant spectrum).
RESONANCE_COND_LIMIT = 1e14
# A residual within this many machine epsilons of the Riccati expression's own
# scale is the attainable floor: exceeding the acceptance tolerance there
# means the pair is too ill-conditioned for 64-bit arithmetic, not that the
# iteration failed. Healthy solves land within ~10 eps of scale; genuine
# accuracy bugs land orders of magnitude above this factor.
RESIDUAL_FLOOR_FACTOR = 1e4


def as_matrix(M, name="matrix", rows=None, cols=None, square=False):
    """Convert to a 2-D float array, rejecting non-finite entries and bad shapes."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2:
        raise InputError(f"{name} must be 2-D, got ndim={A.ndim}")
    if not np.all(np.isfinite(A)):
        raise InputError(f"{name} contains NaN or Inf entries")
    r, c = A.shape
    if square and r != c:
        raise InputError(f"{name} must be square, got shape {A.shape}")
    if rows is not None and r != rows:
        raise InputError(f"{name} must have {rows} rows, got {r}")
    if cols is not None and c != cols:
        raise InputError(f"{name} must have {cols} columns, got {c}")
    return A


def is_symmetric(M, tol=1e-10):
    """True when ||M - M'||_F <= tol * max(1, ||M||_F)."""
    return np.linalg.norm(M - M.T) <= tol * max(1.0, np.linalg.norm(M))


def is_positive_definite(M):
    """Cholesky-based test; assumes M is (numerically) symmetric."""
    try:
        np.linalg.cholesky((M + M.T) / 2.0)
    except np.linalg.LinAlgError:
        return False
    return True


def require_spd(M, name):
    """Validate a symmetric positive definite weight matrix."""
    M = as_matrix(M, name, square=True)
    if not is_symmetric(M):
        raise InputError(f"{name} must be symmetric")
    if not is_positive_definite(M):
        raise InputError(f"{name} must be positive definite")
    return M


def solve_lyapunov(A, Q):
    """Solve A'X + XA + Q = 0 for symmetric X.

    The equation is vectorized with Kronecker products and solved directly;
    one pass of iterative refinement keeps the residual near machine precision.
    The result is symmetrized by averaging with its transpose.

    Raises ResonantSpectrumError when the vectorized operator has a condition
    estimate above RESONANCE_COND_LIMIT (some pair of eigenvalues of A sums to
    zero, so no / infinitely many solutions exist).
    """
    A = as_matrix(A, "A", square=True)
    n = A.shape[0]
    Q = as_matrix(Q, "Q", rows=n, cols=n)
    if not is_symmetric(Q, tol=1e-8):
        raise InputError("Q must be symmetric")

    eye = np.eye(n)
    L = np.kron(A.T, eye) + np.kron(eye, A.T)
    if np.linalg.cond(L) > RESONANCE_COND_LIMIT:
        raise ResonantSpectrumError(
            "resonant spectrum: a pair of eigenvalues of A sums to zero"
        )
    rhs = -Q.reshape(-1)
    x = np.linalg.solve(L, rhs)
    x = x + np.linalg.solve(L, rhs - L @ x)
    X = x.reshape(n, n)
    return (X + X.T) / 2.0


def is_hurwitz(A):
    """Stability certificate: True iff A'X + XA = -I has an SPD solution X.

    Eigenvalue-free. Marginal spectra (eigenvalues on the imaginary axis) make
    the Lyapunov operator singular, which counts as not Hurwitz.
    """
    A = as_matrix(A, "A", square=True)
    try:
        X = solve_lyapunov(A, np.eye(A.shape[0]))
    except ResonantSpectrumError:
        return False
    return is_positive_definite(X)


def bass_stabilizing_gain(A, B):
    """Closed-form stabilizing gain K0 with A - B K0 Hurwitz (Bass construction).

    Returns the zero gain when A is already Hurwitz. Otherwise picks
    beta = ||A||_F + 1, solves the shifted Gramian equation

        (A + beta I) Z + Z (A + beta I)' = 2 B B',

    and returns K0 = B' Z^{-1}. The closed loop is certified with is_hurwitz
    before returning; failure of any step raises UnstabilizableError.
    """
    A = as_matrix(A, "A", square=True)
    n = A.shape[0]
    B = as_matrix(B, "B", rows=n)
    m = B.shape[1]
    if is_hurwitz(A):
        return np.zeros((m, n))

    beta = np.linalg.norm(A) + 1.0
    shifted = (A + beta * np.eye(n)).T
    try:
        Z = solve_lyapunov(shifted, -2.0 * B @ B.T)
    except ResonantSpectrumError as exc:
        raise UnstabilizableError(
            "unstabilizable or ill-conditioned pair: shifted Gramian solve failed"
        ) from exc
    if not is_positive_definite(Z) or np.linalg.cond(Z) > RESONANCE_COND_LIMIT:
        raise UnstabilizableError(
            "unstabilizable or ill-conditioned pair: shifted Gramian is singular"
        )
    K0 = np.linalg.solve(Z, B).T
    if not is_hurwitz(A - B @ K0):
        raise UnstabilizableError(
            "unstabilizable or ill-conditioned pair: Bass gain failed the stability certificate"
        )
    return K0


@dataclass
class CareResult:
    """Stabilizing Riccati solution.

    P is symmetric positive definite, K = R^{-1} B' P, residual is the
    Frobenius norm of A'P + PA - P B R^{-1} B' P + Q, and iterations counts
    the Newton-Kleinman steps taken.
    """

    P: np.ndarray
    K: np.ndarray
    residual: float
    iterations: int


def solve_care(A, B, Q, R):
    """Solve the continuous algebraic Riccati equation

        A'P + PA - P B R^{-1} B' P + Q = 0

    for the stabilizing positive definite P, by Newton-Kleinman iteration.

    Parameters
    ----------
    A, B : (n, n) and (n, m) arrays.
    Q, R : symmetric positive definite weights, (n, n) and (m, m).

    Returns
    -------
    CareResult with P, K = R^{-1} B' P, the Riccati residual, and the
    iteration count.

    Raises
    ------
    InputError for bad shapes or indefinite weights, UnstabilizableError when
    no stabilizing initial gain can be constructed, NonconvergentError when
    the iteration stalls or the final residual exceeds
    CARE_RESIDUAL_TOL * max(1, ||Q||_F).

    Notes
    -----
    Each sweep solves the closed-loop Lyapunov equation

        (A - B K)' P + P (A - B K) + Q + K' R K = 0

    and refreshes K = R^{-1} B' P; iteration stops when the step
    ||P_next - P||_F drops below CARE_STEP_TOL * max(1, ||P||_F). Starting
    from a stabilizing gain keeps every iterate stabilizing, so the final
    closed loop passes the Hurwitz certificate by construction (verified).
    """
    A = as_matrix(A, "A", square=True)
    n = A.shape[0]
    B = as_matrix(B, "B", rows=n)
    m = B.shape[1]
    Q = require_spd(Q, "Q")
    if Q.shape[0] != n:
        raise InputError(f"Q must be {n}x{n}, got {Q.shape}")
    R = require_spd(R, "R")
    if R.shape[0] != m:
        raise InputError(f"R must be {m}x{m}, got {R.shape}")

    K = bass_stabilizing_gain(A, B)
    P = None
    iterations = 0
    for iterations in range(1, CARE_MAX_ITER + 1):
        P_next = solve_lyapunov(A - B @ K, Q + K.T @ R @ K)
        K = np.linalg.solve(R, B.T @ P_next)
        if P is not None and np.linalg.norm(P_next - P) <= CARE_STEP_TOL * max(
            1.0, np.linalg.norm(P)
        ):
            P = P_next
            break
        P = P_next

    quad = P @ B @ np.linalg.solve(R, B.T @ P)
    residual = float(np.linalg.norm(A.T @ P + P @ A - quad + Q))
    if residual > CARE_RESIDUAL_TOL * max(1.0, np.linalg.norm(Q)):
        scale = (
            2.0 * np.linalg.norm(A.T @ P)
            + np.linalg.norm(quad)
            + np.linalg.norm(Q)
        )
        if residual <= RESIDUAL_FLOOR_FACTOR * np.finfo(float).eps * scale:
            raise UnstabilizableError(
                "unstabilizable or ill-conditioned pair: the attainable residual "
                f"floor ({residual:.3e} at solution scale {scale:.3e}) exceeds "
                "the acceptance tolerance"
            )
        raise NonconvergentError(
            f"nonconvergent: residual {residual:.3e} exceeds tolerance after "
            f"{iterations} iterations",
            residual=residual,
        )
    if not is_positive_definite(P):
        raise SolverError("Riccati solution failed the positive-definiteness check")
    if not is_hurwitz(A - B @ K):
        raise SolverError("closed loop failed the Hurwitz certificate")
    return CareResult(P=P, K=K, residual=residual, iterations=iterations)
