"""Complete-decentralization tests for unconstrained LQR gains.

A gain is completely decentralized when every input u_i depends only on the
states its own subcontroller can see (neighborhood N_i); with one input per
state that means a diagonal K. This module provides

* a numeric oracle: solve the Riccati equation and test the gain's sparsity
  pattern,
* analytic conditions for 2x2 dynamics with diagonal B, Q, R (sign pattern of
  the coupling plus two weight-ratio identities, and the cost synthesis they
  induce),
* a per-frequency uniform-gain search for circulant quadruples of any size,
  specialized to a pair of balance ratios for the 2x2 circulant case,
* the shared-root classification of two monic quadratics that underpins the
  ratio conditions.

Tolerance split: analytic ratio identities are checked at 1e-10 (exact
arithmetic facts), while oracle diagonality is judged at 1e-6, downstream of
the iterative Riccati solve.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError
from .lqr import LqrProblem, solve_lqr
from .matcore import as_matrix
from .spectral import CirculantSpec, circulant_eigenvalues, circulant_materialize

# Relative tolerance for analytic ratio identities.
RATIO_TOL = 1e-10
# Gain-sparsity tolerance used by the numeric oracle.
ORACLE_TOL = 1e-6
# Default gain-sparsity tolerance for direct pattern tests.
PATTERN_TOL = 1e-8
# Imaginary parts above this disqualify a per-frequency gain candidate.
UNIFORM_GAIN_IMAG_TOL = 1e-9


# ---------------------------------------------------------------------------
# Sparsity patterns and the numeric oracle
# ---------------------------------------------------------------------------

def single_station_neighborhoods(n):
    """N_i = {i}: each input sees exactly its own state (0-based indices)."""
    return [frozenset((i,)) for i in range(n)]


def position_velocity_neighborhoods(n):
    """N_i = {i, n+i} over a stacked [positions; velocities] state of size 2n."""
    return [frozenset((i, n + i)) for i in range(n)]


def normalize_neighborhoods(neighborhoods, n_inputs, n_states):
    """Validate one nonempty, in-range state-index set per input."""
    nbhd = [frozenset(int(j) for j in nb) for nb in neighborhoods]
    if len(nbhd) != n_inputs:
        raise InputError(
            f"expected {n_inputs} neighborhoods (one per input), got {len(nbhd)}"
        )
    for i, nb in enumerate(nbhd):
        if not nb:
            raise InputError(f"neighborhood {i} is empty")
        for j in nb:
            if not 0 <= j < n_states:
                raise InputError(
                    f"neighborhood {i} references state {j}, outside 0..{n_states - 1}"
                )
    return nbhd


def pattern_decentralized(K, neighborhoods, tol=PATTERN_TOL):
    """Test whether K conforms to the neighborhood sparsity pattern.

    Returns (conforms, offdiag_mass). conforms is True when every entry
    K[i, j] with j outside N_i satisfies |K[i, j]| <= tol * max(1, ||K||_F);
    offdiag_mass is the Frobenius norm of the off-pattern part divided by
    ||K||_F (0 for a zero gain).
    """
    K = as_matrix(K, "K")
    if tol <= 0:
        raise InputError("tol must be positive")
    m, n = K.shape
    nbhd = normalize_neighborhoods(neighborhoods, m, n)
    off_mask = np.ones((m, n), dtype=bool)
    for i, nb in enumerate(nbhd):
        off_mask[i, sorted(nb)] = False
    off = K[off_mask]
    conforms = bool(off.size == 0 or np.max(np.abs(off)) <= tol * max(1.0, np.linalg.norm(K)))
    k_norm = np.linalg.norm(K)
    mass = float(np.linalg.norm(off) / k_norm) if k_norm > 0 else 0.0
    return conforms, mass


@dataclass
class DecentralReport:
    """Verdict bundle: numeric-oracle decision, off-pattern mass, analytic
    condition results as (name, holds, witness) triples, the shared scalar
    gain c when one exists, and the solved gain itself."""

    oracle_decentralized: bool
    offdiag_mass: float
    analytic_verdicts: list = field(default_factory=list)
    scalar_gain_c: Optional[float] = None
    K: Optional[np.ndarray] = None


def oracle_check(prob, neighborhoods=None, tol=ORACLE_TOL):
    """Solve prob and judge the gain against the neighborhood pattern.

    neighborhoods defaults to single-station sets, which requires one input
    per state. Solver errors propagate.
    """
    if neighborhoods is None:
        if prob.m != prob.n:
            raise InputError(
                "default single-station neighborhoods need one input per state; "
                "pass neighborhoods explicitly"
            )
        neighborhoods = single_station_neighborhoods(prob.n)
    sol = solve_lqr(prob)
    decentralized, mass = pattern_decentralized(sol.K, neighborhoods, tol)
    return DecentralReport(
        oracle_decentralized=decentralized,
        offdiag_mass=mass,
        K=sol.K,
    )


# ---------------------------------------------------------------------------
# Shared roots of monic quadratics
# ---------------------------------------------------------------------------

@dataclass
class MonicQuadratic:
    """x^2 + beta x + gamma; coefficients may be complex."""

    beta: complex
    gamma: complex

    def __call__(self, x):
        return x * x + self.beta * x + self.gamma


def approx_equal(u, v, tol):
    """Symmetric relative closeness; safe when either value is zero."""
    return abs(u - v) <= tol * max(1.0, abs(u), abs(v))


def common_quadratic_roots(f, g, tol=1e-9):
    """Classify the root overlap of two monic quadratics.

    Returns ("both", None) when the coefficient pairs agree within tol,
    ("one", alpha) when exactly one root is shared, and ("none", None)
    otherwise. The shared root comes from the two elimination formulas

        alpha = (beta1 gamma2 - beta2 gamma1) / (gamma1 - gamma2)
              = (gamma1 - gamma2) / (beta2 - beta1),

    which must agree within tol and satisfy both quadratics within tol. Equal
    constant terms with distinct linear terms only share x = 0, and only when
    that constant term is itself zero.
    """
    b1, g1 = complex(f.beta), complex(f.gamma)
    b2, g2 = complex(g.beta), complex(g.gamma)
    for name, value in (("beta1", b1), ("gamma1", g1), ("beta2", b2), ("gamma2", g2)):
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise InputError(f"{name} is not finite")

    if approx_equal(b1, b2, tol) and approx_equal(g1, g2, tol):
        return "both", None
    if approx_equal(g1, g2, tol):
        # f - g reduces to (beta1 - beta2) x = 0, so only x = 0 can be shared.
        if abs(g1) <= tol and abs(g2) <= tol:
            return "one", 0j
        return "none", None
    if approx_equal(b1, b2, tol):
        return "none", None

    alpha = (b1 * g2 - b2 * g1) / (g1 - g2)
    alpha_alt = (g1 - g2) / (b2 - b1)
    if not approx_equal(alpha, alpha_alt, tol):
        return "none", None
    scale = max(1.0, abs(alpha) ** 2, abs(b1 * alpha), abs(g1), abs(b2 * alpha), abs(g2))
    if abs(f(alpha)) <= tol * scale and abs(g(alpha)) <= tol * scale:
        return "one", alpha
    return "none", None


# ---------------------------------------------------------------------------
# 2x2 dynamics with diagonal B, Q, R
# ---------------------------------------------------------------------------

@dataclass
class DiagonalCost2x2:
    """A 2x2 plant [[a0, a1], [a_minus1, a2]] with B = I and decoupled weights
    Q = diag(q0, q2), R = diag(1/gamma0, 1/gamma2)."""

    a0: float
    a1: float
    a_minus1: float
    a2: float
    q0: float
    q2: float
    gamma0: float
    gamma2: float

    def __post_init__(self):
        for name in ("a0", "a1", "a_minus1", "a2", "q0", "q2", "gamma0", "gamma2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InputError(f"{name} is not finite")
            setattr(self, name, value)
        for name in ("q0", "q2", "gamma0", "gamma2"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be positive")

    def state_matrix(self):
        return np.array([[self.a0, self.a1], [self.a_minus1, self.a2]])

    def lqr_problem(self):
        return LqrProblem(
            A=self.state_matrix(),
            B=np.eye(2),
            Q=np.diag([self.q0, self.q2]),
            R=np.diag([1.0 / self.gamma0, 1.0 / self.gamma2]),
        )


def _require_nonzero_coupling(a1, a_minus1, a2):
    if a1 == 0.0 or a_minus1 == 0.0 or a2 == 0.0:
        raise InputError(
            "degenerate coupling: a1, a_minus1 and a2 must be nonzero "
            "(fully diagonal plants are decentralized trivially)"
        )


def diagonal_cost_conditions(sys):
    """Evaluate the four conditions under which the gain of sys is diagonal.

    (i)   a1 and a_minus1 have opposite signs;
    (ii)  a0 and a2 have the same sign;
    (iii) q0/q2 equals -a0 a_minus1 / (a1 a2) within RATIO_TOL;
    (iv)  gamma0/gamma2 equals (a1/a_minus1)^2 * q0/q2 within RATIO_TOL.

    Returns (holds, details) where holds is the conjunction and details maps
    each condition to its verdict plus the computed and target ratios.
    """
    _require_nonzero_coupling(sys.a1, sys.a_minus1, sys.a2)
    opposite = sys.a1 * sys.a_minus1 < 0
    same = sys.a0 * sys.a2 > 0
    state_ratio = sys.q0 / sys.q2
    state_target = -sys.a0 * sys.a_minus1 / (sys.a1 * sys.a2)
    input_ratio = sys.gamma0 / sys.gamma2
    input_target = (sys.a1 / sys.a_minus1) ** 2 * state_ratio
    state_ok = approx_equal(state_ratio, state_target, RATIO_TOL)
    input_ok = approx_equal(input_ratio, input_target, RATIO_TOL)
    details = {
        "opposite_offdiag_signs": opposite,
        "same_diag_signs": same,
        "state_weight_ratio": state_ok,
        "input_weight_ratio": input_ok,
        "state_ratio": state_ratio,
        "state_ratio_target": state_target,
        "input_ratio": input_ratio,
        "input_ratio_target": input_target,
    }
    return opposite and same and state_ok and input_ok, details


def synthesize_diagonal_cost(a0, a1, a_minus1, a2, q2=1.0, gamma2=1.0):
    """Choose diagonal weights that make the gain of the given plant diagonal.

    Requires the sign pattern (a1, a_minus1 opposite; a0, a2 same); then
    q0 = q2 * (-a0 a_minus1)/(a1 a2) and gamma0 = gamma2 * (a1/a_minus1)^2
    * (q0/q2) are positive and satisfy diagonal_cost_conditions by
    construction.
    """
    _require_nonzero_coupling(a1, a_minus1, a2)
    if q2 <= 0 or gamma2 <= 0:
        raise InputError("q2 and gamma2 must be positive")
    if not (a1 * a_minus1 < 0 and a0 * a2 > 0):
        raise InputError(
            "preconditions fail, positivity of cost impossible: need opposite-sign "
            "coupling and same-sign self terms"
        )
    q0 = q2 * (-a0 * a_minus1) / (a1 * a2)
    gamma0 = gamma2 * (a1 / a_minus1) ** 2 * (q0 / q2)
    return DiagonalCost2x2(
        a0=a0, a1=a1, a_minus1=a_minus1, a2=a2,
        q0=q0, q2=q2, gamma0=gamma0, gamma2=gamma2,
    )


def diagonal_riccati_roots(sys):
    """Diagonal entries (p0, p2) of the Riccati solution for a conforming sys.

    p2 is the positive root a2/gamma2 + sqrt((a2/gamma2)^2 + q2/gamma2) and
    p0 = -a_minus1 p2 / a1; both are strictly positive when
    diagonal_cost_conditions holds (required).
    """
    holds, details = diagonal_cost_conditions(sys)
    if not holds:
        failed = [k for k in ("opposite_offdiag_signs", "same_diag_signs",
                              "state_weight_ratio", "input_weight_ratio") if not details[k]]
        raise InputError(f"conditions do not hold (failed: {', '.join(failed)})")
    ratio = sys.a2 / sys.gamma2
    p2 = ratio + math.sqrt(ratio * ratio + sys.q2 / sys.gamma2)
    p0 = -sys.a_minus1 * p2 / sys.a1
    if p2 <= 0 or p0 <= 0:
        raise InputError("no positive root pair exists for these parameters")
    return p0, p2


# ---------------------------------------------------------------------------
# Circulant quadruples: uniform scalar gain
# ---------------------------------------------------------------------------

def _frequency_data(a, b, q, r):
    n = a.n
    for name, spec in (("b", b), ("q", q), ("r", r)):
        if spec.n != n:
            raise InputError(f"spec '{name}' has size {spec.n}, expected {n}")
    ah = circulant_eigenvalues(a)
    bh = circulant_eigenvalues(b)
    qh = circulant_eigenvalues(q)
    rh = circulant_eigenvalues(r)
    for name, vals in (("b", bh), ("r", rh)):
        floor = 1e-12 * max(1.0, float(np.max(np.abs(vals))))
        if np.min(np.abs(vals)) <= floor:
            raise InputError(
                f"frequency-singular: an eigenvalue of '{name}' vanishes"
            )
    return ah, bh, qh, rh


def uniform_gain_candidates(a, b, q, r):
    """Per-frequency stabilizing gain candidates for a circulant quadruple.

    c(k) = (a(k) + sqrt(a(k)^2 + b(k)^2 q(k)/r(k))) / b(k), principal branch.
    The plus branch is the stabilizing root of the per-frequency quadratic
    c^2 - 2 c a(k)/b(k) - q(k)/r(k) = 0 and is the only admissible witness,
    since the LQR gain is unique.
    """
    ah, bh, qh, rh = _frequency_data(a, b, q, r)
    return (ah + np.sqrt(ah * ah + bh * bh * qh / rh)) / bh


def find_uniform_gain(a, b, q, r, tol=1e-9):
    """Real constant c with gain K = c I for the circulant quadruple, if any.

    Returns c(0) when every per-frequency candidate has imaginary part within
    UNIFORM_GAIN_IMAG_TOL and all candidates agree within tol * max(1, |c(0)|);
    returns None otherwise. No root polishing is attempted: presence vs
    absence is decided by these tolerances alone.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    ch = uniform_gain_candidates(a, b, q, r)
    if np.max(np.abs(ch.imag)) > UNIFORM_GAIN_IMAG_TOL:
        return None
    c0 = ch[0]
    if np.max(np.abs(ch - c0)) > tol * max(1.0, abs(c0)):
        return None
    return float(c0.real)


def circulant_lqr_problem(a, b, q, r):
    """Materialize a circulant quadruple into an LqrProblem."""
    return LqrProblem(
        A=circulant_materialize(a),
        B=circulant_materialize(b),
        Q=circulant_materialize(q),
        R=circulant_materialize(r),
    )


def circulant_pair_conditions(a, b, q, r):
    """Balance test for 2x2 circulant quadruples.

    Each matrix [[v0, v1], [v1, v0]] maps a coordinate to itself with weight
    v0 and to the opposite coordinate with weight v1; (v0 - v1)/(v0 + v1) is
    its relative difference in influence. The test requires that difference to
    balance between A and B, and between Q and R:

        (a0 - a1)/(a0 + a1) == (b0 - b1)/(b0 + b1)  and
        (q0 - q1)/(q0 + q1) == (r0 - r1)/(r0 + r1),

    both within RATIO_TOL. Returns (holds, c) with c the shared scalar gain
    from find_uniform_gain when the balance holds (None when the per-frequency
    stabilizing branches fail to agree, which can happen when the eigenvalues
    of B differ in sign).
    """
    for name, spec in (("a", a), ("b", b), ("q", q), ("r", r)):
        if spec.n != 2:
            raise InputError(f"spec '{name}' must have size 2, got {spec.n}")

    def ratio(name, spec):
        v0, v1 = spec.first_row
        if v0 + v1 == 0.0:
            raise InputError(f"degenerate: {name}0 + {name}1 is zero")
        if v0 - v1 == 0.0:
            raise InputError(f"degenerate: {name}0 - {name}1 is zero")
        return (v0 - v1) / (v0 + v1)

    dynamics_ok = approx_equal(ratio("a", a), ratio("b", b), RATIO_TOL)
    cost_ok = approx_equal(ratio("q", q), ratio("r", r), RATIO_TOL)
    holds = dynamics_ok and cost_ok
    c = find_uniform_gain(a, b, q, r) if holds else None
    return holds, c
