"""Fixed-point solver and solvability checks for ``X - A^* X^{-p} A = Q``."""

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    Hpd,
    NotPositiveDefiniteError,
    RegimeError,
    _square,
    hermitian_part,
    is_hermitian,
    lambda_min,
    principal_power,
    spectral_norm,
)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000
DIVERGENCE_FACTOR = 1e12


@dataclass(frozen=True)
class EquationSpec:
    """Coefficients of ``X - A^* X^{-p} A = Q``.

    `Q` is symmetrized on construction unless ``symmetrize=False``, in which
    case it is kept exactly as given (it must still have a positive real
    spectrum). The unsymmetrized mode replays computations on reference data
    that is not exactly Hermitian; every iterate then stays non-Hermitian and
    matrix powers use the principal branch.
    """

    A: np.ndarray
    Q: np.ndarray
    p: float
    symmetrize: bool = True
    hermitian: bool = field(init=False)

    def __post_init__(self):
        A = _square(self.A, "A")
        Q = _square(self.Q, "Q")
        if A.shape != Q.shape:
            raise ValueError(f"A {A.shape} and Q {Q.shape} differ in shape")
        if not self.p > 0:
            raise ValueError(f"exponent p must be positive, got {self.p}")
        if self.symmetrize:
            Q = hermitian_part(Q)
            if not np.linalg.eigvalsh(Q)[0] > 0:
                raise NotPositiveDefiniteError("Q is not positive definite")
        elif not lambda_min(Q) > 0:
            raise NotPositiveDefiniteError("Q has a nonpositive eigenvalue")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "hermitian", bool(self.symmetrize or is_hermitian(Q)))

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def is_real(self):
        return not (np.any(np.imag(self.A)) or np.any(np.imag(self.Q)))

    @property
    def kappa_max(self):
        """``λ_max(A^* A)``, i.e. ``||A||^2``."""
        return float(np.linalg.eigvalsh(self.A.conj().T @ self.A)[-1])

    @property
    def kappa_min(self):
        """``λ_min(A^* A)``."""
        return float(max(np.linalg.eigvalsh(self.A.conj().T @ self.A)[0], 0.0))

    @property
    def q_min(self):
        return lambda_min(self.Q)

    @property
    def q_max(self):
        if self.hermitian:
            return float(np.linalg.eigvalsh(hermitian_part(self.Q))[-1])
        return float(np.max(np.linalg.eigvals(self.Q).real))

    @property
    def norm_A(self):
        return spectral_norm(self.A)

    def perturbed(self, dA=None, dQ=None):
        A = self.A if dA is None else self.A + dA
        Q = self.Q if dQ is None else self.Q + dQ
        return EquationSpec(A, Q, self.p, symmetrize=self.symmetrize)


@dataclass(frozen=True)
class SolveReport:
    X: np.ndarray
    iterations: int
    residual_history: np.ndarray
    status: str  # "converged", "max-iterations" or "diverged"

    @property
    def converged(self):
        return self.status == "converged"

    @property
    def residual(self):
        return float(self.residual_history[-1]) if len(self.residual_history) else np.inf


@dataclass(frozen=True)
class ExistenceBounds:
    alpha: float
    beta: float
    beta_condition_holds: bool


def _power(X, r, hermitian):
    if hermitian:
        return Hpd.of(X).power(r)
    return principal_power(X, r)


def residual(X, spec):
    """``R(X) = Q + A^* X^{-p} A - X``."""
    X = _square(X, "X")
    if X.shape != spec.Q.shape:
        raise ValueError("X and Q differ in shape")
    A = spec.A
    R = spec.Q + A.conj().T @ _power(X, -spec.p, spec.hermitian) @ A - X
    return hermitian_part(R) if spec.hermitian else R


def fixed_point_step(X, spec):
    """One step ``X <- Q + A^* X^{-p} A``."""
    A = spec.A
    Y = spec.Q + A.conj().T @ _power(X, -spec.p, spec.hermitian) @ A
    return hermitian_part(Y) if spec.hermitian else Y


def iterate(spec, X0, steps):
    """Return the iterates ``X_1, ..., X_steps`` started from `X0`."""
    out = []
    X = np.asarray(X0)
    for _ in range(steps):
        X = fixed_point_step(X, spec)
        out.append(X)
    return out


def solve_fixed_point(spec, X0=None, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Solve the equation with the iteration ``X_n = Q + A^* X_{n-1}^{-p} A``.

    Parameters
    ----------
    spec : EquationSpec
    X0 : array_like, optional
        Positive definite start; defaults to `Q`.
    tol : float
        Stop once the spectral norm of the residual of the current iterate
        drops below `tol`.
    max_iter : int

    Returns
    -------
    SolveReport
        ``iterations`` counts the update steps taken. ``residual_history[k]``
        is the residual norm of the iterate produced by step ``k + 1``.
        Hitting `max_iter` or blowing up is reported through ``status``, not
        raised.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    X = spec.Q.copy() if X0 is None else _square(X0, "X0")
    if spec.hermitian:
        Hpd.of(X)
    elif not lambda_min(X) > 0:
        raise NotPositiveDefiniteError("X0 has a nonpositive eigenvalue")

    blowup = DIVERGENCE_FACTOR * max(spec.q_max, 1.0)
    history = []
    status = "max-iterations"
    # X^{-p} of the current iterate is reused for both the residual and the step
    Xp = _power(X, -spec.p, spec.hermitian)
    for _ in range(max_iter):
        X = spec.Q + spec.A.conj().T @ Xp @ spec.A
        if spec.hermitian:
            X = hermitian_part(X)
        # X >= Q > 0 by construction
        Xp = _power(X, -spec.p, spec.hermitian)
        R = spec.Q + spec.A.conj().T @ Xp @ spec.A - X
        history.append(spectral_norm(R))
        if history[-1] < tol:
            status = "converged"
            break
        if not np.isfinite(history[-1]) or spectral_norm(X) > blowup:
            status = "diverged"
            break
    return SolveReport(X, len(history), np.array(history), status)


def _bisect_root(f, lo, hi_start):
    """Root of increasing-past-`lo` `f` with ``f(lo) <= 0`` and ``f -> +inf``."""
    flo = f(lo)
    if flo > 0:
        raise RuntimeError("root bracket failure: function positive at left end")
    if flo == 0:
        return lo
    hi = hi_start
    for _ in range(200):
        if f(hi) > 0:
            break
        lo, hi = hi, 2 * hi
    else:
        raise RuntimeError("root bracket failure: no sign change found")
    for _ in range(400):
        mid = (lo + hi) / 2
        if hi - lo <= 1e-13 * (1 + abs(mid)):
            break
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def alpha_beta_bounds(spec):
    """Scalars ``α ≥ β`` enclosing the solution, and the test ``β > (pκ̄)^(1/(p+1))``.

    α solves ``(x - λ_max(Q)) (λ_min(Q) + κ̲/x^p)^p = κ̄`` and β solves
    ``(x - λ_min(Q)) (λ_max(Q) + κ̄/x^p)^p = κ̲``. When the test holds the
    equation has a unique solution with ``β I <= X <= α I``.
    """
    p = spec.p
    qmin, qmax = spec.q_min, spec.q_max
    kmax, kmin = spec.kappa_max, spec.kappa_min

    def f_alpha(x):
        return (x - qmax) * (qmin + kmin / x ** p) ** p - kmax

    def f_beta(x):
        return (x - qmin) * (qmax + kmax / x ** p) ** p - kmin

    hi = qmax + kmax / qmin ** p + 1
    alpha = _bisect_root(f_alpha, qmax, hi)
    beta = _bisect_root(f_beta, qmin, hi)
    holds = beta > (p * kmax) ** (1 / (p + 1))
    return ExistenceBounds(alpha, beta, bool(holds))


def _require_p_gt_1(spec):
    if not spec.p > 1:
        raise RegimeError(f"this check needs p > 1, got p = {spec.p}")


def check_uniqueness_condition(spec):
    """Sufficient condition for a unique solution when ``p > 1``.

    True iff
    ``((pκ̄)^(1/(p+1)) - λ_min(Q)) (λ_max(Q) + κ̄/(pκ̄)^(p/(p+1)))^p < κ̲``
    and ``κ̄ < λ_max(Q) (p λ_min(Q))^p / (p-1)^(p+1)``. With ``A = 0`` both
    sides of the first inequality vanish and the check is False.
    """
    _require_p_gt_1(spec)
    p = spec.p
    qmin, qmax = spec.q_min, spec.q_max
    kmax, kmin = spec.kappa_max, spec.kappa_min
    if kmax == 0:
        return False
    r = (p * kmax) ** (1 / (p + 1))
    left = (r - qmin) * (qmax + kmax / (p * kmax) ** (p / (p + 1))) ** p
    right = qmax * (qmin * p) ** p / (p - 1) ** (p + 1)
    return bool(left < kmin <= kmax < right)


def check_contraction_condition(spec):
    """``p ||A||^2 < λ_min(Q)^(p+1)``: unique solution with ``X >= λ_min(Q) I``."""
    return bool(spec.p * spec.norm_A ** 2 < spec.q_min ** (spec.p + 1))
