"""Condition numbers of the solution for ``p > 1``.

The condition number with weights ``(ξ, η, ρ)`` is

    c(X) = lim_{δ→0} sup_{||(ΔA/η, ΔQ/ρ)||_F <= δ} ||ΔX||_F / (ξ δ),

and has the closed form ``(1/ξ) ||(ρ S_c, η U_c)||_2`` in terms of the real
and imaginary parts of ``V^{-1}``, ``V^{-1}(I ⊗ B^*)`` and
``V^{-1}(B^T ⊗ I)Π`` with ``B = X^{-p} A``.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import Hpd, spectral_norm, unvec, vec, vec_permutation
from .operators import build_operator
from .solver import EquationSpec, solve_fixed_point

FD_SOLVE_TOL = 1e-14


@dataclass(frozen=True)
class ConditionParams:
    xi: float = 1.0
    eta: float = 1.0
    rho: float = 1.0

    def __post_init__(self):
        # eta = 0 or rho = 0 freezes that part of the data (e.g. relative
        # weights with A = 0)
        if not (self.xi > 0 and self.eta >= 0 and self.rho >= 0 and self.eta + self.rho > 0):
            raise ValueError("need xi > 0 and nonnegative eta, rho, not both zero")

    @classmethod
    def absolute(cls):
        return cls(1.0, 1.0, 1.0)

    @classmethod
    def relative(cls, X, A, Q):
        fro = np.linalg.norm
        return cls(float(fro(X)), float(fro(A)), float(fro(Q)))

    def scaled(self, t):
        return ConditionParams(t * self.xi, t * self.eta, t * self.rho)


@dataclass(frozen=True)
class ConditionReport:
    c_value: float
    params: ConditionParams
    case: str  # "complex" or "real"
    blocks: dict = field(repr=False)

    @property
    def stacked(self):
        """The matrix ``(ρ S, η U)`` whose 2-norm times ``1/ξ`` is ``c_value``."""
        return self.blocks["stacked"]


def assemble_condition_blocks(X, A, p):
    """Real blocks of the complex-case condition number.

    Returns a dict with ``V``, ``S``, ``Sigma``, ``U1``, ``Omega1``, ``U2``,
    ``Omega2``, ``Sc`` and ``Uc``. Raises
    :class:`~nlmeq.linalg.SingularOperatorError` if ``V`` is singular.
    """
    X = Hpd.of(X)
    A = np.asarray(A)
    op = build_operator(X, A, p, kind="V")
    n = op.n
    Vinv = op.inverse()
    B = op.B
    I = np.eye(n)
    M1 = Vinv @ np.kron(I, B.conj().T)
    M2 = Vinv @ np.kron(B.T, I) @ vec_permutation(n)
    S, Sigma = Vinv.real, Vinv.imag
    U1, Omega1 = M1.real, M1.imag
    U2, Omega2 = M2.real, M2.imag
    Sc = np.block([[S, -Sigma], [Sigma, S]])
    Uc = np.block([[U1 + U2, Omega2 - Omega1], [Omega1 + Omega2, U1 - U2]])
    return dict(V=op.matrix, S=S, Sigma=Sigma, U1=U1, Omega1=Omega1,
                U2=U2, Omega2=Omega2, Sc=Sc, Uc=Uc)


def _solution(X, A, Q, p):
    if X is None:
        X = solve_fixed_point(EquationSpec(A, Q, p), tol=FD_SOLVE_TOL).X
    return X.matrix if isinstance(X, Hpd) else np.asarray(X)


def condition_number(X, A, Q, p, params=None):
    """``c(X) = (1/ξ) σ_max(ρ S_c, η U_c)`` via the complex ``2n^2`` split.

    `params` defaults to the relative weights ``(||X||_F, ||A||_F, ||Q||_F)``.
    Pass ``X=None`` to solve for it first.
    """
    X = _solution(X, A, Q, p)
    if params is None:
        params = ConditionParams.relative(X, A, Q)
    blocks = assemble_condition_blocks(X, A, p)
    stacked = np.hstack([params.rho * blocks["Sc"], params.eta * blocks["Uc"]])
    blocks["stacked"] = stacked
    c = spectral_norm(stacked) / params.xi
    return ConditionReport(float(c), params, "complex", blocks)


def condition_number_real(X, A, Q, p, params=None):
    """Real-data condition number ``(1/ξ) σ_max(ρ S_r, η U_r)``.

    ``S_r`` is the inverse of the (real) operator matrix and
    ``U_r = S_r [I ⊗ (A^T X^{-p}) + ((A^T X^{-p}) ⊗ I) Π]``.
    """
    if np.any(np.imag(A)) or np.any(np.imag(Q)):
        raise ValueError("condition_number_real needs real A and Q")
    A = np.real(np.asarray(A))
    Q = np.real(np.asarray(Q))
    X = _solution(X, A, Q, p)
    X = Hpd.of(np.real(X))
    if params is None:
        params = ConditionParams.relative(X.matrix, A, Q)
    n = X.n
    op = build_operator(X, A, p, kind="V")
    Sr = op.inverse().real
    C = A.T @ X.power(-p).real
    I = np.eye(n)
    Ur = Sr @ (np.kron(I, C) + np.kron(C, I) @ vec_permutation(n))
    stacked = np.hstack([params.rho * Sr, params.eta * Ur])
    c = spectral_norm(stacked) / params.xi
    return ConditionReport(float(c), params, "real",
                           dict(V=op.matrix.real, Sr=Sr, Ur=Ur, stacked=stacked))


def _fd_response(spec, X, dA, dQ, params):
    pert = EquationSpec(spec.A + dA, spec.Q + dQ, spec.p)
    Xt = solve_fixed_point(pert, X0=X, tol=FD_SOLVE_TOL * max(1.0, pert.q_max))
    if not Xt.converged:
        return None
    return np.linalg.norm(Xt.X - X) / params.xi


def fd_condition_estimate(spec, params=None, delta=1e-7, trials=20, rng_seed=0,
                          X=None, return_skipped=False):
    """Finite-difference lower estimate of the condition number.

    Each trial draws a random direction ``(E, H)`` with ``||(E, H)||_F = 1``
    (complex when the data are complex), symmetrizes ``H``, rescales to
    Frobenius norm `delta`, perturbs ``A += η E``, ``Q += ρ H`` and re-solves.
    The estimate is the largest ``||ΔX||_F / (ξ δ)``. Trial `k` uses seed
    ``(rng_seed, k)``; non-converging trials are skipped and counted.
    """
    if X is None:
        X = solve_fixed_point(spec, tol=FD_SOLVE_TOL).X
    if params is None:
        params = ConditionParams.relative(X, spec.A, spec.Q)
    n = spec.n
    cplx = not spec.is_real
    best, skipped = 0.0, 0
    for k in range(trials):
        rng = np.random.default_rng([rng_seed, k])
        E = rng.standard_normal((n, n))
        H = rng.standard_normal((n, n))
        if cplx:
            E = E + 1j * rng.standard_normal((n, n))
            H = H + 1j * rng.standard_normal((n, n))
        H = (H + H.conj().T) / 2
        scale = delta / np.sqrt(np.linalg.norm(E) ** 2 + np.linalg.norm(H) ** 2)
        r = _fd_response(spec, X, params.eta * scale * E, params.rho * scale * H, params)
        if r is None:
            skipped += 1
            continue
        best = max(best, r / delta)
    return (best, skipped) if return_skipped else best


def top_direction(report, n):
    """Direction ``(E, H)`` maximizing the linearized response.

    Decodes the top right singular vector of ``report.stacked``. For the
    complex split the vector is ``(x, y, a, b)`` with ``vec H = x + iy`` and
    ``vec E = a + ib``; for the real case it is ``(vec H, vec E)``.
    """
    _, _, Vh = np.linalg.svd(report.stacked)
    g = Vh[0]
    m = n * n
    if report.case == "complex":
        H = unvec(g[:m] + 1j * g[m:2 * m], n)
        E = unvec(g[2 * m:3 * m] + 1j * g[3 * m:], n)
    else:
        H = unvec(g[:m], n)
        E = unvec(g[m:], n)
    return E, H


def fd_probe_direction(spec, report, delta=1e-7, X=None):
    """Finite-difference response along the top singular direction of `report`.

    ``H`` is projected onto the Hermitian matrices before re-solving, so the
    probe measures how much of ``c_value`` is attained by admissible data.
    """
    if X is None:
        X = solve_fixed_point(spec, tol=FD_SOLVE_TOL).X
    params = report.params
    E, H = top_direction(report, spec.n)
    H = (H + H.conj().T) / 2
    if spec.is_real:
        E, H = E.real, H.real
    scale = delta / np.sqrt(np.linalg.norm(E) ** 2 + np.linalg.norm(H) ** 2)
    r = _fd_response(spec, X, params.eta * scale * E, params.rho * scale * H, params)
    return r / delta


def linearized_response(X, A, p, E, H, params):
    """First-order ``||ΔX||_F / ξ`` for the data direction ``(ΔA, ΔQ) = (ηE, ρH)``."""
    op = build_operator(X, A, p, kind="V")
    B = op.B
    rhs = params.rho * H + params.eta * (B.conj().T @ E + E.conj().T @ B)
    dX = unvec(np.linalg.solve(op.matrix, vec(rhs)), op.n)
    return np.linalg.norm(dX) / params.xi
