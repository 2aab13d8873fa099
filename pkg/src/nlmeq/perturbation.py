"""Perturbation bounds for the solution under changes of `A` (and `Q`).

``bound_rho`` covers ``p > 1`` and is relative; ``bound_mu_star`` covers
``0 < p < 1`` and is absolute. All norms are spectral.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import Hpd, RegimeError, spectral_norm
from .operators import build_operator, inv_operator_norm, op_P_norm
from .solver import solve_fixed_point

REFERENCE_TOL = 1e-13


@dataclass(frozen=True)
class PerturbationScalars:
    l: float
    zeta: float
    xi: float
    n_norm: float
    eta: float
    eps: float
    sigma: float


@dataclass(frozen=True)
class PerturbationReport:
    regime: str  # "p-gt-1" or "p-lt-1"
    bound: float
    relative: bool
    conditions_hold: bool
    bound_rel: float
    scalars: Optional[PerturbationScalars] = None
    con2: Optional[float] = None
    con3: Optional[float] = None
    legacy_bound: Optional[float] = None  # slot for an externally supplied comparison bound

    @property
    def certified(self):
        return self.conditions_hold


def bound_rho(spec, dA):
    """Relative bound on ``||X~ - X|| / ||X||`` when `A` becomes ``A + dA`` (p > 1).

    The bound is ``(2||A|| + ||dA||) ||dA|| / (λ_min(Q)^(p+1) - p||A||^2)``,
    certified when ``||A|| + ||dA|| < sqrt(λ_min(Q)^(p+1)/p)``. A nonpositive
    denominator yields ``bound = inf``.
    """
    p = spec.p
    if not p > 1:
        raise RegimeError(f"bound_rho needs p > 1, got p = {p}")
    nA = spec.norm_A
    ndA = spectral_norm(dA)
    q1 = spec.q_min ** (p + 1)
    radius = np.sqrt(q1 / p)
    holds = nA < radius and ndA < radius - nA
    denom = q1 - p * nA ** 2
    if denom <= 0:
        rho = np.inf
    else:
        rho = (2 * nA + ndA) * ndA / denom
    return PerturbationReport("p-gt-1", float(rho), True, bool(holds), float(rho))


def mu_star(l, zeta, eta, eps, sigma):
    """Smaller root of ``ζ(l+η) x^2 - l(1+ζε-σ) x + lε = 0``; NaN if complex."""
    b = l * (1 + zeta * eps - sigma)
    disc = b ** 2 - 4 * l * zeta * eps * (l + eta)
    if disc < 0:
        return np.nan
    return 2 * l * eps / (b + np.sqrt(disc))


def mu_star_condition_margin(l, zeta, eta, eps, sigma):
    """``l(1-σ)^2 / (ζ(l + lσ + 2η + 2 sqrt((lσ+η)(η+l)))) - ε``; positive when certified."""
    top = l * (1 - sigma) ** 2
    bottom = zeta * (l + l * sigma + 2 * eta + 2 * np.sqrt((l * sigma + eta) * (eta + l)))
    return top / bottom - eps


def perturbation_scalars(spec, X, ndA, ndQ, l=None, n_norm=None):
    X = Hpd.of(X)
    p = spec.p
    if l is None or n_norm is None:
        op = build_operator(X, spec.A, p, kind="L")
        l = inv_operator_norm(op) if l is None else l
        n_norm = op_P_norm(op) if n_norm is None else n_norm
    zeta = 1 / X.lambda_min
    xi = X.lambda_min ** -p
    nA = spec.norm_A
    eta = p * xi * nA ** 2
    eps = ndQ / l + n_norm * ndA + xi / l * ndA ** 2
    sigma = p / l * zeta * xi * (2 * nA + ndA) * ndA
    return PerturbationScalars(l, zeta, xi, n_norm, eta, eps, sigma)


def bound_mu_star(spec, X=None, dA=None, dQ=None, l=None, n_norm=None):
    """Absolute bound ``||X~ - X|| <= μ*`` for ``0 < p < 1``.

    Parameters
    ----------
    spec : EquationSpec
    X : array_like, optional
        The unperturbed solution; solved for at tol 1e-13 when omitted.
    dA, dQ : array_like, optional
        Perturbations of `A` and `Q` (zero when omitted).
    l, n_norm : float, optional
        Precomputed operator quantities at `X`, to skip reassembly across
        many perturbations of one equation.

    Returns
    -------
    PerturbationReport
        ``bound`` is μ*, ``bound_rel`` is μ*/||X||, ``con2 = 1 - σ`` and
        ``con3`` is the margin of the ε-condition. When the conditions fail
        the numbers are still filled in (NaN if the quadratic has no real
        root) and ``conditions_hold`` is False.
    """
    p = spec.p
    if not 0 < p < 1:
        raise RegimeError(f"bound_mu_star needs 0 < p < 1, got p = {p}")
    if X is None:
        X = solve_fixed_point(spec, tol=REFERENCE_TOL).X
    X = Hpd.of(X)
    ndA = 0.0 if dA is None else spectral_norm(dA)
    ndQ = 0.0 if dQ is None else spectral_norm(dQ)
    s = perturbation_scalars(spec, X, ndA, ndQ, l=l, n_norm=n_norm)
    con2 = 1 - s.sigma
    con3 = mu_star_condition_margin(s.l, s.zeta, s.eta, s.eps, s.sigma)
    holds = con2 > 0 and con3 > 0
    mu = 0.0 if s.eps == 0 else mu_star(s.l, s.zeta, s.eta, s.eps, s.sigma)
    return PerturbationReport(
        "p-lt-1", float(mu), False, bool(holds), float(mu / X.lambda_max),
        scalars=s, con2=float(con2), con3=float(con3))
