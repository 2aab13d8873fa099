"""Residual-based error bounds for approximate solutions when ``0 < p < 1``."""

from dataclasses import dataclass

import numpy as np

from .linalg import (
    NotPositiveDefiniteError,
    RegimeError,
    lambda_min,
    principal_power,
    spectral_norm,
)
from .solver import residual


@dataclass(frozen=True)
class BackwardErrorReport:
    residual_norm: float
    theta1: float
    theta: float
    bound: float
    legacy_nu: float
    legacy_nu_bound: float
    applicable: bool
    legacy_applicable: bool


def _require_p_lt_1(p):
    if not 0 < p < 1:
        raise RegimeError(f"backward-error bounds need 0 < p < 1, got p = {p}")


def contraction_constant(Xt, A, p):
    """``||X~^{-p/2} A||^2 ||X~^{-1}||``."""
    return spectral_norm(principal_power(Xt, -p / 2) @ A) ** 2 * spectral_norm(np.linalg.inv(Xt))


def theta_from(lmin, nR, g):
    """``(θ1, θ)`` for contraction constant `g`; θ is NaN if the root is complex."""
    theta1 = (1 - g) * lmin + nR
    disc = theta1 ** 2 - 4 * lmin * nR
    if disc < 0 or theta1 <= 0:
        return theta1, np.nan
    return theta1, 2 * lmin / (theta1 + np.sqrt(disc))


def backward_error_theta(Xt, spec, contraction="stated"):
    """Certified bound ``||X~ - X|| <= θ ||R(X~)||`` for an approximate solution.

    Parameters
    ----------
    Xt : array_like
        Approximate solution; positive spectrum required.
    spec : EquationSpec
    contraction : {"stated", "proof"}
        ``"stated"`` uses ``g = ||X~^{-p/2}A||^2 ||X~^{-1}||`` in
        ``θ1 = (1 - g) λ_min(X~) + ||R||``. ``"proof"`` uses ``p g``, the
        constant that actually appears in the self-map estimate; it is valid
        too, and smaller.

    Returns
    -------
    BackwardErrorReport
        Also carries the legacy ``ν* ||R||`` comparison bound.
    """
    _require_p_lt_1(spec.p)
    if contraction not in ("stated", "proof"):
        raise ValueError("contraction must be 'stated' or 'proof'")
    Xt = np.asarray(Xt)
    lmin = lambda_min(Xt)
    if not lmin > 0:
        raise NotPositiveDefiniteError("approximate solution is not positive definite")
    p = spec.p
    nR = spectral_norm(residual(Xt, spec))
    g0 = contraction_constant(Xt, spec.A, p)
    g = p * g0 if contraction == "proof" else g0
    theta1, theta = theta_from(lmin, nR, g)
    applicable = bool(
        g0 < 1 and theta1 > 0 and np.isfinite(theta)
        and nR <= theta1 / 2 * min(1.0, theta1 / (2 * lmin)))
    nu = legacy_nu_star(Xt, spec)
    legacy_ok = bool(np.isfinite(nu))
    return BackwardErrorReport(
        residual_norm=nR,
        theta1=float(theta1),
        theta=float(theta),
        bound=float(theta * nR) if nR > 0 else 0.0,
        legacy_nu=float(nu),
        legacy_nu_bound=float(nu * nR) if nR > 0 else 0.0,
        applicable=applicable,
        legacy_applicable=legacy_ok,
    )


def legacy_nu_star(Xt, spec):
    """``ν* = 2||X~|| ||X~^{-1}|| / (1 - p ||X~^{-p/2} A X~^{-1/2}||^2)``.

    The older bound ``||X~ - X|| <= ν* ||R||``; returns ``inf`` when the
    denominator is not positive.
    """
    _require_p_lt_1(spec.p)
    Xt = np.asarray(Xt)
    p = spec.p
    M = principal_power(Xt, -p / 2) @ spec.A @ principal_power(Xt, -0.5)
    denom = 1 - p * spectral_norm(M) ** 2
    if denom <= 0:
        return np.inf
    return 2 * spectral_norm(Xt) * spectral_norm(np.linalg.inv(Xt)) / denom


def power_difference_bound(X, dX, A, p, nu):
    """Both sides of ``||A^*((X+dX)^{-p} - X^{-p})A|| <= p(||dX|| + ν||dX||^2) ||X^{-p/2}A||^2 ||X^{-1}||``.

    Requires ``X + dX >= (1/ν) I``.
    """
    _require_p_lt_1(p)
    X = np.asarray(X)
    dX = np.asarray(dX)
    A = np.asarray(A)
    if not nu > 0 or lambda_min(X + dX) < 1 / nu * (1 - 1e-12):
        raise NotPositiveDefiniteError("need X + dX >= (1/nu) I > 0")
    lhs = spectral_norm(A.conj().T @ (principal_power(X + dX, -p) - principal_power(X, -p)) @ A)
    ndX = spectral_norm(dX)
    rhs = p * (ndX + nu * ndX ** 2) * contraction_constant(X, A, p)
    return lhs, rhs
