"""Matrix representations of the linearized operators of the equation.

At a solution ``X = U diag(λ) U^*`` both linearizations (the exponential
integral form used for ``p > 1`` and the resolvent integral form used for
``0 < p < 1``) reduce to

    W  ->  W + A^* U (Φ ∘ (U^* W U)) U^* A,   Φ_ij = loewner_kernel(λ_i, λ_j, p),

so one closed form serves both. :func:`quadrature_oracle` evaluates the
original integrals numerically and is kept for validation only.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, roots_jacobi, roots_legendre

from .linalg import (
    Hpd,
    SingularOperatorError,
    hermitian_basis,
    loewner_matrix,
    spectral_norm,
    unvec,
    vec,
    vec_permutation,
)

KINDS = ("V", "L")
# reciprocal-condition threshold below which an assembly is treated as singular
SINGULAR_RCOND = 1e-14


@dataclass(frozen=True)
class OperatorAssembly:
    """Dense representation ``vec(op(W)) = matrix @ vec(W)`` of ``op = I + K``."""

    n: int
    matrix: np.ndarray
    B: np.ndarray
    kind: str
    p: float
    X: Hpd
    A: np.ndarray

    @property
    def K(self):
        return self.matrix - np.eye(self.n * self.n)

    def apply(self, W):
        return unvec(self.matrix @ vec(W), self.n)

    def inverse(self):
        s = np.linalg.svd(self.matrix, compute_uv=False)
        if s[-1] <= SINGULAR_RCOND * s[0]:
            raise SingularOperatorError(
                f"{self.kind}-operator is numerically singular (sigma_min = {s[-1]:.3e})")
        return np.linalg.inv(self.matrix)


def sandwich(X, A, p, W):
    """``A^* U (Φ ∘ (U^* W U)) U^* A`` for one matrix `W`."""
    X = Hpd.of(X)
    U = X.eigenvectors
    Phi = loewner_matrix(X.eigenvalues, p)
    return A.conj().T @ (U @ (Phi * (U.conj().T @ W @ U)) @ U.conj().T) @ A


def build_operator(X, A, p, kind="V"):
    """Assemble the ``n^2 x n^2`` matrix of ``W -> W + A^* Ŵ A``.

    Parameters
    ----------
    X : array_like or Hpd
        Positive definite point of linearization (normally the solution).
    A : array_like
    p : float
    kind : {"V", "L"}
        Label only; ``"V"`` is the ``p > 1`` form and ``"L"`` the
        ``0 < p < 1`` form. The matrices coincide.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    X = Hpd.of(X)
    A = np.asarray(A)
    n = X.n
    U = X.eigenvectors
    Phi = loewner_matrix(X.eigenvalues, p)
    # W -> U (Φ ∘ (U^* W U)) U^* is diagonal in the eigenbasis
    T = np.kron(U.T, U.conj().T)
    G = np.kron(U.conj(), U) @ np.diag(vec(Phi)) @ T
    # vec(A^* M A) = (A^T ⊗ A^*) vec(M)
    K = np.kron(A.T, A.conj().T) @ G
    M = np.eye(n * n) + K
    B = X.power(-p) @ A
    return OperatorAssembly(n, M, B, kind, float(p), X, A)


def _jacobi_01(N, a, b):
    """Gauss-Jacobi rule on [0, 1] for the weight ``(1-u)^a u^b``."""
    x, w = roots_jacobi(N, a, b)
    return (x + 1) / 2, w / 2 ** (a + b + 1)


def quadrature_oracle(X, A, p, kind="V", n_t=64, n_s=256, n_lam=512):
    """Evaluate the operator's defining integral by quadrature.

    V-kind: ``I + (1/Γ(p)) ∫_0^∞ ∫_0^1 (e^{-tsX} A)^T ⊗ (A^* e^{-(1-t)sX}) s^p dt ds``
    with Gauss-Legendre in ``t`` and ``s = c u/(1-u)`` in the outer integral.

    L-kind: ``I + (sin pπ/π) ∫_0^∞ ((λ+X)^{-1}A)^T ⊗ ((λ+X)^{-1}A)^* λ^{-p} dλ``
    with ``λ = c u/(1-u)``.

    The algebraic endpoint factors produced by the substitution (``u^p`` for
    V, ``u^{-p}(1-u)^p`` for L) are absorbed into Gauss-Jacobi weights so the
    fixed node counts reach ~1e-10 accuracy. Intended for ``n <= 4``.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    X = Hpd.of(X)
    A = np.asarray(A, dtype=complex)
    n = X.n
    w, U = X.eigenvalues, X.eigenvectors
    c = float(np.exp(np.mean(np.log(w))))
    Ah = A.conj().T
    acc = np.zeros((n * n, n * n), dtype=complex)

    if kind == "V":
        t, wt = roots_legendre(n_t)
        t, wt = (t + 1) / 2, wt / 2
        u, wu = _jacobi_01(n_s, 0.0, p)
        # s = c u/(1-u); s^p ds = c^(p+1) u^p (1-u)^(-p-2) du
        s = c * u / (1 - u)
        jac = c ** (p + 1) * (1 - u) ** (-p - 2) / gamma(p)
        for sk, jk, wk in zip(s, jac, wu):
            if jk * wk == 0 or not np.isfinite(jk):
                continue
            for tk, wtk in zip(t, wt):
                E1 = (U * np.exp(-tk * sk * w)) @ U.conj().T @ A
                E2 = Ah @ (U * np.exp(-(1 - tk) * sk * w)) @ U.conj().T
                acc += (wk * jk * wtk) * np.kron(E1.T, E2)
    else:
        if not 0 < p < 1:
            raise ValueError("the resolvent integral converges only for 0 < p < 1")
        u, wu = _jacobi_01(n_lam, p, -p)
        # λ^{-p} dλ = c^(1-p) u^{-p} (1-u)^p (1-u)^{-2} du
        lam = c * u / (1 - u)
        jac = c ** (1 - p) * (1 - u) ** -2 * np.sin(p * np.pi) / np.pi
        for lk, jk, wk in zip(lam, jac, wu):
            F = (U / (lk + w)) @ U.conj().T @ A
            acc += (wk * jk) * np.kron(F.T, F.conj().T)
    return np.eye(n * n) + acc


def _real_rep_hermitian(M):
    """Real matrix of a Hermitian-preserving ``vec`` operator in the Hermitian basis."""
    n = int(round(np.sqrt(M.shape[0])))
    Hb = hermitian_basis(n)
    R = Hb.conj().T @ M @ Hb
    return R.real


def inv_operator_norm(assembly):
    """``l = 1 / ||op^{-1}||`` with the norm induced by the Frobenius norm.

    The maximum runs over Hermitian arguments: the inverse is expressed in a
    real orthonormal basis of the Hermitian matrices and its 2-norm taken.
    """
    Minv = assembly.inverse()
    return 1.0 / spectral_norm(_real_rep_hermitian(Minv))


def p_operator_matrix(assembly):
    """Real ``n^2 x 2n^2`` matrix of ``Z -> op^{-1}(B^* Z + Z^* B)``.

    Input coordinates are ``(Re vec Z, Im vec Z)``; output coordinates are
    those of :func:`nlmeq.linalg.hermitian_basis`.
    """
    n = assembly.n
    B = assembly.B
    Minv = assembly.inverse()
    Pi = vec_permutation(n)
    I = np.eye(n)
    # vec(B^* Z) = (I ⊗ B^*) vec Z ; vec(Z^* B) = (B^T ⊗ I) Π conj(vec Z)
    M1 = Minv @ np.kron(I, B.conj().T)
    M2 = Minv @ np.kron(B.T, I) @ Pi
    # real-linear map z = a + ib  ->  M1 z + M2 conj(z)
    Hb = hermitian_basis(n)
    left = Hb.conj().T @ np.hstack([M1 + M2, 1j * (M1 - M2)])
    return left.real


def op_P_norm(assembly):
    """Frobenius-induced norm of ``Z -> op^{-1}(B^* Z + Z^* B)`` over complex `Z`."""
    return spectral_norm(p_operator_matrix(assembly))


def _random_hermitian_unit(rng, n, complex_=True):
    W = rng.standard_normal((n, n))
    if complex_:
        W = W + 1j * rng.standard_normal((n, n))
    W = (W + W.conj().T) / 2
    return W / spectral_norm(W)


def inv_operator_norm_spectral_estimate(assembly, trials=200, seed=0):
    """Estimate of ``1/||op^{-1}||`` for the spectral-norm-induced norm.

    Samples `trials` random Hermitian `W` with ``||W|| = 1``. The sampled
    maximum is a lower bound on the spectral-induced ``||op^{-1}||``, so the
    returned value is an upper estimate of ``l`` in that convention.
    """
    rng = np.random.default_rng(seed)
    Minv = assembly.inverse()
    n = assembly.n
    best = 0.0
    for _ in range(trials):
        W = _random_hermitian_unit(rng, n)
        best = max(best, spectral_norm(unvec(Minv @ vec(W), n)))
    return 1.0 / best


def op_P_norm_spectral_estimate(assembly, trials=200, seed=0):
    """Sampled lower bound of the spectral-induced ``||P||``."""
    rng = np.random.default_rng(seed)
    Minv = assembly.inverse()
    n, B = assembly.n, assembly.B
    best = 0.0
    for _ in range(trials):
        Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        Z /= spectral_norm(Z)
        Y = unvec(Minv @ vec(B.conj().T @ Z + Z.conj().T @ B), n)
        best = max(best, spectral_norm(Y))
    return best
