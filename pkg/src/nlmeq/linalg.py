"""Dense Hermitian matrix primitives.

Everything downstream works with plain ``numpy`` arrays. Matrices are
vectorized column by column (``vec``), so that

    vec(A @ X @ B) == kron(B.T, A) @ vec(X)

holds for every conforming triple.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

HERMITIAN_RTOL = 1e-12
# relative eigenvalue gap below which the confluent limit replaces the
# difference quotient in divided differences
CONFLUENT_RTOL = 1e-8


class NotPositiveDefiniteError(ValueError):
    """Raised when an operand must be positive definite but is not."""


class SingularOperatorError(np.linalg.LinAlgError):
    """Raised when a linear operator is numerically singular."""


class RegimeError(ValueError):
    """Raised when a routine is called outside its exponent regime."""


def _square(M, name="matrix"):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} has non-finite entries")
    return M


def is_hermitian(M, rtol=HERMITIAN_RTOL):
    M = np.asarray(M)
    scale = max(1.0, np.linalg.norm(M, 2))
    return np.linalg.norm(M - M.conj().T, 2) <= rtol * scale


def hermitian_part(M):
    """Return ``(M + M^*) / 2``."""
    M = _square(M)
    return (M + M.conj().T) / 2


def as_hermitian(M, rtol=HERMITIAN_RTOL, name="matrix"):
    """Validate that `M` is Hermitian within tolerance and symmetrize it."""
    M = _square(M, name)
    if not is_hermitian(M, rtol):
        raise ValueError(f"{name} is not Hermitian")
    return (M + M.conj().T) / 2


def eigh(M):
    """Eigendecomposition of a Hermitian matrix.

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    U : ndarray
        Unitary matrix whose columns are the eigenvectors, ``M = U diag(w) U^*``.
    """
    M = hermitian_part(M)
    try:
        w, U = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"Hermitian eigensolver failed: {exc}") from exc
    return w, U


@dataclass(frozen=True)
class Hpd:
    """A Hermitian positive definite matrix with its eigendecomposition.

    Build instances with :meth:`Hpd.of`; the constructor does not validate.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def of(cls, M):
        if isinstance(M, Hpd):
            return M
        M = hermitian_part(M)
        w, U = eigh(M)
        if not w[0] > 0:
            raise NotPositiveDefiniteError(
                f"matrix is not positive definite (lambda_min = {w[0]:.3e})")
        return cls(M, w, U)

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def lambda_min(self):
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self):
        return float(self.eigenvalues[-1])

    def apply(self, f):
        """Return ``U diag(f(w)) U^*``."""
        U = self.eigenvectors
        return hermitian_part((U * f(self.eigenvalues)) @ U.conj().T)

    def power(self, r):
        return self.apply(lambda w: w ** r)


def fractional_power(X, r):
    """``X**r`` for Hermitian positive definite `X` and any real `r`."""
    return Hpd.of(X).power(r)


def principal_power(X, r):
    """Principal real power of a matrix with positive real spectrum.

    Hermitian input goes through the eigendecomposition; anything else falls
    back to :func:`scipy.linalg.fractional_matrix_power`. The non-Hermitian
    path only exists to replay computations on data that is not exactly
    symmetric.
    """
    X = _square(X)
    if is_hermitian(X):
        return fractional_power(X, r)
    Y = sla.fractional_matrix_power(X, r)
    if np.isrealobj(X):
        Y = Y.real
    return Y


def lambda_min(X):
    """Smallest eigenvalue (smallest real part for non-Hermitian input)."""
    X = _square(X)
    if is_hermitian(X):
        return float(np.linalg.eigvalsh(hermitian_part(X))[0])
    return float(np.min(np.linalg.eigvals(X).real))


def divided_difference_power(a, b, r, confluent_rtol=CONFLUENT_RTOL):
    """First divided difference of ``t -> t**r`` at positive points.

    Vectorized over broadcastable `a`, `b`. Nearly coincident points use the
    derivative ``r * a**(r-1)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a <= 0) or np.any(b <= 0):
        raise ValueError("divided differences need positive arguments")
    a, b = np.broadcast_arrays(a, b)
    close = np.abs(a - b) <= confluent_rtol * np.maximum(a, b)
    mid = (a + b) / 2
    out = np.empty(a.shape)
    out[close] = r * mid[close] ** (r - 1)
    far = ~close
    out[far] = (a[far] ** r - b[far] ** r) / (a[far] - b[far])
    return out if out.ndim else float(out)


def loewner_kernel(a, b, p):
    """Kernel ``(a**-p - b**-p) / (b - a)``, with limit ``p * a**(-p-1)``.

    This is minus the divided difference of ``t -> t**-p``; it is strictly
    positive for ``a, b, p > 0``.

    >>> loewner_kernel(1.0, 4.0, 1.0)
    0.25
    """
    if np.any(np.asarray(p) <= 0):
        raise ValueError("p must be positive")
    return -divided_difference_power(a, b, -p)


def loewner_matrix(w, p):
    """Matrix ``[loewner_kernel(w_i, w_j, p)]`` for eigenvalues `w`."""
    w = np.asarray(w, dtype=float)
    return loewner_kernel(w[:, None], w[None, :], p)


def frechet_fractional_power(X, H, r):
    """Directional derivative of ``X -> X**r`` at HPD `X` along Hermitian `H`.

    Daleckii-Krein formula: ``U (D ∘ (U^* H U)) U^*`` with ``D`` the matrix
    of divided differences of ``t**r`` at the eigenvalues of `X`.
    """
    X = Hpd.of(X)
    w, U = X.eigenvalues, X.eigenvectors
    D = divided_difference_power(w[:, None], w[None, :], r)
    return U @ (D * (U.conj().T @ H @ U)) @ U.conj().T


def vec(M):
    """Stack the columns of `M` into one vector."""
    return np.asarray(M).reshape(-1, order="F")


def unvec(v, n=None):
    v = np.asarray(v)
    if n is None:
        n = int(round(np.sqrt(v.size)))
    if n * n != v.size:
        raise ValueError(f"cannot reshape vector of length {v.size} to {n}x{n}")
    return v.reshape(n, n, order="F")


def kron(A, B):
    return np.kron(np.asarray(A), np.asarray(B))


def vec_permutation(n):
    """Permutation matrix ``P`` with ``P @ vec(E) == vec(E.T)``."""
    if n < 1:
        raise ValueError("n must be positive")
    idx = np.arange(n * n).reshape(n, n, order="F")
    P = np.zeros((n * n, n * n))
    # vec(E.T)[k] = E.T.flat_F[k] = vec(E)[idx.T.flat_F[k]]
    P[np.arange(n * n), vec(idx.T)] = 1.0
    return P


def hermitian_basis(n):
    """Real-orthonormal basis of the Hermitian ``n x n`` matrices.

    Returns an ``(n*n, n*n)`` complex array whose columns are ``vec`` of
    the basis elements: diagonal units, symmetric pairs ``(E_ij + E_ji)/√2``
    and imaginary antisymmetric pairs ``i(E_ij - E_ji)/√2``.
    """
    cols = []
    s = 1 / np.sqrt(2)
    for i in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[i, i] = 1
        cols.append(vec(E))
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = E[j, i] = s
            cols.append(vec(E))
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = 1j * s
            E[j, i] = -1j * s
            cols.append(vec(E))
    return np.array(cols).T


def spectral_norm(M):
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def norms(M):
    """Spectral norm, Frobenius norm and extreme eigenvalues of Hermitian `M`.

    Returns
    -------
    dict with keys ``spectral``, ``frobenius``, ``lambda_min``, ``lambda_max``.
    """
    M = _square(M)
    w = np.linalg.eigvalsh(hermitian_part(M))
    return {
        "spectral": spectral_norm(M),
        "frobenius": float(np.linalg.norm(M, "fro")),
        "lambda_min": float(w[0]),
        "lambda_max": float(w[-1]),
    }
