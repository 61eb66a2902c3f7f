"""Dense complex-Hermitian primitives with an explicit tolerance policy.

Everything here is eigendecomposition based on purpose: the Gram matrices
produced by the kernel pipeline are routinely rank deficient, so the
factorizations must be rank revealing. Tolerances are relative but anchored
at max(1, scale) so that tiny kernels and the zero kernel do not trip
false failures.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonHermitianInput, NotPositiveSemidefinite

HERMITIAN_ATOL = 1e-12


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerance policy threaded through the whole pipeline.

    psd_tol      relative slack for positive-semidefiniteness verdicts
    rank_tol     relative eigenvalue/singular-value cutoff for ranks
    residual_tol bound for linear-system residuals (feasibility verdicts)
    """

    psd_tol: float = 1e-10
    rank_tol: float = 1e-12
    residual_tol: float = 1e-8

    def __post_init__(self):
        for name in ("psd_tol", "rank_tol", "residual_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOL = ToleranceConfig()


def require_hermitian(M, tol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Return the Hermitian part of M; reject inputs that are not
    Hermitian within tol * max(1, largest entry)."""
    M = np.asarray_chkfinite(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NonHermitianInput(f"expected a square matrix, got shape {M.shape}")
    if M.size == 0:
        return M
    dev = np.max(np.abs(M - M.conj().T))
    scale = max(1.0, float(np.max(np.abs(M))))
    if dev > tol * scale:
        raise NonHermitianInput(
            f"matrix deviates from Hermitian symmetry by {dev:.3e} "
            f"(allowed {tol * scale:.3e})"
        )
    return 0.5 * (M + M.conj().T)


def check_psd(M, cfg: ToleranceConfig = DEFAULT_TOL) -> tuple[bool, float]:
    """Spectral PSD test.

    Returns (is_psd, min_eig) where is_psd holds iff
    min_eig >= -psd_tol * max(1, spectral_radius(M)).
    The empty matrix is PSD with min_eig = 0.
    """
    H = require_hermitian(M)
    if H.shape[0] == 0:
        return True, 0.0
    w = np.linalg.eigvalsh(H)
    min_eig = float(w[0])
    radius = float(max(abs(w[0]), abs(w[-1])))
    return min_eig >= -cfg.psd_tol * max(1.0, radius), min_eig


def psd_factor(G, cfg: ToleranceConfig = DEFAULT_TOL) -> tuple[int, np.ndarray]:
    """Rank-revealing factorization G = V^* V of a PSD matrix.

    V has shape (r, n) with mutually orthogonal rows ordered by decreasing
    eigenvalue; r counts the eigenvalues above rank_tol * max_eig.
    Eigenvalues in [-psd_tol * scale, 0) are treated as round-off and
    clamped; anything lower raises NotPositiveSemidefinite.
    """
    H = require_hermitian(G)
    n = H.shape[0]
    if n == 0:
        return 0, np.zeros((0, 0), dtype=complex)
    w, U = np.linalg.eigh(H)
    radius = float(max(abs(w[0]), abs(w[-1]))) if n else 0.0
    if w[0] < -cfg.psd_tol * max(1.0, radius):
        raise NotPositiveSemidefinite(
            f"eigenvalue {w[0]:.3e} below -psd_tol * scale "
            f"({-cfg.psd_tol * max(1.0, radius):.3e})"
        )
    w = np.clip(w, 0.0, None)
    cutoff = cfg.rank_tol * float(w[-1]) if n else 0.0
    keep = np.where(w > cutoff)[0][::-1]  # descending eigenvalue order
    r = len(keep)
    V = (np.sqrt(w[keep])[:, None]) * U[:, keep].conj().T
    return r, V


def psd_sqrt(M, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Hermitian square root of a PSD matrix, round-off negatives clamped."""
    H = require_hermitian(M)
    if H.shape[0] == 0:
        return H
    w, U = np.linalg.eigh(H)
    radius = float(max(abs(w[0]), abs(w[-1])))
    if w[0] < -cfg.psd_tol * max(1.0, radius):
        raise NotPositiveSemidefinite(
            f"eigenvalue {w[0]:.3e} too negative for a square root"
        )
    w = np.clip(w, 0.0, None)
    R = (U * np.sqrt(w)) @ U.conj().T
    return 0.5 * (R + R.conj().T)


def gram_solve(
    G, t, cfg: ToleranceConfig = DEFAULT_TOL
) -> tuple[np.ndarray, float]:
    """Minimal-norm least-squares solution of G c = t for PSD G.

    Uses the eigendecomposition pseudo-inverse with the rank_tol cutoff.
    Returns (c, residual) with residual = ||G c - t||; infeasibility is
    signaled through the residual, never as an error. t may be a vector
    or a matrix of stacked right-hand sides.
    """
    H = require_hermitian(G)
    t = np.asarray(t, dtype=complex)
    if H.shape[0] == 0:
        return np.zeros_like(t), 0.0
    w, U = np.linalg.eigh(H)
    cutoff = cfg.rank_tol * float(w[-1]) if w[-1] > 0 else np.inf
    keep = w > cutoff
    Uk = U[:, keep]
    c = Uk @ ((Uk.conj().T @ t).T / w[keep]).T
    residual = float(np.linalg.norm(H @ c - t))
    return c, residual


def pinv_solve_right(
    C, D, cfg: ToleranceConfig = DEFAULT_TOL
) -> tuple[np.ndarray, float]:
    """Minimal-Frobenius-norm X with X C = D (least squares), via SVD.

    The minimal-norm solution annihilates the orthocomplement of the
    column range of C, which is exactly the projection behavior the
    compressed shifts and boundary operators need. Returns (X, residual)
    with residual = ||X C - D||_F.
    """
    C = np.asarray(C, dtype=complex)
    D = np.asarray(D, dtype=complex)
    if C.shape[1] == 0 or C.shape[0] == 0:
        X = np.zeros((D.shape[0], C.shape[0]), dtype=complex)
        return X, float(np.linalg.norm(X @ C - D))
    U, s, Vh = np.linalg.svd(C, full_matrices=False)
    keep = s > cfg.rank_tol * s[0] if s.size and s[0] > 0 else np.zeros_like(s, bool)
    Uk, sk, Vhk = U[:, keep], s[keep], Vh[keep]
    # X = D C^+ with C^+ = V S^-1 U^*
    X = (D @ Vhk.conj().T / sk) @ Uk.conj().T
    residual = float(np.linalg.norm(X @ C - D))
    return X, residual


def orthonormal_range(A, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the column range of A at the rank_tol cutoff."""
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    r = int(np.count_nonzero(s > cfg.rank_tol * s[0]))
    return U[:, :r]
