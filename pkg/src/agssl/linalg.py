"""Dense symmetric linear algebra underneath the sampling loop.

Singularity is a first-class outcome, not an error condition: the sampling
objective is defined as +infinity on singular precision matrices, so the
factorization must detect near-singularity deterministically and cheaply.
All tolerances live in one NumericPolicy record.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular


@dataclass(frozen=True)
class NumericPolicy:
    """Every tolerance used by validation and factorization, in one place."""

    # |M - M^T| tolerance for symmetry validation
    symmetry_atol: float = 1e-10
    # largest allowed positive off-diagonal entry in a Stieltjes matrix
    offdiag_tol: float = 1e-12
    # eigenvalue tolerances, relative to the largest eigenvalue
    psd_rtol: float = 1e-8
    # Cholesky pivot <= singular_pivot_rtol * max(diag) means singular
    singular_pivot_rtol: float = 1e-12
    # relative mismatch allowed between rank-one updates and direct inverses
    update_match_rtol: float = 1e-8
    # most negative entry tolerated in an inverse that should be >= 0
    positivity_floor: float = -1e-10


DEFAULT_POLICY = NumericPolicy()


class SingularMatrixError(ArithmeticError):
    """Cholesky breakdown, carrying the pivot that failed."""

    def __init__(self, pivot_index: int, pivot_value: float):
        super().__init__(
            f"matrix is singular to working precision: pivot {pivot_index} "
            f"is {pivot_value:g}")
        self.pivot_index = pivot_index
        self.pivot_value = pivot_value


def cholesky_factor(m: np.ndarray,
                    policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Lower-triangular L with L L^T = m, or SingularMatrixError.

    Outer-product form with a scale-aware breakdown test: a pivot at or
    below singular_pivot_rtol times the largest original diagonal entry is
    treated as zero. The failing pivot index is preserved on the error so
    callers can report which node made the precision matrix defective.
    """
    a = np.array(m, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    threshold = policy.singular_pivot_rtol * max(float(np.max(np.diag(a))), 0.0)
    L = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j]
        if not pivot > threshold:
            raise SingularMatrixError(j, float(pivot))
        root = math.sqrt(pivot)
        L[j, j] = root
        col = a[j + 1:, j] / root
        L[j + 1:, j] = col
        a[j + 1:, j + 1:] -= np.outer(col, col)
    return L


def cholesky_solve(m: np.ndarray, rhs: np.ndarray,
                   policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Solve m x = rhs for symmetric positive definite m."""
    L = cholesky_factor(m, policy)
    y = solve_triangular(L, rhs, lower=True)
    return solve_triangular(L.T, y, lower=False)


def invert_pd(m: np.ndarray,
              policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Full inverse of a symmetric positive definite matrix, symmetrized."""
    x = cholesky_solve(m, np.eye(m.shape[0]), policy)
    return 0.5 * (x + x.T)


def trace_inverse(m: np.ndarray,
                  policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """tr(m^{-1}) for symmetric PSD m, +infinity when m is singular.

    Computed as the squared Frobenius norm of L^{-1}: for m = L L^T,
    tr(m^{-1}) = ||L^{-1}||_F^2, one triangular solve instead of a full
    inverse.
    """
    try:
        L = cholesky_factor(m, policy)
    except SingularMatrixError:
        return math.inf
    linv = solve_triangular(L, np.eye(L.shape[0]), lower=True)
    return float(np.sum(linv * linv))


def rank_one_inverse_update(sigma: np.ndarray, c_v: np.ndarray,
                            noise_var: float) -> np.ndarray:
    """Inverse after adding c_v^T c_v / noise_var to the precision.

    Given sigma = Omega^{-1}, returns (Omega + c_v^T c_v / noise_var)^{-1}
    via the Sherman-Morrison identity:

        sigma - (sigma c_v^T c_v sigma) / (noise_var + c_v sigma c_v^T)

    O(n^2); this is what makes greedy selection cheap after the first pick.
    """
    if not noise_var > 0:
        raise ValueError(f"noise_var must be positive, got {noise_var}")
    c = np.asarray(c_v, dtype=float).reshape(-1)
    w = sigma @ c
    denom = noise_var + float(c @ w)
    # PD sigma and positive noise keep this strictly positive
    assert denom > 0.0, f"rank-one denominator {denom:g} is not positive"
    return sigma - np.outer(w, w) / denom


@dataclass(frozen=True)
class StieltjesReport:
    """Outcome of the Stieltjes-matrix membership test."""

    is_symmetric: bool
    max_offdiag: float
    min_eigenvalue: float
    nullity: int
    verdict: bool


def check_stieltjes(m: np.ndarray, tol: float = 1e-10) -> StieltjesReport:
    """Test symmetry, non-positive off-diagonals, and positive semidefiniteness.

    The verdict is the conjunction of those three conditions; the nullspace
    dimension is reported alongside but is not part of membership (a
    disconnected Laplacian is still Stieltjes). Eigenvalues are computed on
    the symmetrized matrix. Validation path only: the sampler itself never
    needs an eigendecomposition.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    is_symmetric = bool(np.allclose(m, m.T, rtol=0.0, atol=tol))
    off = m - np.diag(np.diag(m))
    max_offdiag = float(off.max(initial=0.0))
    w = np.linalg.eigvalsh(0.5 * (m + m.T))
    w_max = max(float(w[-1]), 0.0)
    min_eigenvalue = float(w[0])
    nullity = int(np.count_nonzero(np.abs(w) <= tol * w_max))
    verdict = (is_symmetric
               and max_offdiag <= tol
               and min_eigenvalue >= -tol * max(w_max, 1.0))
    return StieltjesReport(is_symmetric=is_symmetric,
                           max_offdiag=max_offdiag,
                           min_eigenvalue=min_eigenvalue,
                           nullity=nullity,
                           verdict=verdict)
