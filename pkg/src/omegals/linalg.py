"""Field-generic dense linear-algebra kernels.

Every routine works over R or C; the field is carried by the dtype
(``complex128`` vs ``float64``) so conjugation degrades to a no-op for real
input. All functions are pure and never mutate their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS = np.finfo(np.float64).eps

# Relative Frobenius tolerance below which a matrix counts as Hermitian.
HERMITIAN_TOL = 1e-10


def field_of(a: np.ndarray) -> str:
    """Return "C" for complex-typed arrays, "R" otherwise."""
    return "C" if np.iscomplexobj(a) else "R"


def adjoint(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def hermitian_part(m: np.ndarray) -> np.ndarray:
    """(M + M*)/2; suppresses round-off drift before eigendecompositions."""
    return 0.5 * (m + m.conj().T)


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = np.linalg.norm(m)
    if scale == 0.0:
        return True
    return np.linalg.norm(m - m.conj().T) <= tol * scale


def default_rank_tol(shape: tuple[int, int]) -> float:
    """Default relative threshold for rank decisions: max(rows, cols)*eps*32."""
    return max(shape) * EPS * 32 if len(shape) else EPS * 32


@dataclass(frozen=True)
class EigDecomposition:
    """Spectral factorization M = U diag(lambdas) U* with lambdas descending."""

    u: np.ndarray
    lambdas: np.ndarray

    @property
    def dim(self) -> int:
        return self.u.shape[0]

    def shifted(self, omega: float) -> "EigDecomposition":
        """Eigendecomposition of M + omega*I (same eigenvectors)."""
        return EigDecomposition(self.u, self.lambdas + omega)

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.lambdas) @ self.u.conj().T


def hermitian_eig(m: np.ndarray, tol: float = HERMITIAN_TOL) -> EigDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.

    Raises ValueError for non-square input or when the Hermitian check fails
    beyond ``tol`` (relative Frobenius). The input is symmetrized before the
    factorization so that round-off drift cannot leak into the eigenvectors.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    lam, u = np.linalg.eigh(hermitian_part(m))
    return EigDecomposition(u[:, ::-1], lam[::-1])


def orthonormalize(vectors, drop_tol: float | None = None,
                   scale: float | None = None) -> np.ndarray:
    """Orthonormal basis for the span of the given vectors, kept in order.

    Accepts a sequence of n-vectors or an (n, k) array whose columns are the
    vectors. Runs modified Gram-Schmidt with one full re-orthogonalization
    pass (twice is enough to hold ||Q*Q - I|| near machine precision), and
    drops columns whose residual falls below ``drop_tol`` times their original
    norm, so the result is rank-revealing. Empty input yields a 0-column
    basis.

    ``scale`` marks the columns as residuals of some larger computation:
    columns whose norm is below ``drop_tol * scale`` are then treated as pure
    round-off and dropped outright (per-column relative tests cannot see
    that).
    """
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        cols = vectors
    else:
        vecs = list(vectors)
        if not vecs:
            return np.zeros((0, 0))
        cols = np.column_stack([np.asarray(v) for v in vecs])
    n, k = cols.shape
    if drop_tol is None:
        drop_tol = default_rank_tol((n, max(k, 1)))
    kept: list[np.ndarray] = []
    for j in range(k):
        v = cols[:, j].astype(np.promote_types(cols.dtype, np.float64))
        orig = np.linalg.norm(v)
        if orig == 0.0 or (scale is not None and orig <= drop_tol * scale):
            continue
        for _ in range(2):
            for q in kept:
                v = v - q * np.vdot(q, v)
        nrm = np.linalg.norm(v)
        floor = drop_tol * (max(orig, scale) if scale is not None else orig)
        if nrm > floor:
            kept.append(v / nrm)
    if not kept:
        return np.zeros((n, 0), dtype=np.promote_types(cols.dtype, np.float64))
    return np.column_stack(kept)


def svd(m: np.ndarray):
    """Thin SVD (u, s, vh) with s descending, m ~= u @ diag(s) @ vh."""
    return np.linalg.svd(np.asarray(m), full_matrices=False)


def numerical_rank(m: np.ndarray, tol_rel: float | None = None,
                   scale: float | None = None) -> int:
    """Number of singular values above tol_rel * sigma_1 (0 for a zero matrix).

    Ties at the threshold are excluded, i.e. decided toward the smaller rank.
    ``scale`` replaces sigma_1 as the reference, for blocks extracted from a
    larger computation whose own leading singular value may be round-off.
    """
    m = np.asarray(m)
    if m.size == 0:
        return 0
    if tol_rel is None:
        tol_rel = default_rank_tol(m.shape)
    if tol_rel <= 0:
        raise ValueError("tol_rel must be positive")
    s = np.linalg.svd(m, compute_uv=False)
    reference = scale if scale is not None else (s[0] if s.size else 0.0)
    if s.size == 0 or reference == 0.0:
        return 0
    return int(np.count_nonzero(s > tol_rel * reference))


def matrix_power_pos(m: np.ndarray, s: float, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Real power M^s of a positive-definite Hermitian matrix.

    Computed through the spectral decomposition U diag(lambda^s) U*. Raises
    ValueError when a non-positive eigenvalue is detected. s = 0 returns the
    identity exactly and s = 1 returns (the Hermitian part of) M itself.
    """
    m = np.asarray(m)
    eig = hermitian_eig(m, tol)
    lam_max = float(np.max(np.abs(eig.lambdas))) if eig.lambdas.size else 0.0
    if eig.lambdas.size and eig.lambdas[-1] <= eig.dim * EPS * lam_max:
        raise ValueError("matrix is not positive definite (non-positive eigenvalue)")
    if s == 0:
        return np.eye(m.shape[0], dtype=m.dtype)
    if s == 1:
        return hermitian_part(m)
    powered = (eig.u * eig.lambdas**s) @ eig.u.conj().T
    return hermitian_part(powered)


def solve_hermitian(m, rhs: np.ndarray, cond_tol: float | None = None) -> np.ndarray:
    """Solve M x = rhs for Hermitian invertible M (vector or matrix rhs).

    ``m`` may be a matrix or a precomputed :class:`EigDecomposition`; the
    solve runs through the spectral factorization either way, which keeps the
    singularity test honest: the call fails when the smallest \\|eigenvalue\\|
    drops below ``cond_tol`` times the largest.
    """
    eig = m if isinstance(m, EigDecomposition) else hermitian_eig(np.asarray(m))
    lam = eig.lambdas
    if cond_tol is None:
        cond_tol = default_rank_tol((eig.dim, eig.dim))
    lam_max = float(np.max(np.abs(lam))) if lam.size else 0.0
    if lam.size == 0:
        return np.zeros_like(np.asarray(rhs))
    if np.min(np.abs(lam)) <= cond_tol * lam_max:
        raise np.linalg.LinAlgError("matrix is singular to working precision")
    rhs = np.asarray(rhs)
    y = eig.u.conj().T @ rhs
    y = y / lam if rhs.ndim == 1 else y / lam[:, None]
    return eig.u @ y
