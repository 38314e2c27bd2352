"""Subspace and affine-subspace algebra, Krylov construction, and the index
of invariance.

A subspace of F^n is represented by a semi-unitary basis (n x k, possibly
k = 0 for the zero subspace); an affine subspace by its minimum-norm point
plus a direction subspace, which is the unique normal representation. All
values are immutable after construction and every operation is pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import default_rank_tol, hermitian_eig, orthonormalize

# Eigenvalues closer than this (relative to max(1, ||A||_2)) collapse into
# one eigenspace block.
EIG_CLUSTER_TOL = 1e-8


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of F^n carried by a semi-unitary basis."""

    basis: np.ndarray  # (n, k), columns orthonormal

    def __post_init__(self):
        b = np.asarray(self.basis)
        if b.ndim != 2:
            raise ValueError("basis must be a 2-D array")
        k = b.shape[1]
        if k:
            gram_err = np.linalg.norm(b.conj().T @ b - np.eye(k))
            if gram_err > 1e-8 * max(1, k):
                raise ValueError("basis columns are not orthonormal")

    @classmethod
    def from_vectors(cls, vectors, n: int | None = None) -> "Subspace":
        """Subspace spanned by arbitrary vectors (orthonormalized, in order)."""
        basis = orthonormalize(vectors)
        if basis.shape[0] == 0 and n is not None:
            basis = np.zeros((n, 0))
        return cls(basis)

    @classmethod
    def zero(cls, n: int, complex_field: bool = False) -> "Subspace":
        dtype = complex if complex_field else float
        return cls(np.zeros((n, 0), dtype=dtype))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def project(self, x: np.ndarray) -> np.ndarray:
        return self.basis @ (self.basis.conj().T @ x)

    def contains(self, x: np.ndarray, tol: float = 1e-10) -> bool:
        nrm = np.linalg.norm(x)
        if nrm == 0.0:
            return True
        return np.linalg.norm(x - self.project(x)) <= tol * nrm


def _check_ambient(*spaces: Subspace) -> int:
    dims = {s.ambient_dim for s in spaces}
    if len(dims) != 1:
        raise ValueError(f"ambient dimension mismatch: {sorted(dims)}")
    return dims.pop()


def subspaces_equal(s1: Subspace, s2: Subspace, tol: float = 1e-8) -> bool:
    """Equality as sets: matching dimension and projector distance <= tol."""
    _check_ambient(s1, s2)
    if s1.dim != s2.dim:
        return False
    if s1.dim == 0:
        return True
    return np.linalg.norm(s1.projector() - s2.projector(), 2) <= tol


def subspace_sum(s1: Subspace, s2: Subspace) -> Subspace:
    _check_ambient(s1, s2)
    return Subspace(orthonormalize(np.hstack([s1.basis, s2.basis])))


def orthogonal_complement(s: Subspace) -> Subspace:
    """S^perp, of dimension n - dim S."""
    n, k = s.basis.shape
    if k == 0:
        return Subspace(np.eye(n, dtype=s.basis.dtype))
    u, sv, _ = np.linalg.svd(s.basis, full_matrices=True)
    return Subspace(u[:, k:])


def subspace_intersect(s1: Subspace, s2: Subspace) -> Subspace:
    """S1 cap S2, computed as the complement of the sum of complements."""
    _check_ambient(s1, s2)
    return orthogonal_complement(
        subspace_sum(orthogonal_complement(s1), orthogonal_complement(s2))
    )


def apply_operator(a: np.ndarray, s: Subspace) -> Subspace:
    """The image A*S (may have lower dimension than S)."""
    return Subspace(orthonormalize(a @ s.basis))


def krylov(a: np.ndarray, b: np.ndarray, k: int) -> Subspace:
    """Orthonormal basis of span{b, Ab, ..., A^(k-1) b}.

    Built iteratively: each new direction is A applied to the previous basis
    vector, orthogonalized (twice) against the current basis. Raw power
    stacks [b, Ab, A^2 b, ...] are numerically rank-deficient long before the
    span actually degenerates, so they are never formed. Stops early once the
    next direction falls into the current span (invariance reached), so the
    dimension can be below k. b = 0 yields the zero subspace.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    a = np.asarray(a)
    b = np.asarray(b)
    n = b.shape[0]
    dtype = np.promote_types(np.promote_types(a.dtype, b.dtype), np.float64)
    if np.linalg.norm(b) == 0.0:
        return Subspace.zero(n, complex_field=np.issubdtype(dtype, np.complexfloating))
    drop_tol = default_rank_tol((n, k))
    basis = [b.astype(dtype) / np.linalg.norm(b)]
    for _ in range(k - 1):
        w = a @ basis[-1]
        orig = np.linalg.norm(w)
        if orig == 0.0:
            break
        for _ in range(2):
            for q in basis:
                w = w - q * np.vdot(q, w)
        nrm = np.linalg.norm(w)
        if nrm <= drop_tol * orig:
            break
        basis.append(w / nrm)
    return Subspace(np.column_stack(basis))


def reach(a: np.ndarray, s: Subspace) -> Subspace:
    """S + A S, with the new directions decided relative to ||A S||.

    The projection residual (I - P_S) A V is pure round-off when S is
    invariant, so its columns are dropped against the external scale
    ||A V||_2 rather than against their own (noise-level) norms.
    """
    a = np.asarray(a)
    if a.shape[0] != s.ambient_dim:
        raise ValueError("operator and subspace ambient dimensions differ")
    if s.dim == 0:
        return s
    v = s.basis
    av = a @ v
    scale = float(np.linalg.norm(av, 2))
    if scale == 0.0:
        return s
    residual = av - v @ (v.conj().T @ av)
    extra = orthonormalize(residual, scale=scale)
    if extra.shape[1] == 0:
        return s
    return Subspace(orthonormalize(np.hstack([v, extra])))


def index_of_invariance(a: np.ndarray, s: Subspace) -> int:
    """dim(S + A S) - dim S; zero exactly when S is A-invariant."""
    return reach(a, s).dim - s.dim


def invariant_closure(a: np.ndarray, s: Subspace) -> tuple[list[Subspace], int]:
    """Nested sequence S_0 = S, S_{i+1} = S_i + A S_i up to the first
    invariant member; returns (sequence, j) with index(S_j) = 0."""
    chain = [s]
    current = s
    for _ in range(s.ambient_dim + 1):
        nxt = reach(a, current)
        if nxt.dim == current.dim:
            return chain, len(chain) - 1
        current = nxt
        chain.append(current)
    raise RuntimeError("invariant closure did not terminate")  # unreachable


@dataclass(frozen=True)
class AffineSubspace:
    """Normal representation x0 + S with x0 the minimum-norm point (x0 orthogonal to S)."""

    x0: np.ndarray
    direction: Subspace

    def __post_init__(self):
        if self.x0.shape[0] != self.direction.ambient_dim:
            raise ValueError("x0 and direction ambient dimensions differ")
        overlap = np.linalg.norm(self.direction.basis.conj().T @ self.x0)
        if overlap > 1e-8 * max(1.0, float(np.linalg.norm(self.x0))):
            raise ValueError("x0 is not orthogonal to the direction subspace")

    @property
    def ambient_dim(self) -> int:
        return self.direction.ambient_dim

    @property
    def dim(self) -> int:
        return self.direction.dim

    def contains(self, x: np.ndarray, tol: float = 1e-10) -> bool:
        return self.direction.contains(x - self.x0, tol)


def normal_representation(x0_raw: np.ndarray, direction: Subspace) -> AffineSubspace:
    """Affine subspace x0_raw + direction, re-anchored at its minimum-norm
    point (the component of x0_raw orthogonal to the direction)."""
    x0 = x0_raw - direction.project(x0_raw)
    return AffineSubspace(x0, direction)


@dataclass(frozen=True)
class EigenspaceSplit:
    """Orthogonal decomposition of F^n into eigenspaces of a Hermitian
    operator, one block per distinct eigenvalue, eigenvalues decreasing."""

    blocks: tuple = field(default_factory=tuple)  # of (eigenvalue, basis)

    @property
    def eigenvalues(self) -> list[float]:
        return [lam for lam, _ in self.blocks]

    @property
    def ambient_dim(self) -> int:
        return self.blocks[0][1].shape[0] if self.blocks else 0


def eigenspace_split(a: np.ndarray, cluster_tol: float = EIG_CLUSTER_TOL) -> EigenspaceSplit:
    """Group the spectrum of Hermitian A into distinct eigenvalues and return
    per-eigenvalue orthonormal bases spanning all of F^n.

    Eigenvalues within cluster_tol * max(1, ||A||_2) of each other merge into
    one block (chained along the sorted spectrum).
    """
    eig = hermitian_eig(a)
    lam, u = eig.lambdas, eig.u
    n = lam.size
    scale = max(1.0, float(np.abs(lam[0])) if n else 1.0)
    blocks = []
    start = 0
    for i in range(1, n + 1):
        if i == n or (lam[i - 1] - lam[i]) > cluster_tol * scale:
            blocks.append((float(np.mean(lam[start:i])), u[:, start:i]))
            start = i
    return EigenspaceSplit(tuple(blocks))


def strongly_orthogonal(
    u: np.ndarray, v: np.ndarray, split: EigenspaceSplit, tol: float = 1e-10
) -> bool:
    """Whether the projections of u and v onto every eigenspace block are
    mutually orthogonal (strictly stronger than plain orthogonality)."""
    scale = np.linalg.norm(u) * np.linalg.norm(v)
    if scale == 0.0:
        return True
    for _, q in split.blocks:
        inner = np.vdot(q.conj().T @ u, q.conj().T @ v)
        if np.abs(inner) > tol * scale:
            return False
    return True
