"""Membership, construction, dimension formulas, and perturbations for the
matrix sets {A : S + A S = S'} and their invertible / Hermitian / positive /
invertible-compression refinements.

All six classes are smooth real manifolds; only the membership predicates
and the dimension counts are implemented here (no charts or tangent data).
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .linalg import (
    adjoint,
    hermitian_eig,
    is_hermitian,
    numerical_rank,
    orthonormalize,
)
from .subspaces import Subspace, reach, subspaces_equal


class ManifoldClass(Enum):
    M = "M"
    M_INV = "M_inv"
    M_SYM = "M_sym"
    M_SYMINV = "M_syminv"
    M_POS = "M_pos"
    M_SYMT = "M_symT"

    @classmethod
    def parse(cls, name: str) -> "ManifoldClass":
        for member in cls:
            if member.value == name or member.name == name.upper():
                return member
        raise ValueError(f"unknown manifold class {name!r}")


_SYM_CLASSES = {ManifoldClass.M_SYM, ManifoldClass.M_SYMINV,
                ManifoldClass.M_POS, ManifoldClass.M_SYMT}
_INV_CLASSES = {ManifoldClass.M_INV, ManifoldClass.M_SYMINV}


def _check_nested(s: Subspace, s_prime: Subspace, tol: float = 1e-8) -> tuple[int, int]:
    if s.ambient_dim != s_prime.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    for j in range(s.dim):
        if not s_prime.contains(s.basis[:, j], tol):
            raise ValueError("S is not contained in S'")
    return s.dim, s_prime.dim - s.dim


def membership(
    a: np.ndarray,
    s: Subspace,
    s_prime: Subspace,
    cls: ManifoldClass = ManifoldClass.M,
    tol: float = 1e-8,
) -> bool:
    """Whether S + A S = S' and A satisfies the class predicate.

    Subspace equality is tested as dimension match plus projector distance
    <= tol. Requires S to be contained in S'.
    """
    a = np.asarray(a)
    _check_nested(s, s_prime, tol)
    if not subspaces_equal(reach(a, s), s_prime, tol):
        return False
    if cls in _INV_CLASSES and numerical_rank(a) < a.shape[0]:
        return False
    if cls in _SYM_CLASSES and not is_hermitian(a):
        return False
    if cls is ManifoldClass.M_POS:
        if hermitian_eig(a).lambdas[-1] <= 0:
            return False
    if cls is ManifoldClass.M_SYMT:
        t_block = adjoint(s.basis) @ (a @ s.basis)
        # rank relative to ||A||: a compression that is round-off of the
        # operator scale is singular no matter what its own spectrum says
        if numerical_rank(t_block, scale=float(np.linalg.norm(a, 2))) < s.dim:
            return False
    return True


def swap_witness(s: Subspace, s_prime: Subspace) -> np.ndarray:
    """Hermitian member of the S + A S = S' set built by exchanging the first
    q directions of S with the complement directions of S' and fixing
    everything else. Indefinite when q >= 1 (eigenvalues +-1), the identity
    when q = 0; its compression onto S is singular whenever q >= 1.
    """
    p, q = _check_nested(s, s_prime)
    if q > p:
        raise ValueError(f"q = {q} > p = {p}: the matrix set is empty")
    n = s.ambient_dim
    dtype = complex if np.iscomplexobj(s.basis) or np.iscomplexobj(s_prime.basis) else float
    if q == 0:
        return np.eye(n, dtype=dtype)
    v = s.basis
    inside = s_prime.basis - s.project(s_prime.basis)
    # the S' basis columns are unit vectors, so anything below the round-off
    # floor relative to 1 is not a genuine new direction
    vp = orthonormalize(inside, scale=1.0)
    if vp.shape[1] != q:
        raise ValueError("could not split S' into S plus a q-dimensional complement")
    rest_basis = orthonormalize(np.hstack([v, vp]))
    u_full, _, _ = np.linalg.svd(rest_basis, full_matrices=True)
    vpp = u_full[:, rest_basis.shape[1]:]
    a0 = np.zeros((n, n), dtype=dtype)
    for i in range(q):
        a0 += np.outer(vp[:, i], v[:, i].conj()) + np.outer(v[:, i], vp[:, i].conj())
    for i in range(q, p):
        a0 += np.outer(v[:, i], v[:, i].conj())
    a0 += vpp @ adjoint(vpp)
    return a0


def construct_positive_member(s: Subspace, s_prime: Subspace) -> np.ndarray:
    """A positive Hermitian witness with S + A S = S' (empty set if q > p).

    Diagonal shifts do not change S + A S, so the swap witness plus
    1 + |lambda_min| lands in the positive class; the shift is skipped when
    the witness is already positive (q = 0)."""
    a0 = swap_witness(s, s_prime)
    lam_min = float(hermitian_eig(a0).lambdas[-1])
    shift = 0.0 if lam_min > 0 else 1.0 + abs(lam_min)
    return a0 + shift * np.eye(a0.shape[0], dtype=a0.dtype)


def manifold_dimension(n: int, p: int, q: int, cls: ManifoldClass, field: str = "R") -> int:
    """Real manifold dimension of the matrix set for the given shape.

    The general and invertible classes have dimension alpha*(n^2 - p*(n-p-q));
    the Hermitian-flavored classes alpha*(n*(n-1)/2 - p*(n-p-q)) + n, with
    alpha = 1 over R and 2 over C.
    """
    if not (0 <= q <= p <= n):
        raise ValueError(f"need 0 <= q <= p <= n, got n={n}, p={p}, q={q}")
    if field not in ("R", "C"):
        raise ValueError(f"unknown field {field!r}")
    alpha = 1 if field == "R" else 2
    if cls in (ManifoldClass.M, ManifoldClass.M_INV):
        return alpha * (n * n - p * (n - p - q))
    return alpha * (n * (n - 1) // 2 - p * (n - p - q)) + n


def default_epsilon_schedule(a: np.ndarray, steps: int = 20, ratio: float = 10.0):
    """Geometric perturbation schedule starting at 1e-12 * max(1, ||A||_2)."""
    eps0 = 1e-12 * max(1.0, float(np.linalg.norm(np.asarray(a), 2)))
    return [eps0 * ratio**k for k in range(steps)]


def perturb_to_invertible(
    a: np.ndarray,
    epsilon_schedule=None,
    subspace: Subspace | None = None,
) -> np.ndarray:
    """First A + eps*I along the schedule that is invertible (and, when a
    subspace is supplied, has an invertible compression V* (A + eps I) V).

    eps = 0 is tried first, so an already-valid A comes back unchanged.
    Diagonal shifts leave S + A S untouched, so class membership of the kind
    S + A S = S' survives the perturbation. Raises when the schedule is
    exhausted.
    """
    a = np.asarray(a)
    n = a.shape[0]
    if epsilon_schedule is None:
        epsilon_schedule = default_epsilon_schedule(a)
    for eps in [0.0, *epsilon_schedule]:
        candidate = a if eps == 0.0 else a + eps * np.eye(n, dtype=a.dtype)
        if numerical_rank(candidate) < n:
            continue
        if subspace is not None:
            t_block = adjoint(subspace.basis) @ (candidate @ subspace.basis)
            if numerical_rank(t_block, scale=float(np.linalg.norm(candidate, 2))) < subspace.dim:
                continue
        return candidate
    raise ValueError("perturbation schedule exhausted without reaching invertibility")
