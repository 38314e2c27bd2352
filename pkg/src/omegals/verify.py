"""Randomized verification suites.

Each suite draws seeded random instances, runs the relevant identity or
bound checks at fixed tolerances, and reports per-check failures. The CLI
``verify`` subcommand and the acceptance tests both run through these.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analysis import (
    convexity_coordinates,
    difference_subspace,
    membership_residual,
)
from .decomposition import nullspace_of_hstar, tridiagonal_block_decomposition
from .linalg import adjoint, hermitian_part, numerical_rank, orthonormalize, solve_hermitian
from .manifolds import (
    ManifoldClass,
    construct_positive_member,
    membership,
    perturb_to_invertible,
    swap_witness,
)
from .sampling import (
    gaussian_matrix,
    gaussian_vector,
    random_hermitian,
    random_hermitian_invertible,
    random_nested_subspaces,
    random_omega,
    random_spd,
    random_subspace,
    random_unitary,
)
from .solver import ProblemInstance, solve_limit, solve_weighted
from .subspaces import (
    Subspace,
    apply_operator,
    index_of_invariance,
    krylov,
    orthogonal_complement,
    subspace_intersect,
    subspace_sum,
    subspaces_equal,
)

MEMBERSHIP_TOL = 1e-10
RESIDUAL_TOL = 1e-10
CONVEXITY_T_SLACK = 1e-10
CONVEXITY_OFF_TOL = 1e-9


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, message: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(message)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"[{self.name}] {status}: {self.checks} checks over {self.trials} trials"
        if self.failures:
            line += f", {len(self.failures)} failures"
        return line


def run_index_suite(seed: int = 0, trials: int = 500) -> SuiteResult:
    """Shift/inverse/Hermitian-complement equalities and the three
    subadditivity inequalities, as exact integer comparisons."""
    result = SuiteResult("index")
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        result.trials += 1
        complex_field = bool(trial % 2)
        n = int(rng.integers(3, 11))
        p = int(rng.integers(1, n))
        s = random_subspace(rng, n, p, complex_field)
        a = gaussian_matrix(rng, n, n, complex_field)
        while np.linalg.cond(a) > 1e6:
            a = gaussian_matrix(rng, n, n, complex_field)
        q = index_of_invariance(a, s)
        result.check(0 <= q <= min(p, n - p), f"trial {trial}: index bound violated (q={q})")

        omega = float(rng.standard_normal())
        shift = omega if not complex_field else omega + 1j * float(rng.standard_normal())
        q_shift = index_of_invariance(a + shift * np.eye(n), s)
        result.check(q_shift == q, f"trial {trial}: shift changed the index {q}->{q_shift}")

        q_inv = index_of_invariance(np.linalg.inv(a), s)
        result.check(q_inv == q, f"trial {trial}: inverse changed the index {q}->{q_inv}")

        a_h = random_hermitian(rng, n, complex_field)
        q_h = index_of_invariance(a_h, s)
        s_perp = orthogonal_complement(s)
        q_perp = index_of_invariance(a_h, s_perp)
        result.check(q_perp == q_h,
                     f"trial {trial}: Hermitian complement index {q_h}->{q_perp}")
        s_between = subspace_intersect(s_perp, subspace_sum(s, apply_operator(a_h, s)))
        result.check(s_between.dim == q_h,
                     f"trial {trial}: complement-in-sum dimension {s_between.dim} != {q_h}")
        q_between = index_of_invariance(a_h, s_between)
        result.check(q_between == q_h,
                     f"trial {trial}: index of S-perp cap (S+AS) is {q_between} != {q_h}")

        p2 = int(rng.integers(1, n))
        s2 = random_subspace(rng, n, p2, complex_field)
        b_op = gaussian_matrix(rng, n, n, complex_field)
        q_s2 = index_of_invariance(a, s2)
        result.check(
            index_of_invariance(a, subspace_sum(s, s2)) <= q + q_s2,
            f"trial {trial}: subadditivity in the subspace argument failed")
        q_b = index_of_invariance(b_op, s)
        result.check(index_of_invariance(a + b_op, s) <= q + q_b,
                     f"trial {trial}: subadditivity under sums failed")
        result.check(index_of_invariance(a @ b_op, s) <= q + q_b,
                     f"trial {trial}: subadditivity under products failed")
    return result


def run_main_theorem_suite(seed: int = 0, trials: int = 200) -> SuiteResult:
    """Solution differences stay in the q-dimensional difference subspace
    (relative residual <= 1e-10) and that subspace has dimension exactly q."""
    result = SuiteResult("main-theorem")
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        result.trials += 1
        complex_field = bool(trial % 2)
        n = int(rng.integers(4, 41))
        p = int(rng.integers(1, n))
        a = random_hermitian_invertible(rng, n, complex_field)
        s = random_subspace(rng, n, p, complex_field)
        dec = tridiagonal_block_decomposition(a, s)
        diff_space = difference_subspace(dec)
        result.check(diff_space.basis.dim == dec.q,
                     f"trial {trial}: difference subspace dim {diff_space.basis.dim} != q={dec.q}")
        b = gaussian_vector(rng, n, complex_field)
        inst = ProblemInstance.create(a, s, b)
        omega = random_omega(rng, inst.omega_min)
        mu = random_omega(rng, inst.omega_min)
        while abs(mu - omega) < 0.25:
            mu = random_omega(rng, inst.omega_min)
        diff = solve_weighted(inst, omega) - solve_weighted(inst, mu)
        if dec.q == 0:
            scale = max(1.0, float(np.linalg.norm(solve_weighted(inst, omega))))
            result.check(np.linalg.norm(diff) <= MEMBERSHIP_TOL * scale,
                         f"trial {trial}: invariant case produced a nonzero difference")
        else:
            res = membership_residual(diff, diff_space.basis)
            result.check(res <= MEMBERSHIP_TOL,
                         f"trial {trial}: membership residual {res:.3e} > {MEMBERSHIP_TOL}")
    return result


def run_convexity_suite(seed: int = 0, trials: int = 50, grid_points: int = 50) -> SuiteResult:
    """Endpoint identities and convex-combination coordinates for positive
    operators over Krylov constraints with index 1.

    Off-segment residuals are measured relative to the segment length, so the
    sampler rejects right-hand sides whose Krylov family has numerically
    converged (endpoint separation below 1e-3 of the solution scale): there
    the segment direction itself is round-off and the relative measure is
    meaningless.
    """
    result = SuiteResult("convexity")
    rng = np.random.default_rng(seed)
    grid = np.logspace(-3, 3, grid_points)
    for trial in range(trials):
        result.trials += 1
        inst = None
        for _ in range(12):
            n = int(rng.integers(6, 25))
            # a wide spectrum keeps the Krylov family from converging within
            # the sampled orders, so the segment stays well separated
            a = random_spd(rng, n, lo=0.3, hi=30.0)
            k = int(rng.integers(2, min(7, n - 1)))
            b = rng.standard_normal(n)
            s = krylov(a, b, k)
            if index_of_invariance(a, s) != 1:
                continue
            candidate = ProblemInstance.create(a, s, b)
            separation = np.linalg.norm(solve_limit(candidate)
                                        - solve_weighted(candidate, 0.0))
            if separation >= 1e-4 * max(1.0, float(np.linalg.norm(b))):
                inst = candidate
                break
        if inst is None:
            result.check(False, f"trial {trial}: no usable instance after 12 draws")
            continue
        a = inst.a
        s = inst.constraint.direction
        v = s.basis
        x_zero = solve_weighted(inst, 0.0)
        y_gal = solve_hermitian(hermitian_part(adjoint(v) @ (a @ v)), adjoint(v) @ inst.b)
        x_gal = v @ y_gal
        scale = max(1.0, float(np.linalg.norm(x_gal)))
        result.check(np.linalg.norm(x_zero - x_gal) <= RESIDUAL_TOL * scale,
                     f"trial {trial}: zero-shift solution differs from the Galerkin oracle")
        x_inf = solve_limit(inst)
        y_ls, *_ = np.linalg.lstsq(a @ v, inst.b, rcond=None)
        x_ls = v @ y_ls
        result.check(np.linalg.norm(x_inf - x_ls) <= RESIDUAL_TOL * max(1.0, np.linalg.norm(x_ls)),
                     f"trial {trial}: limit solution differs from the least-squares oracle")
        conv = convexity_coordinates(inst, grid)
        result.check(
            bool(np.all(conv.ts >= -CONVEXITY_T_SLACK) and np.all(conv.ts <= 1 + CONVEXITY_T_SLACK)),
            f"trial {trial}: segment coordinate out of [0, 1] "
            f"(min {conv.ts.min():.3e}, max {conv.ts.max():.3e})")
        result.check(bool(np.all(conv.off_residuals <= CONVEXITY_OFF_TOL)),
                     f"trial {trial}: off-segment residual up to {conv.off_residuals.max():.3e}")
    return result


def _nullspace_identities(result: SuiteResult, dec, label: str) -> None:
    ns = nullspace_of_hstar(dec)
    hstar = np.hstack([dec.T, adjoint(dec.B)])
    scale = max(1.0, float(np.linalg.norm(hstar)))
    result.check(np.linalg.norm(hstar @ ns.N) <= RESIDUAL_TOL * scale,
                 f"{label}: H* N residual too large")
    result.check(numerical_rank(ns.N) == dec.q, f"{label}: rank(N) != q")
    result.check(numerical_rank(ns.N1) == dec.q, f"{label}: rank(N1) != q")
    bbstar = hermitian_part(dec.B @ adjoint(dec.B))
    predicted_n2 = -solve_hermitian(bbstar, dec.B @ (dec.T @ ns.N1))
    result.check(np.linalg.norm(ns.N2 - predicted_n2) <= RESIDUAL_TOL * max(1.0, np.linalg.norm(ns.N2)),
                 f"{label}: N2 != -(BB*)^-1 B T N1")


def run_nullspace_suite(seed: int = 0, trials: int = 60) -> SuiteResult:
    """Nullspace identities of the stacked block plus the three structural
    special cases (invertible T; square invertible B*; disjoint images)."""
    result = SuiteResult("nullspace")
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        result.trials += 1
        complex_field = bool(trial % 2)

        # Generic instance; T comes out invertible almost surely.
        n = int(rng.integers(5, 15))
        p = int(rng.integers(1, n - 1))
        a = random_hermitian_invertible(rng, n, complex_field)
        s = random_subspace(rng, n, p, complex_field)
        dec = tridiagonal_block_decomposition(a, s)
        if dec.q >= 1:
            _nullspace_identities(result, dec, f"trial {trial} generic")
            if numerical_rank(dec.T) == dec.p:
                ns = nullspace_of_hstar(dec)
                candidate = np.vstack([
                    -solve_hermitian(dec.T, adjoint(dec.B)),
                    np.eye(dec.q, dtype=dec.B.dtype),
                ])
                same = subspaces_equal(Subspace(orthonormalize(ns.N)),
                                       Subspace(orthonormalize(candidate)))
                result.check(same, f"trial {trial}: invertible-T nullspace span mismatch")

        # Maximal index: p = q forces the coupling block to be square and
        # invertible, so N1 must be invertible as well.
        p_eq = int(rng.integers(1, max(2, n // 2)))
        if 2 * p_eq <= n:
            s_eq = random_subspace(rng, n, p_eq, complex_field)
            a_eq = random_hermitian_invertible(rng, n, complex_field)
            dec_eq = tridiagonal_block_decomposition(a_eq, s_eq)
            if dec_eq.q == dec_eq.p:
                _nullspace_identities(result, dec_eq, f"trial {trial} square")
                ns_eq = nullspace_of_hstar(dec_eq)
                result.check(numerical_rank(ns_eq.N1) == dec_eq.p,
                             f"trial {trial}: square case N1 not invertible")

        # Disjoint images by construction: T = diag(tau, 0), B* supported on
        # the complementary coordinates.
        q3 = int(rng.integers(1, 4))
        p3 = q3 + int(rng.integers(0, 3))
        extra = int(rng.integers(1, 4))
        n3 = p3 + q3 + extra
        tau = rng.uniform(0.5, 2.0, size=p3 - q3) * np.where(rng.standard_normal(p3 - q3) > 0, 1, -1)
        t3 = np.zeros((p3, p3), dtype=complex if complex_field else float)
        t3[: p3 - q3, : p3 - q3] = np.diag(tau)
        m_inv = gaussian_matrix(rng, q3, q3, complex_field)
        while numerical_rank(m_inv) < q3:
            m_inv = gaussian_matrix(rng, q3, q3, complex_field)
        bstar3 = np.vstack([np.zeros((p3 - q3, q3)), m_inv])
        c3 = random_hermitian(rng, q3, complex_field)
        d3 = gaussian_matrix(rng, extra, q3, complex_field)
        e3 = random_hermitian(rng, extra, complex_field)
        compressed = np.zeros((n3, n3), dtype=complex if complex_field else float)
        compressed[:p3, :p3] = t3
        compressed[:p3, p3:p3 + q3] = bstar3
        compressed[p3:p3 + q3, :p3] = adjoint(bstar3)
        compressed[p3:p3 + q3, p3:p3 + q3] = c3
        compressed[p3 + q3:, p3:p3 + q3] = d3
        compressed[p3:p3 + q3, p3 + q3:] = adjoint(d3)
        compressed[p3 + q3:, p3 + q3:] = e3
        w = random_unitary(rng, n3, complex_field)
        a3 = hermitian_part(w @ compressed @ adjoint(w))
        dec3 = tridiagonal_block_decomposition(a3, Subspace(w[:, :p3]))
        if dec3.q != q3:
            result.check(False, f"trial {trial}: designed disjoint-image case lost its index")
            continue
        _nullspace_identities(result, dec3, f"trial {trial} disjoint")
        ns3 = nullspace_of_hstar(dec3)
        img_t_perp = orthogonal_complement(
            Subspace(orthonormalize(dec3.T, scale=dec3.op_norm)))
        result.check(subspaces_equal(Subspace(orthonormalize(ns3.N1)), img_t_perp),
                     f"trial {trial}: disjoint case Img(N1) != Img(T)-perp")
        result.check(np.linalg.norm(ns3.N2) <= RESIDUAL_TOL,
                     f"trial {trial}: disjoint case N2 != 0")
    return result


def run_manifolds_suite(seed: int = 0, trials: int = 100) -> SuiteResult:
    """Witness construction, membership, containment chain, emptiness for
    q > p, and the small-perturbation route into the invertible-compression
    class."""
    result = SuiteResult("manifolds")
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        result.trials += 1
        complex_field = bool(trial % 2)
        n = int(rng.integers(3, 11))
        p = int(rng.integers(1, n))
        q = int(rng.integers(0, min(p, n - p) + 1))
        s, s_prime = random_nested_subspaces(rng, n, p, q, complex_field)
        witness = construct_positive_member(s, s_prime)
        result.check(membership(witness, s, s_prime, ManifoldClass.M_POS),
                     f"trial {trial}: witness failed positive-class membership")
        result.check(index_of_invariance(witness, s) == q,
                     f"trial {trial}: witness index != q")
        for cls in (ManifoldClass.M, ManifoldClass.M_INV, ManifoldClass.M_SYM,
                    ManifoldClass.M_SYMINV, ManifoldClass.M_SYMT):
            result.check(membership(witness, s, s_prime, cls),
                         f"trial {trial}: containment chain broke at {cls.value}")
        omega = float(rng.standard_normal())
        result.check(membership(witness + omega * np.eye(n), s, s_prime, ManifoldClass.M),
                     f"trial {trial}: diagonal shift left the base class")
        if q >= 1:
            a0 = swap_witness(s, s_prime)
            t_block = adjoint(s.basis) @ (a0 @ s.basis)
            result.check(numerical_rank(t_block, scale=float(np.linalg.norm(a0, 2))) < p,
                         f"trial {trial}: swap witness compression unexpectedly invertible")
            nudged = perturb_to_invertible(a0, subspace=s)
            result.check(np.linalg.norm(nudged - a0) <= 1e-6,
                         f"trial {trial}: perturbation larger than 1e-6")
            result.check(membership(nudged, s, s_prime, ManifoldClass.M_SYMT),
                         f"trial {trial}: perturbed witness missed the invertible-compression class")
        # Oversized q: the set is empty, so membership must reject every A.
        if 2 * p + 1 <= n:
            s_small, s_big = random_nested_subspaces(rng, n, p, p + 1, complex_field)
            probe = random_hermitian(rng, n, complex_field)
            result.check(not membership(probe, s_small, s_big, ManifoldClass.M),
                         f"trial {trial}: membership accepted an impossible q > p pair")
            try:
                construct_positive_member(s_small, s_big)
                result.check(False, f"trial {trial}: construction succeeded for q > p")
            except ValueError:
                pass
    return result


SUITES = {
    "index": run_index_suite,
    "main-theorem": run_main_theorem_suite,
    "convexity": run_convexity_suite,
    "nullspace": run_nullspace_suite,
    "manifolds": run_manifolds_suite,
}

DEFAULT_TRIALS = {
    "index": 500,
    "main-theorem": 200,
    "convexity": 50,
    "nullspace": 60,
    "manifolds": 100,
}


def run_suites(names, seed: int = 0, trials: int | None = None) -> list[SuiteResult]:
    results = []
    for name in names:
        runner = SUITES[name]
        n_trials = trials if trials is not None else DEFAULT_TRIALS[name]
        results.append(runner(seed=seed, trials=n_trials))
    return results
