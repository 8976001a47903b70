r"""
end-to-end properties of the solver at desk scale

deselect with `-m "not acceptance"` for a quick run
"""
from __future__ import annotations

import math

import numpy as np
import pytest

from affine_scaling.conic_core import local_inner, local_norm
from affine_scaling.sdp_backend import det_barrier_oracle, smat, svec
from affine_scaling.hyperbolic_backend import HpFamily, hp_barrier_oracle, power_sums
from affine_scaling.qcp_subproblem import in_swath, solve_qcp
from affine_scaling.driver import RunStatus, SolverConfig, alpha_reduction_bound, alpha_reduction_run, run
from affine_scaling.diagnostics import (
    decrease_bound_check,
    fd_check,
    halving_check,
    identity_check,
    membership_equiv_check,
    q_scaling_check,
    random_boundary_point,
    sandwich_check,
    two_step_ratio_check,
)
from affine_scaling.io_cli.generators import gen_central_path_sdp, gen_hp_instance

from conftest import SQRT7

pytestmark = pytest.mark.acceptance

ALPHA = 0.5
KAPPA = 0.125


def _sdp_problem(n: int, m: int, seed: int):
    instance, E0 = gen_central_path_sdp(n, m, seed=seed)
    A, b, c = instance.vectorized()
    return det_barrier_oracle(n), A, b, c, svec(E0)


def _assert_accepted(result, n: int) -> None:
    assert result.status is RunStatus.CONVERGED
    assert result.final_gap <= 1e-8 * result.trace[0].gap
    assert sum(result.violations.values()) == 0, result.violations
    gaps = np.asarray(result.gaps)
    bound = 1.0 - KAPPA / (KAPPA + math.sqrt(n)) + 1e-9
    ratios = gaps[1:] / gaps[:-1]
    for i in range(len(ratios) - 1):
        assert min(ratios[i], ratios[i + 1]) <= bound, (i, ratios[i], ratios[i + 1])
    assert two_step_ratio_check(gaps, n, ALPHA).passed
    assert halving_check(gaps, n, ALPHA).passed
    primal = [record.primal_obj for record in result.trace]
    dual = [record.dual_obj for record in result.trace]
    assert all(after < before for before, after in zip(primal, primal[1:]))
    assert all(after >= before - 1e-9 * (1.0 + abs(before)) for before, after in zip(dual, dual[1:]))


@pytest.mark.parametrize("n,seed", [(5, 0), (5, 1), (5, 2), (10, 0), (10, 1), (20, 0)])
def test_sdp_runs_contract_monotonically_and_keep_the_swath(n: int, seed: int) -> None:
    oracle, A, b, c, e = _sdp_problem(n, 2 * n, seed)
    _assert_accepted(run(oracle, A, b, c, e, SolverConfig(alpha=ALPHA)), n)


def test_reference_instance_converges_within_the_iteration_limit() -> None:
    oracle, A, b, c, e = _sdp_problem(10, 20, 7)
    result = run(oracle, A, b, c, e, SolverConfig(alpha=ALPHA, max_iters=500))
    _assert_accepted(result, 10)
    assert result.iterations <= 500


def test_worked_instance_is_reproduced_exactly(diag2_problem) -> None:
    result = run(*diag2_problem, SolverConfig(max_iters=1))
    record = result.trace[0]
    assert record.gap == pytest.approx(SQRT7, rel=1e-10)
    assert record.qtilde == pytest.approx((31.5, -10.5, 7.0), rel=1e-10)
    assert record.t == pytest.approx(1.0 / 6.0, rel=1e-10)
    expected = np.diag([(7.0 + SQRT7) / 7.0, (7.0 - SQRT7) / 7.0])
    np.testing.assert_allclose(smat(result.final_e), expected, rtol=1e-10)


@pytest.mark.parametrize("n", [3, 5])
def test_subproblem_identities_on_many_instances(n: int) -> None:
    for seed in range(40):
        oracle, A, b, c, e = _sdp_problem(n, n + 1, 1000 + seed)
        solution = solve_qcp(oracle, A, b, c, e, ALPHA)
        x, y, s, gap = solution.x_e, solution.y_e, solution.s_e, solution.gap
        assert e @ s == pytest.approx(gap, rel=1e-7)
        assert abs(x @ s) <= 1e-7 * gap * (1.0 + np.linalg.norm(x))
        assert local_inner(oracle, e, e, x) == pytest.approx(ALPHA * local_norm(oracle, e, x), rel=1e-7)
        np.testing.assert_allclose(A.T @ y + s, c, atol=1e-7 * np.linalg.norm(c))
        ES = smat(e) @ smat(s)
        assert np.trace(ES @ ES) * (n - ALPHA ** 2) == pytest.approx(gap ** 2, rel=1e-7)


def test_scaling_and_equivalence_checks_on_many_instances() -> None:
    for seed in range(10):
        instance, E0 = gen_central_path_sdp(4, 5, seed=2000 + seed)
        assert q_scaling_check(instance, E0, ALPHA, tolerance=1e-8).passed
        assert membership_equiv_check(instance, E0, ALPHA).passed


@pytest.mark.parametrize("n", range(3, 9))
def test_decrease_bound_on_boundary_points(n: int) -> None:
    rng = np.random.default_rng(n)
    for _ in range(10):
        W = rng.standard_normal((n, n))
        E = W @ W.T + 0.5 * np.eye(n)
        assert decrease_bound_check(E, random_boundary_point(E, ALPHA, rng), ALPHA).passed


@pytest.mark.parametrize("alpha0,target", [(0.9, 0.3), (0.99, 0.5), (0.6, 0.1)])
def test_alpha_reduction_on_several_instances(alpha0: float, target: float) -> None:
    for seed in range(10):
        oracle, A, b, c, e = _sdp_problem(4, 6, 3000 + seed)
        reduction = alpha_reduction_run(oracle, A, b, c, e, alpha0, target)
        assert reduction.within_bound
        assert reduction.bound == alpha_reduction_bound(alpha0, target)
        assert in_swath(oracle, A, b, c, reduction.e, target)


def test_determinant_backend_reproduces_the_semidefinite_gaps() -> None:
    for seed in range(10):
        oracle, A, b, c, e = _sdp_problem(3, 4, 4000 + seed)
        sdp = run(oracle, A, b, c, e, SolverConfig())
        hp = run(hp_barrier_oracle(HpFamily.determinant(3)), A, b, c, e, SolverConfig())
        assert len(hp.gaps) == len(sdp.gaps)
        np.testing.assert_allclose(hp.gaps, sdp.gaps, rtol=1e-6)


def test_hyperbolic_oracles() -> None:
    rng = np.random.default_rng(99)
    for _ in range(100):
        roots = rng.uniform(-2.0, 2.0, int(rng.integers(1, 13)))
        coefficients = np.polynomial.polynomial.polyfromroots(-roots)
        expected = [float(np.sum(roots ** k)) for k in range(1, 5)]
        np.testing.assert_allclose(power_sums(coefficients=coefficients), expected, rtol=1e-8, atol=1e-8)

    families = (HpFamily.product(6), HpFamily.second_order(5), HpFamily.determinant(3),
                HpFamily.elementary_symmetric(6, 3))
    for family in families:
        oracle = hp_barrier_oracle(family)
        e = family.canonical_direction()
        assert fd_check(oracle, e).passed
        assert identity_check(oracle, e).passed
        assert sandwich_check(oracle, e, samples=500, seed=1).passed


@pytest.mark.parametrize("family", [HpFamily.product(12), HpFamily.second_order(10), HpFamily.determinant(4),
                                    HpFamily.elementary_symmetric(6, 3)], ids=lambda family: family.tag.value)
def test_hyperbolic_runs_satisfy_the_sdp_properties(family: HpFamily) -> None:
    instance, e0 = gen_hp_instance(family, m=4, seed=5)
    result = run(instance.oracle(), instance.A, instance.b, instance.c, e0, SolverConfig())
    assert result.status is RunStatus.CONVERGED
    assert result.final_gap <= 1e-8 * result.trace[0].gap
    assert sum(result.violations.values()) == 0, result.violations
    assert two_step_ratio_check(result.gaps, family.degree, ALPHA).passed
    assert halving_check(result.gaps, family.degree, ALPHA).passed
    for record in result.trace:
        scale = 1.0 + abs(record.primal_obj) + abs(record.dual_obj)
        assert record.gap == pytest.approx(record.primal_obj - record.dual_obj, abs=1e-7 * scale)
