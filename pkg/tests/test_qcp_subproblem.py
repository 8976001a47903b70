from __future__ import annotations

import numpy as np
import pytest

from affine_scaling.exceptions import DimensionMismatch, InvariantViolation, NotInSwath, NumericalFailure
from affine_scaling.conic_core import local_inner, local_norm
from affine_scaling.sdp_backend import det_barrier_oracle, smat, svec
from affine_scaling.hyperbolic_backend import HpFamily, hp_barrier_oracle
from affine_scaling.qcp_subproblem import (
    SubproblemSolution,
    SubproblemStatus,
    assemble_first_order_system,
    in_swath,
    solve_qcp,
)
from affine_scaling.io_cli.generators import gen_central_path_sdp, gen_hp_instance

from conftest import SQRT7


def _sdp_problem(n: int, m: int, seed: int):
    instance, E0 = gen_central_path_sdp(n, m, seed=seed)
    A, b, c = instance.vectorized()
    return det_barrier_oracle(n), A, b, c, svec(E0)


def test_diag2_primal_solution(diag2_problem) -> None:
    solution = solve_qcp(*diag2_problem, 0.5)
    assert solution.status is SubproblemStatus.SOLVED
    np.testing.assert_allclose(smat(solution.x_e), np.diag([1.0 + SQRT7, 1.0 - SQRT7]), rtol=1e-10, atol=1e-12)
    assert solution.gap == pytest.approx(SQRT7, rel=1e-10)
    assert solution.lambda_mult < 0.0


def test_diag2_dual_solution(diag2_problem) -> None:
    oracle, A, b, c, e = diag2_problem
    solution = solve_qcp(oracle, A, b, c, e, 0.5)
    np.testing.assert_allclose(solution.y_e, [(3.0 - SQRT7) / 2.0], rtol=1e-10)
    expected = np.diag([(7.0 - SQRT7) * SQRT7 / 14.0, (7.0 + SQRT7) * SQRT7 / 14.0])
    np.testing.assert_allclose(smat(solution.s_e), expected, rtol=1e-10, atol=1e-12)
    assert b @ solution.y_e == pytest.approx(c @ solution.x_e, rel=1e-10)
    assert e @ solution.s_e == pytest.approx(SQRT7, rel=1e-10)
    assert solution.x_e @ solution.s_e == pytest.approx(0.0, abs=1e-10)


def test_diag2_system_has_nullity_one(diag2_problem) -> None:
    oracle, A, _, c, e = diag2_problem
    matrix, rhs = assemble_first_order_system(oracle, A, c, e, 0.5)
    assert matrix.shape == (1 + 3, 3 + 1 + 1)
    assert rhs.shape == (4,)
    assert matrix.shape[1] - np.linalg.matrix_rank(matrix) == 1


def test_ambient_system_is_satisfied_by_the_solution(diag2_problem) -> None:
    oracle, A, b, c, e = diag2_problem
    solution = solve_qcp(oracle, A, b, c, e, 0.5)
    matrix, rhs = assemble_first_order_system(oracle, A, c, e, 0.5)
    # the system's (y, lambda) are the rescaled dual times -lambda
    unknowns = np.concatenate([solution.x_e, -solution.lambda_mult * solution.y_e, [solution.lambda_mult]])
    np.testing.assert_allclose(matrix @ unknowns, rhs, atol=1e-9)


def test_determinant_assembly_equals_semidefinite_assembly() -> None:
    oracle, A, _, c, e = _sdp_problem(3, 4, seed=5)
    family_oracle = hp_barrier_oracle(HpFamily.determinant(3))
    for frame in (None, oracle.local_frame(e)):
        sdp_matrix, sdp_rhs = assemble_first_order_system(oracle, A, c, e, 0.5, frame=frame)
        hp_matrix, hp_rhs = assemble_first_order_system(family_oracle, A, c, e, 0.5, frame=frame)
        np.testing.assert_allclose(hp_matrix, sdp_matrix, rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(hp_rhs, sdp_rhs)


def test_objective_shift_along_the_row_space(diag2_problem) -> None:
    oracle, A, b, c, e = diag2_problem
    shifted = c + A.T @ np.array([0.75])
    original = solve_qcp(oracle, A, b, c, e, 0.5)
    moved = solve_qcp(oracle, A, b, shifted, e, 0.5)
    np.testing.assert_allclose(moved.x_e, original.x_e, atol=1e-10)
    np.testing.assert_allclose(moved.y_e, original.y_e + 0.75, rtol=1e-10)


def test_solution_is_invariant_under_scaling_of_the_objective() -> None:
    oracle, A, b, c, e = _sdp_problem(4, 5, seed=2)
    original = solve_qcp(oracle, A, b, c, e, 0.5)
    scaled = solve_qcp(oracle, A, b, 8.0 * c, e, 0.5)
    np.testing.assert_allclose(scaled.x_e, original.x_e, rtol=1e-8, atol=1e-10)
    assert scaled.gap == pytest.approx(8.0 * original.gap, rel=1e-8)


@pytest.mark.parametrize("seed", range(20))
def test_kkt_identities(seed: int) -> None:
    oracle, A, b, c, e = _sdp_problem(4, 6, seed=seed)
    alpha, n = 0.5, oracle.degree
    solution = solve_qcp(oracle, A, b, c, e, alpha)
    assert solution.solved
    x, y, s, gap = solution.x_e, solution.y_e, solution.s_e, solution.gap
    scale = np.linalg.norm(c)
    np.testing.assert_allclose(A @ x, b, rtol=1e-8, atol=1e-8 * np.linalg.norm(b))
    np.testing.assert_allclose(A.T @ y + s, c, atol=1e-7 * scale)
    assert e @ s == pytest.approx(gap, rel=1e-7)
    assert abs(x @ s) <= 1e-7 * gap * (1.0 + local_norm(oracle, e, x))
    assert local_inner(oracle, e, e, x) == pytest.approx(alpha * local_norm(oracle, e, x), rel=1e-7)
    assert c @ (e - x) == pytest.approx(gap, rel=1e-7)
    # tr((E S)^2) (n - alpha^2) = gap^2
    ES = smat(e) @ smat(s)
    assert np.trace(ES @ ES) * (n - alpha ** 2) == pytest.approx(gap ** 2, rel=1e-7)


@pytest.mark.parametrize("family", [HpFamily.product(6), HpFamily.second_order(5),
                                    HpFamily.elementary_symmetric(6, 3)], ids=lambda family: family.tag.value)
def test_kkt_identities_on_hyperbolic_instances(family: HpFamily) -> None:
    instance, e = gen_hp_instance(family, m=3, seed=4)
    oracle = instance.oracle()
    solution = solve_qcp(oracle, instance.A, instance.b, instance.c, e, 0.5)
    assert solution.solved
    np.testing.assert_allclose(instance.A.T @ solution.y_e + solution.s_e, instance.c,
                               atol=1e-7 * np.linalg.norm(instance.c))
    assert e @ solution.s_e == pytest.approx(solution.gap, rel=1e-7)
    assert abs(solution.x_e @ solution.s_e) <= 1e-7 * solution.gap * (1.0 + np.linalg.norm(solution.x_e))


@pytest.mark.parametrize("family,e", [
    (HpFamily.second_order(4), np.array([0.6, 0.8 * (1.0 - 1e-5), 0.0, 1.0])),
    (HpFamily.elementary_symmetric(6, 3), np.array([1.0, 1.0, 1.0, 1.0, 1.0, -(1.0 - 1e-5)])),
    (HpFamily.determinant(3), svec(np.diag([1.0, 1.0, 1e-5]))),
], ids=["second_order", "elementary_symmetric", "determinant"])
def test_central_points_near_the_boundary(family: HpFamily, e: np.ndarray, rng: np.random.Generator) -> None:
    oracle = hp_barrier_oracle(family)
    A = rng.standard_normal((2, family.dim))
    c = A.T @ rng.standard_normal(2) - oracle.gradient(e)
    solution = solve_qcp(oracle, A, A @ e, c, e, 0.5)
    assert solution.solved
    assert solution.gap > 0.0
    assert c @ (e - solution.x_e) == pytest.approx(solution.gap, rel=1e-6)
    assert e @ solution.s_e == pytest.approx(solution.gap, rel=1e-6)
    assert local_inner(oracle, e, e, solution.x_e) == pytest.approx(0.5 * local_norm(oracle, e, solution.x_e),
                                                                    rel=1e-6)


def test_swath_grows_with_alpha() -> None:
    oracle, A, b, c, e = _sdp_problem(3, 3, seed=1)
    verdicts = [in_swath(oracle, A, b, c, e, alpha) for alpha in (0.1, 0.3, 0.5, 0.7, 0.9)]
    assert verdicts == [True] * 5


def test_point_outside_the_swath() -> None:
    # max x22 subject to x11 = 1 is unbounded over K_I(1/2): diag(1, s) stays in the cone
    oracle = det_barrier_oracle(2)
    A, b, c = np.array([[1.0, 0.0, 0.0]]), np.array([1.0]), np.array([0.0, 0.0, -1.0])
    e = svec(np.eye(2))
    solution = solve_qcp(oracle, A, b, c, e, 0.5)
    assert solution.status is SubproblemStatus.NOT_IN_SWATH
    assert not in_swath(oracle, A, b, c, e, 0.5)
    with pytest.raises(NotInSwath):
        solution.raise_for_status()


def test_precondition_errors(diag2_problem) -> None:
    oracle, A, b, c, e = diag2_problem
    with pytest.raises(DimensionMismatch):
        solve_qcp(oracle, np.zeros((0, 3)), np.zeros(0), c, e, 0.5)
    with pytest.raises(DimensionMismatch):
        assemble_first_order_system(oracle, np.zeros((0, 3)), c, e, 0.5)
    with pytest.raises(InvariantViolation):
        solve_qcp(oracle, A, np.zeros(1), c, e, 0.5)
    with pytest.raises(InvariantViolation):
        solve_qcp(oracle, A, 2.0 * b, c, e, 0.5)


def test_raise_for_status() -> None:
    solved = SubproblemSolution(status=SubproblemStatus.SOLVED, alpha=0.5)
    assert solved.raise_for_status() is solved
    with pytest.raises(NumericalFailure):
        SubproblemSolution(status=SubproblemStatus.NUMERICAL_FAILURE, alpha=0.5, detail="x").raise_for_status()
