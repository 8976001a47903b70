from __future__ import annotations

import math

import numpy as np
import pytest

from affine_scaling.exceptions import DomainError, DimensionMismatch, NotInterior
from affine_scaling.conic_core import (
    CholeskyFrame,
    Membership,
    QuadCone,
    cholesky_factor,
    dikin_contains,
    dual_cone_member,
    e_orthogonal_direction,
    local_inner,
    local_norm,
    primal_cone_member,
    relaxed_alpha,
    schedule_constants,
)
from affine_scaling.sdp_backend import det_barrier_oracle, svec
from affine_scaling.hyperbolic_backend import HpFamily, hp_barrier_oracle

from conftest import SQRT7


def _random_pd(rng: np.random.Generator, n: int) -> np.ndarray:
    W = rng.standard_normal((n, n))
    return W @ W.T + n * np.eye(n)


def test_local_inner_identity_matrix() -> None:
    oracle = det_barrier_oracle(2)
    assert local_inner(oracle, svec(np.eye(2)), svec(np.eye(2)), svec(np.eye(2))) == pytest.approx(2.0)


def test_local_inner_weighted_diagonal() -> None:
    oracle = det_barrier_oracle(2)
    U = svec(np.diag([1.0, 0.0]))
    assert local_inner(oracle, svec(np.diag([1.0, 2.0])), U, U) == pytest.approx(1.0)


@pytest.mark.parametrize("oracle", [
    det_barrier_oracle(4),
    hp_barrier_oracle(HpFamily.product(5)),
    hp_barrier_oracle(HpFamily.second_order(4)),
    hp_barrier_oracle(HpFamily.elementary_symmetric(6, 3)),
])
def test_center_has_norm_sqrt_degree(oracle) -> None:
    e = oracle.canonical_direction()
    assert local_inner(oracle, e, e, e) == pytest.approx(oracle.degree, rel=1e-10)
    assert local_norm(oracle, e, e) == pytest.approx(math.sqrt(oracle.degree), rel=1e-10)


def test_local_inner_is_symmetric(rng: np.random.Generator) -> None:
    oracle = det_barrier_oracle(3)
    e = svec(_random_pd(rng, 3))
    u, v = rng.standard_normal(6), rng.standard_normal(6)
    assert local_inner(oracle, e, u, v) == pytest.approx(local_inner(oracle, e, v, u), rel=1e-12)


def test_local_inner_rejects_non_interior_point() -> None:
    oracle = det_barrier_oracle(2)
    with pytest.raises(NotInterior):
        local_inner(oracle, svec(np.diag([1.0, -1.0])), svec(np.eye(2)), svec(np.eye(2)))


def test_local_inner_rejects_wrong_length() -> None:
    oracle = det_barrier_oracle(2)
    with pytest.raises(DimensionMismatch):
        local_inner(oracle, svec(np.eye(2)), np.ones(4), np.ones(3))


def test_cholesky_factor_rejects_singular_matrix() -> None:
    with pytest.raises(NotInterior):
        cholesky_factor(np.diag([1.0, 0.0]))
    np.testing.assert_allclose(cholesky_factor(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))


def test_cholesky_frame_maps_metric_to_dot_product(rng: np.random.Generator) -> None:
    oracle = det_barrier_oracle(3)
    e = svec(_random_pd(rng, 3))
    frame = CholeskyFrame(oracle.hessian_matrix(e))
    x, y, s = rng.standard_normal((3, 6))
    assert frame.to_local(x) @ frame.to_local(y) == pytest.approx(local_inner(oracle, e, x, y), rel=1e-10)
    assert frame.dual_to_local(s) @ frame.to_local(x) == pytest.approx(s @ x, rel=1e-10)
    np.testing.assert_allclose(frame.from_local(frame.to_local(x)), x, atol=1e-12)
    np.testing.assert_allclose(frame.dual_from_local(frame.dual_to_local(s)), s, atol=1e-12)


# -------------------------------------------------------------------------------------------------------------------- #


def test_center_is_interior_of_its_quadratic_cones() -> None:
    oracle = det_barrier_oracle(3)
    e = oracle.canonical_direction()
    for alpha in (0.1, 0.5, 1.0, 1.7):
        assert primal_cone_member(QuadCone(e, alpha, oracle), e) is Membership.INTERIOR


def test_worked_boundary_point() -> None:
    oracle = det_barrier_oracle(2)
    cone = QuadCone(svec(np.eye(2)), 0.5, oracle)
    X = svec(np.diag([1.0 + SQRT7, 1.0 - SQRT7]))
    assert primal_cone_member(cone, X) is Membership.BOUNDARY
    assert primal_cone_member(cone, -X) is Membership.OUTSIDE


def test_psd_matrices_lie_in_the_relaxation(rng: np.random.Generator) -> None:
    oracle = det_barrier_oracle(4)
    e = svec(_random_pd(rng, 4))
    for _ in range(50):
        W = rng.standard_normal((4, 2))
        X = svec(W @ W.T)  # rank two: on the boundary of the psd cone
        assert primal_cone_member(QuadCone(e, 1.0, oracle), X) is not Membership.OUTSIDE


def test_membership_is_positively_homogeneous_and_nested(rng: np.random.Generator) -> None:
    oracle = det_barrier_oracle(3)
    e = oracle.canonical_direction()
    for _ in range(30):
        x = rng.standard_normal(6) + 2.0 * e
        small, large = QuadCone(e, 0.3, oracle), QuadCone(e, 0.9, oracle)
        verdict = primal_cone_member(large, x)
        assert primal_cone_member(large, 3.5 * x) is verdict
        if verdict is Membership.INTERIOR:
            assert primal_cone_member(small, x) is Membership.INTERIOR


def test_dual_cone_contains_negative_gradient() -> None:
    oracle = det_barrier_oracle(2)
    e = svec(np.eye(2))
    for alpha in (0.05, 0.5, 1.0, 1.4):
        assert dual_cone_member(QuadCone(e, alpha, oracle), svec(np.eye(2))) is Membership.INTERIOR


def test_worked_dual_boundary_point() -> None:
    oracle = det_barrier_oracle(2)
    S = np.diag([(7.0 - SQRT7) * SQRT7 / 14.0, (7.0 + SQRT7) * SQRT7 / 14.0])
    assert np.trace(S) == pytest.approx(SQRT7)
    assert np.trace(S @ S) == pytest.approx(4.0)
    assert dual_cone_member(QuadCone(svec(np.eye(2)), 0.5, oracle), svec(S)) is Membership.BOUNDARY


def test_quad_cone_rejects_alpha_out_of_range() -> None:
    oracle = det_barrier_oracle(2)
    with pytest.raises(DomainError):
        QuadCone(svec(np.eye(2)), 0.0, oracle)
    with pytest.raises(DomainError):
        QuadCone(svec(np.eye(2)), math.sqrt(2.0), oracle)
    with pytest.raises(DomainError):
        primal_cone_member(QuadCone(svec(np.eye(2)), 0.5, oracle), svec(np.eye(2)), tol=-1.0)


def test_dual_alpha() -> None:
    cone = QuadCone(svec(np.eye(2)), 0.5, det_barrier_oracle(2))
    assert cone.dual_alpha == pytest.approx(math.sqrt(1.75))


# -------------------------------------------------------------------------------------------------------------------- #


def test_schedule_constants_at_one_half() -> None:
    constants = schedule_constants(0.5, 2)
    assert constants.kappa == pytest.approx(0.125)
    assert constants.beta == pytest.approx(0.4330127, abs=1e-7)
    assert constants.ratio_bound == pytest.approx(0.918789, abs=1e-6)
    assert relaxed_alpha(0.5) == constants.beta


@pytest.mark.parametrize("alpha,n", [(0.0, 2), (1.0, 2), (-0.3, 4), (0.5, 1)])
def test_schedule_constants_rejects_bad_arguments(alpha: float, n: int) -> None:
    with pytest.raises(DomainError):
        schedule_constants(alpha, n)


def test_ratio_bound_approaches_one_with_degree() -> None:
    bounds = [schedule_constants(0.5, n).ratio_bound for n in (2, 5, 10, 20, 100)]
    assert all(0.0 < bound < 1.0 for bound in bounds)
    assert bounds == sorted(bounds)


# -------------------------------------------------------------------------------------------------------------------- #


@pytest.mark.parametrize("oracle", [
    det_barrier_oracle(3),
    hp_barrier_oracle(HpFamily.product(4)),
    hp_barrier_oracle(HpFamily.second_order(3)),
])
def test_e_orthogonal_direction_and_dikin_ball(oracle, rng: np.random.Generator) -> None:
    e = oracle.canonical_direction()
    for _ in range(20):
        w = e_orthogonal_direction(oracle, e, rng)
        assert local_inner(oracle, e, e, w) == pytest.approx(0.0, abs=1e-10)
        assert local_norm(oracle, e, w) == pytest.approx(1.0, rel=1e-10)
        inside = e + 0.99 * w
        assert dikin_contains(oracle, e, inside)
        assert oracle.is_interior(inside)
        assert not dikin_contains(oracle, e, e + 1.01 * w)
