# -*- coding=utf-8 -*-
r"""
local-metric geometry shared by both backends

Every interior point `e` of a hyperbolicity cone carries the inner product
`<u, v>_e = <u, H(e) v>` of the barrier Hessian. The quadratic cones

    K_e(alpha) = {x : <e, x>_e >= alpha * ||x||_e}

are circular in that metric; for `alpha <= 1` they contain the hyperbolicity cone, which makes the
quadratic-cone program a relaxation of the conic program.
"""
import abc
import enum
import math
import typing as t
import dataclasses
import numpy as np
import scipy.linalg
from .exceptions import *


__all__ = [
    'DEFAULT_TOL', 'PIVOT_THRESHOLD',
    'Membership', 'LocalFrame', 'CholeskyFrame', 'BarrierOracle', 'QuadCone', 'ScheduleConstants',
    'cholesky_factor', 'local_inner', 'local_norm', 'primal_cone_member', 'dual_cone_member',
    'schedule_constants', 'relaxed_alpha', 'dikin_contains', 'e_orthogonal_direction',
]


DEFAULT_TOL = 1e-9
PIVOT_THRESHOLD = 1e-12
SOLVE_RESIDUAL_BOUND = 1e-6

Vector = np.ndarray


class Membership(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def cholesky_factor(matrix: np.ndarray) -> np.ndarray:
    r"""lower Cholesky factor; raises NotInterior unless every pivot clears PIVOT_THRESHOLD * ||matrix||"""
    matrix = np.asarray(matrix, dtype=float)
    try:
        factor = scipy.linalg.cholesky(matrix, lower=True)
    except (np.linalg.LinAlgError, ValueError) as error:
        raise NotInterior(f"factorization failed: {error}") from error
    scale = np.abs(matrix).max(initial=0.0)
    if np.min(np.diag(factor)) ** 2 <= PIVOT_THRESHOLD * scale:
        raise NotInterior("factorization pivot below threshold")
    return factor


# -------------------------------------------------------------------------------------------------------------------- #


class LocalFrame(abc.ABC):
    r"""
    coordinates in which the local inner product at `e` is the dot product

    with H(e) = R R^T:  to_local = R^T,  from_local = R^-T,  dual_to_local = R^-1,  dual_from_local = R
    """

    @abc.abstractmethod
    def to_local(self, x: Vector) -> Vector: ...

    @abc.abstractmethod
    def from_local(self, u: Vector) -> Vector: ...

    @abc.abstractmethod
    def dual_to_local(self, s: Vector) -> Vector: ...

    @abc.abstractmethod
    def dual_from_local(self, w: Vector) -> Vector: ...


class CholeskyFrame(LocalFrame):
    def __init__(self, hessian: np.ndarray):
        self.factor = cholesky_factor(hessian)

    def to_local(self, x: Vector) -> Vector:
        return self.factor.T @ x

    def from_local(self, u: Vector) -> Vector:
        return scipy.linalg.solve_triangular(self.factor.T, u, lower=False)

    def dual_to_local(self, s: Vector) -> Vector:
        return scipy.linalg.solve_triangular(self.factor, s, lower=True)

    def dual_from_local(self, w: Vector) -> Vector:
        return self.factor @ w


class BarrierOracle(abc.ABC):
    r"""
    the barrier f = -ln p of a hyperbolic polynomial of degree `degree` on a `dim`-dimensional space

    vectors are 1d float arrays of length `dim`, gradients are taken w.r.t. the coordinate dot product
    """
    name: str = "barrier"
    dim: int
    degree: int

    def __init__(self, dim: int, degree: int):
        if degree < 2:
            raise DomainError(f"degree must be at least 2 (got {degree})")
        self.dim = int(dim)
        self.degree = int(degree)

    def __repr__(self):
        return f"<{type(self).__name__} dim={self.dim} degree={self.degree}>"

    def coerce(self, vector: t.Any) -> Vector:
        vector = np.asarray(vector, dtype=float)
        if vector.shape != (self.dim,):
            raise DimensionMismatch(f"expected a vector of length {self.dim}, got shape {vector.shape}")
        return vector

    @abc.abstractmethod
    def is_interior(self, e: Vector) -> bool: ...

    def check_interior(self, e: Vector) -> Vector:
        e = self.coerce(e)
        if not self.is_interior(e):
            raise NotInterior(f"point is not interior to the {self.name} cone")
        return e

    @abc.abstractmethod
    def canonical_direction(self) -> Vector: ...

    @abc.abstractmethod
    def value(self, e: Vector) -> float: ...

    @abc.abstractmethod
    def gradient(self, e: Vector) -> Vector: ...

    @abc.abstractmethod
    def hessian_apply(self, e: Vector, v: Vector) -> Vector: ...

    @abc.abstractmethod
    def hessian_solve(self, e: Vector, w: Vector) -> Vector: ...

    @abc.abstractmethod
    def direction_eigs(self, e: Vector, x: Vector) -> Vector:
        r"""eigenvalues of x in direction e, ascending"""

    def direction_power_sums(self, e: Vector, x: Vector) -> t.Tuple[float, float, float, float]:
        r"""(p_1, p_2, p_3, p_4), power sums of the eigenvalues of x in direction e"""
        eigenvalues = self.direction_eigs(e, x)
        return tuple(float(np.sum(eigenvalues ** power)) for power in range(1, 5))

    def hessian_matrix(self, e: Vector) -> np.ndarray:
        return np.column_stack([self.hessian_apply(e, column) for column in np.eye(self.dim)])

    def local_frame(self, e: Vector) -> LocalFrame:
        return CholeskyFrame(self.hessian_matrix(self.check_interior(e)))


# -------------------------------------------------------------------------------------------------------------------- #


def local_inner(oracle: BarrierOracle, e: Vector, u: Vector, v: Vector) -> float:
    e = oracle.check_interior(e)
    return float(oracle.coerce(u) @ oracle.hessian_apply(e, oracle.coerce(v)))


def local_norm(oracle: BarrierOracle, e: Vector, x: Vector) -> float:
    return math.sqrt(max(local_inner(oracle, e, x, x), 0.0))


def dikin_contains(oracle: BarrierOracle, e: Vector, x: Vector) -> bool:
    r"""x lies in the open unit ball of ||.||_e around e (always inside the cone)"""
    return local_norm(oracle, e, oracle.coerce(x) - oracle.coerce(e)) < 1.0


def e_orthogonal_direction(oracle: BarrierOracle, e: Vector, rng: np.random.Generator) -> Vector:
    r"""random w with <e, w>_e = 0 and ||w||_e = 1"""
    e = oracle.check_interior(e)
    z = rng.standard_normal(oracle.dim)
    w = z - (local_inner(oracle, e, e, z) / oracle.degree) * e
    return w / local_norm(oracle, e, w)


@dataclasses.dataclass(frozen=True)
class QuadCone:
    center: Vector
    alpha: float
    oracle: BarrierOracle
    slack: float = dataclasses.field(init=False, repr=False)  # n - alpha^2

    def __post_init__(self):
        n = self.oracle.degree
        if not 0.0 < self.alpha < math.sqrt(n):
            raise DomainError(f"alpha must lie in (0, sqrt({n})), got {self.alpha}")
        object.__setattr__(self, 'center', self.oracle.coerce(self.center))
        object.__setattr__(self, 'slack', n - self.alpha ** 2)

    @property
    def dual_alpha(self) -> float:
        return math.sqrt(self.slack)


def _classify(inner: float, norm: float, alpha: float, tol: float) -> Membership:
    margin = inner - alpha * norm
    band = tol * (1.0 + norm)
    if abs(margin) <= band:
        return Membership.BOUNDARY
    return Membership.INTERIOR if margin > 0 else Membership.OUTSIDE


def primal_cone_member(cone: QuadCone, x: Vector, tol: float = DEFAULT_TOL) -> Membership:
    if tol < 0:
        raise DomainError("tol must be non-negative")
    oracle, e = cone.oracle, cone.oracle.check_interior(cone.center)
    x = oracle.coerce(x)
    hx = oracle.hessian_apply(e, x)
    inner = float(e @ hx)
    norm = math.sqrt(max(float(x @ hx), 0.0))
    return _classify(inner, norm, cone.alpha, tol)


def dual_cone_member(cone: QuadCone, s: Vector, tol: float = DEFAULT_TOL) -> Membership:
    r"""K_e(alpha)* = H(e) K_e(sqrt(n - alpha^2))"""
    oracle, e = cone.oracle, cone.oracle.check_interior(cone.center)
    s = oracle.coerce(s)
    u = oracle.hessian_solve(e, s)
    residual = np.linalg.norm(oracle.hessian_apply(e, u) - s)
    if not np.isfinite(residual) or residual > SOLVE_RESIDUAL_BOUND * (np.linalg.norm(s) + np.finfo(float).tiny):
        raise NumericalFailure(f"Hessian solve residual {residual:.3e} exceeds the conditioning bound")
    return primal_cone_member(QuadCone(e, cone.dual_alpha, oracle), u, tol)


# -------------------------------------------------------------------------------------------------------------------- #


@dataclasses.dataclass(frozen=True)
class ScheduleConstants:
    alpha: float
    beta: float
    kappa: float
    ratio_bound: float


def relaxed_alpha(alpha: float) -> float:
    return alpha * math.sqrt((1.0 + alpha) / 2.0)


def schedule_constants(alpha: float, n: int) -> ScheduleConstants:
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if n < 2:
        raise DomainError(f"degree must be at least 2 (got {n})")
    kappa = alpha * math.sqrt((1.0 - alpha) / 8.0)
    return ScheduleConstants(
        alpha=alpha,
        beta=relaxed_alpha(alpha),
        kappa=kappa,
        ratio_bound=1.0 - kappa / (kappa + math.sqrt(n)),
    )
