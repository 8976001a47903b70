# -*- coding=utf-8 -*-
r"""
the quadratic-cone relaxation QP_e(alpha) and its dual, in closed form

    min <c, x>  s.t.  A x = b,  x in K_e(alpha)

At an optimum on the cone boundary the first-order conditions are linear in (x, y, lambda):

    A x = b
    0 = lambda c + A^T y + <g(e), x> g(e) - alpha^2 H(e) x

Generically that system has a one-dimensional solution set. Substituting the line into the
boundary equation `<g(e), x>^2 = alpha^2 <x, H(e) x>` leaves a scalar quadratic whose real roots
are the candidates.
"""
import enum
import math
import logging
import typing as t
import dataclasses
import numpy as np
import scipy.linalg
from .exceptions import *
from .conic_core import BarrierOracle, LocalFrame
from .util import real_quadratic_roots


__all__ = [
    'SubproblemStatus', 'SubproblemSolution',
    'assemble_first_order_system', 'solve_qcp', 'in_swath',
]


RANK_TOL = 1e-12
CONDITION_BOUND = 1e13
MULTIPLIER_TOL = 1e-12
FEASIBILITY_TOL = 1e-8


class SubproblemStatus(enum.Enum):
    SOLVED = "solved"
    NOT_IN_SWATH = "not_in_swath"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclasses.dataclass(frozen=True)
class SubproblemSolution:
    status: SubproblemStatus
    alpha: float
    x_e: t.Optional[np.ndarray] = None
    y_e: t.Optional[np.ndarray] = None
    s_e: t.Optional[np.ndarray] = None
    lambda_mult: float = math.nan
    gap: float = math.nan
    detail: str = ""

    @property
    def solved(self) -> bool:
        return self.status is SubproblemStatus.SOLVED

    def raise_for_status(self) -> 'SubproblemSolution':
        if self.status is SubproblemStatus.NOT_IN_SWATH:
            raise NotInSwath(f"QP_e({self.alpha:g}) has no optimal solution: {self.detail}")
        elif self.status is SubproblemStatus.NUMERICAL_FAILURE:
            raise NumericalFailure(f"QP_e({self.alpha:g}): {self.detail}")
        return self


def _as_problem(oracle: BarrierOracle, A, c, e) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] == 0 or A.size == 0:
        raise DimensionMismatch("at least one equality constraint is required")
    if A.shape[1] != oracle.dim:
        raise DimensionMismatch(f"A has {A.shape[1]} columns, the cone lives in dimension {oracle.dim}")
    return A, oracle.coerce(c), oracle.check_interior(e)


def assemble_first_order_system(oracle: BarrierOracle, A, c, e, alpha: float,
                                frame: LocalFrame = None) -> t.Tuple[np.ndarray, np.ndarray]:
    r"""
    the linear part of the first-order conditions over the unknowns (x, y, lambda)

    with a `frame`, x is replaced by its local coordinates u and the rows of A, c by their dual
    local coordinates; H(e) then becomes the identity and g(e) becomes -to_local(e)
    """
    A, c, e = _as_problem(oracle, A, c, e)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    m, d = A.shape
    b = A @ e

    if frame is None:
        g = oracle.gradient(e)
        curvature = np.outer(g, g) - alpha ** 2 * oracle.hessian_matrix(e)
    else:
        A = np.vstack([frame.dual_to_local(row) for row in A])
        c = frame.dual_to_local(c)
        e_local = frame.to_local(e)
        curvature = np.outer(e_local, e_local) - alpha ** 2 * np.eye(d)

    matrix = np.zeros((m + d, d + m + 1))
    matrix[:m, :d] = A
    matrix[m:, :d] = curvature
    matrix[m:, d:d + m] = A.T
    matrix[m:, d + m] = c
    rhs = np.concatenate([b, np.zeros(d)])
    return matrix, rhs


def solve_qcp(oracle: BarrierOracle, A, b, c, e, alpha: float) -> SubproblemSolution:
    A, c, e = _as_problem(oracle, A, c, e)
    b = np.asarray(b, dtype=float).reshape(-1)
    m, d = A.shape
    n = oracle.degree
    if b.shape != (m,):
        raise DimensionMismatch(f"b has shape {b.shape}, expected ({m},)")
    if not np.any(b):
        raise InvariantViolation("b must be nonzero")
    if np.linalg.norm(A @ e - b) > FEASIBILITY_TOL * (1.0 + np.linalg.norm(b)):
        raise InvariantViolation("e does not satisfy A e = b")

    def failed(status: SubproblemStatus, detail: str) -> SubproblemSolution:
        logging.debug(f"QP_e({alpha:g}) {status.value}: {detail}")
        return SubproblemSolution(status=status, alpha=alpha, detail=detail)

    frame = oracle.local_frame(e)
    matrix, rhs = assemble_first_order_system(oracle, A, c, e, alpha, frame=frame)
    e_local = frame.to_local(e)
    c_local = matrix[m:, d + m]

    U, singular, Vt = scipy.linalg.svd(matrix)
    rank = int(np.sum(singular > RANK_TOL * singular[0]))
    if rank < m + d:
        return failed(SubproblemStatus.NUMERICAL_FAILURE, f"first-order system has nullity {d + m + 1 - rank} > 1")
    condition = singular[0] / singular[-1]
    if condition > CONDITION_BOUND:
        return failed(SubproblemStatus.NUMERICAL_FAILURE, f"first-order system condition {condition:.2e}")

    particular = Vt[:rank].T @ ((U[:, :rank].T @ rhs) / singular[:rank])
    null = Vt[-1]

    # boundary quadratic in the local frame: (e.u)^2 - alpha^2 u.u
    def form(v: np.ndarray, w: np.ndarray) -> float:
        return float((e_local @ v[:d]) * (e_local @ w[:d]) - alpha ** 2 * (v[:d] @ w[:d]))

    roots = real_quadratic_roots(form(null, null), 2.0 * form(particular, null), form(particular, particular))
    if not roots:
        return failed(SubproblemStatus.NOT_IN_SWATH, "boundary quadratic has no real root")

    scale = singular[0]
    best, degenerate = None, False
    for sigma in roots:
        candidate = particular + sigma * null
        u, multiplier = candidate[:d], candidate[d + m]
        if not e_local @ u > 0.0:  # wrong half of the double cone
            continue
        if abs(multiplier) <= MULTIPLIER_TOL * scale:
            degenerate = True
            continue
        if multiplier >= 0.0:
            continue
        objective = float(c_local @ u)
        if best is None or objective < best[0]:
            best = (objective, candidate)

    if best is None:
        if degenerate:
            return failed(SubproblemStatus.NUMERICAL_FAILURE, "multiplier vanishes at the boundary candidate")
        return failed(SubproblemStatus.NOT_IN_SWATH, "no boundary candidate passes the half-cone and multiplier tests")

    _, candidate = best
    u, y, multiplier = candidate[:d], candidate[d:d + m], float(candidate[d + m])
    # <c, e - x_e>: the first-order rows dotted with e and with u give lambda <c, e - u> = -(n - alpha^2) <e, u>
    gap = -(n - alpha ** 2) * float(e_local @ u) / multiplier

    s_local = (gap / (n - alpha ** 2)) * (e_local - (alpha ** 2 / float(e_local @ u)) * u)
    return SubproblemSolution(
        status=SubproblemStatus.SOLVED,
        alpha=alpha,
        x_e=frame.from_local(u),
        y_e=-y / multiplier,
        s_e=frame.dual_from_local(s_local),
        lambda_mult=multiplier,
        gap=gap,
    )


def in_swath(oracle: BarrierOracle, A, b, c, e, alpha: float) -> bool:
    return solve_qcp(oracle, A, b, c, e, alpha).solved
