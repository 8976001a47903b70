# -*- coding=utf-8 -*-
r"""
the affine-scaling iteration

Each iterate `e` solves QP_e(alpha), reads the eigenvalues of x_e in direction e, forms the
convex quadratic q~(t) = a t^2 + b t + c from their power sums and moves to

    e' = (e + t x_e) / (1 + t)

with t the minimizer of q~ (or the safe fixed step alpha / (2 ||x_e||_e)).
"""
import enum
import math
import time
import logging
import typing as t
import dataclasses
import numpy as np
from .exceptions import *
from .logging_context import LoggingContext
from .conic_core import (
    BarrierOracle, QuadCone, Membership, ScheduleConstants,
    local_norm, dual_cone_member, schedule_constants, relaxed_alpha,
)
from .qcp_subproblem import SubproblemStatus, solve_qcp


__all__ = [
    'StepMode', 'SolverConfig', 'StepPolynomial', 'IterationRecord', 'RunStatus', 'SolveResult', 'AlphaReduction',
    'VIOLATION_NAMES',
    'step_poly_coeffs', 'step_length', 'step_interval', 'next_iterate', 'duality_gap',
    'run', 'alpha_reduction_run', 'alpha_reduction_bound', 'halving_window',
]


BOUNDARY_TOL = 1e-6
RATIO_SLACK = 1e-9

VIOLATION_NAMES = ('primal_monotonicity', 'dual_monotonicity', 'two_step_ratio', 'dual_carry_over')


class StepMode(enum.Enum):
    QTILDE_MINIMIZER = "qtilde"
    FIXED_HALF_ALPHA = "fixed"


@dataclasses.dataclass(frozen=True)
class SolverConfig:
    alpha: float = 0.5
    gap_tol: float = 1e-8
    max_iters: int = 500
    step_mode: StepMode = StepMode.QTILDE_MINIMIZER
    seed: int = 0
    check_tol: float = 1e-9

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.gap_tol > 0.0:
            raise DomainError(f"gap_tol must be positive, got {self.gap_tol}")
        if self.max_iters < 0:
            raise DomainError(f"max_iters must be non-negative, got {self.max_iters}")
        if self.check_tol < 0.0:
            raise DomainError(f"check_tol must be non-negative, got {self.check_tol}")

    def to_dict(self) -> t.Dict[str, t.Any]:
        data = dataclasses.asdict(self)
        data['step_mode'] = self.step_mode.value
        return data


class StepPolynomial(t.NamedTuple):
    a: float
    b: float
    c: float

    def __call__(self, t_: float) -> float:
        return (self.a * t_ + self.b) * t_ + self.c

    @property
    def minimizer(self) -> float:
        return -self.b / (2.0 * self.a)


@dataclasses.dataclass(frozen=True)
class IterationRecord:
    k: int
    alpha: float
    gap: float
    t: float
    x_norm_e: float
    primal_obj: float
    dual_obj: float
    qtilde: StepPolynomial
    wallclock: float


class RunStatus(enum.Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"
    NOT_IN_SWATH = "not_in_swath"
    NUMERICAL_FAILURE = "numerical_failure"


_RUN_STATUS = {
    SubproblemStatus.NOT_IN_SWATH: RunStatus.NOT_IN_SWATH,
    SubproblemStatus.NUMERICAL_FAILURE: RunStatus.NUMERICAL_FAILURE,
}


@dataclasses.dataclass
class SolveResult:
    status: RunStatus
    trace: t.List[IterationRecord]
    final_e: np.ndarray
    final_x: t.Optional[np.ndarray]
    final_y: t.Optional[np.ndarray]
    final_s: t.Optional[np.ndarray]
    constants: ScheduleConstants
    config: SolverConfig
    degree: int
    m: int
    instance: str = "instance"
    violations: t.Dict[str, int] = dataclasses.field(default_factory=lambda: dict.fromkeys(VIOLATION_NAMES, 0))
    detail: str = ""

    @property
    def gaps(self) -> np.ndarray:
        return np.array([record.gap for record in self.trace])

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def final_gap(self) -> float:
        return self.trace[-1].gap if self.trace else math.nan

    @property
    def clean(self) -> bool:
        return not any(self.violations.values())


class AlphaReduction(t.NamedTuple):
    e: np.ndarray
    iterations: int
    alpha: float
    bound: int

    @property
    def within_bound(self) -> bool:
        return self.iterations <= self.bound


# -------------------------------------------------------------------------------------------------------------------- #


def step_poly_coeffs(p1: float, p2: float, p3: float, p4: float, alpha: float, n: int,
                     boundary_tol: t.Optional[float] = None) -> StepPolynomial:
    r"""
    q~(t) = a t^2 + b t + c from the power sums of the eigenvalues of x_e in direction e

    `boundary_tol` additionally checks that x_e lies on the boundary of K_e(alpha), p1 = alpha sqrt(p2)
    """
    if not p1 > 0.0:
        raise DomainError(f"p1 must be positive (got {p1})")
    if boundary_tol is not None and abs(p1 - alpha * math.sqrt(max(p2, 0.0))) > boundary_tol * p1:
        raise DomainError(f"power sums are off the cone boundary: p1={p1}, alpha*sqrt(p2)={alpha * math.sqrt(p2)}")
    alpha2 = alpha * alpha
    a = p1 * p1 * p2 - 2.0 * alpha2 * p1 * p3 + alpha2 * alpha2 * p4
    b = 2.0 * alpha2 * alpha2 * p3 - 2.0 * p1 ** 3
    c = (n - alpha2) * p1 * p1
    if not a > 0.0:
        raise ConvexityViolation(f"step polynomial is not strictly convex (a={a})")
    return StepPolynomial(a, b, c)


def step_length(a: float, b: float, alpha: float, x_norm_e: float,
                mode: StepMode = StepMode.QTILDE_MINIMIZER) -> float:
    if not a > 0.0:
        raise ConvexityViolation(f"step polynomial is not strictly convex (a={a})")
    if not x_norm_e > 0.0:
        raise DomainError(f"||x_e||_e must be positive (got {x_norm_e})")
    safe = 0.5 * alpha / x_norm_e
    if mode is StepMode.FIXED_HALF_ALPHA:
        return safe
    step = -b / (2.0 * a)
    if not step > 0.0:
        raise StepBoundViolation(f"nonpositive step {step}")
    if not step > safe:
        raise StepBoundViolation(f"step {step} does not exceed the safe step {safe}")
    return step


def step_interval(a: float, b: float, alpha: float, x_norm_e: float) -> t.Tuple[float, float]:
    r"""(t_E - delta, t_E + delta) with delta = t_E - alpha / (2 ||x_e||_e)"""
    minimizer = step_length(a, b, alpha, x_norm_e)
    delta = minimizer - 0.5 * alpha / x_norm_e
    return minimizer - delta, minimizer + delta


def next_iterate(e: np.ndarray, x_e: np.ndarray, t_: float, *, oracle: BarrierOracle = None) -> np.ndarray:
    if not t_ > 0.0:
        raise DomainError(f"step must be positive (got {t_})")
    e_next = (np.asarray(e, dtype=float) + t_ * np.asarray(x_e, dtype=float)) / (1.0 + t_)
    if oracle is not None:
        oracle.check_interior(e_next)
    return e_next


def duality_gap(c: np.ndarray, e: np.ndarray, x_e: np.ndarray) -> float:
    return float(np.asarray(c, dtype=float) @ (np.asarray(e, dtype=float) - np.asarray(x_e, dtype=float)))


def alpha_reduction_bound(alpha0: float, alpha: float) -> int:
    return math.ceil(2.0 / math.log(8.0 / 7.0) * math.log(alpha0 / alpha)
                     + 1.0 / math.log(9.0 / 8.0) * math.log((1.0 - alpha) / (1.0 - alpha0)))


def halving_window(alpha: float, n: int) -> int:
    r"""iterations within which the two-step bound guarantees the gap halves"""
    ratio = schedule_constants(alpha, n).ratio_bound
    return math.ceil(2.0 * math.log(2.0) / -math.log(ratio))


# -------------------------------------------------------------------------------------------------------------------- #


def _as_data(oracle: BarrierOracle, A, b, c) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    return np.atleast_2d(np.asarray(A, dtype=float)), np.asarray(b, dtype=float).reshape(-1), oracle.coerce(c)


def run(oracle: BarrierOracle, A, b, c, e0, config: SolverConfig = None, *, instance: str = "instance") -> SolveResult:
    r"""
    iterates from e0 until gap <= gap_tol * gap_0 or max_iters

    The guarantees of the iteration are checked online and counted in `violations`. Failed
    interiority, convexity or step bounds abort with NUMERICAL_FAILURE.
    """
    config = config or SolverConfig()
    A, b, c = _as_data(oracle, A, b, c)
    n = oracle.degree
    constants = schedule_constants(config.alpha, n)
    qtilde_mode = config.step_mode is StepMode.QTILDE_MINIMIZER
    e = oracle.check_interior(e0)

    solution = solve_qcp(oracle, A, b, c, e, config.alpha).raise_for_status()
    gap0 = solution.gap
    result = SolveResult(
        status=RunStatus.MAX_ITERS, trace=[], final_e=e,
        final_x=solution.x_e, final_y=solution.y_e, final_s=solution.s_e,
        constants=constants, config=config, degree=n, m=A.shape[0], instance=instance,
    )
    logging.info(f"{instance}: n={n} m={A.shape[0]} alpha={config.alpha} step={config.step_mode.value} "
                 f"gap0={gap0:.6e}")

    def violated(name: str, message: str):
        result.violations[name] += 1
        logging.warning(f"{name}: {message}")

    previous_ratio = None
    for k in range(config.max_iters):
        with LoggingContext(instance=instance, iteration=k):
            started = time.perf_counter()
            try:
                x_e = solution.x_e
                x_norm = local_norm(oracle, e, x_e)
                sums = oracle.direction_power_sums(e, x_e)
                poly = step_poly_coeffs(*sums, config.alpha, n, boundary_tol=BOUNDARY_TOL)
                step = step_length(poly.a, poly.b, config.alpha, x_norm, config.step_mode)

                primal, dual = float(c @ e), float(b @ solution.y_e)

                def record() -> IterationRecord:
                    return IterationRecord(
                        k=k, alpha=config.alpha, gap=solution.gap, t=step, x_norm_e=x_norm,
                        primal_obj=primal, dual_obj=dual, qtilde=poly,
                        wallclock=time.perf_counter() - started,
                    )

                if solution.gap <= config.gap_tol * gap0:
                    result.trace.append(record())
                    result.status = RunStatus.CONVERGED
                    break

                e_next = next_iterate(e, x_e, step, oracle=oracle)
                solution_next = solve_qcp(oracle, A, b, c, e_next, config.alpha)
                result.trace.append(record())
                logging.debug(f"gap={solution.gap:.6e} t={step:.6e} ||x||={x_norm:.6e}")

                if not solution_next.solved:
                    result.status = _RUN_STATUS[solution_next.status]
                    result.detail = f"iterate {k + 1}: {solution_next.detail}"
                    result.final_e = e_next
                    result.final_x = result.final_y = result.final_s = None
                    logging.error(f"{result.status.value}: {result.detail}")
                    break

                primal_next, dual_next = float(c @ e_next), float(b @ solution_next.y_e)
                if not primal_next < primal:
                    violated('primal_monotonicity', f"{primal!r} -> {primal_next!r}")
                if dual_next < dual - config.check_tol * (1.0 + abs(dual)):
                    violated('dual_monotonicity', f"{dual!r} -> {dual_next!r}")
                # membership is scale invariant, tested on s_e / gap
                carried = dual_cone_member(QuadCone(e_next, constants.beta, oracle), solution.s_e / solution.gap,
                                           tol=config.check_tol)
                if carried is not Membership.INTERIOR:
                    violated('dual_carry_over', f"s_e is {carried.value} in K_e'({constants.beta:.6g})*")
                ratio = solution_next.gap / solution.gap
                if qtilde_mode and previous_ratio is not None \
                        and min(previous_ratio, ratio) > constants.ratio_bound + RATIO_SLACK:
                    violated('two_step_ratio', f"ratios {previous_ratio:.9f}, {ratio:.9f} > {constants.ratio_bound:.9f}")
                previous_ratio = ratio

                e, solution = e_next, solution_next
                result.final_e, result.final_x, result.final_y, result.final_s = \
                    e, solution.x_e, solution.y_e, solution.s_e

            except (NumericalFailure, NotInterior, DomainError) as error:
                result.status = RunStatus.NUMERICAL_FAILURE
                result.detail = f"iterate {k}: {type(error).__name__}: {error}"
                logging.error(result.detail)
                break

    logging.info(f"{instance}: {result.status.value} after {result.iterations} iterations, "
                 f"gap={result.final_gap:.6e}, violations={sum(result.violations.values())}")
    return result


def alpha_reduction_run(oracle: BarrierOracle, A, b, c, e0, alpha0: float, alpha_target: float,
                        *, instance: str = "instance") -> AlphaReduction:
    r"""
    shrinks alpha by alpha <- alpha sqrt((1 + alpha) / 2) while taking the safe fixed step

    the returned point lies in swath(alpha) for the final alpha <= alpha_target
    """
    if not 0.0 < alpha_target < alpha0 < 1.0:
        raise DomainError(f"need 0 < target < alpha0 < 1 (got alpha0={alpha0}, target={alpha_target})")
    A, b, c = _as_data(oracle, A, b, c)
    e = oracle.check_interior(e0)
    alpha = alpha0
    bound = alpha_reduction_bound(alpha0, alpha_target)
    solution = solve_qcp(oracle, A, b, c, e, alpha).raise_for_status()

    iterations = 0
    while alpha > alpha_target:
        with LoggingContext(instance=instance, iteration=iterations):
            x_norm = local_norm(oracle, e, solution.x_e)
            step = 0.5 * alpha / x_norm
            e = next_iterate(e, solution.x_e, step, oracle=oracle)
            alpha = relaxed_alpha(alpha)
            iterations += 1
            solution = solve_qcp(oracle, A, b, c, e, alpha).raise_for_status()
            logging.debug(f"alpha={alpha:.9f} gap={solution.gap:.6e}")

    reduction = AlphaReduction(e=e, iterations=iterations, alpha=alpha, bound=bound)
    if not reduction.within_bound:
        logging.warning(f"{instance}: alpha reduction took {iterations} iterations, bound is {bound}")
    logging.info(f"{instance}: alpha {alpha0} -> {alpha:.9f} in {iterations} iterations (bound {bound})")
    return reduction
