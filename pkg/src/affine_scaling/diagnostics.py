# -*- coding=utf-8 -*-
r"""
independent oracles for the per-iteration guarantees

Reports of numeric comparisons carry relative errors. Reports of predicates (membership
agreement, strict inequalities, ratio bounds) count the failing samples in `max_rel_err` and pass
at tolerance 0.
"""
import math
import logging
import typing as t
import dataclasses
import numpy as np
import scipy.linalg
from .exceptions import *
from .conic_core import (
    BarrierOracle, QuadCone, Membership,
    local_inner, local_norm, primal_cone_member, dual_cone_member, schedule_constants, relaxed_alpha,
    e_orthogonal_direction,
)
from .sdp_backend import SdpInstance, det_barrier_oracle, direction_eigs_sdp, smat, svec
from .hyperbolic_backend import power_sums
from .qcp_subproblem import solve_qcp, in_swath
from .driver import step_poly_coeffs, step_interval, halving_window


__all__ = [
    'CheckReport',
    'trace_q', 'normalized_dual', 'q_scaling_check', 'membership_equiv_check', 'decrease_bound_check',
    'random_boundary_point', 'fd_check', 'conjecture_curve', 'identity_check', 'sandwich_check',
    'two_step_ratio_check', 'halving_check', 'step_interval_check',
]


THRESHOLD_BAND = 1e-9
RATIO_SLACK = 1e-9


@dataclasses.dataclass(frozen=True)
class CheckReport:
    name: str
    max_abs_err: float
    max_rel_err: float
    samples: int
    tolerance: float
    worst_margin: t.Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.max_rel_err <= self.tolerance

    def to_dict(self) -> t.Dict[str, t.Any]:
        data = dataclasses.asdict(self)
        data['pass'] = self.passed
        return data


def _comparison(name: str, computed: t.Sequence[float], expected: t.Sequence[float], tolerance: float) -> CheckReport:
    computed, expected = np.asarray(computed, dtype=float), np.asarray(expected, dtype=float)
    absolute = np.abs(computed - expected)
    relative = absolute / np.maximum(np.abs(expected), np.finfo(float).tiny)
    return CheckReport(name=name, max_abs_err=float(absolute.max(initial=0.0)),
                       max_rel_err=float(relative.max(initial=0.0)), samples=int(computed.size), tolerance=tolerance)


def _predicate(name: str, margins: t.Sequence[float], samples: int = None) -> CheckReport:
    r"""margins > 0 pass"""
    margins = np.asarray(margins, dtype=float)
    failures = int(np.sum(~(margins > 0.0)))
    return CheckReport(name=name, max_abs_err=float(max(0.0, -margins.min(initial=0.0))), max_rel_err=float(failures),
                       samples=int(margins.size if samples is None else samples), tolerance=0.0,
                       worst_margin=float(margins.min()) if margins.size else None)


# -------------------------------------------------------------------------------------------------------------------- #


def trace_q(E: t.Any, X: t.Any, S: t.Any, t_: float) -> float:
    r"""tr(((E + t X) S)^2)"""
    product = (np.asarray(E, dtype=float) + t_ * np.asarray(X, dtype=float)) @ np.asarray(S, dtype=float)
    return float(np.sum(product * product.T))


def normalized_dual(E: t.Any, X: t.Any, alpha: float) -> np.ndarray:
    r"""S = (E^-1 - alpha^2 / tr(E^-1 X) E^-1 X E^-1) / (n - alpha^2), so that tr(E S) = 1"""
    E, X = np.asarray(E, dtype=float), np.asarray(X, dtype=float)
    n = E.shape[0]
    inverse = scipy.linalg.inv(E)
    scaled = inverse @ X @ inverse
    S = (inverse - alpha ** 2 / float(np.trace(inverse @ X)) * scaled) / (n - alpha ** 2)
    return 0.5 * (S + S.T)


def _sdp_subproblem(sdp: SdpInstance, E: t.Any, alpha: float):
    oracle = det_barrier_oracle(sdp.n)
    A, b, c = sdp.vectorized()
    solution = solve_qcp(oracle, A, b, c, svec(E), alpha).raise_for_status()
    X = smat(solution.x_e)
    S = smat(solution.s_e) / solution.gap
    poly = step_poly_coeffs(*power_sums(eigenvalues=direction_eigs_sdp(E, X)), alpha, sdp.n)
    return oracle, X, S, poly


def q_scaling_check(sdp: SdpInstance, E: t.Any, alpha: float, t_samples: int = 11,
                    tolerance: float = 1e-8) -> CheckReport:
    r"""trace form of q against q~(t) / ((n - alpha^2) p_1)^2 on [0, 2 t_E]"""
    E = np.asarray(E, dtype=float)
    n = sdp.n
    _, X, S, poly = _sdp_subproblem(sdp, E, alpha)
    p1 = float(np.trace(scipy.linalg.solve(E, X, assume_a='pos')))
    grid = np.linspace(0.0, 2.0 * poly.minimizer, t_samples)
    computed = [trace_q(E, X, S, point) for point in grid]
    expected = [poly(point) / ((n - alpha ** 2) * p1) ** 2 for point in grid]
    return _comparison("q_scaling", computed, expected, tolerance)


def membership_equiv_check(sdp: SdpInstance, E: t.Any, alpha: float, beta: float = None,
                           t_grid: t.Sequence[float] = None) -> CheckReport:
    r"""
    (E + t X psd-definite and S interior to K_{E + t X}(beta)*)  <=>  q(t) < 1 / (n - beta^2)

    grid points with q(t) within THRESHOLD_BAND of the threshold are skipped
    """
    E = np.asarray(E, dtype=float)
    n = sdp.n
    beta = relaxed_alpha(alpha) if beta is None else beta
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    oracle, X, S, poly = _sdp_subproblem(sdp, E, alpha)
    if t_grid is None:
        x_norm = local_norm(oracle, svec(E), svec(X))
        low, high = step_interval(poly.a, poly.b, alpha, x_norm)
        t_grid = sorted({*np.linspace(0.0, 2.0 * poly.minimizer, 21), low, high, poly.minimizer})
    threshold = 1.0 / (n - beta ** 2)

    disagreements, compared = 0, 0
    for point in t_grid:
        if not point > -1.0:
            raise DomainError(f"grid point {point} outside (-1, inf)")
        q = trace_q(E, X, S, point)
        if abs(q - threshold) <= THRESHOLD_BAND:
            continue
        shifted = svec(E + point * X)
        left = oracle.is_interior(shifted) \
            and dual_cone_member(QuadCone(shifted, beta, oracle), svec(S)) is Membership.INTERIOR
        compared += 1
        if left != (q < threshold):
            disagreements += 1
            logging.debug(f"membership disagreement at t={point}: q={q}, threshold={threshold}")
    return CheckReport(name="membership_equivalence", max_abs_err=float(disagreements),
                       max_rel_err=float(disagreements), samples=compared, tolerance=0.0)


def decrease_bound_check(E: t.Any, X: t.Any, alpha: float, t_grid: t.Sequence[float] = None,
                         points: int = 20) -> CheckReport:
    r"""q(t) < (1 - 2 t (1 - alpha) / (n - alpha^2) ||X||_E (alpha - t ||X||_E)) / (n - alpha^2) on (0, alpha / ||X||_E]"""
    E, X = np.asarray(E, dtype=float), np.asarray(X, dtype=float)
    n = E.shape[0]
    factor = scipy.linalg.cholesky(E, lower=True)
    local = scipy.linalg.solve_triangular(factor, scipy.linalg.solve_triangular(factor, X, lower=True).T, lower=True)
    x_norm = float(np.linalg.norm(local))
    if x_norm == 0.0:
        raise DomainError("X must be nonzero")
    if t_grid is None:
        t_grid = np.linspace(0.0, alpha / x_norm, points + 1)[1:]
    S = normalized_dual(E, X, alpha)
    slack = n - alpha ** 2
    margins = []
    for point in t_grid:
        bound = (1.0 - 2.0 * point * ((1.0 - alpha) / slack) * x_norm * (alpha - point * x_norm)) / slack
        margins.append(bound - trace_q(E, X, S, point))
    return _predicate("decrease_bound", margins)


def random_boundary_point(E: t.Any, alpha: float, rng: np.random.Generator) -> np.ndarray:
    r"""random X on the boundary of K_E(alpha) with tr(E^-1 X) > 0"""
    E = np.asarray(E, dtype=float)
    n = E.shape[0]
    W = rng.standard_normal((n, n))
    W = W + W.T
    W -= np.trace(W) / n * np.eye(n)
    W /= np.linalg.norm(W)
    U = alpha / n * np.eye(n) + math.sqrt(n - alpha ** 2) / math.sqrt(n) * W
    factor = scipy.linalg.cholesky(E, lower=True)
    scale = rng.uniform(0.5, 2.0)
    return scale * factor @ U @ factor.T


# -------------------------------------------------------------------------------------------------------------------- #


def fd_check(oracle: BarrierOracle, x: t.Any, h: float = None, directions: int = 5, seed: int = 0,
             tolerance: float = 1e-5) -> CheckReport:
    r"""central differences of f against the gradient, of the gradient against Hessian-vector products"""
    x = oracle.check_interior(x)
    h = 1e-5 * (1.0 + np.linalg.norm(x)) if h is None else h
    if not h > 0.0:
        raise DomainError(f"h must be positive (got {h})")
    rng = np.random.default_rng(seed)

    gradient = oracle.gradient(x)
    differences = np.array([
        (oracle.value(x + h * unit) - oracle.value(x - h * unit)) / (2.0 * h) for unit in np.eye(oracle.dim)
    ])
    absolute = [np.linalg.norm(differences - gradient)]
    relative = [absolute[0] / max(np.linalg.norm(gradient), np.finfo(float).tiny)]

    for _ in range(directions):
        v = rng.standard_normal(oracle.dim)
        v /= np.linalg.norm(v)
        analytic = oracle.hessian_apply(x, v)
        difference = (oracle.gradient(x + h * v) - oracle.gradient(x - h * v)) / (2.0 * h)
        absolute.append(np.linalg.norm(difference - analytic))
        relative.append(absolute[-1] / max(np.linalg.norm(analytic), np.finfo(float).tiny))

    return CheckReport(name="finite_differences", max_abs_err=float(max(absolute)), max_rel_err=float(max(relative)),
                       samples=1 + directions, tolerance=tolerance)


def identity_check(oracle: BarrierOracle, e: t.Any, tolerance: float = 1e-8) -> CheckReport:
    r"""H(e) e = -g(e) and <e, e>_e = n"""
    e = oracle.check_interior(e)
    gradient = oracle.gradient(e)
    residual = np.linalg.norm(oracle.hessian_apply(e, e) + gradient)
    self_inner = local_inner(oracle, e, e, e)
    absolute = [residual, abs(self_inner - oracle.degree)]
    relative = [residual / np.linalg.norm(gradient), absolute[1] / oracle.degree]
    return CheckReport(name="barrier_identities", max_abs_err=float(max(absolute)),
                       max_rel_err=float(max(relative)), samples=2, tolerance=tolerance)


def conjecture_curve(oracle: BarrierOracle, e: t.Any, x_e: t.Any, s_e: t.Any,
                     t_grid: t.Sequence[float]) -> t.List[float]:
    r"""t -> <s, H(e + t x)^-1 s> / <e, s>^2; nan where e + t x is not interior"""
    e, x_e, s_e = oracle.coerce(e), oracle.coerce(x_e), oracle.coerce(s_e)
    denominator = float(e @ s_e) ** 2
    if denominator == 0.0:
        raise DomainError("<e, s> must be nonzero")
    values = []
    for point in t_grid:
        shifted = e + point * x_e
        if not oracle.is_interior(shifted):
            values.append(math.nan)
            continue
        values.append(float(s_e @ oracle.hessian_solve(shifted, s_e)) / denominator)
    return values


def sandwich_check(oracle: BarrierOracle, e: t.Any, samples: int = 1000, seed: int = 0,
                   tol: float = 1e-9) -> CheckReport:
    r"""
    K_e(sqrt(n - 1)) inside the hyperbolicity cone inside K_e(1), sampled

    cone points are random x shifted along e until their smallest eigenvalue is non-negative;
    inner-cone points are e + rho w with w e-orthogonal and rho up to the K_e(sqrt(n - 1)) boundary
    """
    e = oracle.check_interior(e)
    n = oracle.degree
    rng = np.random.default_rng(seed)
    outer = QuadCone(e, 1.0, oracle)
    radius = math.sqrt(n / (n - 1.0))
    misclassified = 0

    for _ in range(samples):
        z = rng.standard_normal(oracle.dim)
        x = z + (abs(rng.standard_normal()) - oracle.direction_eigs(e, z)[0]) * e
        if primal_cone_member(outer, x, tol) is Membership.OUTSIDE:
            misclassified += 1

        w = e_orthogonal_direction(oracle, e, rng)
        x = e + radius * rng.uniform(0.05, 1.0) * w
        eigenvalues = oracle.direction_eigs(e, x)
        if eigenvalues[0] < -tol * (1.0 + np.abs(eigenvalues).max()):
            misclassified += 1

    return CheckReport(name="sandwich", max_abs_err=float(misclassified), max_rel_err=float(misclassified),
                       samples=2 * samples, tolerance=0.0)


# -------------------------------------------------------------------------------------------------------------------- #


def two_step_ratio_check(gaps: t.Sequence[float], n: int, alpha: float) -> CheckReport:
    r"""min(gap_{i+1} / gap_i, gap_{i+2} / gap_{i+1}) <= 1 - kappa / (kappa + sqrt(n)) for every i"""
    gaps = np.asarray(gaps, dtype=float)
    bound = schedule_constants(alpha, n).ratio_bound
    ratios = gaps[1:] / gaps[:-1]
    pairs = np.minimum(ratios[:-1], ratios[1:])
    return _predicate("two_step_ratio", bound + RATIO_SLACK - pairs)


def halving_check(gaps: t.Sequence[float], n: int, alpha: float) -> CheckReport:
    r"""the gap halves within halving_window(alpha, n) iterations of every start that has a full window"""
    gaps = np.asarray(gaps, dtype=float)
    window = halving_window(alpha, n)
    margins = [0.5 * gaps[start] - gaps[start + window] for start in range(gaps.shape[0] - window)]
    return _predicate("halving", margins)


def step_interval_check(oracle: BarrierOracle, A, b, c, e, alpha: float, samples: int = 10,
                        seed: int = 0) -> CheckReport:
    r"""steps drawn from (t_E - delta, t_E + delta) keep e' interior and in swath(beta)"""
    e = oracle.check_interior(e)
    solution = solve_qcp(oracle, A, b, c, e, alpha).raise_for_status()
    x_norm = local_norm(oracle, e, solution.x_e)
    poly = step_poly_coeffs(*oracle.direction_power_sums(e, solution.x_e), alpha, oracle.degree)
    low, high = step_interval(poly.a, poly.b, alpha, x_norm)
    beta = relaxed_alpha(alpha)
    rng = np.random.default_rng(seed)
    failures = 0
    for step in rng.uniform(low, high, samples):
        e_next = (e + step * solution.x_e) / (1.0 + step)
        if not (oracle.is_interior(e_next) and in_swath(oracle, A, b, c, e_next, beta)):
            failures += 1
            logging.debug(f"step {step} in ({low}, {high}) leaves swath({beta:.6g})")
    return CheckReport(name="step_interval", max_abs_err=float(failures), max_rel_err=float(failures),
                       samples=samples, tolerance=0.0)
