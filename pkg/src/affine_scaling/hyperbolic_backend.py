# -*- coding=utf-8 -*-
r"""
hyperbolic-polynomial families and their barrier oracles

The families are a closed enumeration:

    product                 p(x) = x_1 ... x_d                    e = (1, ..., 1)
    second_order            p(x) = x_d^2 - (x_1^2 + ... )         e = (0, ..., 0, 1)
    determinant             p(x) = det(smat(x))                   e = svec(I)
    elementary_symmetric    p(x) = e_k(x_1, ..., x_d)             e = (1, ..., 1)

Eigenvalues of `x` in direction `e` are the roots of `lambda -> p(lambda e - x)`. They come
from the coefficients of the restriction `t -> p(x + t e)`, either by a closed rule or by
interpolation on Chebyshev nodes, and then from the eigenvalues of the companion matrix.
"""
import math
import enum
import logging
import functools
import typing as t
import dataclasses
import numpy as np
import numpy.polynomial.polynomial as npoly
import scipy.linalg
from .exceptions import *
from .conic_core import BarrierOracle, LocalFrame, cholesky_factor
from .sdp_backend import DetBarrierOracle, smat, svec, svec_dim, svec_order
from .util import format_tag


__all__ = [
    'FamilyTag', 'HpFamily', 'HpInstance', 'SampleReport', 'HpBarrierOracle',
    'eval_p', 'hp_barrier_oracle', 'restricted_coeffs', 'direction_eigs_hp', 'power_sums',
    'hyperbolicity_sample_check',
    'EIGENVALUE_TOL',
]


EIGENVALUE_TOL = 1e-6
VANDERMONDE_CONDITION_BOUND = 1e12
LEADING_COEFFICIENT_THRESHOLD = 1e-12
SQRT2 = math.sqrt(2.0)


class FamilyTag(enum.Enum):
    PRODUCT = "product"
    SECOND_ORDER = "second_order"
    DETERMINANT = "determinant"
    ELEMENTARY_SYMMETRIC = "elementary_symmetric"


@dataclasses.dataclass(frozen=True)
class HpFamily:
    tag: FamilyTag
    dim: int
    degree: int
    k: t.Optional[int] = None

    def __post_init__(self):
        if self.degree < 2:
            raise DomainError(f"{self.tag.value}: degree must be at least 2 (got {self.degree})")

    @classmethod
    def product(cls, d: int) -> 'HpFamily':
        return cls(FamilyTag.PRODUCT, d, d)

    @classmethod
    def second_order(cls, d: int) -> 'HpFamily':
        if d < 2:
            raise DomainError(f"second_order needs d >= 2 (got {d})")
        return cls(FamilyTag.SECOND_ORDER, d, 2)

    @classmethod
    def determinant(cls, order: int) -> 'HpFamily':
        return cls(FamilyTag.DETERMINANT, svec_dim(order), order)

    @classmethod
    def elementary_symmetric(cls, d: int, k: int) -> 'HpFamily':
        if not 2 <= k <= d:
            raise DomainError(f"elementary_symmetric needs 2 <= k <= d (got d={d}, k={k})")
        return cls(FamilyTag.ELEMENTARY_SYMMETRIC, d, k, k)

    @classmethod
    def from_params(cls, params: t.Mapping[str, t.Any]) -> 'HpFamily':
        r"""{"family": "elementary_symmetric", "d": 8, "k": 3} and alike"""
        try:
            tag = FamilyTag(format_tag(str(params['family'])))
        except (KeyError, ValueError):
            raise DomainError(f"unknown family {params.get('family')!r} "
                              f"({'|'.join(tag.value for tag in FamilyTag)})")
        try:
            if tag is FamilyTag.PRODUCT:
                return cls.product(int(params['d']))
            elif tag is FamilyTag.SECOND_ORDER:
                return cls.second_order(int(params['d']))
            elif tag is FamilyTag.DETERMINANT:
                return cls.determinant(int(params['n']) if 'n' in params else svec_order(int(params['d'])))
            else:
                return cls.elementary_symmetric(int(params['d']), int(params['k']))
        except KeyError as error:
            raise DomainError(f"family {tag.value!r} is missing parameter {error}")

    def to_params(self) -> t.Dict[str, t.Any]:
        params = {'family': self.tag.value, 'd': self.dim}
        if self.tag is FamilyTag.DETERMINANT:
            params['n'] = self.degree
        elif self.tag is FamilyTag.ELEMENTARY_SYMMETRIC:
            params['k'] = self.k
        return params

    def canonical_direction(self) -> np.ndarray:
        if self.tag is FamilyTag.SECOND_ORDER:
            direction = np.zeros(self.dim)
            direction[-1] = 1.0
            return direction
        elif self.tag is FamilyTag.DETERMINANT:
            return svec(np.eye(self.degree))
        return np.ones(self.dim)

    def coerce(self, x: t.Any) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"{self.tag.value}: expected a vector of length {self.dim}, got shape {x.shape}")
        return x


# -------------------------------------------------------------------------------------------------------------------- #


def _elementary_symmetric(x: np.ndarray, k: int) -> np.ndarray:
    r"""(e_0(x), ..., e_k(x)) by the prefix recurrence"""
    values = np.zeros(k + 1)
    values[0] = 1.0
    for coordinate in x:
        values[1:] = values[1:] + coordinate * values[:-1]
    return values


def _leave_one_out(x: np.ndarray, k: int) -> np.ndarray:
    r"""rows r = 0..k of e_r(x without coordinate i), one column per i"""
    full = _elementary_symmetric(x, k)
    table = np.empty((k + 1, x.shape[0]))
    table[0] = 1.0
    for r in range(1, k + 1):
        table[r] = full[r] - x * table[r - 1]
    return table


def _leave_two_out(x: np.ndarray, k: int) -> np.ndarray:
    r"""e_{k-2}(x without coordinates i and j) for i != j, zero on the diagonal"""
    single = _leave_one_out(x, k)
    pair = np.ones((x.shape[0], x.shape[0]))
    for r in range(1, k - 1):
        pair = single[r][:, None] - x[None, :] * pair
    np.fill_diagonal(pair, 0.0)
    return _symmetric(pair)


def _symmetric(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def _lorentz_signature(d: int) -> np.ndarray:
    signature = -np.ones(d)
    signature[-1] = 1.0
    return signature


def _lorentz_power(x: np.ndarray, power: float) -> t.Tuple[np.ndarray, float]:
    r"""
    x^power in the Jordan algebra of the second-order cone, and its determinant

    x = (x_bar, x_d) has the spectral values x_d +- ||x_bar|| along the axis x_bar / ||x_bar||
    """
    bar, last = x[:-1], x[-1]
    radius = float(np.linalg.norm(bar))
    axis = bar / radius if radius > 0.0 else np.zeros_like(bar)
    upper, lower = (last + radius) ** power, (last - radius) ** power
    return np.append(0.5 * (upper - lower) * axis, 0.5 * (upper + lower)), upper * lower


def _quadratic_representation(w: np.ndarray, determinant: float, signature: np.ndarray, v: np.ndarray) -> np.ndarray:
    r"""P(w) v = 2 <w, v> w - det(w) J v"""
    return 2.0 * float(w @ v) * w - determinant * signature * v


def eval_p(family: HpFamily, x: t.Any) -> float:
    x = family.coerce(x)
    if family.tag is FamilyTag.PRODUCT:
        return float(np.prod(x))
    elif family.tag is FamilyTag.SECOND_ORDER:
        return float(x[-1] * x[-1] - x[:-1] @ x[:-1])
    elif family.tag is FamilyTag.DETERMINANT:
        return float(np.linalg.det(smat(x)))
    return float(_elementary_symmetric(x, family.k)[family.k])


# -------------------------------------------------------------------------------------------------------------------- #


@functools.lru_cache(maxsize=32)
def _interpolation_system(n: int) -> t.Tuple[np.ndarray, np.ndarray, float]:
    r"""Chebyshev nodes of [-1, 1], their monomial Vandermonde matrix and its condition number"""
    nodes = np.cos(np.pi * (2.0 * np.arange(n + 1) + 1.0) / (2.0 * (n + 1)))
    vandermonde = npoly.polyvander(nodes, n)
    for array in (nodes, vandermonde):
        array.setflags(write=False)
    return nodes, vandermonde, float(np.linalg.cond(vandermonde))


def restricted_coeffs(family: HpFamily, x: t.Any, e: t.Any) -> np.ndarray:
    r"""ascending coefficients a_0 .. a_n of t -> p(x + t e)"""
    x, e = family.coerce(x), family.coerce(e)
    n = family.degree

    if family.tag is FamilyTag.PRODUCT:
        coefficients = np.ones(1)
        for constant, slope in zip(x, e):
            coefficients = npoly.polymul(coefficients, [constant, slope])
        return np.pad(coefficients, (0, n + 1 - coefficients.shape[0]))

    if family.tag is FamilyTag.SECOND_ORDER:
        signature = _lorentz_signature(family.dim)
        return np.array([x @ (signature * x), 2.0 * (e @ (signature * x)), e @ (signature * e)])

    # interpolation on t = r * tau, tau on Chebyshev nodes of [-1, 1]
    nodes, vandermonde, condition = _interpolation_system(n)
    if not condition <= VANDERMONDE_CONDITION_BOUND:
        raise NumericalFailure(f"{family.tag.value}: degree {n} interpolation has condition {condition:.2e}")
    radius = 1.0 + np.linalg.norm(x) / np.linalg.norm(e)
    values = np.array([eval_p(family, x + radius * tau * e) for tau in nodes])
    scaled = scipy.linalg.solve(vandermonde, values)
    return scaled / radius ** np.arange(n + 1)


def _leading_coefficient_check(coefficients: np.ndarray) -> None:
    scale = np.abs(coefficients).max(initial=0.0)
    if abs(coefficients[-1]) <= LEADING_COEFFICIENT_THRESHOLD * scale or coefficients[-1] == 0.0:
        raise DegenerateLeadingCoefficient(f"leading coefficient {coefficients[-1]:.3e} (scale {scale:.3e})")


def _companion_roots(coefficients: np.ndarray) -> np.ndarray:
    _leading_coefficient_check(coefficients)
    monic = coefficients / coefficients[-1]
    if monic.shape[0] == 2:
        return np.array([-monic[0]], dtype=complex)
    return np.linalg.eigvals(npoly.polycompanion(monic))


def _imaginary_residual(roots: np.ndarray) -> float:
    r"""largest imaginary part over 1 + max |root|"""
    scale = 1.0 + float(np.max(np.abs(roots), initial=0.0))
    return float(np.max(np.abs(roots.imag), initial=0.0)) / scale


def direction_eigs_hp(family: HpFamily, x: t.Any, e: t.Any, tol: float = EIGENVALUE_TOL) -> np.ndarray:
    r"""roots of lambda -> p(lambda e - x), ascending"""
    x = family.coerce(x)
    roots = _companion_roots(restricted_coeffs(family, -x, e))
    residual = _imaginary_residual(roots)
    if residual > tol:
        raise NonRealEigenvalues(f"{family.tag.value}: imaginary residual {residual:.3e} exceeds {tol:.1e}")
    return np.sort(roots.real)


def power_sums(*, eigenvalues: t.Any = None, coefficients: t.Any = None) -> t.Tuple[float, float, float, float]:
    r"""
    (p_1, p_2, p_3, p_4), the first four power sums of the eigenvalues

    `coefficients` are the ascending a_0 .. a_n of t -> p(x + t e) = a_n (t + lambda_1) ... (t + lambda_n),
    so e_k(lambda) = a_{n-k} / a_n and the Newton identities apply.
    """
    if (eigenvalues is None) == (coefficients is None):
        raise DomainError("pass exactly one of eigenvalues or coefficients")

    if eigenvalues is not None:
        values = np.asarray(eigenvalues, dtype=float)
        return tuple(float(np.sum(values ** power)) for power in range(1, 5))

    coefficients = np.asarray(coefficients, dtype=float)
    _leading_coefficient_check(coefficients)
    n = coefficients.shape[0] - 1
    e1, e2, e3, e4 = (coefficients[n - k] / coefficients[n] if k <= n else 0.0 for k in range(1, 5))
    return (
        e1,
        e1 ** 2 - 2.0 * e2,
        e1 ** 3 - 3.0 * e1 * e2 + 3.0 * e3,
        e1 ** 4 - 4.0 * e1 ** 2 * e2 + 2.0 * e2 ** 2 + 4.0 * e1 * e3 - 4.0 * e4,
    )


@dataclasses.dataclass(frozen=True)
class SampleReport:
    trials: int
    failures: int
    max_imaginary_residual: float


def hyperbolicity_sample_check(family: HpFamily, e: t.Any, trials: int, seed: int,
                               tol: float = EIGENVALUE_TOL) -> SampleReport:
    if trials < 1:
        raise DomainError(f"trials must be at least 1 (got {trials})")
    e = family.coerce(e)
    rng = np.random.default_rng(seed)
    failures, worst = 0, 0.0
    for _ in range(trials):
        x = rng.standard_normal(family.dim)
        try:
            residual = _imaginary_residual(_companion_roots(restricted_coeffs(family, -x, e)))
        except NumericalFailure as error:
            logging.debug(f"sample check: {error}")
            failures += 1
            continue
        worst = max(worst, residual)
        if residual > tol:
            failures += 1
    return SampleReport(trials=trials, failures=failures, max_imaginary_residual=worst)


# -------------------------------------------------------------------------------------------------------------------- #


class _DiagonalFrame(LocalFrame):
    def __init__(self, e: np.ndarray):
        self.e = e

    def to_local(self, x):
        return x / self.e

    def from_local(self, u):
        return u * self.e

    def dual_to_local(self, s):
        return s * self.e

    def dual_from_local(self, w):
        return w / self.e


class _LorentzFrame(LocalFrame):
    r"""
    R = sqrt(2) P(e^-1/2) for the quadratic representation P of the second-order cone

    R R^T = 2 P(e^-1) = H(e) and R^T e = sqrt(2) (0, ..., 0, 1)
    """

    def __init__(self, e: np.ndarray, signature: np.ndarray):
        self.signature = signature
        self.root = _lorentz_power(e, 0.5)
        self.inverse_root = _lorentz_power(e, -0.5)

    def _apply(self, power: t.Tuple[np.ndarray, float], v: np.ndarray) -> np.ndarray:
        return _quadratic_representation(*power, self.signature, v)

    def to_local(self, x):
        return SQRT2 * self._apply(self.inverse_root, x)

    def from_local(self, u):
        return self._apply(self.root, u) / SQRT2

    def dual_to_local(self, s):
        return self._apply(self.root, s) / SQRT2

    def dual_from_local(self, w):
        return SQRT2 * self._apply(self.inverse_root, w)

    def spectral_values(self, x: np.ndarray) -> np.ndarray:
        r"""eigenvalues of x in direction e, read off P(e^-1/2) x in direction (0, ..., 0, 1)"""
        z = self._apply(self.inverse_root, x)
        radius = float(np.linalg.norm(z[:-1]))
        return np.array([z[-1] - radius, z[-1] + radius])


class _EulerSplitFrame(LocalFrame):
    r"""
    x = a e + Q z  with  a = <grad p, x> / (k p)  and Q an orthonormal basis of grad p's complement

    Euler's identities <grad p, e> = k p and hess p e = (k - 1) grad p turn ||x||_e^2 into
    k a^2 + z^T G z with G = -Q^T hess p Q / p; the frame is (sqrt(k) a, L^T z) for G = L L^T.
    """

    def __init__(self, e: np.ndarray, k: int, p: float, grad: np.ndarray, hess: np.ndarray):
        self.e = e.copy()
        self.root_k = math.sqrt(k)
        self.normal = grad / (k * p)
        self.basis = scipy.linalg.null_space(grad[None, :])
        self.factor = cholesky_factor(_symmetric(-(self.basis.T @ hess @ self.basis) / p))

    def to_local(self, x):
        a = float(self.normal @ x)
        z = self.basis.T @ (x - a * self.e)
        return np.concatenate([[self.root_k * a], self.factor.T @ z])

    def from_local(self, u):
        z = scipy.linalg.solve_triangular(self.factor.T, u[1:], lower=False)
        return (u[0] / self.root_k) * self.e + self.basis @ z

    def dual_to_local(self, s):
        tangent = scipy.linalg.solve_triangular(self.factor, self.basis.T @ s, lower=True)
        return np.concatenate([[float(self.e @ s) / self.root_k], tangent])

    def dual_from_local(self, w):
        tangent = self.basis @ (self.factor @ w[1:])
        return (self.root_k * w[0]) * self.normal + tangent - float(self.e @ tangent) * self.normal


class HpBarrierOracle(BarrierOracle):
    r"""f = -ln p for one of the families; the determinant family runs on the semidefinite oracle"""

    def __init__(self, family: HpFamily):
        super().__init__(dim=family.dim, degree=family.degree)
        self.family = family
        self.name = family.tag.value
        self._delegate = DetBarrierOracle(family.degree) if family.tag is FamilyTag.DETERMINANT else None
        self._signature = _lorentz_signature(family.dim) if family.tag is FamilyTag.SECOND_ORDER else None
        self._frame_cache: t.Optional[t.Tuple[bytes, _EulerSplitFrame]] = None

    def __repr__(self):
        return f"<{type(self).__name__} {self.family.to_params()}>"

    def canonical_direction(self) -> np.ndarray:
        return self.family.canonical_direction()

    def is_interior(self, e) -> bool:
        e = self.coerce(e)
        tag = self.family.tag
        if tag is FamilyTag.PRODUCT:
            return bool(np.all(e > 0.0))
        elif tag is FamilyTag.SECOND_ORDER:
            return bool(e[-1] > 0.0 and e[-1] * e[-1] - e[:-1] @ e[:-1] > 0.0)
        elif tag is FamilyTag.DETERMINANT:
            return self._delegate.is_interior(e)
        return bool(np.all(_elementary_symmetric(e, self.family.k)[1:] > 0.0))

    def value(self, e) -> float:
        e = self.check_interior(e)
        if self._delegate is not None:
            return self._delegate.value(e)
        return -math.log(eval_p(self.family, e))

    # the elementary-symmetric pieces: p, grad p, hess p
    def _esym_derivatives(self, e: np.ndarray) -> t.Tuple[float, np.ndarray, np.ndarray]:
        k = self.family.k
        p = _elementary_symmetric(e, k)[k]
        grad = _leave_one_out(e, k)[k - 1]
        hess = _leave_two_out(e, k)
        return p, grad, hess

    def _esym_frame(self, e: np.ndarray) -> _EulerSplitFrame:
        key = e.tobytes()
        cached = self._frame_cache
        if cached is None or cached[0] != key:
            cached = self._frame_cache = (key, _EulerSplitFrame(e, self.family.k, *self._esym_derivatives(e)))
        return cached[1]

    def gradient(self, e) -> np.ndarray:
        e = self.check_interior(e)
        tag = self.family.tag
        if tag is FamilyTag.PRODUCT:
            return -1.0 / e
        elif tag is FamilyTag.SECOND_ORDER:
            return -2.0 * self._signature * e / eval_p(self.family, e)
        elif tag is FamilyTag.DETERMINANT:
            return self._delegate.gradient(e)
        p, grad, _ = self._esym_derivatives(e)
        return -grad / p

    def hessian_matrix(self, e) -> np.ndarray:
        e = self.check_interior(e)
        tag = self.family.tag
        if tag is FamilyTag.PRODUCT:
            return np.diag(1.0 / e ** 2)
        elif tag is FamilyTag.SECOND_ORDER:
            p = eval_p(self.family, e)
            reflected = self._signature * e
            return -2.0 * np.diag(self._signature) / p + 4.0 * np.outer(reflected, reflected) / p ** 2
        elif tag is FamilyTag.DETERMINANT:
            return self._delegate.hessian_matrix(e)
        p, grad, hess = self._esym_derivatives(e)
        return _symmetric(-hess / p + np.outer(grad, grad) / p ** 2)

    def hessian_apply(self, e, v) -> np.ndarray:
        e, v = self.check_interior(e), self.coerce(v)
        tag = self.family.tag
        if tag is FamilyTag.PRODUCT:
            return v / e ** 2
        elif tag is FamilyTag.DETERMINANT:
            return self._delegate.hessian_apply(e, v)
        frame = self.local_frame(e)
        return frame.dual_from_local(frame.to_local(v))

    def hessian_solve(self, e, w) -> np.ndarray:
        e, w = self.check_interior(e), self.coerce(w)
        tag = self.family.tag
        if tag is FamilyTag.PRODUCT:
            return w * e ** 2
        elif tag is FamilyTag.DETERMINANT:
            return self._delegate.hessian_solve(e, w)
        frame = self.local_frame(e)
        return frame.from_local(frame.dual_to_local(w))

    def direction_eigs(self, e, x) -> np.ndarray:
        e, x = self.check_interior(e), self.coerce(x)
        tag = self.family.tag
        if tag is FamilyTag.PRODUCT:
            return np.sort(x / e)
        elif tag is FamilyTag.SECOND_ORDER:
            return _LorentzFrame(e, self._signature).spectral_values(x)
        elif tag is FamilyTag.DETERMINANT:
            return self._delegate.direction_eigs(e, x)
        return direction_eigs_hp(self.family, x, e)

    def direction_power_sums(self, e, x) -> t.Tuple[float, float, float, float]:
        if self.family.tag is FamilyTag.ELEMENTARY_SYMMETRIC:
            e, x = self.check_interior(e), self.coerce(x)
            return power_sums(coefficients=restricted_coeffs(self.family, x, e))
        return super().direction_power_sums(e, x)

    def local_frame(self, e) -> LocalFrame:
        e = self.check_interior(e)
        tag = self.family.tag
        if tag is FamilyTag.PRODUCT:
            return _DiagonalFrame(e)
        elif tag is FamilyTag.SECOND_ORDER:
            return _LorentzFrame(e, self._signature)
        elif tag is FamilyTag.DETERMINANT:
            return self._delegate.local_frame(e)
        return self._esym_frame(e)


def hp_barrier_oracle(family: HpFamily) -> HpBarrierOracle:
    return HpBarrierOracle(family)


# -------------------------------------------------------------------------------------------------------------------- #


@dataclasses.dataclass(frozen=True)
class HpInstance:
    r"""
    min <c, x>  s.t.  A x = b,  x in the closed hyperbolicity cone
    """
    family: HpFamily
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    e0: np.ndarray
    metadata: t.Dict[str, t.Any] = dataclasses.field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'c', np.asarray(self.c, dtype=float).reshape(-1))
        object.__setattr__(self, 'A', np.atleast_2d(np.asarray(self.A, dtype=float)))
        object.__setattr__(self, 'b', np.asarray(self.b, dtype=float).reshape(-1))
        object.__setattr__(self, 'e0', np.asarray(self.e0, dtype=float).reshape(-1))

    @property
    def m(self) -> int:
        return self.A.shape[0]

    def oracle(self) -> HpBarrierOracle:
        return hp_barrier_oracle(self.family)

    def validate(self, tol: float = 1e-9) -> 'HpInstance':
        d = self.family.dim
        if self.A.shape[1] != d or self.c.shape != (d,) or self.e0.shape != (d,):
            raise DimensionMismatch(f"A {self.A.shape}, c {self.c.shape}, e0 {self.e0.shape} for dimension {d}")
        if self.m == 0 or self.b.shape != (self.m,):
            raise DimensionMismatch(f"need one right-hand side per constraint (m={self.m}, b={self.b.shape})")
        if not np.any(self.b):
            raise InvariantViolation("b must be nonzero")
        if np.linalg.matrix_rank(self.A) < self.m:
            raise InvariantViolation("A must have full row rank")
        if np.linalg.norm(self.A @ self.e0 - self.b) > tol * (1.0 + np.linalg.norm(self.b)):
            raise InvariantViolation("A e0 != b")
        if not self.oracle().is_interior(self.e0):
            raise InvariantViolation("e0 is not interior to the hyperbolicity cone")
        coefficients, *_ = scipy.linalg.lstsq(self.A.T, self.c)
        if np.linalg.norm(self.A.T @ coefficients - self.c) <= tol * (1.0 + np.linalg.norm(self.c)):
            raise InvariantViolation("c lies in the row space of A")
        return self
