# -*- coding=utf-8 -*-
r"""
dense symmetric matrices, the -ln det barrier and semidefinite instances

Matrices travel as `svec` coordinates: the upper triangle row by row, off-diagonal entries
multiplied by sqrt(2), so that `svec(X) @ svec(Y) == trace(X @ Y)`.
"""
import math
import functools
import typing as t
import dataclasses
import numpy as np
import scipy.linalg
from .exceptions import *
from .conic_core import BarrierOracle, LocalFrame, cholesky_factor


__all__ = [
    'svec', 'smat', 'svec_dim', 'svec_order', 'svec_basis',
    'SdpInstance', 'CongruenceFrame', 'DetBarrierOracle', 'det_barrier_oracle', 'direction_eigs_sdp',
]


SQRT2 = math.sqrt(2.0)


def svec_dim(n: int) -> int:
    return n * (n + 1) // 2


def svec_order(d: int) -> int:
    n = (math.isqrt(8 * d + 1) - 1) // 2
    if svec_dim(n) != d:
        raise DimensionMismatch(f"{d} is not a triangular number")
    return n


@functools.lru_cache(maxsize=32)
def _triu(n: int) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    rows, cols = np.triu_indices(n)
    scale = np.where(rows == cols, 1.0, SQRT2)
    for array in (rows, cols, scale):
        array.setflags(write=False)
    return rows, cols, scale


@functools.lru_cache(maxsize=32)
def svec_basis(n: int) -> np.ndarray:
    r"""W with svec(X) = W @ X.ravel() and X.ravel() = W.T @ svec(X)"""
    rows, cols, _ = _triu(n)
    basis = np.zeros((svec_dim(n), n * n))
    for k, (i, j) in enumerate(zip(rows, cols)):
        if i == j:
            basis[k, i * n + i] = 1.0
        else:
            basis[k, i * n + j] = basis[k, j * n + i] = 1.0 / SQRT2
    basis.setflags(write=False)
    return basis


def svec(matrix: t.Any) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {matrix.shape}")
    rows, cols, scale = _triu(matrix.shape[0])
    return matrix[rows, cols] * scale


def smat(vector: t.Any) -> np.ndarray:
    vector = np.asarray(vector, dtype=float)
    if vector.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {vector.shape}")
    n = svec_order(vector.shape[0])
    rows, cols, scale = _triu(n)
    matrix = np.zeros((n, n))
    matrix[rows, cols] = vector / scale
    matrix[cols, rows] = vector / scale
    return matrix


def _symmetric(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def direction_eigs_sdp(E: t.Any, X: t.Any) -> np.ndarray:
    r"""eigenvalues of E^-1/2 X E^-1/2 (ascending), through the Cholesky factor of E"""
    E, X = np.asarray(E, dtype=float), np.asarray(X, dtype=float)
    if E.shape != X.shape:
        raise DimensionMismatch(f"shapes {E.shape} and {X.shape} differ")
    factor = cholesky_factor(E)
    half = scipy.linalg.solve_triangular(factor, X, lower=True)
    congruent = scipy.linalg.solve_triangular(factor, half.T, lower=True)
    return scipy.linalg.eigvalsh(_symmetric(congruent))


# -------------------------------------------------------------------------------------------------------------------- #


class CongruenceFrame(LocalFrame):
    r"""E = L L^T; the frame maps X to L^-1 X L^-T, so E itself becomes the identity"""

    def __init__(self, factor: np.ndarray):
        self.factor = factor

    def _inward(self, matrix: np.ndarray) -> np.ndarray:
        half = scipy.linalg.solve_triangular(self.factor, matrix, lower=True)
        return _symmetric(scipy.linalg.solve_triangular(self.factor, half.T, lower=True))

    def _outward(self, matrix: np.ndarray) -> np.ndarray:
        half = scipy.linalg.solve_triangular(self.factor.T, matrix, lower=False)
        return _symmetric(scipy.linalg.solve_triangular(self.factor.T, half.T, lower=False))

    def to_local(self, x):
        return svec(self._inward(smat(x)))

    def from_local(self, u):
        return svec(_symmetric(self.factor @ smat(u) @ self.factor.T))

    def dual_to_local(self, s):
        return svec(_symmetric(self.factor.T @ smat(s) @ self.factor))

    def dual_from_local(self, w):
        return svec(self._outward(smat(w)))


class DetBarrierOracle(BarrierOracle):
    name = "semidefinite"

    def __init__(self, order: int):
        if order < 2:
            raise DomainError(f"matrix order must be at least 2 (got {order})")
        super().__init__(dim=svec_dim(order), degree=order)
        self.order = order

    def _factor(self, e) -> np.ndarray:
        return cholesky_factor(smat(self.coerce(e)))

    def _inverse(self, e) -> np.ndarray:
        factor = self._factor(e)
        return _symmetric(scipy.linalg.cho_solve((factor, True), np.eye(self.order)))

    def is_interior(self, e) -> bool:
        try:
            self._factor(e)
        except NotInterior:
            return False
        return True

    def canonical_direction(self) -> np.ndarray:
        return svec(np.eye(self.order))

    def value(self, e) -> float:
        return -2.0 * float(np.sum(np.log(np.diag(self._factor(e)))))

    def gradient(self, e) -> np.ndarray:
        return -svec(self._inverse(e))

    def hessian_apply(self, e, v) -> np.ndarray:
        inverse = self._inverse(e)
        return svec(_symmetric(inverse @ smat(self.coerce(v)) @ inverse))

    def hessian_solve(self, e, w) -> np.ndarray:
        E = smat(self.coerce(e))
        return svec(_symmetric(E @ smat(self.coerce(w)) @ E))

    def hessian_matrix(self, e) -> np.ndarray:
        inverse = self._inverse(e)
        basis = svec_basis(self.order)
        return _symmetric(basis @ np.kron(inverse, inverse) @ basis.T)

    def direction_eigs(self, e, x) -> np.ndarray:
        return direction_eigs_sdp(smat(self.coerce(e)), smat(self.coerce(x)))

    def local_frame(self, e) -> LocalFrame:
        return CongruenceFrame(self._factor(e))


def det_barrier_oracle(order: int) -> DetBarrierOracle:
    return DetBarrierOracle(order)


# -------------------------------------------------------------------------------------------------------------------- #


@dataclasses.dataclass(frozen=True)
class SdpInstance:
    r"""
    min tr(C X)  s.t.  tr(A_i X) = b_i,  X psd
    """
    C: np.ndarray
    constraints: t.Tuple[np.ndarray, ...]
    b: np.ndarray
    metadata: t.Dict[str, t.Any] = dataclasses.field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'C', np.asarray(self.C, dtype=float))
        object.__setattr__(self, 'constraints', tuple(np.asarray(a, dtype=float) for a in self.constraints))
        object.__setattr__(self, 'b', np.asarray(self.b, dtype=float).reshape(-1))

    @property
    def n(self) -> int:
        return self.C.shape[0]

    @property
    def m(self) -> int:
        return len(self.constraints)

    def validate(self, tol: float = 1e-10) -> 'SdpInstance':
        n = self.n
        for index, matrix in enumerate((self.C, *self.constraints)):
            if matrix.shape != (n, n):
                raise DimensionMismatch(f"matrix {index} has shape {matrix.shape}, expected {(n, n)}")
            if not np.allclose(matrix, matrix.T, rtol=0.0, atol=tol * (1.0 + np.abs(matrix).max(initial=0.0))):
                raise InvariantViolation(f"matrix {index} is not symmetric")
        if self.m == 0 or self.b.shape != (self.m,):
            raise DimensionMismatch(f"need one right-hand side per constraint (m={self.m}, b={self.b.shape})")
        if not np.any(self.b):
            raise InvariantViolation("b must be nonzero")
        A = self.a_matrix()
        if np.linalg.matrix_rank(A) < self.m:
            raise InvariantViolation("constraint matrices are linearly dependent")
        c = self.c_vector()
        coefficients, *_ = scipy.linalg.lstsq(A.T, c)
        if np.linalg.norm(A.T @ coefficients - c) <= 1e-9 * (1.0 + np.linalg.norm(c)):
            raise InvariantViolation("C lies in the span of the constraint matrices")
        return self

    def a_matrix(self) -> np.ndarray:
        return np.vstack([svec(matrix) for matrix in self.constraints]) if self.constraints \
            else np.zeros((0, svec_dim(self.n)))

    def c_vector(self) -> np.ndarray:
        return svec(self.C)

    def vectorized(self) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray]:
        r"""(A, b, c) over svec coordinates"""
        return self.a_matrix(), self.b.copy(), self.c_vector()

    def apply(self, X: t.Any) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return np.array([float(np.sum(matrix * X)) for matrix in self.constraints])

    def adjoint(self, y: t.Any) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        return sum((value * matrix for value, matrix in zip(y, self.constraints)), np.zeros((self.n, self.n)))
