# -*- coding=utf-8 -*-
r"""
reproducible instances with a start point on the central path

The start point e0 and a dual point y0 are drawn first; the objective is then chosen as
c = A^T y0 - mu g(e0), which makes e0 the central-path point for barrier parameter mu and hence
a member of swath(alpha) for every alpha.
"""
import logging
import typing as t
import numpy as np
from ..exceptions import *
from ..conic_core import e_orthogonal_direction
from ..sdp_backend import SdpInstance, svec, svec_dim
from ..hyperbolic_backend import FamilyTag, HpFamily, HpInstance, hp_barrier_oracle


__all__ = ['gen_central_path_sdp', 'gen_hp_instance', 'MAX_RETRIES']


MAX_RETRIES = 10


def _random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    matrix = rng.standard_normal((n, n))
    return 0.5 * (matrix + matrix.T)


def gen_central_path_sdp(n: int, m: int, mu: float = 1.0, seed: int = 0) -> t.Tuple[SdpInstance, np.ndarray]:
    if n < 2:
        raise DomainError(f"n must be at least 2 (got {n})")
    if not 1 <= m <= svec_dim(n) - 1:
        raise DomainError(f"m must lie in 1..{svec_dim(n) - 1} for n={n} (got {m})")
    if not mu > 0.0:
        raise DomainError(f"mu must be positive (got {mu})")
    rng = np.random.default_rng(seed)

    rotation, _ = np.linalg.qr(rng.standard_normal((n, n)))
    E0 = rotation @ np.diag(rng.uniform(0.5, 2.0, n)) @ rotation.T
    E0 = 0.5 * (E0 + E0.T)

    for attempt in range(MAX_RETRIES):
        constraints = tuple(_random_symmetric(rng, n) for _ in range(m))
        if np.linalg.matrix_rank(np.vstack([svec(matrix) for matrix in constraints])) == m:
            break
        logging.debug(f"generator: dependent constraints on attempt {attempt + 1}, resampling")
    else:
        raise RetryExhausted(f"no independent constraint set after {MAX_RETRIES} attempts")

    y0 = rng.standard_normal(m)
    inverse = np.linalg.inv(E0)
    C = sum(value * matrix for value, matrix in zip(y0, constraints)) + mu * 0.5 * (inverse + inverse.T)
    b = np.array([float(np.sum(matrix * E0)) for matrix in constraints])
    instance = SdpInstance(C=C, constraints=constraints, b=b,
                           metadata={'generator': 'central_path_sdp', 'n': n, 'm': m, 'mu': mu, 'seed': seed})
    return instance.validate(), E0


def gen_hp_instance(family: HpFamily, m: int, mu: float = 1.0, seed: int = 0,
                    radius: float = 0.5) -> t.Tuple[HpInstance, np.ndarray]:
    r"""
    e0 is the canonical direction moved by `radius` along a random unit e-orthogonal direction,
    which stays inside the Dikin ball and hence in the cone

    the determinant family reuses the semidefinite generator, so both backends see the same data
    """
    d = family.dim
    if not 1 <= m <= d - 1:
        raise DomainError(f"m must lie in 1..{d - 1} for d={d} (got {m})")
    if not mu > 0.0:
        raise DomainError(f"mu must be positive (got {mu})")
    if not 0.0 <= radius < 1.0:
        raise DomainError(f"radius must lie in [0, 1) (got {radius})")
    metadata = {'generator': 'hp_instance', 'm': m, 'mu': mu, 'seed': seed}

    if family.tag is FamilyTag.DETERMINANT:
        sdp, E0 = gen_central_path_sdp(family.degree, m, mu, seed)
        A, b, c = sdp.vectorized()
        instance = HpInstance(family=family, c=c, A=A, b=b, e0=svec(E0), metadata=metadata)
        return instance.validate(), instance.e0

    rng = np.random.default_rng(seed)
    oracle = hp_barrier_oracle(family)
    canonical = family.canonical_direction()
    e0 = canonical + radius * e_orthogonal_direction(oracle, canonical, rng) if radius > 0.0 else canonical

    for attempt in range(MAX_RETRIES):
        A = rng.standard_normal((m, d))
        if np.linalg.matrix_rank(A) == m:
            break
        logging.debug(f"generator: rank-deficient A on attempt {attempt + 1}, resampling")
    else:
        raise RetryExhausted(f"no full-rank A after {MAX_RETRIES} attempts")

    y0 = rng.standard_normal(m)
    c = A.T @ y0 - mu * oracle.gradient(e0)
    instance = HpInstance(family=family, c=c, A=A, b=A @ e0, e0=e0, metadata=metadata)
    return instance.validate(), e0
