from __future__ import annotations

import sys
import math
import os.path as p

import numpy as np
import pytest

sys.path.insert(0, p.join(p.dirname(p.dirname(p.abspath(__file__))), "src"))

from affine_scaling.sdp_backend import SdpInstance, det_barrier_oracle, svec  # noqa: E402

SQRT7 = math.sqrt(7.0)

DIAG2_SDPA = """\
" diag2: min x11 + 2 x22  s.t.  x11 + x22 = 2
1
1
2
2
0 1 1 1 1
0 1 2 2 2
1 1 1 1 1
1 1 2 2 1
"""


@pytest.fixture
def diag2() -> SdpInstance:
    return SdpInstance(C=np.diag([1.0, 2.0]), constraints=(np.eye(2),), b=np.array([2.0])).validate()


@pytest.fixture
def diag2_problem(diag2: SdpInstance):
    r"""(oracle, A, b, c, e) of the two-by-two instance at E = I"""
    A, b, c = diag2.vectorized()
    return det_barrier_oracle(2), A, b, c, svec(np.eye(2))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20231017)
