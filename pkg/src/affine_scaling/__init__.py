# -*- coding=utf-8 -*-
r"""
primal affine-scaling interior-point method for semidefinite and hyperbolic programming
"""

__author__ = "PlayerG9"
__copyright__ = "Copyright 2023, PlayerG9"
__credits__ = ["PlayerG9"]
__license__ = None
__maintainer__ = "PlayerG9"
__email__ = None
__status__ = "Prototype"  # Prototype, Development, Production
__description__ = "affine-scaling solver for semidefinite and hyperbolic programs"
__version_info__ = (0, 1, 0)
__version__ = '.'.join(map(str, __version_info__))

from .exceptions import *
from .logging_context import LoggingContext, LoggingContextFilter
from .conic_core import (
    BarrierOracle, QuadCone, Membership, ScheduleConstants,
    local_inner, local_norm, primal_cone_member, dual_cone_member, schedule_constants,
)
from .sdp_backend import SdpInstance, det_barrier_oracle, direction_eigs_sdp, svec, smat
from .hyperbolic_backend import (
    FamilyTag, HpFamily, HpInstance,
    eval_p, hp_barrier_oracle, restricted_coeffs, direction_eigs_hp, power_sums, hyperbolicity_sample_check,
)
from .qcp_subproblem import SubproblemStatus, SubproblemSolution, assemble_first_order_system, solve_qcp, in_swath
from .driver import (
    StepMode, SolverConfig, IterationRecord, RunStatus, SolveResult,
    step_poly_coeffs, step_length, next_iterate, duality_gap, run, alpha_reduction_run,
)
from .config import load_solver_config
