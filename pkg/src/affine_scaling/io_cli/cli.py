# -*- coding=utf-8 -*-
r"""
affine-scaling solver for semidefinite and hyperbolic programs
"""
import json
import logging
import typing as t
import os.path as p
import argparse as ap
import numpy as np
import better_exceptions
from .. import __version__
from ..exceptions import *
from ..logging_context import LoggingContextFilter
from ..config import load_solver_config
from ..conic_core import BarrierOracle
from ..sdp_backend import SdpInstance, det_barrier_oracle, smat, svec
from ..hyperbolic_backend import HpFamily, hp_barrier_oracle
from ..driver import RunStatus, StepMode, run, alpha_reduction_run
from .. import diagnostics
from .sdpa import parse_sdpa, write_sdpa
from .hpjson import parse_hp_json, dump_hp_json
from .generators import gen_central_path_sdp, gen_hp_instance
from .traces import export_trace


__all__ = ['Problem', 'load_problem', 'build_parser', 'configure_logging', 'main', 'EXIT_CODES']


LOG_LEVELS = ["DEBUG", "INFO", "WARN", "WARNING", "ERROR", "CRITICAL"]

EXIT_CODES = {
    RunStatus.CONVERGED: 0,
    RunStatus.MAX_ITERS: 0,
    RunStatus.NOT_IN_SWATH: NotInSwath.exit_code,
    RunStatus.NUMERICAL_FAILURE: NumericalFailure.exit_code,
}


class Namespace:
    def __repr__(self):
        return f"<{vars(self)}>"

    debug: bool
    logging: t.Literal["DEBUG", "INFO", "WARN", "WARNING", "ERROR", "CRITICAL"]
    env: t.Optional[str]
    command: str


class Problem(t.NamedTuple):
    name: str
    backend: str
    oracle: BarrierOracle
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    e0: np.ndarray
    sdp: t.Optional[SdpInstance] = None


def start_file(path: str) -> str:
    return f"{path}.start.json"


def load_problem(path: str) -> Problem:
    r"""SDPA files (.dat-s) with their `<file>.start.json` sidecar, or HP JSON files"""
    name = p.splitext(p.basename(path))[0]
    try:
        with open(path, 'r', encoding='utf-8') as file:
            text = file.read()
    except FileNotFoundError:
        raise DomainError(f"instance file {path!r} could not be found") from None

    if path.endswith('.json'):
        instance = parse_hp_json(text)
        oracle = hp_barrier_oracle(instance.family)
        return Problem(name, instance.family.tag.value, oracle, instance.A, instance.b, instance.c, instance.e0)

    sdp = parse_sdpa(text)
    try:
        with open(start_file(path), 'r', encoding='utf-8') as file:
            start = json.load(file)
    except FileNotFoundError:
        raise DomainError(f"SDPA instance {path!r} has no start point ({start_file(path)!r})") from None
    except json.JSONDecodeError as error:
        raise ParseError(f"{start_file(path)}: {error.msg}", error.lineno) from None
    if not isinstance(start, dict) or 'E0' not in start:
        raise ParseError(f"{start_file(path)}: missing key 'E0'")
    try:
        E0 = np.array(start['E0'], dtype=float)
    except (TypeError, ValueError) as error:
        raise ParseError(f"{start_file(path)}: 'E0' is not a matrix ({error})") from None
    if E0.shape != (sdp.n, sdp.n):
        raise ParseError(f"{start_file(path)}: 'E0' has shape {E0.shape}, expected {(sdp.n, sdp.n)}")
    A, b, c = sdp.vectorized()
    return Problem(name, "sdp", det_barrier_oracle(sdp.n), A, b, c, svec(E0), sdp)


# -------------------------------------------------------------------------------------------------------------------- #


def build_parser() -> ap.ArgumentParser:
    parser = ap.ArgumentParser(
        prog="affine-scaling", description=__doc__, formatter_class=ap.ArgumentDefaultsHelpFormatter
    )
    parser.add_argument('-v', '--version', action="version", version=__version__)
    parser.add_argument('--logging', choices=LOG_LEVELS,
                        help="how much information to output")
    parser.add_argument('--debug', action=ap.BooleanOptionalAction,
                        help="log records of other modules as well")
    parser.add_argument('--env', type=p.abspath, default=None,
                        help="dotenv file with AFFINE_SCALING_* settings (default: ./.env if present)")
    commands = parser.add_subparsers(dest='command', required=True)

    solve = commands.add_parser('solve', help="run the affine-scaling iteration",
                                formatter_class=ap.ArgumentDefaultsHelpFormatter)
    solve.add_argument('file', type=p.abspath, help="instance (.dat-s or .json)")
    solve.add_argument('--alpha', type=float, help="quadratic-cone parameter in (0, 1)")
    solve.add_argument('--tol', type=float, help="relative duality-gap tolerance")
    solve.add_argument('--max-iters', type=int, help="iteration limit")
    solve.add_argument('--step', choices=[mode.value for mode in StepMode], help="step rule")
    solve.add_argument('--trace', type=p.abspath, help="write the iteration trace here")
    solve.add_argument('--format', choices=["csv", "json"], default="json", help="trace format")

    generate = commands.add_parser('generate', help="write a generated instance and its start point",
                                   formatter_class=ap.ArgumentDefaultsHelpFormatter)
    generate.add_argument('kind', choices=["sdp", "hp"])
    generate.add_argument('--n', type=int, required=True, help="matrix order (sdp, determinant) or dimension (hp)")
    generate.add_argument('--m', type=int, required=True, help="number of equality constraints")
    generate.add_argument('--family', default="product",
                          help="hp family: product|second_order|determinant|elementary_symmetric")
    generate.add_argument('--k', type=int, default=2, help="degree of the elementary_symmetric family")
    generate.add_argument('--mu', type=float, default=1.0, help="central-path parameter of the start point")
    generate.add_argument('--seed', type=int, required=True)
    generate.add_argument('--out', type=p.abspath, required=True)

    reduce = commands.add_parser('reduce-alpha', help="shrink alpha with safe fixed steps",
                                 formatter_class=ap.ArgumentDefaultsHelpFormatter)
    reduce.add_argument('file', type=p.abspath)
    reduce.add_argument('--alpha0', type=float, required=True)
    reduce.add_argument('--target', type=float, required=True)

    validate = commands.add_parser('validate', help="run diagnostics at the start point",
                                   formatter_class=ap.ArgumentDefaultsHelpFormatter)
    validate.add_argument('file', type=p.abspath)
    validate.add_argument('--checks', choices=["all", "fd", "qscale", "equiv", "bound"], default="all")
    return parser


def configure_logging(args: Namespace):
    class LogRecordFactory(logging.LogRecord):
        def __init__(self, *a, **kw):
            super().__init__(*a, **kw)
            self.instance = "<none>"
            self.iteration = "---"

    logging.basicConfig(
        format="{asctime} | {levelname:.3} | {instance:>15} | {iteration:>4} | {message}",
        style="{",
        level=args.logging or (logging.DEBUG if args.debug else logging.INFO),
    )
    logging.setLogRecordFactory(LogRecordFactory)
    for handler in logging.root.handlers:
        if not args.debug:
            handler.addFilter(logging.Filter(name="root"))
        handler.addFilter(LoggingContextFilter())
    better_exceptions.log.patch()


# -------------------------------------------------------------------------------------------------------------------- #


def command_solve(args) -> int:
    problem = load_problem(args.file)
    overrides = {
        'alpha': args.alpha,
        'gap_tol': args.tol,
        'max_iters': args.max_iters,
        'step_mode': StepMode(args.step) if args.step else None,
    }
    config = load_solver_config(args.env, overrides)
    result = run(problem.oracle, problem.A, problem.b, problem.c, problem.e0, config, instance=problem.name)
    if args.trace:
        with open(args.trace, 'wb') as file:
            file.write(export_trace(result, args.format, backend=problem.backend))
        logging.info(f"trace written to {args.trace!r}")
    print(f"{result.status.value} iterations={result.iterations} gap={result.final_gap:.17g} "
          f"violations={sum(result.violations.values())}")
    return EXIT_CODES[result.status]


def command_generate(args) -> int:
    if args.kind == "sdp":
        instance, E0 = gen_central_path_sdp(args.n, args.m, args.mu, args.seed)
        with open(args.out, 'w', encoding='utf-8') as file:
            file.write(write_sdpa(instance))
        with open(start_file(args.out), 'w', encoding='utf-8') as file:
            json.dump({'E0': E0.tolist()}, file)
        logging.info(f"wrote {args.out!r} and {start_file(args.out)!r}")
        return 0

    family = HpFamily.from_params({'family': args.family, 'd': args.n, 'n': args.n, 'k': args.k})
    instance, _ = gen_hp_instance(family, args.m, args.mu, args.seed)
    with open(args.out, 'w', encoding='utf-8') as file:
        file.write(dump_hp_json(instance))
    logging.info(f"wrote {args.out!r}")
    return 0


def command_reduce_alpha(args) -> int:
    problem = load_problem(args.file)
    reduction = alpha_reduction_run(problem.oracle, problem.A, problem.b, problem.c, problem.e0,
                                    args.alpha0, args.target, instance=problem.name)
    print(f"alpha={reduction.alpha:.17g} iterations={reduction.iterations} bound={reduction.bound}")
    return 0 if reduction.within_bound else NumericalFailure.exit_code


def command_validate(args) -> int:
    problem = load_problem(args.file)
    config = load_solver_config(args.env)
    selected = {"fd", "qscale", "equiv", "bound"} if args.checks == "all" else {args.checks}
    reports = []

    if "fd" in selected:
        reports.append(diagnostics.fd_check(problem.oracle, problem.e0))
        reports.append(diagnostics.identity_check(problem.oracle, problem.e0))
    sdp_checks = selected & {"qscale", "equiv", "bound"}
    if sdp_checks and problem.sdp is None:
        logging.warning(f"skipping {', '.join(sorted(sdp_checks))}: only available for SDPA instances")
    elif sdp_checks:
        E0 = smat(problem.e0)
        if "qscale" in sdp_checks:
            reports.append(diagnostics.q_scaling_check(problem.sdp, E0, config.alpha))
        if "equiv" in sdp_checks:
            reports.append(diagnostics.membership_equiv_check(problem.sdp, E0, config.alpha))
        if "bound" in sdp_checks:
            rng = np.random.default_rng(config.seed)
            X = diagnostics.random_boundary_point(E0, config.alpha, rng)
            reports.append(diagnostics.decrease_bound_check(E0, X, config.alpha))

    for report in reports:
        print(json.dumps(report.to_dict()))
    return 0 if all(report.passed for report in reports) else 1


COMMANDS = {
    'solve': command_solve,
    'generate': command_generate,
    'reduce-alpha': command_reduce_alpha,
    'validate': command_validate,
}


def main(argv: t.Sequence[str] = None) -> int:
    args = build_parser().parse_args(argv, namespace=Namespace())
    better_exceptions.hook()
    configure_logging(args)
    logging.debug(str(args))

    try:
        return COMMANDS[args.command](args)
    except KeyboardInterrupt:
        logging.warning("interrupted")
        raise QuietExit(130)
    except AffineScalingError as error:
        logging.critical(f"{type(error).__name__}: {error}")
        return error.exit_code
    except Exception as error:
        logging.critical(f"Internal Error: {type(error).__name__} ({error})", exc_info=error)
        return 1
