# -*- coding=utf-8 -*-
r"""
solver settings from a dotenv file and the environment

    AFFINE_SCALING_ALPHA=0.5
    AFFINE_SCALING_GAP_TOL=1e-8
    AFFINE_SCALING_MAX_ITERS=500
    AFFINE_SCALING_STEP_MODE=qtilde
    AFFINE_SCALING_SEED=0
    AFFINE_SCALING_CHECK_TOL=1e-9

later sources win: defaults < dotenv file < environment < explicit overrides
"""
import os
import logging
import dataclasses
import typing as t
import os.path as p
from dotenv import dotenv_values
from .exceptions import *
from .callutil import call_with_string_arguments
from .driver import SolverConfig


__all__ = ['ENV_PREFIX', 'load_solver_config', 'settings_from']


ENV_PREFIX = "AFFINE_SCALING_"
DEFAULT_ENV_FILE = ".env"


def settings_from(mapping: t.Mapping[str, t.Optional[str]]) -> t.Dict[str, str]:
    r"""the AFFINE_SCALING_* entries of `mapping`, keyed by SolverConfig field"""
    fields = {field.name for field in dataclasses.fields(SolverConfig)}
    settings = {}
    for key, value in mapping.items():
        if not key.startswith(ENV_PREFIX) or value is None:
            continue
        name = key[len(ENV_PREFIX):].lower()
        if name not in fields:
            logging.warning(f"ignoring unknown setting {key}")
            continue
        settings[name] = value
    return settings


def load_solver_config(env_file: str = None, overrides: t.Mapping[str, t.Any] = None,
                       environ: t.Mapping[str, str] = None) -> SolverConfig:
    if env_file is not None and not p.isfile(env_file):
        raise DomainError(f"Missing dotenv file: {env_file!r}")
    if env_file is None and p.isfile(DEFAULT_ENV_FILE):
        env_file = DEFAULT_ENV_FILE

    settings: t.Dict[str, str] = {}
    if env_file is not None:
        settings.update(settings_from(dotenv_values(env_file)))
    settings.update(settings_from(os.environ if environ is None else environ))
    logging.debug(f"settings from the environment: {settings}")

    config = call_with_string_arguments(SolverConfig, settings)
    overrides = {key: value for key, value in (overrides or {}).items() if value is not None}
    if overrides:
        try:
            config = dataclasses.replace(config, **overrides)
        except TypeError as error:
            raise DomainError(f"bad override: {error}") from error
    return config
