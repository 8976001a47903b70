# -*- coding=utf-8 -*-
r"""

"""
import enum
import inspect
import typing as t
from ..exceptions import DomainError
from .parsing import parse_any, parse_enum, PARSE_MAP


__all__ = ['call_with_string_arguments', 'parser_for']


T = t.TypeVar('T')


def parser_for(annotation: t.Any) -> t.Callable[[str], t.Any]:
    if annotation is inspect.Parameter.empty:
        return parse_any
    if isinstance(annotation, type) and issubclass(annotation, enum.Enum):
        return lambda string: parse_enum(annotation, string)
    try:
        return PARSE_MAP[annotation]
    except KeyError:
        raise DomainError(f"no string parser for {annotation!r}")


def call_with_string_arguments(function: t.Callable[..., T], arguments: t.Mapping[str, str]) -> T:
    r"""
    calls `function` with keyword-arguments parsed from strings by their annotation

    unknown keys are rejected, missing keys keep their defaults
    """
    signature = inspect.signature(function)
    try:
        hints = t.get_type_hints(function)
    except TypeError:  # classes with a generated __init__
        hints = t.get_type_hints(function.__init__)

    kwargs = {}
    for name, raw in arguments.items():
        parameter = signature.parameters.get(name)
        if parameter is None or parameter.kind in {parameter.VAR_POSITIONAL, parameter.VAR_KEYWORD}:
            raise DomainError(f"unknown setting {name!r} ({', '.join(signature.parameters.keys())})")
        parser = parser_for(hints.get(name, parameter.annotation))
        try:
            kwargs[name] = parser(raw)
        except DomainError as error:
            raise DomainError(f"setting {name!r}: {error}") from error

    try:
        bound = signature.bind(**kwargs)
    except TypeError as error:
        raise DomainError("Bad settings") from error
    return function(*bound.args, **bound.kwargs)
