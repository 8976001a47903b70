# -*- coding=utf-8 -*-
r"""
settings arrive as strings (dotenv files, the environment); these turn them into typed values
"""
import math
import enum
import typing as t
from ..exceptions import DomainError
from ..util import format_tag


__all__ = [
    'parse_any', 'parse_string', 'parse_int', 'parse_number', 'parse_bool', 'parse_enum',
    'PARSE_MAP',
]


_BOOLEANS = {
    'true': True, 'yes': True, 'on': True, '1': True,
    'false': False, 'no': False, 'off': False, '0': False,
}


def parse_any(string: str) -> t.Any:
    r"""int, then float, then boolean words; anything else stays a string"""
    for parser in (parse_int, parse_number):
        try:
            return parser(string)
        except DomainError:
            pass
    if string.strip().lower() in _BOOLEANS:
        return parse_bool(string)
    return parse_string(string)


def parse_string(string: str) -> str:
    return string


def parse_number(string: str) -> float:
    try:
        value = float(string)
    except ValueError:
        raise DomainError(f"Can't parse to number: {string!r}") from None
    if not math.isfinite(value):
        raise DomainError(f"Number must be finite: {string!r}")
    return value


def parse_int(string: str) -> int:
    r"""accepts integral floats as well ('1e3' -> 1000)"""
    try:
        return int(string)
    except ValueError:
        pass
    try:
        value = parse_number(string)
    except DomainError:
        raise DomainError(f"Can't parse to integer: {string!r}") from None
    if not value.is_integer():
        raise DomainError(f"Can't parse to integer: {string!r}")
    return int(value)


def parse_bool(string: str) -> bool:
    try:
        return _BOOLEANS[string.strip().lower()]
    except KeyError:
        raise DomainError(f"Can't parse to boolean: {string!r}") from None


def parse_enum(enum_type: t.Type[enum.Enum], string: str) -> enum.Enum:
    r"""matches against the values first, then the member-names ('qtilde' or 'QTILDE_MINIMIZER')"""
    tag = format_tag(string)
    for member in enum_type:
        if format_tag(str(member.value)) == tag or member.name.lower() == tag:
            return member
    choices = '|'.join(str(member.value) for member in enum_type)
    raise DomainError(f"Can't parse to {enum_type.__name__}: {string!r} ({choices})")


PARSE_MAP: t.Dict[t.Type, t.Callable[[str], t.Any]] = {
    str: parse_string,
    int: parse_int,
    float: parse_number,
    bool: parse_bool,
    #
    t.Any: parse_any,
}
