# -*- coding=utf-8 -*-
r"""
JSON schema for hyperbolic programs

    {
        "family": "elementary_symmetric", "d": 8, "k": 3,
        "c": [...], "A": [[...], ...], "b": [...], "e0": [...],
        "metadata": {...}
    }
"""
import json
import typing as t
import numpy as np
from ..exceptions import *
from ..hyperbolic_backend import HpFamily, HpInstance


__all__ = ['parse_hp_json', 'dump_hp_json']


_FAMILY_KEYS = ('family', 'd', 'k', 'n')
_REQUIRED_KEYS = ('family', 'c', 'A', 'b', 'e0')


def parse_hp_json(text: t.Union[str, bytes]) -> HpInstance:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise ParseError(error.msg, error.lineno) from None
    if not isinstance(document, dict):
        raise ParseError("expected a JSON object at the top level")
    missing = [key for key in _REQUIRED_KEYS if key not in document]
    if missing:
        raise ParseError(f"missing keys: {', '.join(missing)}")

    try:
        family = HpFamily.from_params({key: document[key] for key in _FAMILY_KEYS if key in document})
    except DomainError as error:
        raise ParseError(str(error)) from None
    try:
        arrays = {key: np.array(document[key], dtype=float) for key in ('c', 'A', 'b', 'e0')}
    except (TypeError, ValueError) as error:
        raise ParseError(f"non-numeric array: {error}") from None
    if arrays['A'].ndim != 2:
        raise ParseError(f"A must be a row-major matrix (got {arrays['A'].ndim} dimensions)")

    instance = HpInstance(family=family, metadata=dict(document.get('metadata') or {}), **arrays)
    return instance.validate()


def dump_hp_json(instance: HpInstance, indent: int = None) -> str:
    document = dict(instance.family.to_params())
    document.update(
        c=instance.c.tolist(),
        A=instance.A.tolist(),
        b=instance.b.tolist(),
        e0=instance.e0.tolist(),
    )
    if instance.metadata:
        document['metadata'] = instance.metadata
    return json.dumps(document, indent=indent)
