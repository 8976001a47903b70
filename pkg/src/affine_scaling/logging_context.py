# -*- coding=utf-8 -*-
r"""
thread-local logging fields

the driver tags its records with the instance and the iteration it is working on:

    with LoggingContext(instance="diag2", iteration=3):
        logging.debug("...")

contexts nest; leaving one restores the fields of the enclosing one
"""
import logging
import threading
import collections
import typing as t


__all__ = ['LoggingContextFilter', 'LoggingContext', 'current_context']


_local = threading.local()


def _fields() -> collections.ChainMap:
    try:
        return _local.fields
    except AttributeError:
        _local.fields = collections.ChainMap()
        return _local.fields


def current_context() -> t.Dict[str, t.Any]:
    return dict(_fields())


class LoggingContextFilter(logging.Filter):
    r"""copies the active context onto every record passing the handler"""

    def filter(self, record: logging.LogRecord) -> bool:
        record.__dict__.update(_fields())
        return True


class LoggingContext:
    def __init__(self, **context):
        self.context = context

    def __enter__(self) -> 'LoggingContext':
        _local.fields = _fields().new_child(dict(self.context))
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        _local.fields = _fields().parents
