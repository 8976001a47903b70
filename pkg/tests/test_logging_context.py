from __future__ import annotations

import logging

import pytest

from affine_scaling.logging_context import LoggingContext, LoggingContextFilter, current_context


def _record() -> logging.LogRecord:
    return logging.LogRecord("test", logging.INFO, __file__, 1, "message", None, None)


def test_nested_contexts_restore_the_outer_values() -> None:
    assert current_context() == {}
    with LoggingContext(instance="outer", iteration=1):
        with LoggingContext(iteration=2):
            assert current_context() == {'instance': "outer", 'iteration': 2}
        assert current_context() == {'instance': "outer", 'iteration': 1}
    assert current_context() == {}


def test_context_is_restored_after_an_exception() -> None:
    with pytest.raises(RuntimeError):
        with LoggingContext(instance="failing"):
            raise RuntimeError
    assert current_context() == {}


def test_filter_tags_records() -> None:
    record = _record()
    with LoggingContext(instance="diag2", iteration=3):
        assert LoggingContextFilter().filter(record)
    assert record.instance == "diag2"
    assert record.iteration == 3
    untouched = _record()
    assert LoggingContextFilter().filter(untouched)
    assert not hasattr(untouched, 'instance')
