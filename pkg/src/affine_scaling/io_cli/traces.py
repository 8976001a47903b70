# -*- coding=utf-8 -*-
r"""
solver traces as CSV (one row per iteration) or JSON (header, rows, footer)

JSON numbers use the shortest round-tripping representation, CSV numbers 17 significant digits;
both reproduce every double exactly.
"""
import io
import csv
import json
import typing as t
from ..exceptions import *
from ..driver import IterationRecord, SolveResult


__all__ = ['TRACE_COLUMNS', 'export_trace', 'parse_trace_json', 'trace_document']


TRACE_COLUMNS = (
    'k', 'alpha', 'gap', 't', 'x_norm_e', 'primal_obj', 'dual_obj',
    'qtilde_a', 'qtilde_b', 'qtilde_c', 'wallclock',
)


def _row(record: IterationRecord) -> t.Dict[str, t.Any]:
    return {
        'k': record.k,
        'alpha': record.alpha,
        'gap': record.gap,
        't': record.t,
        'x_norm_e': record.x_norm_e,
        'primal_obj': record.primal_obj,
        'dual_obj': record.dual_obj,
        'qtilde_a': record.qtilde.a,
        'qtilde_b': record.qtilde.b,
        'qtilde_c': record.qtilde.c,
        'wallclock': record.wallclock,
    }


def trace_document(result: SolveResult, backend: str = "sdp") -> t.Dict[str, t.Any]:
    constants = result.constants
    return {
        'header': {
            'instance': result.instance,
            'backend': backend,
            'alpha': constants.alpha,
            'kappa': constants.kappa,
            'beta': constants.beta,
            'n': result.degree,
            'm': result.m,
            'config': result.config.to_dict(),
        },
        'rows': [_row(record) for record in result.trace],
        'footer': {
            'status': result.status.value,
            'iterations': result.iterations,
            'final_gap': result.final_gap,
            'violations': dict(result.violations),
            'detail': result.detail,
        },
    }


def export_trace(result: SolveResult, fmt: str = "json", backend: str = "sdp") -> bytes:
    if fmt == "json":
        return json.dumps(trace_document(result, backend), indent=2).encode('utf-8')
    elif fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(TRACE_COLUMNS)
        for record in result.trace:
            row = _row(record)
            writer.writerow([row['k'], *(f"{row[column]:.17g}" for column in TRACE_COLUMNS[1:])])
        return buffer.getvalue().encode('utf-8')
    raise DomainError(f"unknown trace format {fmt!r} (csv|json)")


def parse_trace_json(data: t.Union[str, bytes]) -> t.Dict[str, t.Any]:
    try:
        document = json.loads(data)
    except json.JSONDecodeError as error:
        raise ParseError(error.msg, error.lineno) from None
    for key in ('header', 'rows', 'footer'):
        if key not in document:
            raise ParseError(f"trace is missing its {key!r} section")
    return document
