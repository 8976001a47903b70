# -*- coding=utf-8 -*-
r"""
SDPA sparse format (.dat-s)

    m
    nblocks
    block sizes (negative: diagonal block)
    b_1 ... b_m
    matno blkno i j value        (matno 0 is the objective, 1..m the constraints; i <= j)

All blocks are concatenated into one dense block; the block sizes are kept in the instance
metadata so that `write_sdpa` reproduces the layout.
"""
import re
import typing as t
import numpy as np
from ..exceptions import *
from ..sdp_backend import SdpInstance


__all__ = ['parse_sdpa', 'write_sdpa']


_RE_PUNCTUATION = re.compile(r'[{}(),]')
_COMMENT_PREFIXES = ('"', '*', '#')


def _significant_lines(text: str) -> t.Iterator[t.Tuple[int, t.List[str]]]:
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(_COMMENT_PREFIXES):
            continue
        yield number, _RE_PUNCTUATION.sub(' ', stripped).split()


def _number(token: str, kind: t.Callable[[str], t.Any], number: int, what: str):
    try:
        return kind(token)
    except ValueError:
        raise ParseError(f"{what}: can't read {token!r}", number) from None


def parse_sdpa(text: str) -> SdpInstance:
    lines = _significant_lines(text)

    def header(what: str) -> t.Tuple[int, t.List[str]]:
        try:
            return next(lines)
        except StopIteration:
            raise ParseError(f"unexpected end of input while reading {what}") from None

    number, tokens = header("m")
    m = _number(tokens[0], int, number, "m")
    number, tokens = header("nblocks")
    nblocks = _number(tokens[0], int, number, "nblocks")
    if m < 1 or nblocks < 1:
        raise ParseError(f"need m >= 1 and nblocks >= 1 (got {m}, {nblocks})", number)

    number, tokens = header("block sizes")
    if len(tokens) < nblocks:
        raise ParseError(f"expected {nblocks} block sizes, got {len(tokens)}", number)
    block_sizes = [_number(token, int, number, "block size") for token in tokens[:nblocks]]
    if 0 in block_sizes:
        raise ParseError("block sizes must be nonzero", number)
    offsets = np.concatenate([[0], np.cumsum(np.abs(block_sizes))])
    n = int(offsets[-1])

    b: t.List[float] = []
    while len(b) < m:
        number, tokens = header("b")
        b.extend(_number(token, float, number, "b") for token in tokens)
    if len(b) != m:
        raise ParseError(f"expected {m} right-hand-side values, got {len(b)}", number)

    matrices = np.zeros((m + 1, n, n))
    touched = [False] * (m + 1)
    for number, tokens in lines:
        if len(tokens) != 5:
            raise ParseError(f"expected 'matno blkno i j value', got {' '.join(tokens)!r}", number)
        matno, block, i, j = (_number(token, int, number, "entry index") for token in tokens[:4])
        value = _number(tokens[4], float, number, "entry value")
        if not 0 <= matno <= m:
            raise ParseError(f"matrix number {matno} out of range 0..{m}", number)
        if not 1 <= block <= nblocks:
            raise ParseError(f"block number {block} out of range 1..{nblocks}", number)
        size = abs(block_sizes[block - 1])
        if not (1 <= i <= size and 1 <= j <= size):
            raise ParseError(f"entry ({i}, {j}) outside block {block} of size {size}", number)
        if block_sizes[block - 1] < 0 and i != j:
            raise ParseError(f"off-diagonal entry ({i}, {j}) in diagonal block {block}", number)
        row, col = offsets[block - 1] + i - 1, offsets[block - 1] + j - 1
        matrices[matno, row, col] = matrices[matno, col, row] = value
        touched[matno] = True

    for matno in range(1, m + 1):
        if not touched[matno] or not np.any(matrices[matno]):
            raise ParseError(f"constraint {matno} has no entries")

    instance = SdpInstance(
        C=matrices[0], constraints=tuple(matrices[1:]), b=np.array(b),
        metadata={'block_sizes': block_sizes},
    )
    return instance.validate()


def write_sdpa(instance: SdpInstance, block_sizes: t.Sequence[int] = None) -> str:
    block_sizes = list(block_sizes or instance.metadata.get('block_sizes') or [instance.n])
    offsets = np.concatenate([[0], np.cumsum(np.abs(block_sizes))])
    if offsets[-1] != instance.n:
        raise DimensionMismatch(f"block sizes {block_sizes} do not add up to {instance.n}")

    lines = [
        f"{instance.m}",
        f"{len(block_sizes)}",
        ' '.join(str(size) for size in block_sizes),
        ' '.join(f"{value:.17g}" for value in instance.b),
    ]
    layout = np.full((instance.n, instance.n), -1)
    for block, size in enumerate(block_sizes):
        start, stop = offsets[block], offsets[block + 1]
        layout[start:stop, start:stop] = block

    for matno, matrix in enumerate((instance.C, *instance.constraints)):
        rows, cols = np.nonzero(np.triu(matrix))
        for row, col in zip(rows, cols):
            block = layout[row, col]
            if block < 0 or (block_sizes[block] < 0 and row != col):
                raise DomainError(f"matrix {matno} has entry ({row}, {col}) outside the block layout {block_sizes}")
            start = offsets[block]
            lines.append(f"{matno} {block + 1} {row - start + 1} {col - start + 1} {matrix[row, col]:.17g}")
    return '\n'.join(lines) + '\n'
