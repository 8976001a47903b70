# -*- coding=utf-8 -*-
r"""

"""


__all__ = ['format_tag']


def format_tag(tag: str) -> str:
    r"""'Elementary-Symmetric' -> 'elementary_symmetric'"""
    return tag.strip().lower().replace("-", "_")
