# -*- coding=utf-8 -*-
r"""

"""
from .calling import *
from .parsing import *

__all__ = [
    'call_with_string_arguments', 'parser_for',
    'parse_any', 'parse_string', 'parse_int', 'parse_number', 'parse_bool', 'parse_enum',
]
