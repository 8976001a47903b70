# -*- coding=utf-8 -*-
r"""

"""
from .fmt import *
from .roots import *

__all__ = [
    'format_tag',
    'real_quadratic_roots',
]
