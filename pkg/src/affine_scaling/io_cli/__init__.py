# -*- coding=utf-8 -*-
r"""
instance formats, generators, traces and the command line
"""
from .sdpa import *
from .hpjson import *
from .generators import *
from .traces import *

__all__ = [
    'parse_sdpa', 'write_sdpa',
    'parse_hp_json', 'dump_hp_json',
    'gen_central_path_sdp', 'gen_hp_instance',
    'export_trace', 'parse_trace_json',
]
