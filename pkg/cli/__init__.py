from .config import RunConfigFile, load_run_config, parse_matrix, to_matrix
from .commands import cmd_cone, cmd_flow, cmd_intersect, cmd_op, cmd_props, cmd_sweep
from .output import (
    EXIT_OK,
    EXIT_VIOLATION,
    EXIT_BAD_INPUT,
    EXIT_T_MAX,
    EXIT_DIVERGED,
    EXIT_SCHEDULE,
    emit,
    write_json,
)

__all__ = [
    'RunConfigFile', 'load_run_config', 'parse_matrix', 'to_matrix', 'cmd_cone',
    'cmd_flow', 'cmd_intersect', 'cmd_op', 'cmd_props', 'cmd_sweep', 'EXIT_OK',
    'EXIT_VIOLATION', 'EXIT_BAD_INPUT', 'EXIT_T_MAX', 'EXIT_DIVERGED',
    'EXIT_SCHEDULE', 'emit', 'write_json',
]
