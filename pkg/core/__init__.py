from .errors import (
    LabError,
    DomainError,
    PencilError,
    DegenerateSpectrum,
    PhaseSingularity,
    DegenerateField,
    ResolutionError,
    GridMismatch,
    CoefficientError,
    ConfigError,
    ScheduleError,
)
from .reports import ConeReport
from .tally import ViolationTally
from .atomic import atomic_write_bytes, atomic_write_text
from .settings import Settings, load_settings, init_observability

__all__ = [
    'LabError', 'DomainError', 'PencilError', 'DegenerateSpectrum',
    'PhaseSingularity', 'DegenerateField', 'ResolutionError', 'GridMismatch',
    'CoefficientError', 'ConfigError', 'ScheduleError',
    'ConeReport', 'ViolationTally', 'Settings', 'load_settings', 'init_observability',
    'atomic_write_bytes', 'atomic_write_text',
]
