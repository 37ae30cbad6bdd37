"""Cache-model and distributed-memory schedule simulators with reference schedules."""

from .cache import (
    AlreadyCachedError,
    CapacityError,
    MissingStoreError,
    NotInMemoryError,
    OperandNotCachedError,
    RecomputationError,
    ScheduleError,
    SimReport,
    simulate_cache,
)
from .formats import parse_parallel, parse_sequential, render_parallel, render_sequential
from .parallel import (
    OperandNotResidentError,
    PlacementError,
    check_balanced,
    simulate_parallel,
)
from .schedules import (
    PARALLEL_GRIDS,
    direct_block_for,
    mm_addresses,
    schedule_blocked_direct,
    schedule_blocked_mm,
    schedule_mm_1d,
    schedule_mm_2d,
    schedule_mm_3d,
    schedule_sympres_seq,
    sympres_block_for,
)

__all__ = [
    "AlreadyCachedError",
    "CapacityError",
    "MissingStoreError",
    "NotInMemoryError",
    "OperandNotCachedError",
    "OperandNotResidentError",
    "PARALLEL_GRIDS",
    "PlacementError",
    "RecomputationError",
    "ScheduleError",
    "SimReport",
    "check_balanced",
    "direct_block_for",
    "mm_addresses",
    "parse_parallel",
    "parse_sequential",
    "render_parallel",
    "render_sequential",
    "schedule_blocked_direct",
    "schedule_blocked_mm",
    "schedule_mm_1d",
    "schedule_mm_2d",
    "schedule_mm_3d",
    "schedule_sympres_seq",
    "simulate_cache",
    "simulate_parallel",
    "sympres_block_for",
]
