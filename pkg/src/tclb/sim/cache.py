"""Sequential cache-model simulator.

A schedule is a sequence of events over abstract element addresses:
  ("L", addr)                    load from memory into cache
  ("S", addr)                    store (write back) from cache to memory
  ("E", addr)                    evict (discard) from cache
  ("C", out, (op1, op2), kind)   compute out from two cached operands, kind "mul"|"add"

Model rules enforced here: all adds/muls are binary; computes need both
operands cached and a free slot for the result; residency never exceeds the
cache size; nothing is computed twice; inputs start in memory only; every
declared output must be stored by the end.  The vertical cost Q counts loads
plus stores.  Eviction is explicit; there is no replacement policy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Event = tuple
Address = str


class ScheduleError(Exception):
    """Invalid schedule; carries the offending event index (or None for end-state)."""

    def __init__(self, message: str, event_index: int | None = None):
        self.event_index = event_index
        where = f" (event {event_index})" if event_index is not None else ""
        super().__init__(message + where)


class CapacityError(ScheduleError):
    pass


class OperandNotCachedError(ScheduleError):
    pass


class RecomputationError(ScheduleError):
    pass


class NotInMemoryError(ScheduleError):
    pass


class AlreadyCachedError(ScheduleError):
    pass


class MissingStoreError(ScheduleError):
    pass


@dataclass
class SimReport:
    """Measured communication and operation counts for one simulated schedule."""

    model: str  # "cache" | "parallel"
    measured_cost: int  # Q (loads+stores) or W (max sent+received)
    mult_count: int
    add_count: int
    peak_residency: int | None = None
    per_proc_traffic: list[int] | None = None
    bound_value: float | None = None
    bound_ratio: float | None = None
    meets_bound: bool | None = None
    flags: dict = field(default_factory=dict)

    def attach_bound(self, bound_value, exact_at_least) -> "SimReport":
        self.bound_value = float(bound_value)
        self.meets_bound = bool(exact_at_least)
        self.bound_ratio = (
            self.measured_cost / self.bound_value if self.bound_value else None
        )
        return self

    def to_json(self) -> str:
        payload = {
            "model": self.model,
            "measured_cost": self.measured_cost,
            "mult_count": self.mult_count,
            "add_count": self.add_count,
            "peak_residency": self.peak_residency,
            "per_proc_traffic": self.per_proc_traffic,
            "bound_value": self.bound_value,
            "bound_ratio": self.bound_ratio,
            "meets_bound": self.meets_bound,
            "flags": self.flags,
        }
        return json.dumps(payload, sort_keys=True, indent=2)


def simulate_cache(
    schedule: Sequence[Event],
    cache_size: int,
    inputs: Iterable[Address],
    outputs: Iterable[Address],
) -> SimReport:
    """Validate a sequential schedule and measure Q, operation counts, and peak residency."""
    if cache_size < 1:
        raise ValueError("cache size must be >= 1")
    memory = set(inputs)
    input_set = frozenset(memory)
    outputs = set(outputs)
    cache: set[Address] = set()
    computed: set[Address] = set()
    q = 0
    mults = 0
    adds = 0
    peak = 0

    for idx, ev in enumerate(schedule):
        op = ev[0]
        if op == "L":
            addr = ev[1]
            if addr not in memory:
                raise NotInMemoryError(f"load of {addr!r} which is not in memory", idx)
            if addr in cache:
                raise AlreadyCachedError(f"load of already-cached {addr!r}", idx)
            if len(cache) >= cache_size:
                raise CapacityError(
                    f"load of {addr!r} with cache full ({cache_size})", idx
                )
            cache.add(addr)
            q += 1
        elif op == "S":
            addr = ev[1]
            if addr not in cache:
                raise OperandNotCachedError(f"store of non-cached {addr!r}", idx)
            memory.add(addr)
            q += 1
        elif op == "E":
            addr = ev[1]
            if addr not in cache:
                raise OperandNotCachedError(f"evict of non-cached {addr!r}", idx)
            cache.discard(addr)
        elif op == "C":
            out, operands, kind = ev[1], ev[2], ev[3]
            if len(operands) != 2:
                raise ScheduleError(f"compute of {out!r} is not binary", idx)
            for operand in operands:
                if operand not in cache:
                    raise OperandNotCachedError(
                        f"operand {operand!r} of {out!r} not cached", idx
                    )
            if out in computed or out in input_set:
                raise RecomputationError(f"{out!r} computed twice", idx)
            if out in cache:
                raise AlreadyCachedError(f"compute output {out!r} already cached", idx)
            if len(cache) >= cache_size:
                raise CapacityError(f"compute of {out!r} with cache full", idx)
            cache.add(out)
            computed.add(out)
            if kind == "mul":
                mults += 1
            elif kind == "add":
                adds += 1
            else:
                raise ScheduleError(f"unknown compute kind {kind!r}", idx)
        else:
            raise ScheduleError(f"unknown event {ev!r}", idx)
        peak = max(peak, len(cache))

    missing = outputs - memory
    if missing:
        raise MissingStoreError(
            f"{len(missing)} outputs never stored, e.g. {sorted(missing)[:3]}"
        )
    return SimReport("cache", q, mults, adds, peak_residency=peak)
