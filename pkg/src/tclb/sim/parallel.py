"""Distributed-memory simulator: point-to-point sends and per-processor computes.

A parallel schedule is a sequence of events:
  ("SND", elem, src, dst)              send a resident element from src to dst
  ("CMP", proc, out, (op1, op2), kind) compute out at proc from resident operands

Inputs start resident at exactly one processor each (a storage-balanced
placement); nothing is recomputed anywhere; outputs must end resident at
their assigned owners.  The horizontal cost W is the largest sent+received
element count over processors.  An optional per-processor memory cap M is
validated as a residency limit but never enters any bound formula.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .cache import (
    Event,
    RecomputationError,
    ScheduleError,
    SimReport,
)


class PlacementError(ScheduleError):
    pass


class OperandNotResidentError(ScheduleError):
    pass


def check_balanced(groups: Mapping[str, Sequence[str]], placement: Mapping[str, int], p: int) -> None:
    """Each named group of addresses must be spread one-per-processor evenly."""
    for name, addrs in groups.items():
        counts = [0] * p
        for addr in addrs:
            proc = placement.get(addr)
            if proc is None:
                raise PlacementError(f"{name} element {addr!r} has no owner")
            if not 0 <= proc < p:
                raise PlacementError(f"{name} element {addr!r} owned by invalid proc {proc}")
            counts[proc] += 1
        if max(counts) - min(counts) > 1:
            raise PlacementError(
                f"{name} placement imbalanced: per-proc counts range "
                f"{min(counts)}..{max(counts)}"
            )


def simulate_parallel(
    schedule: Sequence[Event],
    p: int,
    input_placement: Mapping[str, int],
    output_placement: Mapping[str, int],
    balance_groups: Mapping[str, Sequence[str]] | None = None,
    memory_cap: int | None = None,
) -> SimReport:
    """Validate a parallel schedule and measure W and per-processor traffic."""
    if p < 1:
        raise ValueError("processor count must be >= 1")
    if balance_groups:
        check_balanced(balance_groups, input_placement, p)
        check_balanced({"outputs": list(output_placement)}, output_placement, p)

    resident: list[set[str]] = [set() for _ in range(p)]
    for addr, proc in input_placement.items():
        if not 0 <= proc < p:
            raise PlacementError(f"input {addr!r} placed on invalid proc {proc}")
        resident[proc].add(addr)
    input_set = frozenset(input_placement)
    computed: set[str] = set()
    sent = [0] * p
    received = [0] * p
    mults = 0
    adds = 0

    def cap_check(proc: int, idx: int) -> None:
        if memory_cap is not None and len(resident[proc]) > memory_cap:
            raise ScheduleError(
                f"proc {proc} residency {len(resident[proc])} exceeds cap {memory_cap}", idx
            )

    for idx, ev in enumerate(schedule):
        op = ev[0]
        if op == "SND":
            elem, src, dst = ev[1], ev[2], ev[3]
            if not (0 <= src < p and 0 <= dst < p):
                raise ScheduleError(f"send between invalid procs {src}->{dst}", idx)
            if src == dst:
                raise ScheduleError(f"send of {elem!r} to self", idx)
            if elem not in resident[src]:
                raise OperandNotResidentError(
                    f"send of {elem!r} not resident at proc {src}", idx
                )
            resident[dst].add(elem)
            sent[src] += 1
            received[dst] += 1
            cap_check(dst, idx)
        elif op == "CMP":
            proc, out, operands, kind = ev[1], ev[2], ev[3], ev[4]
            if not 0 <= proc < p:
                raise ScheduleError(f"compute on invalid proc {proc}", idx)
            if len(operands) != 2:
                raise ScheduleError(f"compute of {out!r} is not binary", idx)
            for operand in operands:
                if operand not in resident[proc]:
                    raise OperandNotResidentError(
                        f"operand {operand!r} of {out!r} not resident at proc {proc}", idx
                    )
            if out in computed or out in input_set:
                raise RecomputationError(f"{out!r} computed twice", idx)
            computed.add(out)
            resident[proc].add(out)
            if kind == "mul":
                mults += 1
            elif kind == "add":
                adds += 1
            else:
                raise ScheduleError(f"unknown compute kind {kind!r}", idx)
            cap_check(proc, idx)
        else:
            raise ScheduleError(f"unknown event {ev!r}", idx)

    for addr, proc in output_placement.items():
        if addr not in resident[proc]:
            raise ScheduleError(
                f"output {addr!r} does not end at its owner proc {proc}"
            )
    traffic = [s + r for s, r in zip(sent, received)]
    return SimReport(
        "parallel",
        max(traffic) if traffic else 0,
        mults,
        adds,
        per_proc_traffic=traffic,
    )
