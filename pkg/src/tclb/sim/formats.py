"""Newline-delimited schedule files.

Sequential records:  L addr | S addr | E addr | C out <- a b MUL|ADD
Parallel records:    SND elem from to | CMP proc out <- a b MUL|ADD

Addresses are the simulator's colon-joined identifiers and contain no spaces.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .cache import Event


def render_sequential(schedule: Sequence[Event]) -> str:
    lines = []
    for ev in schedule:
        if ev[0] in ("L", "S", "E"):
            lines.append(f"{ev[0]} {ev[1]}")
        elif ev[0] == "C":
            _, out, (a, b), kind = ev
            lines.append(f"C {out} <- {a} {b} {kind.upper()}")
        else:
            raise ValueError(f"not a sequential event: {ev!r}")
    return "\n".join(lines) + "\n"


def parse_sequential(text: str | Iterable[str]) -> list[Event]:
    if isinstance(text, str):
        text = text.splitlines()
    events: list[Event] = []
    for lineno, line in enumerate(text, 1):
        parts = line.split()
        if not parts:
            continue
        op = parts[0]
        if op in ("L", "S", "E") and len(parts) == 2:
            events.append((op, parts[1]))
        elif op == "C" and len(parts) == 6 and parts[2] == "<-":
            events.append(("C", parts[1], (parts[3], parts[4]), parts[5].lower()))
        else:
            raise ValueError(f"bad sequential schedule line {lineno}: {line!r}")
    return events


def render_parallel(schedule: Sequence[Event]) -> str:
    lines = []
    for ev in schedule:
        if ev[0] == "SND":
            lines.append(f"SND {ev[1]} {ev[2]} {ev[3]}")
        elif ev[0] == "CMP":
            _, proc, out, (a, b), kind = ev
            lines.append(f"CMP {proc} {out} <- {a} {b} {kind.upper()}")
        else:
            raise ValueError(f"not a parallel event: {ev!r}")
    return "\n".join(lines) + "\n"


def parse_parallel(text: str | Iterable[str]) -> list[Event]:
    if isinstance(text, str):
        text = text.splitlines()
    events: list[Event] = []
    for lineno, line in enumerate(text, 1):
        parts = line.split()
        if not parts:
            continue
        op = parts[0]
        if op == "SND" and len(parts) == 4:
            events.append(("SND", parts[1], int(parts[2]), int(parts[3])))
        elif op == "CMP" and len(parts) == 7 and parts[3] == "<-":
            events.append(("CMP", int(parts[1]), parts[2], (parts[4], parts[5]), parts[6].lower()))
        else:
            raise ValueError(f"bad parallel schedule line {lineno}: {line!r}")
    return events
