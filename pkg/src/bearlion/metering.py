"""Cost accounting split by phase (reduction work vs. oracle work).

Primitive evaluations and key-space enumerations report to the active
:class:`CostMeter`, tagged with the current phase.  Code that runs on behalf
of the oracle wraps itself in ``phase("oracle")``; everything else counts as
the caller's phase (``"reduction"`` by default).
"""

from __future__ import annotations

from collections import Counter
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from typing import Iterator

STREAM_CALLS = "stream_calls"
HASH_CALLS = "hash_calls"
KEYS_ENUMERATED = "keys_enumerated"


@dataclass
class CostMeter:
    counts: Counter = field(default_factory=Counter)

    def get(self, phase: str, kind: str) -> int:
        return self.counts[(phase, kind)]

    def phase_total(self, phase: str, kinds: tuple[str, ...] = (STREAM_CALLS, HASH_CALLS)) -> int:
        return sum(self.counts[(phase, k)] for k in kinds)


_meter: ContextVar[CostMeter | None] = ContextVar("bearlion_meter", default=None)
_phase: ContextVar[str] = ContextVar("bearlion_phase", default="reduction")


def record(kind: str, amount: int = 1) -> None:
    m = _meter.get()
    if m is not None:
        m.counts[(_phase.get(), kind)] += amount


def current_phase() -> str:
    return _phase.get()


@contextmanager
def metered() -> Iterator[CostMeter]:
    m = CostMeter()
    token = _meter.set(m)
    try:
        yield m
    finally:
        _meter.reset(token)


@contextmanager
def phase(name: str) -> Iterator[None]:
    token = _phase.set(name)
    try:
        yield
    finally:
        _phase.reset(token)
