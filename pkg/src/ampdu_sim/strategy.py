"""Blind duplication policies.

A strategy sends ``copies`` transmissions of each of the first
``head_count`` MPDUs of the transmission set and one of the rest.
``head_count=None`` duplicates every MPDU.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .frame import PsduPlan

ALL = None
MAX_HEAD = 5
MIN_COPIES, MAX_COPIES = 2, 5

_GRAMMAR = "'base', '<d>MPDU<c>' (d in 1..5, c in 2..5) or 'ALL<c>' (c in 2..5), case-insensitive"
_NAME_RE = re.compile(r"^(?:(?P<base>base)|(?P<d>\d+)mpdu(?P<c>\d+)|all(?P<ca>\d+))$", re.I)


class StrategyParseError(ValueError):
    pass


@dataclass(frozen=True)
class Strategy:
    head_count: Optional[int] = 0
    copies: int = 1

    def __post_init__(self):
        if self.head_count == 0 or self.copies == 1:
            if (self.head_count, self.copies) != (0, 1):
                raise ValueError("Base must be written as head_count=0, copies=1")
        elif self.head_count is not ALL and self.head_count < 1:
            raise ValueError("head_count must be >= 0 or ALL")
        if self.copies < 1:
            raise ValueError("copies must be >= 1")

    @property
    def is_base(self) -> bool:
        return self.head_count == 0

    @property
    def is_all(self) -> bool:
        return self.head_count is ALL

    @property
    def name(self) -> str:
        if self.is_base:
            return "base"
        if self.is_all:
            return f"ALL{self.copies}"
        return f"{self.head_count}MPDU{self.copies}"

    def __str__(self):
        return self.name

    def duplicated(self, x: int) -> int:
        """How many of ``x`` planned MPDUs are sent ``copies`` times."""
        return x if self.is_all else min(self.head_count, x)


BASE = Strategy()


def parse_strategy(name: str) -> Strategy:
    m = _NAME_RE.match(name.strip())
    if not m:
        raise StrategyParseError(f"unknown strategy {name!r}; expected {_GRAMMAR}")
    if m["base"]:
        return BASE
    if m["ca"] is not None:
        c = int(m["ca"])
        if not MIN_COPIES <= c <= MAX_COPIES:
            raise StrategyParseError(f"copies out of range in {name!r}; expected {_GRAMMAR}")
        return Strategy(ALL, c)
    d, c = int(m["d"]), int(m["c"])
    if not (1 <= d <= MAX_HEAD and MIN_COPIES <= c <= MAX_COPIES):
        raise StrategyParseError(f"head/copies out of range in {name!r}; expected {_GRAMMAR}")
    return Strategy(d, c)


# Base, Set1..Set4 and Set5: the 21 methods compared in the sweeps
SETS = {
    f"set{d}": tuple(Strategy(d, c) for c in range(2, 6)) for d in range(1, 5)
}
SETS["set5"] = tuple(Strategy(ALL, c) for c in range(2, 6))
PRESETS: tuple[Strategy, ...] = (BASE,) + tuple(s for group in SETS.values() for s in group)


def build_plan(xmin: Sequence[int], strat: Strategy) -> PsduPlan:
    if not xmin:
        raise ValueError("xmin must be non-empty")
    dup = strat.duplicated(len(xmin))
    return PsduPlan(tuple((seq, strat.copies if i < dup else 1) for i, seq in enumerate(xmin)))
