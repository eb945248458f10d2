"""ARQ transmission window with a Block Ack scoreboard.

The scoreboard is an int bitmask: bit ``i`` is set when seq ``base_seq + i``
has been delivered. Bit 0 is never set; the window slides past it first.
"""
from __future__ import annotations

from typing import Iterable


class WindowError(ValueError):
    pass


class WindowState:
    def __init__(self, width: int = 64, base_seq: int = 0, delivered: Iterable[int] = ()):
        if width < 1:
            raise ValueError("window width must be positive")
        self.width = width
        self.base_seq = base_seq
        self.mask = 0
        self.mark(delivered)

    def __repr__(self):
        return f"WindowState(width={self.width}, base_seq={self.base_seq}, delivered={sorted(self.delivered)})"

    @property
    def delivered(self) -> set[int]:
        return {self.base_seq + i for i in range(self.width) if self.mask >> i & 1}

    @property
    def delivered_count(self) -> int:
        """I: delivered MPDUs still inside the window."""
        return self.mask.bit_count()

    def window(self) -> range:
        return range(self.base_seq, self.base_seq + self.width)

    def mark(self, seqs: Iterable[int]) -> int:
        """Set delivered flags, slide, and return how many flags went false to true."""
        new = 0
        for seq in seqs:
            off = seq - self.base_seq
            if not 0 <= off < self.width:
                raise WindowError(
                    f"seq {seq} outside window [{self.base_seq}, {self.base_seq + self.width - 1}]")
            bit = 1 << off
            if not self.mask & bit:
                self.mask |= bit
                new += 1
        # slide past the contiguous delivered prefix
        shift = (~self.mask & (self.mask + 1)).bit_length() - 1
        if shift:
            self.mask >>= shift
            self.base_seq += shift
        return new


def select_xmin(state: WindowState, k: int) -> list[int]:
    """The min(k, W - I) smallest undelivered seqs in the window, ascending."""
    if not 1 <= k <= state.width:
        raise ValueError(f"k must be in 1..{state.width}, got {k}")
    out = []
    for i in range(state.width):
        if not state.mask >> i & 1:
            out.append(state.base_seq + i)
            if len(out) == k:
                break
    return out


def apply_back(state: WindowState, delivered_now: Iterable[int]) -> int:
    """Apply one Block Ack to ``state`` in place; returns the newly delivered count."""
    return state.mark(delivered_now)
