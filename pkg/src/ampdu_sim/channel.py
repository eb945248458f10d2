"""Per-MPDU loss model and the random stream that drives it.

Each transmitted MPDU copy is lost independently with probability ``per``.
The bit-level view is the memoryless form of the Gilbert model:
``per = 1 - (1 - ber) ** bits``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frame import PsduPlan

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_TWO53 = float(1 << 53)


@dataclass(frozen=True)
class ErrorModel:
    per: float

    def __post_init__(self):
        if not 0.0 <= self.per <= 1.0:
            raise ValueError(f"per must be in [0, 1], got {self.per}")


def per_from_ber(ber: float, frame_bits: int) -> float:
    if not 0.0 <= ber <= 1.0:
        raise ValueError(f"ber must be in [0, 1], got {ber}")
    if frame_bits < 1:
        raise ValueError("frame_bits must be >= 1")
    # -expm1(log1p(-ber) * B) keeps precision for tiny BER
    if ber == 1.0:
        return 1.0
    return -math.expm1(frame_bits * math.log1p(-ber))


def ber_from_per(per: float, frame_bits: int) -> float:
    if not 0.0 <= per < 1.0:
        raise ValueError(f"per must be in [0, 1) to have a finite BER, got {per}")
    if frame_bits < 1:
        raise ValueError("frame_bits must be >= 1")
    return -math.expm1(math.log1p(-per) / frame_bits)


def mpdu_delivered_prob(per: float, copies: int) -> float:
    """Probability that at least one of ``copies`` independent copies survives."""
    if copies < 1:
        raise ValueError("copies must be >= 1")
    return 1.0 - per ** copies


def success_cutoff(per: float) -> int:
    """Integer threshold on the top 53 bits of a draw: success iff draw >= cutoff.

    Equivalent to ``uniform >= per`` with ``uniform = (x >> 11) / 2**53``,
    but free of rounding, so the compiled kernel and this module agree bit for bit.
    """
    return math.ceil(per * _TWO53)


def splitmix64_mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, *key: int) -> int:
    """Independent 64-bit stream seed for run ``key`` under ``master_seed``."""
    ss = np.random.SeedSequence(int(master_seed) & MASK64, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])


class RandomSource:
    """SplitMix64 counter stream (period 2**64).

    The state is a plain 64-bit counter, so the compiled engine can take it
    over, advance it, and hand it back without losing reproducibility.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self.state = self.seed

    @classmethod
    def for_run(cls, master_seed: int, run_index: int) -> "RandomSource":
        return cls(derive_seed(master_seed, run_index))

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return splitmix64_mix(self.state)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) / _TWO53


def sample_plan_outcome(plan: PsduPlan, model: ErrorModel, rng: RandomSource) -> frozenset[int]:
    """Seqs of ``plan`` with at least one surviving copy.

    Draws exactly ``copies`` values per entry, in plan order.
    """
    cutoff = success_cutoff(model.per)
    delivered = []
    for seq, copies in plan.entries:
        ok = False
        for _ in range(copies):
            if (rng.next_u64() >> 11) >= cutoff:
                ok = True
        if ok:
            delivered.append(seq)
    return frozenset(delivered)
