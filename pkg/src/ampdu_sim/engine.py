"""Steady-state throughput simulation of one saturated link."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy import stats

from . import _kernel
from .channel import ErrorModel, RandomSource, sample_plan_outcome, success_cutoff
from .frame import (MAX_DISTINCT_MPDUS, FrameGeometry, MacTimingProfile, PhyProfile,
                    PsduPlan, psdu_airtime_us, validate_plan)
from .strategy import BASE, Strategy, build_plan
from .window import WindowState, apply_back, select_xmin

N_BATCHES = 20


@dataclass(frozen=True)
class SimConfig:
    geom: FrameGeometry
    phy: PhyProfile
    model: ErrorModel
    strategy: Strategy = BASE
    k: int = 64
    window_w: int = 64
    attempts: int = 200_000
    warmup_attempts: int = 1_000
    seed: int = 1
    timing: MacTimingProfile = field(default_factory=MacTimingProfile)

    def __post_init__(self):
        if not 1 <= self.k <= self.window_w <= MAX_DISTINCT_MPDUS:
            raise ValueError(f"need 1 <= k <= window_w <= 64, got k={self.k}, W={self.window_w}")
        if self.warmup_attempts < 0 or self.attempts - self.warmup_attempts < N_BATCHES:
            raise ValueError(
                f"attempts must exceed warmup_attempts by at least {N_BATCHES} batches")

    def with_(self, **changes) -> "SimConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class SimResult:
    throughput_mbps: Optional[float]
    ci95_mbps: Optional[float]
    delivered_mpdus: int
    total_time_us: float
    infeasible: bool = False

    @classmethod
    def rejected(cls) -> "SimResult":
        return cls(None, None, 0, 0.0, True)


def attempt_tables(config: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """Attempt duration and plan verdict indexed by the total number of MPDU copies.

    Every copy has the same element size and the distinct count never exceeds
    k <= 64, so both depend on the copy total alone.
    """
    size = config.k * max(config.strategy.copies, 1) + 1
    airtime = np.zeros(size)
    feasible = np.zeros(size, dtype=np.bool_)
    c1 = config.timing.c1()
    for n in range(1, size):
        plan = PsduPlan(((0, n),))
        airtime[n] = c1 + psdu_airtime_us(plan, config.geom, config.timing, config.phy)
        feasible[n] = validate_plan(plan, config.geom, config.timing, config.phy).accepted
    return airtime, feasible


def _summarize(config: SimConfig, batch_new, batch_time) -> SimResult:
    bits = config.geom.payload_bits
    delivered = int(np.sum(batch_new))
    total_time = float(np.sum(batch_time))
    thr = bits * delivered / total_time
    per_batch = bits * np.asarray(batch_new, dtype=float) / np.asarray(batch_time)
    # identical batches must give exactly zero width, not rounding noise
    spread = 0.0 if np.all(per_batch == per_batch[0]) else float(np.std(per_batch, ddof=1))
    ci = float(stats.t.ppf(0.975, len(per_batch) - 1)) * spread / math.sqrt(len(per_batch))
    return SimResult(thr, ci, delivered, total_time)


def run_sim(config: SimConfig, backend: str = "compiled") -> SimResult:
    """Simulate ``config.attempts`` transmission attempts.

    Throughput is counted after the warmup attempts; the 95% interval comes
    from batch means over 20 equal batches. ``backend="python"`` runs the same
    loop through the window/strategy/channel functions and yields an
    identical result, only slower.
    """
    if backend == "python":
        return _run_python(config)
    if backend != "compiled":
        raise ValueError(f"unknown backend {backend!r}")
    airtime, feasible = attempt_tables(config)
    strat = config.strategy
    head = -1 if strat.is_all else strat.head_count
    rng = RandomSource(config.seed)
    batch_new, batch_time, infeasible, _ = _kernel.transmission_loop(
        config.window_w, config.k, head, strat.copies,
        np.uint64(success_cutoff(config.model.per)), airtime, feasible,
        config.attempts, config.warmup_attempts, N_BATCHES, np.uint64(rng.state))
    if infeasible:
        return SimResult.rejected()
    return _summarize(config, batch_new, batch_time)


def _run_python(config: SimConfig) -> SimResult:
    rng = RandomSource(config.seed)
    state = WindowState(config.window_w)
    c1 = config.timing.c1()
    measured = config.attempts - config.warmup_attempts
    batch_new = np.zeros(N_BATCHES, dtype=np.int64)
    batch_time = np.zeros(N_BATCHES)
    for a in range(config.attempts):
        plan = build_plan(select_xmin(state, config.k), config.strategy)
        if not validate_plan(plan, config.geom, config.timing, config.phy):
            return SimResult.rejected()
        duration = c1 + psdu_airtime_us(plan, config.geom, config.timing, config.phy)
        new = apply_back(state, sample_plan_outcome(plan, config.model, rng))
        if a >= config.warmup_attempts:
            b = (a - config.warmup_attempts) * N_BATCHES // measured
            batch_new[b] += new
            batch_time[b] += duration
    return _summarize(config, batch_new, batch_time)
