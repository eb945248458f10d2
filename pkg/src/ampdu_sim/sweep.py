"""K-sweeps, strategy comparison and the improvement-ratio approximation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .channel import derive_seed
from .engine import SimConfig, SimResult, run_sim
from .strategy import BASE, Strategy


def k_seed(master_seed: int, k: int) -> int:
    # every strategy at a point sees the same stream for a given k
    return derive_seed(master_seed, k)


def k_curve(config: SimConfig, ks: Optional[Iterable[int]] = None) -> dict[int, SimResult]:
    ks = range(1, config.window_w + 1) if ks is None else ks
    return {k: run_sim(config.with_(k=k, seed=k_seed(config.seed, k))) for k in ks}


def pick_best_k(curve: dict[int, SimResult]) -> tuple[Optional[int], SimResult]:
    """Argmax over feasible k; ties go to the smaller k."""
    best_k, best = None, SimResult.rejected()
    for k in sorted(curve):
        res = curve[k]
        if res.infeasible:
            continue
        if best_k is None or res.throughput_mbps > best.throughput_mbps:
            best_k, best = k, res
    return best_k, best


def sweep_k(config: SimConfig) -> tuple[Optional[int], SimResult]:
    """Best k in 1..W for ``config`` (its own k is ignored); (None, rejected) if none is feasible."""
    return pick_best_k(k_curve(config))


def improvement_pct(thr: Optional[float], thr_base: Optional[float]) -> Optional[float]:
    if thr is None or thr_base is None:
        return None
    if thr_base == 0.0:
        return 0.0 if thr == 0.0 else None
    return 100.0 * (thr - thr_base) / thr_base


@dataclass(frozen=True)
class StrategyOutcome:
    strategy: Strategy
    best_k: Optional[int]
    result: SimResult

    @property
    def throughput(self) -> Optional[float]:
        return self.result.throughput_mbps


@dataclass(frozen=True)
class BestOutcome:
    best: StrategyOutcome
    base: StrategyOutcome
    outcomes: tuple[StrategyOutcome, ...]

    @property
    def improvement_pct(self) -> Optional[float]:
        return improvement_pct(self.best.throughput, self.base.throughput)

    def improvement_of(self, strategy: Strategy) -> Optional[float]:
        for o in self.outcomes:
            if o.strategy == strategy:
                return improvement_pct(o.throughput, self.base.throughput)
        raise KeyError(strategy.name)


def best_over_strategies(config: SimConfig, strategies: Iterable[Strategy]) -> BestOutcome:
    """K-sweep every strategy at one point and pick the highest throughput.

    Ties go to the earlier strategy in ``strategies``.
    """
    strategies = list(strategies)
    if BASE not in strategies:
        raise ValueError("strategy set must include base")
    outcomes = []
    for strat in strategies:
        k, res = sweep_k(config.with_(strategy=strat))
        outcomes.append(StrategyOutcome(strat, k, res))
    base = outcomes[strategies.index(BASE)]
    best = base
    for o in outcomes:
        if o.throughput is not None and o.throughput > best.throughput:
            best = o
    return BestOutcome(best, base, tuple(outcomes))


@dataclass(frozen=True)
class RatioInputs:
    c1_us: float
    t_us: float
    t_s_us: float
    b_bits: float
    b_s_bits: float
    alpha: float = 1.0

    def __post_init__(self):
        if min(self.c1_us, self.t_us, self.b_bits, self.b_s_bits) <= 0 or self.t_s_us < 0:
            raise ValueError("ratio inputs must be positive")
        if self.alpha < 1:
            raise ValueError("alpha must be >= 1")


def ratio_eq_thr(r: RatioInputs) -> float:
    """Throughput of a duplicating method over Base when both PSDUs scale by alpha."""
    a = r.alpha
    dup = a * r.b_s_bits / (r.c1_us + a * (r.t_us + r.t_s_us))
    base = a * r.b_bits / (r.c1_us + a * r.t_us)
    return dup / base
