"""Exact throughput for tiny windows, independent of the simulator.

The chain state is the delivered pattern of the W-1 slots after the window
base. Per-attempt reward is the number of newly delivered MPDUs and the
attempt duration depends only on the state, so long-run throughput is the
renewal-reward ratio under the stationary distribution.
"""
from __future__ import annotations

import itertools

import numpy as np

from .channel import mpdu_delivered_prob
from .engine import SimConfig
from .frame import PsduPlan, psdu_airtime_us, validate_plan
from .strategy import Strategy

MAX_ORACLE_WINDOW = 4


def _transitions(mask: int, config: SimConfig):
    """Yield (probability, next_mask, newly_delivered) for one attempt from ``mask``."""
    w, k, strat = config.window_w, config.k, config.strategy
    slots = [i for i in range(w) if not mask >> i & 1][:k]
    dup = strat.duplicated(len(slots))
    q = [mpdu_delivered_prob(config.model.per, strat.copies if j < dup else 1)
         for j in range(len(slots))]
    for outcome in itertools.product((False, True), repeat=len(slots)):
        prob = 1.0
        nxt = mask
        for ok, qi, slot in zip(outcome, q, slots):
            prob *= qi if ok else 1.0 - qi
            if ok:
                nxt |= 1 << slot
        if prob == 0.0:
            continue
        while nxt & 1:
            nxt >>= 1
        yield prob, nxt, sum(outcome)


def _attempt_duration(mask: int, config: SimConfig) -> float:
    w, k, strat = config.window_w, config.k, config.strategy
    x = min(k, w - bin(mask).count("1"))
    copies = x + (strat.copies - 1) * strat.duplicated(x)
    plan = PsduPlan(((0, copies),))
    verdict = validate_plan(plan, config.geom, config.timing, config.phy)
    if not verdict:
        raise ValueError(f"plan rejected: {', '.join(verdict.violations)}")
    return config.timing.c1() + psdu_airtime_us(plan, config.geom, config.timing, config.phy)


def stationary_distribution(P: np.ndarray) -> np.ndarray:
    """Solve pi P = pi, sum(pi) = 1 for an irreducible row-stochastic P."""
    n = P.shape[0]
    A = np.vstack([P.T - np.eye(n), np.ones(n)])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def markov_oracle(config: SimConfig) -> float:
    """Exact long-run throughput in Mbps for ``window_w <= 4``."""
    if config.window_w > MAX_ORACLE_WINDOW:
        raise ValueError(f"markov_oracle needs window_w <= {MAX_ORACLE_WINDOW}, got {config.window_w}")
    # only the states reachable from an empty scoreboard matter
    index = {0: 0}
    edges = []
    frontier = [0]
    while frontier:
        mask = frontier.pop()
        for prob, nxt, reward in _transitions(mask, config):
            if nxt not in index:
                index[nxt] = len(index)
                frontier.append(nxt)
            edges.append((index[mask], index[nxt], prob, reward))
    n = len(index)
    P = np.zeros((n, n))
    reward = np.zeros(n)
    duration = np.zeros(n)
    for i, j, prob, r in edges:
        P[i, j] += prob
        reward[i] += prob * r
    for mask, i in index.items():
        duration[i] = _attempt_duration(mask, config)
    pi = stationary_distribution(P)
    return config.geom.payload_bits * float(pi @ reward) / float(pi @ duration)


def single_slot_throughput(config: SimConfig) -> float:
    """W = K = 1: each attempt is an independent renewal cycle."""
    strat: Strategy = config.strategy
    q = mpdu_delivered_prob(config.model.per, strat.copies)
    return config.geom.payload_bits * q / _attempt_duration(0, config.with_(window_w=1, k=1))
