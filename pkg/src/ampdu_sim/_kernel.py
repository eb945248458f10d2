"""Compiled transmission loop.

Mirrors ``WindowState``/``select_xmin``/``build_plan``/``sample_plan_outcome``
with a uint64 scoreboard and an inlined SplitMix64 stream. Any change here
must keep its results bit-identical to the pure Python backend in ``engine``.
"""
import numba
import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_ONE = np.uint64(1)
_ZERO = np.uint64(0)
_TWO53 = np.uint64(1 << 53)


@numba.njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@numba.njit(cache=True)
def transmission_loop(width, k, head, copies, cutoff, airtime, feasible,
                      attempts, warmup, n_batches, state):
    """Run ``attempts`` transmissions; ``head < 0`` duplicates every MPDU.

    ``airtime[n]`` is C1 plus the PSDU airtime of ``n`` MPDU copies and
    ``feasible[n]`` its plan verdict. Returns per-batch delivered counts and
    times over the post-warmup attempts, the infeasible flag and the final
    generator state.
    """
    batch_new = np.zeros(n_batches, np.int64)
    batch_time = np.zeros(n_batches, np.float64)
    if width == 64:
        full = ~_ZERO
    else:
        full = (_ONE << np.uint64(width)) - _ONE
    mask = _ZERO
    s = state
    measured = attempts - warmup
    # per 0 or 1: every outcome is certain, so no draws are needed
    certain = cutoff == _ZERO or cutoff >= _TWO53
    always = cutoff == _ZERO
    for a in range(attempts):
        free = ~mask & full
        n = 0
        ndup = 0
        got = _ZERO
        if certain:
            n = min(k, np.int64(_popcount(free)))
            if copies > 1:
                ndup = n if head < 0 else min(head, n)
            if always:
                for _ in range(n):
                    got |= free & (~free + _ONE)
                    free &= free - _ONE
            free = _ZERO
        while free != _ZERO and n < k:
            low = free & (~free + _ONE)
            cp = 1
            if head < 0 or n < head:
                cp = copies
            if cp > 1:
                ndup += 1
            ok = False
            for _ in range(cp):
                s += _GAMMA
                z = s
                z = (z ^ (z >> np.uint64(30))) * _M1
                z = (z ^ (z >> np.uint64(27))) * _M2
                z = z ^ (z >> np.uint64(31))
                if (z >> np.uint64(11)) >= cutoff:
                    ok = True
            if ok:
                got |= low
            n += 1
            free &= free - _ONE
        total = n + (copies - 1) * ndup
        if not feasible[total]:
            return batch_new, batch_time, True, s
        mask |= got
        new = _popcount(got)
        # trailing ones of mask = bits below its lowest clear bit
        if mask == ~_ZERO:
            mask = _ZERO
        else:
            shift = _popcount((~mask & (mask + _ONE)) - _ONE)
            mask = mask >> shift
        if a >= warmup:
            b = (a - warmup) * n_batches // measured
            batch_new[b] += new
            batch_time[b] += airtime[total]
    return batch_new, batch_time, False, s
