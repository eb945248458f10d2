"""Frame sizes, PSDU airtime and the single-transmission throughput formula.

All durations are in microseconds, so bits / µs comes out in Mbps.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

MAX_DISTINCT_MPDUS = 64
MAX_PSDU_AIRTIME_US = 5400.0
MAX_PSDU_BYTES = 1_048_575
MAX_MPDU_BYTES = 11_454
MAX_MSDU_BYTES = 2304


class SizeLimitError(ValueError):
    """A frame geometry exceeds one of the 802.11ac size limits."""


class EmptyPlanError(ValueError):
    pass


class Mode(str, enum.Enum):
    AMPDU = "AMPDU"
    TWO_LEVEL = "TWO_LEVEL"


@dataclass(frozen=True)
class MacTimingProfile:
    """Fixed per-transmission overheads for the Best Effort access category."""

    aifs_us: float = 43.0
    slot_time_us: float = 9.0
    avg_backoff_us: float = 67.5  # 7.5 slots on average
    phy_preamble_us: float = 43.0  # 3 spatial streams
    sifs_us: float = 16.0
    back_time_us: float = 32.0  # legacy preamble included, 24 Mbps basic rate
    t_sym_us: float = 4.0
    service_tail_bits: int = 22  # SERVICE (16) + TAIL (6)

    def __post_init__(self):
        for name in ("aifs_us", "slot_time_us", "avg_backoff_us", "phy_preamble_us",
                     "sifs_us", "back_time_us", "t_sym_us"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.service_tail_bits < 0:
            raise ValueError("service_tail_bits must be non-negative")

    def c1(self) -> float:
        """Channel time spent on everything except the PSDU itself."""
        return (self.aifs_us + self.avg_backoff_us + self.phy_preamble_us
                + self.sifs_us + self.back_time_us)


@dataclass(frozen=True)
class PhyProfile:
    rate_mbps: float
    t_sym_us: float = 4.0

    def __post_init__(self):
        if not self.rate_mbps > 0:
            raise ValueError("rate_mbps must be strictly positive")

    @property
    def data_bits_per_symbol(self) -> float:
        return self.rate_mbps * self.t_sym_us


PAPER_RATES_MBPS = (433.3, 866.7, 1299.9, 3466.8)


@dataclass(frozen=True)
class FrameGeometry:
    msdu_bytes: int
    msdus_per_mpdu: int = 1
    mode: Mode = Mode.AMPDU
    mac_delimiter_bytes: int = 4
    mac_header_bytes: int = 32
    fcs_bytes: int = 4
    subframe_header_bytes: int = 14

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.msdu_bytes < 1:
            raise ValueError("msdu_bytes must be positive")
        if self.msdus_per_mpdu < 1:
            raise ValueError("msdus_per_mpdu must be positive")
        if self.mode is Mode.AMPDU and self.msdus_per_mpdu != 1:
            raise ValueError("A-MPDU aggregation carries exactly one MSDU per MPDU")
        if self.msdu_bytes > MAX_MSDU_BYTES:
            raise SizeLimitError(
                f"MSDU size limit: {self.msdu_bytes} > {MAX_MSDU_BYTES} bytes")
        mpdu = mpdu_element_bytes(self) - self.mac_delimiter_bytes
        if mpdu > MAX_MPDU_BYTES:
            raise SizeLimitError(
                f"MPDU size limit: {mpdu} > {MAX_MPDU_BYTES} bytes")

    @property
    def payload_bits(self) -> int:
        """MSDU bits carried by one delivered MPDU."""
        return 8 * self.msdu_bytes * self.msdus_per_mpdu


def _pad4(n: int) -> int:
    return 4 * math.ceil(n / 4)


def mpdu_element_bytes(geom: FrameGeometry) -> int:
    """Bytes one MPDU occupies in the PSDU: delimiter, header, body, FCS, padding."""
    overhead = geom.mac_delimiter_bytes + geom.mac_header_bytes + geom.fcs_bytes
    if geom.mode is Mode.AMPDU:
        return _pad4(overhead + geom.msdu_bytes)
    subframe = _pad4(geom.subframe_header_bytes + geom.msdu_bytes)
    return _pad4(overhead + geom.msdus_per_mpdu * subframe)


@dataclass(frozen=True)
class PsduPlan:
    """(seq, copies) pairs in transmission order."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        entries = tuple((int(s), int(c)) for s, c in self.entries)
        object.__setattr__(self, "entries", entries)
        prev = -1
        for seq, copies in entries:
            if seq < 0 or copies < 1:
                raise ValueError(f"bad plan entry ({seq}, {copies})")
            if seq <= prev:
                raise ValueError("plan sequence numbers must be strictly increasing")
            prev = seq

    @property
    def distinct_count(self) -> int:
        return len(self.entries)

    @property
    def total_copies(self) -> int:
        return sum(c for _, c in self.entries)

    def __len__(self):
        return len(self.entries)


def psdu_bits(plan: PsduPlan, geom: FrameGeometry, timing: MacTimingProfile) -> int:
    if not plan.entries:
        raise EmptyPlanError("cannot size an empty PSDU plan")
    return 8 * plan.total_copies * mpdu_element_bytes(geom) + timing.service_tail_bits


def psdu_airtime_us(plan: PsduPlan, geom: FrameGeometry, timing: MacTimingProfile,
                    phy: PhyProfile) -> float:
    symbols = math.ceil(psdu_bits(plan, geom, timing) / phy.data_bits_per_symbol)
    return timing.t_sym_us * symbols


@dataclass(frozen=True)
class Verdict:
    violations: tuple[str, ...] = field(default=())

    @property
    def accepted(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.accepted


def validate_plan(plan: PsduPlan, geom: FrameGeometry, timing: MacTimingProfile,
                  phy: PhyProfile) -> Verdict:
    """Check a plan against the 802.11ac limits; never raises."""
    if not plan.entries:
        return Verdict(("empty plan",))
    bad = []
    if plan.distinct_count > MAX_DISTINCT_MPDUS:
        bad.append(f"distinct MPDUs {plan.distinct_count} > {MAX_DISTINCT_MPDUS}")
    airtime = psdu_airtime_us(plan, geom, timing, phy)
    if airtime > MAX_PSDU_AIRTIME_US:
        bad.append(f"airtime {airtime:g} us > {MAX_PSDU_AIRTIME_US:g} us")
    element = mpdu_element_bytes(geom)
    total = plan.total_copies * element
    if total > MAX_PSDU_BYTES:
        bad.append(f"PSDU length {total} > {MAX_PSDU_BYTES} bytes")
    mpdu = element - geom.mac_delimiter_bytes
    if mpdu > MAX_MPDU_BYTES:
        bad.append(f"MPDU length {mpdu} > {MAX_MPDU_BYTES} bytes")
    return Verdict(tuple(bad))


def analytic_throughput(x_distinct: int, p_succ: float, geom: FrameGeometry,
                        timing: MacTimingProfile, phy: PhyProfile) -> float:
    """Throughput in Mbps of one attempt carrying X single-copy MPDUs.

    Expected delivered MSDU bits over C1 plus the PSDU airtime.
    """
    if not 1 <= x_distinct <= MAX_DISTINCT_MPDUS:
        raise ValueError(f"x_distinct must be in 1..{MAX_DISTINCT_MPDUS}, got {x_distinct}")
    if not 0.0 <= p_succ <= 1.0:
        raise ValueError(f"p_succ must be a probability, got {p_succ}")
    plan = PsduPlan(tuple((i, 1) for i in range(x_distinct)))
    air = psdu_airtime_us(plan, geom, timing, phy)
    return geom.payload_bits * x_distinct * p_succ / (timing.c1() + air)
