from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ampdu_sim.frame import (EmptyPlanError, FrameGeometry, MacTimingProfile, Mode, PhyProfile,
                             PsduPlan, SizeLimitError, analytic_throughput, mpdu_element_bytes,
                             psdu_airtime_us, psdu_bits, validate_plan)

TIMING = MacTimingProfile()


def ceil_div(a, b):
    return -(-a // b)


def plan_of(n, copies=1):
    return PsduPlan(tuple((i, copies) for i in range(n)))


def test_default_timing_constants():
    assert TIMING.service_tail_bits == 22
    assert TIMING.avg_backoff_us == 7.5 * 9
    assert TIMING.c1() == 43 + 67.5 + 43 + 16 + 32 == 201.5


def test_nonpositive_duration_rejected():
    with pytest.raises(ValueError, match="sifs_us"):
        MacTimingProfile(sifs_us=0)


@pytest.mark.parametrize("rate,bits", [(433.3, 1733.2), (866.7, 3466.8),
                                       (1299.9, 5199.6), (3466.8, 13867.2)])
def test_bits_per_symbol(rate, bits):
    assert PhyProfile(rate).data_bits_per_symbol == pytest.approx(bits, rel=1e-12)


@pytest.mark.parametrize("msdu,element", [(128, 168), (512, 552), (1024, 1064), (1500, 1540)])
def test_ampdu_element_sizes(msdu, element):
    assert mpdu_element_bytes(FrameGeometry(msdu)) == element


@pytest.mark.parametrize("m,expected", [(1, 1556), (2, 3072)])
def test_two_level_element(m, expected):
    subframe = 4 * ceil_div(14 + 1500, 4)
    assert expected == 4 * ceil_div(4 + 32 + 4 + m * subframe, 4)
    assert mpdu_element_bytes(FrameGeometry(1500, m, Mode.TWO_LEVEL)) == expected


def test_size_limits():
    with pytest.raises(SizeLimitError, match="MSDU"):
        FrameGeometry(2305)
    # 7 * 2320 + 36 bytes of MPDU exceeds 11454
    with pytest.raises(SizeLimitError, match="MPDU"):
        FrameGeometry(2304, 7, Mode.TWO_LEVEL)
    with pytest.raises(ValueError):
        FrameGeometry(1500, 2, Mode.AMPDU)


@pytest.mark.parametrize("n,copies,msdu,bits", [(1, 1, 1500, 12342), (64, 1, 1500, 788502),
                                                (1, 2, 128, 2710)])
def test_psdu_bits(n, copies, msdu, bits):
    assert psdu_bits(plan_of(n, copies), FrameGeometry(msdu), TIMING) == bits


def test_empty_plan():
    with pytest.raises(EmptyPlanError):
        psdu_bits(PsduPlan(()), FrameGeometry(1500), TIMING)


@pytest.mark.parametrize("n,rate,us", [(1, 1299.9, 12), (64, 1299.9, 608), (64, 3466.8, 228)])
def test_airtime(n, rate, us):
    bits = 8 * n * 1540 + 22
    symbols = ceil_div(Fraction(bits), Fraction(str(rate)) * 4)
    assert 4 * symbols == us
    assert psdu_airtime_us(plan_of(n), FrameGeometry(1500), TIMING, PhyProfile(rate)) == us


def test_validate_plan():
    geom, phy = FrameGeometry(1500), PhyProfile(433.3)
    assert validate_plan(plan_of(64), geom, TIMING, phy).accepted
    assert psdu_airtime_us(plan_of(64), geom, TIMING, phy) == 1820
    verdict = validate_plan(plan_of(64, 5), geom, TIMING, phy)
    assert not verdict
    assert psdu_airtime_us(plan_of(64, 5), geom, TIMING, phy) == 9100
    assert any("airtime" in v for v in verdict.violations)
    verdict = validate_plan(plan_of(65), geom, TIMING, PhyProfile(3466.8))
    assert [v for v in verdict.violations if "distinct" in v]


def test_plan_requires_increasing_seqs():
    with pytest.raises(ValueError):
        PsduPlan(((3, 1), (3, 1)))
    with pytest.raises(ValueError):
        PsduPlan(((0, 0),))


def test_analytic_examples():
    geom, phy = FrameGeometry(1500), PhyProfile(1299.9)
    assert analytic_throughput(64, 1.0, geom, TIMING, phy) == pytest.approx(768000 / 809.5, rel=1e-12)
    assert round(analytic_throughput(64, 1.0, geom, TIMING, phy), 2) == 948.73
    assert round(analytic_throughput(64, 0.5, geom, TIMING, phy), 2) == 474.37
    assert analytic_throughput(7, 0.0, geom, TIMING, phy) == 0
    with pytest.raises(ValueError):
        analytic_throughput(65, 1.0, geom, TIMING, phy)


geoms = st.one_of(
    st.builds(FrameGeometry, st.integers(1, 2304)),
    st.builds(lambda L, m: FrameGeometry(L, m, Mode.TWO_LEVEL),
              st.integers(1, 1500), st.integers(1, 7)),
)


@given(geoms)
def test_padding_is_multiple_of_four(geom):
    e = mpdu_element_bytes(geom)
    assert e % 4 == 0
    raw = 40 + geom.msdu_bytes if geom.mode is Mode.AMPDU else 40 + geom.msdus_per_mpdu * (14 + geom.msdu_bytes)
    assert e >= raw


@given(st.integers(1, 2300))
def test_element_increasing_in_length(msdu):
    # padding makes it non-strict between neighbours; strict across a 4-byte step
    assert mpdu_element_bytes(FrameGeometry(msdu + 4)) > mpdu_element_bytes(FrameGeometry(msdu))
    assert mpdu_element_bytes(FrameGeometry(msdu + 1)) >= mpdu_element_bytes(FrameGeometry(msdu))


@given(st.integers(1, 1500), st.integers(1, 6))
def test_element_increasing_in_msdus(msdu, m):
    a = FrameGeometry(msdu, m, Mode.TWO_LEVEL)
    b = FrameGeometry(msdu, m + 1, Mode.TWO_LEVEL)
    assert mpdu_element_bytes(b) > mpdu_element_bytes(a)


@given(st.lists(st.integers(1, 5), min_size=1, max_size=64), st.integers(0, 63))
def test_bits_increase_with_copies(copies, idx):
    idx %= len(copies)
    geom = FrameGeometry(512)
    p1 = PsduPlan(tuple(enumerate(copies)))
    bumped = list(copies)
    bumped[idx] += 1
    p2 = PsduPlan(tuple(enumerate(bumped)))
    assert psdu_bits(p2, geom, TIMING) > psdu_bits(p1, geom, TIMING)


@given(st.integers(1, 64), st.sampled_from([433.3, 866.7, 1299.9, 3466.8]), geoms)
def test_airtime_is_whole_symbols(n, rate, geom):
    t = psdu_airtime_us(plan_of(n), geom, TIMING, PhyProfile(rate))
    assert t > 0 and (t / TIMING.t_sym_us).is_integer()


@pytest.mark.parametrize("msdu", [128, 512, 1024, 1500])
@pytest.mark.parametrize("rate", [433.3, 866.7, 1299.9, 3466.8])
def test_eq1_increasing_in_x(msdu, rate):
    geom, phy = FrameGeometry(msdu), PhyProfile(rate)
    values = [analytic_throughput(x, 1.0, geom, TIMING, phy) for x in range(1, 65)]
    air = [psdu_airtime_us(plan_of(x), geom, TIMING, phy) for x in range(1, 65)]
    for i in range(63):
        if air[i + 1] == air[i]:
            assert values[i + 1] > values[i]
    assert max(values) == values[-1]


def test_eq1_dips_when_a_symbol_is_added():
    # 62 x 168-byte MPDUs need 7 symbols at 3466.8 Mbps, 61 fit in 6
    geom, phy = FrameGeometry(128), PhyProfile(3466.8)
    assert ceil_div(Fraction(62 * 1344 + 22), Fraction("13867.2")) == 7
    assert ceil_div(Fraction(61 * 1344 + 22), Fraction("13867.2")) == 6
    assert (analytic_throughput(62, 1.0, geom, TIMING, phy)
            < analytic_throughput(61, 1.0, geom, TIMING, phy))
