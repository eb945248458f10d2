import pytest
from hypothesis import given, strategies as st

from ampdu_sim.window import WindowError, WindowState, apply_back, select_xmin


def paper_window():
    # W=10, K=9; MPDUs 2, 4..8 already delivered, base is MPDU 1
    return WindowState(width=10, base_seq=1, delivered=[2, 4, 5, 6, 7, 8])


def test_paper_xmin_example():
    state = paper_window()
    assert state.delivered_count == 6
    assert select_xmin(state, 9) == [1, 3, 9, 10]


def test_fresh_window():
    assert select_xmin(WindowState(64), 32) == list(range(32))


def test_small_window_example():
    state = WindowState(width=4, base_seq=7, delivered=[8, 9])
    assert select_xmin(state, 4) == [7, 10]


def test_k_out_of_range():
    with pytest.raises(ValueError):
        select_xmin(WindowState(4), 5)


def test_back_slides_past_contiguous_prefix():
    state = paper_window()
    assert apply_back(state, {1}) == 1
    assert state.base_seq == 3
    assert state.window() == range(3, 13)
    assert state.delivered == {4, 5, 6, 7, 8}


def test_empty_back_is_noop():
    state = paper_window()
    assert apply_back(state, set()) == 0
    assert state.base_seq == 1 and state.delivered == {2, 4, 5, 6, 7, 8}


def test_full_slide():
    state = WindowState(3)
    assert apply_back(state, {0, 1, 2}) == 3
    assert state.base_seq == 3 and state.delivered == set() and state.mask == 0


def test_back_is_idempotent():
    state = paper_window()
    assert apply_back(state, {3}) == 1
    assert apply_back(state, {3}) == 0


def test_outside_window_rejected():
    with pytest.raises(WindowError):
        apply_back(paper_window(), {11})
    with pytest.raises(WindowError):
        apply_back(paper_window(), {0})


@st.composite
def back_sequences(draw):
    w = draw(st.integers(1, 64))
    k = draw(st.integers(1, w))
    rounds = draw(st.lists(st.lists(st.booleans(), min_size=64, max_size=64), max_size=30))
    return w, k, rounds


@given(back_sequences())
def test_window_invariants(case):
    w, k, rounds = case
    state = WindowState(w)
    total_new = 0
    for flags in rounds:
        xmin = select_xmin(state, k)
        assert xmin == sorted(set(xmin))
        assert xmin[0] == state.base_seq
        assert set(xmin) <= set(state.window())
        assert not set(xmin) & state.delivered
        assert len(xmin) == min(k, w - state.delivered_count)
        before = state.base_seq
        total_new += apply_back(state, {s for s, f in zip(xmin, flags) if f})
        assert state.base_seq >= before
        assert not state.mask & 1
        assert total_new == state.base_seq + state.delivered_count
