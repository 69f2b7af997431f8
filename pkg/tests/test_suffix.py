import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import common_prefix, naive_lcp, naive_longest, naive_range, naive_sa
from salz import (
    ContractError,
    Parse,
    build_lcp,
    build_rank,
    build_suffix_array,
    longest_match,
    sa_range,
    update_sliding_sa,
)
from salz.suffix import index_dtype

MISSISSIPPI = b"mississippi"
# suffix numbers as printed, numbered from 1
MISSISSIPPI_SA_ONE_BASED = [11, 8, 5, 2, 1, 10, 9, 7, 4, 6, 3]
MISSISSIPPI_LCP = [0, 1, 1, 4, 0, 0, 1, 0, 2, 1, 3]


def small_alphabet_text(alphabet, max_size=300):
    return st.lists(st.sampled_from(alphabet), min_size=1, max_size=max_size).map(bytes)


texts = st.one_of(
    st.binary(min_size=1, max_size=300),
    small_alphabet_text(b"ab"),
    small_alphabet_text(b"acgt"),
)


def test_mississippi_suffix_array():
    assert build_suffix_array(MISSISSIPPI).tolist() == [p - 1 for p in MISSISSIPPI_SA_ONE_BASED]


def test_mississippi_lcp():
    sa = build_suffix_array(MISSISSIPPI)
    assert build_lcp(MISSISSIPPI, sa, build_rank(sa)).tolist() == MISSISSIPPI_LCP


def test_lcp_suffix_2_and_5_share_four():
    # one-based suffixes 2 and 5 are "ississippi" / "issippi"
    sa = build_suffix_array(MISSISSIPPI).tolist()
    lcp = build_lcp(MISSISSIPPI, sa)
    r2, r5 = sa.index(1), sa.index(4)
    assert abs(r2 - r5) == 1
    assert lcp[max(r2, r5)] == 4


def test_degenerate_inputs():
    assert build_suffix_array(b"a").tolist() == [0]
    assert build_suffix_array(b"").tolist() == []
    assert build_rank([0]).tolist() == [0]
    assert build_rank([2, 0, 1]).tolist() == [1, 2, 0]


def test_mississippi_rank():
    r = build_rank(build_suffix_array(MISSISSIPPI))
    assert r[10] == 0 and r[0] == 4


def test_distinct_bytes_lcp_zero():
    t = bytes(np.random.default_rng(0).permutation(256).astype(np.uint8))
    assert not build_lcp(t, build_suffix_array(t)).any()


def test_index_dtype_two_bytes():
    assert build_suffix_array(b"abc" * 100).dtype == np.uint16
    assert index_dtype(65536) == np.uint16
    assert index_dtype(65537) == np.uint32


def test_s_range_mississippi():
    sa = build_suffix_array(MISSISSIPPI)
    left, right = sa_range(MISSISSIPPI, sa, ord("s"))
    assert (left, right) == (7, 10)
    assert sa[left : right + 1].tolist() == [6, 3, 5, 2]
    assert sa_range(MISSISSIPPI, sa, ord("z")) is None


def test_issia_interval_and_greedy_pick():
    sa = build_suffix_array(MISSISSIPPI)
    left, right = sa_range(MISSISSIPPI, sa, ord("i"))
    assert (left, right) == (0, 3)
    assert longest_match(MISSISSIPPI, sa, left, right, b"issia") == (4, 4)
    # 4 and 1 both match "issi"; rank 2 ("issippi") precedes rank 3 ("ississippi")
    assert {4, 1} == {p for p in sa[left : right + 1].tolist()
                      if common_prefix(MISSISSIPPI[p:], b"issia") == 4}
    assert naive_longest(MISSISSIPPI, b"issia") == 4


def test_psi_interval():
    sa = build_suffix_array(MISSISSIPPI)
    assert sa_range(MISSISSIPPI, sa, ord("p")) == (5, 6)


def test_unique_first_byte_gives_len_one():
    t = b"mississippi"
    sa = build_suffix_array(t)
    left, right = sa_range(t, sa, ord("m"))
    assert longest_match(t, sa, left, right, b"mx") == (0, 1)


def test_first_match_takes_left():
    sa = build_suffix_array(MISSISSIPPI)
    left, right = sa_range(MISSISSIPPI, sa, ord("i"))
    assert longest_match(MISSISSIPPI, sa, left, right, b"issia", Parse.FIRST) == (10, 1)


@settings(max_examples=300)
@given(texts)
def test_suffix_array_matches_naive(t):
    sa = build_suffix_array(t)
    assert sorted(sa.tolist()) == list(range(len(t)))
    assert sa.tolist() == naive_sa(t)


@settings(max_examples=300)
@given(texts)
def test_lcp_matches_naive(t):
    sa = build_suffix_array(t)
    lcp = build_lcp(t, sa, build_rank(sa))
    assert lcp.tolist() == naive_lcp(t, sa.tolist())
    for j in range(1, len(t)):
        assert lcp[j] <= len(t) - max(sa[j - 1], sa[j])


@settings(max_examples=300)
@given(texts, st.integers(0, 255))
def test_sa_range_is_first_byte_filter(t, sym):
    sa = build_suffix_array(t)
    expected = naive_range(t, sa.tolist(), sym)
    got = sa_range(t, sa, sym)
    if not expected:
        assert got is None
    else:
        assert got == (expected[0], expected[-1])
        assert expected == list(range(got[0], got[1] + 1))


@settings(max_examples=300)
@given(texts, st.binary(min_size=1, max_size=40))
def test_longest_match_matches_naive(t, pattern):
    sa = build_suffix_array(t)
    rng = sa_range(t, sa, pattern[0])
    if rng is None:
        assert naive_longest(t, pattern) == 0
        return
    pos, n = longest_match(t, sa, *rng, pattern)
    assert n == naive_longest(t, pattern)
    assert t[pos : pos + n] == pattern[:n]
    _, first = longest_match(t, sa, *rng, pattern, Parse.FIRST)
    assert 1 <= first <= n


def test_update_shift_offsets():
    old = b"this_is_the_dict"
    lab = b"the_"
    new = old[4:] + lab
    p = build_suffix_array(old)
    q = update_sliding_sa(p, lab, new).tolist()
    assert sorted(q) == list(range(16))
    inserted = [x for x in q if x >= 12]
    assert inserted == [x + 12 for x in build_suffix_array(lab).tolist()]
    survivors = [x for x in q if x < 12]
    assert survivors == [x - 4 for x in p.tolist() if x >= 4]


def test_update_empty_lab_is_identity():
    p = build_suffix_array(b"this_is_the_dict")
    assert update_sliding_sa(p, b"", b"this_is_the_dict").tolist() == p.tolist()


def test_update_rejects_oversized_lab():
    with pytest.raises(ContractError):
        update_sliding_sa(build_suffix_array(b"abc"), b"abcd", b"abcd")
    with pytest.raises(ContractError):
        update_sliding_sa(build_suffix_array(b"abcd"), b"xy", b"abzz")


@settings(max_examples=300)
@given(st.data())
def test_update_properties(data):
    alphabet = data.draw(st.sampled_from([b"ab", b"abc", bytes(range(256))]))
    old = data.draw(small_alphabet_text(alphabet, 80).filter(lambda s: len(s) >= 2))
    k = data.draw(st.integers(0, len(old)))
    lab = data.draw(st.lists(st.sampled_from(alphabet), min_size=k, max_size=k).map(bytes))
    new = old[k:] + lab
    p = build_suffix_array(old)
    q = update_sliding_sa(p, lab, new).tolist()
    assert sorted(q) == list(range(len(new)))
    # survivors keep their relative order
    assert [x for x in q if x < len(new) - k] == [x - k for x in p.tolist() if x >= k]
    # first-symbol grouping is exact, so range search stays correct
    firsts = [new[x] for x in q]
    assert firsts == sorted(firsts)


def test_update_versus_rebuild_diagnostic():
    """How often the shifted array differs from a fresh build (informational)."""
    rng = np.random.default_rng(7)
    differ = 0
    trials = 500
    for _ in range(trials):
        old = rng.integers(0, 2, 32, dtype=np.uint8).tobytes()
        lab = rng.integers(0, 2, 4, dtype=np.uint8).tobytes()
        new = old[4:] + lab
        q = update_sliding_sa(build_suffix_array(old), lab, new)
        differ += q.tolist() != build_suffix_array(new).tolist()
    print(f"updated SA differs from rebuild in {differ}/{trials} binary-alphabet trials")
    assert 0 <= differ <= trials
