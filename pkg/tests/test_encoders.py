import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_lab_best
from salz import (
    Algorithm,
    ContractError,
    EncoderConfig,
    Literal,
    Match,
    Parse,
    TokenFormat,
    Triple,
    decode,
    encode,
    encode_a1,
    encode_a2,
    encode_a3,
    encode_bt,
    memory_breakdown,
    memory_report,
)
from salz.codec import write_container
from salz.core import KIND_LITERAL, KIND_MATCH
from salz.decoder import decode_tokens
from salz.encoders import dictionary_starts, verify_matches
from salz.suffix import build_lcp, build_suffix_array

BROW_DICT = b"the slow fox ate brown after the"  # "brow" at 17


def roundtrip(data, cfg):
    res = encode(data, cfg)
    verify_matches(data, res)
    assert decode_tokens(res.tokens, cfg, res.dictionary, len(data)) == data
    assert decode(write_container(res)) == data
    return res


@pytest.mark.parametrize("algo", list(Algorithm))
def test_brow_match_lzss(algo):
    cfg = EncoderConfig(32, 8, algo)
    res = roundtrip(BROW_DICT + b"brows", cfg)
    assert res.tokens.to_list()[0] == Match(17, 4)


@pytest.mark.parametrize("algo", list(Algorithm))
def test_brows_triple_lz77(algo):
    cfg = EncoderConfig(32, 8, algo, TokenFormat.LZ77)
    res = roundtrip(BROW_DICT + b"brows", cfg)
    assert res.tokens.to_list() == [Triple(17, 4, ord("s"))]


@pytest.mark.parametrize("algo", [Algorithm.A1, Algorithm.A2])
def test_same_byte_input_gives_full_lab_matches(algo):
    cfg = EncoderConfig(64, 16, algo)
    res = roundtrip(b"\x00" * (64 + 16 * 10), cfg)
    assert len(res.tokens) == 10
    assert (res.tokens.kind == KIND_MATCH).all() and (res.tokens.length == 16).all()
    assert (res.tokens.pos <= 48).all()


def test_a3_same_byte_input_only_sees_boundary_neighbour():
    # suffixes of a run sort by length, so the only dictionary neighbour of a
    # LAB suffix starts at the last dictionary byte and yields a 1-byte match
    cfg = EncoderConfig(64, 16, Algorithm.A3)
    res = roundtrip(b"\x00" * (64 + 16 * 10), cfg)
    assert (res.tokens.kind == KIND_LITERAL).all()


def test_algorithm_mismatch_is_contract_error():
    with pytest.raises(ContractError):
        encode_a2(b"abc", EncoderConfig(algorithm=Algorithm.A1))


def test_short_input_has_no_tokens():
    res = encode(b"tiny", EncoderConfig())
    assert len(res.tokens) == 0
    assert res.dictionary == b"tiny"
    assert decode(write_container(res)) == b"tiny"


def test_stream_input():
    import io

    data = BROW_DICT * 10
    cfg = EncoderConfig(32, 8)
    assert encode_a1(io.BytesIO(data), cfg).tokens == encode_a1(data, cfg).tokens


class _Broken:
    def __init__(self):
        self.calls = 0

    def read(self, n):
        self.calls += 1
        if self.calls > 1:
            raise OSError("disk on fire")
        return b"x" * 100


def test_stream_error_reports_position():
    with pytest.raises(OSError, match="after 100 bytes"):
        encode_a1(_Broken(), EncoderConfig())


MATRIX = list(itertools.product(
    Algorithm, TokenFormat, [Parse.GREEDY, Parse.FIRST], [(16, 4), (32, 8), (64, 64)]
))


@settings(max_examples=25, deadline=None)
@given(data=st.one_of(
    st.binary(max_size=600),
    st.lists(st.sampled_from(b"ab"), max_size=600).map(bytes),
    st.lists(st.sampled_from(b"abcd "), max_size=600).map(bytes),
))
@pytest.mark.parametrize("algo, fmt, parse, sizes", MATRIX)
def test_roundtrip_property(algo, fmt, parse, sizes, data):
    cfg = EncoderConfig(*sizes, algo, fmt, parse)
    res = roundtrip(data, cfg)
    assert int(res.tokens.spans().sum()) == max(len(data) - cfg.dict_len, 0)
    assert res.stats.output_bits == int(res.tokens.bit_costs(cfg).sum())


@pytest.mark.parametrize("extended", [False, True])
def test_a3_extended_roundtrip(extended):
    rng = np.random.default_rng(3)
    data = rng.integers(97, 100, 5000, dtype=np.uint8).tobytes()
    cfg = EncoderConfig(64, 16, Algorithm.A3, a3_extended=extended)
    roundtrip(data, cfg)


def test_a3_extended_never_worse_here():
    data = (b"abracadabra " * 50 + b"cadabra abra ") * 20
    base = encode(data, EncoderConfig(64, 16, Algorithm.A3))
    ext = encode(data, EncoderConfig(64, 16, Algorithm.A3, a3_extended=True))
    assert ext.stats.output_bits <= base.stats.output_bits


def test_a1_a2_first_window_identical():
    rng = np.random.default_rng(11)
    for _ in range(50):
        data = rng.integers(0, 4, 300, dtype=np.uint8).tobytes()
        cfg1 = EncoderConfig(64, 16, Algorithm.A1)
        cfg2 = EncoderConfig(64, 16, Algorithm.A2)
        t1, t2 = encode(data, cfg1).tokens, encode(data, cfg2).tokens
        n1 = int(np.searchsorted(np.cumsum(t1.spans()), 16)) + 1
        assert t1.to_list()[:n1] == t2.to_list()[:n1]


@pytest.mark.parametrize("algo", [Algorithm.A1, Algorithm.A2])
def test_greedy_is_maximal(algo):
    rng = np.random.default_rng(5)
    data = rng.integers(0, 3, 2000, dtype=np.uint8).tobytes()
    cfg = EncoderConfig(64, 16, algo, min_match=1)
    res = roundtrip(data, cfg)
    starts = dictionary_starts(res.tokens, cfg)
    cursor = cfg.dict_len + np.concatenate(([0], np.cumsum(res.tokens.spans())[:-1]))
    for j in range(len(res.tokens)):
        lab_start = int(starts[j]) + cfg.dict_len
        i = int(cursor[j]) - lab_start
        room = min(cfg.lab_len, len(data) - lab_start) - i
        best = naive_lab_best(data, lab_start, cfg.dict_len, i, room)
        got = int(res.tokens.length[j]) if res.tokens.kind[j] == KIND_MATCH else 0
        assert got == best


def test_a2_greedy_same_lengths_as_a1_lzss():
    data = open(__file__, "rb").read() * 3
    for sizes in [(256, 32), (64, 8)]:
        r1 = encode(data, EncoderConfig(*sizes, Algorithm.A1))
        r2 = encode(data, EncoderConfig(*sizes, Algorithm.A2))
        assert r1.tokens.length.tolist() == r2.tokens.length.tolist()


def test_a3_length_within_lcp_bound():
    rng = np.random.default_rng(9)
    data = rng.integers(0, 3, 1200, dtype=np.uint8).tobytes()
    cfg = EncoderConfig(64, 16, Algorithm.A3, min_match=1)
    res = roundtrip(data, cfg)
    starts = dictionary_starts(res.tokens, cfg)
    cursor = cfg.dict_len + np.concatenate(([0], np.cumsum(res.tokens.spans())[:-1]))
    for j in np.flatnonzero(res.tokens.kind == KIND_MATCH):
        s = int(starts[j])
        lab_start = s + cfg.dict_len
        w = data[s : min(lab_start + cfg.lab_len, len(data))]
        sa = build_suffix_array(w).tolist()
        lcp = build_lcp(w, sa).tolist()
        r = sa.index(int(cursor[j]) - s)
        q = sa.index(int(res.tokens.pos[j]))
        assert abs(q - r) == 1
        assert res.tokens.length[j] <= lcp[max(q, r)]


def test_a3_literal_when_neighbours_in_lab():
    # 'z' only occurs in the LAB: both rank neighbours of "zz.." are LAB suffixes
    cfg = EncoderConfig(16, 4, Algorithm.A3)
    data = b"abcdefghijklmnop" + b"zzzz"
    res = roundtrip(data, cfg)
    assert res.tokens.to_list()[0] == Literal(ord("z"))


def test_bt_node_count_and_memory():
    cfg = EncoderConfig(256, 32, Algorithm.BT)
    mem = memory_breakdown(cfg)
    assert mem.structure == (256 + 32 + 1) * 3 * 4 == 3468
    assert mem.published == 3084
    assert encode_bt(b"x" * 1000, cfg).stats.structure_bytes == 3468


def test_memory_reports():
    assert memory_report(EncoderConfig(256, 32, Algorithm.A1)) == 800
    assert memory_report(EncoderConfig(256, 32, Algorithm.A2)) == 800
    assert memory_report(EncoderConfig(1024, 128, Algorithm.A1)) == 3200
    a3 = memory_breakdown(EncoderConfig(256, 32, Algorithm.A3))
    assert (a3.formula, a3.published) == (1312, 1312)
    assert a3.structure == 256 + 32 + 2 * 288 + 2 * 288
    assert memory_breakdown(EncoderConfig(1024, 128, Algorithm.A3)).formula == 5248


def test_encode_a3_dispatch_and_stats():
    data = BROW_DICT * 40
    cfg = EncoderConfig(32, 8, Algorithm.A3)
    res = encode_a3(data, cfg)
    assert res.stats.input_bytes == len(data)
    assert res.stats.structure_bytes == memory_breakdown(cfg).structure
    assert res.stats.elapsed_time >= 0
    assert (res.tokens.kind == KIND_LITERAL).sum() < len(res.tokens)
