"""LZ77/LZSS encoders backed by suffix arrays (A1, A2, A3) and a binary tree (BT).

All four read the first ``dict_len`` input bytes as the initial dictionary
and emit tokens for the rest. The suffix-array encoders search only the
dictionary and slide once per full look-ahead buffer; the tree encoder
slides after every token.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numba
import numpy as np

from .core import (
    KIND_LITERAL,
    KIND_MATCH,
    KIND_TRIPLE,
    Algorithm,
    ContractError,
    EncoderConfig,
    TokenFormat,
    TokenStream,
)
from .suffix import _common, _lcp, _longest_match, _rank, _sa_range, _suffix_array, _update_sa

_jit = numba.njit(cache=True, nogil=True)


# --------------------------------------------------------------------------
# suffix-array encoders


@_jit
def _a3_pick(w, p3, r3, l3, dict_len, idx, room, extended):
    """Best dictionary neighbour of window suffix ``idx`` in the SA of dictionary||LAB."""
    n = p3.shape[0]
    r = r3[idx]
    best_pos = -1
    best_len = 0
    # predecessor side: lcp(P[j], target) is the running minimum of l3[j+1..r]
    j = r - 1
    run = l3[r] if r > 0 else 0
    while j >= 0:
        q = p3[j]
        if q < dict_len:
            cand = min(run, room, dict_len - q)
            if cand > best_len:
                best_pos = q
                best_len = cand
            break
        if not extended or run == 0:
            break
        run = min(run, l3[j])
        j -= 1
    j = r + 1
    run = l3[j] if j < n else 0
    while j < n:
        q = p3[j]
        if q < dict_len:
            cand = min(run, room, dict_len - q)
            if cand > best_len:
                best_pos = q
                best_len = cand
            break
        if not extended or run == 0:
            break
        j += 1
        if j < n:
            run = min(run, l3[j])
    if best_pos >= 0:
        # re-measure directly; the LCP value is only a bound
        best_len = _common(w, best_pos, w, idx, best_len)
    return best_pos, best_len


@_jit
def _encode_sa(data, dict_len, lab_len, algo, lz77, parse, min_match, extended):
    n = data.shape[0]
    cap = max(n - dict_len, 0)
    kind = np.empty(cap, np.uint8)
    pos = np.empty(cap, np.int32)
    length = np.empty(cap, np.int32)
    symbol = np.empty(cap, np.uint8)
    nt = 0
    if n <= dict_len:
        return kind[:0], pos[:0], length[:0], symbol[:0]

    p = np.empty(0, np.int32)
    p3 = np.empty(0, np.int32)
    r3 = np.empty(0, np.int32)
    l3 = np.empty(0, np.int32)
    if algo == 1:
        p = _suffix_array(data[0:dict_len])
    s = dict_len
    while s < n:
        fill = min(lab_len, n - s)
        d = data[s - dict_len : s]
        w = data[s - dict_len : s + fill]
        if algo == 0:
            p = _suffix_array(d)
        elif algo == 2:
            p3 = _suffix_array(w)
            r3 = _rank(p3)
            l3 = _lcp(w, p3, r3)
        i = 0
        while i < fill:
            room = fill - i - lz77
            bp = -1
            bl = 0
            if room >= 1:
                if algo == 2:
                    bp, bl = _a3_pick(w, p3, r3, l3, dict_len, dict_len + i, room, extended)
                else:
                    left, right = _sa_range(d, p, dict_len, data[s + i])
                    if left <= right:
                        bp, bl = _longest_match(d, dict_len, p, left, right, data, s + i, room, parse)
            if lz77:
                kind[nt] = KIND_TRIPLE
                if bl >= 1:
                    pos[nt] = bp
                    length[nt] = bl
                    symbol[nt] = data[s + i + bl]
                    i += bl + 1
                else:
                    pos[nt] = 0
                    length[nt] = 0
                    symbol[nt] = data[s + i]
                    i += 1
            elif bl >= min_match:
                kind[nt] = KIND_MATCH
                pos[nt] = bp
                length[nt] = bl
                symbol[nt] = 0
                i += bl
            else:
                kind[nt] = KIND_LITERAL
                pos[nt] = 0
                length[nt] = 0
                symbol[nt] = data[s + i]
                i += 1
            nt += 1
        if algo == 1 and s + fill < n:
            p = _update_sa(p, data[s + fill - dict_len : s + fill], fill)
        s += fill
    return kind[:nt], pos[:nt], length[:nt], symbol[:nt]


# --------------------------------------------------------------------------
# binary tree baseline
#
# Nodes are window slots ``q % W`` with W = dict_len + lab_len + 1; each
# node stores parent/left/right. Slot W is a sentinel whose right child is
# the root. A parent of -1 marks a slot that is not in the tree. The key of
# position q is data[q : q + lab_len], so keys never change while a
# position is live.


@_jit
def _key_cmp(data, a, b, keylen):
    n = data.shape[0]
    la = min(keylen, n - a)
    lb = min(keylen, n - b)
    h = _common(data, a, data, b, min(la, lb))
    if h == min(la, lb):
        if la == lb:
            return 0, h
        return (-1 if la < lb else 1), h
    return (-1 if data[a + h] < data[b + h] else 1), h


@_jit
def _bt_link(parent, left, right, old, new):
    """Point old's parent at ``new`` instead of ``old``."""
    po = parent[old]
    if right[po] == old:
        right[po] = new
    else:
        left[po] = new
    if new >= 0:
        parent[new] = po


@_jit
def _bt_delete(parent, left, right, z):
    if parent[z] == -1:
        return
    if left[z] == -1:
        _bt_link(parent, left, right, z, right[z])
    elif right[z] == -1:
        _bt_link(parent, left, right, z, left[z])
    else:
        y = left[z]
        while right[y] != -1:
            y = right[y]
        if y != left[z]:
            _bt_link(parent, left, right, y, left[y])
            left[y] = left[z]
            parent[left[z]] = y
        right[y] = right[z]
        parent[right[z]] = y
        _bt_link(parent, left, right, z, y)
    parent[z] = -1
    left[z] = -1
    right[z] = -1


@_jit
def _bt_insert(data, parent, left, right, q, keylen, nslots, room, lo):
    """Insert position ``q``; returns the best match for it among positions >= ``lo``.

    The descent visits the key's predecessor and successor, so the best
    match on the path is the best in the tree. Match lengths are capped at
    ``room`` and at the distance to ``q``.
    """
    root = nslots
    z = q % nslots
    # live positions lie in (q - nslots, q]; slot s maps to base + s or base + s - nslots
    base = q - z
    left[z] = -1
    right[z] = -1
    best_pos = -1
    best_len = 0
    x = right[root]
    if x == -1:
        right[root] = z
        parent[z] = root
        return best_pos, best_len
    while True:
        xq = base + x if x <= z else base + x - nslots
        c, h = _key_cmp(data, q, xq, keylen)
        if xq >= lo:
            cand = min(h, room, q - xq)
            if cand > best_len:
                best_len = cand
                best_pos = xq
        if c == 0:
            # same key: the newer position takes over the node
            left[z] = left[x]
            right[z] = right[x]
            if left[z] != -1:
                parent[left[z]] = z
            if right[z] != -1:
                parent[right[z]] = z
            _bt_link(parent, left, right, x, z)
            parent[x] = -1
            left[x] = -1
            right[x] = -1
            return best_pos, best_len
        nxt = left[x] if c < 0 else right[x]
        if nxt == -1:
            if c < 0:
                left[x] = z
            else:
                right[x] = z
            parent[z] = x
            return best_pos, best_len
        x = nxt


@_jit
def _encode_bt(data, dict_len, lab_len, lz77, min_match):
    n = data.shape[0]
    cap = max(n - dict_len, 0)
    kind = np.empty(cap, np.uint8)
    pos = np.empty(cap, np.int32)
    length = np.empty(cap, np.int32)
    symbol = np.empty(cap, np.uint8)
    nt = 0
    if n <= dict_len:
        return kind[:0], pos[:0], length[:0], symbol[:0]
    nslots = dict_len + lab_len + 1
    parent = np.full(nslots + 1, -1, np.int32)
    left = np.full(nslots + 1, -1, np.int32)
    right = np.full(nslots + 1, -1, np.int32)
    for q in range(dict_len):
        _bt_insert(data, parent, left, right, q, lab_len, nslots, 0, 0)
    cur = dict_len
    while cur < n:
        room = min(lab_len, n - cur) - lz77
        # the insert descent doubles as the search; the oldest position is
        # still in the tree and is excluded through ``lo``
        bq, bl = _bt_insert(data, parent, left, right, cur, lab_len, nslots, max(room, 0), cur - dict_len)
        _bt_delete(parent, left, right, (cur - dict_len) % nslots)
        if lz77:
            kind[nt] = KIND_TRIPLE
            if bl >= 1:
                pos[nt] = bq - (cur - dict_len)
                length[nt] = bl
                symbol[nt] = data[cur + bl]
                step = bl + 1
            else:
                pos[nt] = 0
                length[nt] = 0
                symbol[nt] = data[cur]
                step = 1
        elif bl >= min_match:
            kind[nt] = KIND_MATCH
            pos[nt] = bq - (cur - dict_len)
            length[nt] = bl
            symbol[nt] = 0
            step = bl
        else:
            kind[nt] = KIND_LITERAL
            pos[nt] = 0
            length[nt] = 0
            symbol[nt] = data[cur]
            step = 1
        nt += 1
        cur += 1
        for _ in range(step - 1):
            _bt_insert(data, parent, left, right, cur, lab_len, nslots, 0, cur)
            _bt_delete(parent, left, right, (cur - dict_len) % nslots)
            cur += 1
    return kind[:nt], pos[:nt], length[:nt], symbol[:nt]


# --------------------------------------------------------------------------
# public API


@dataclass
class EncodeStats:
    input_bytes: int
    output_bits: int
    elapsed_time: float
    structure_bytes: int


@dataclass
class EncodeResult:
    tokens: TokenStream
    stats: EncodeStats
    config: EncoderConfig
    dictionary: bytes

    @property
    def payload_bpb(self) -> float:
        if not self.stats.input_bytes:
            return 0.0
        return self.stats.output_bits / self.stats.input_bytes


@dataclass(frozen=True)
class MemoryReport:
    """Encoder data-structure sizes in bytes.

    ``formula`` follows the published accounting (dictionary + LAB + 2-byte
    arrays sized by the dictionary). ``structure`` sizes what the encoder
    actually holds; they differ for A3, whose arrays span dictionary||LAB,
    and for BT. ``published`` is the figure printed beside the (256, 32)
    and (1024, 128) tables, or None.
    """

    formula: int
    structure: int
    published: int | None


_PUBLISHED = {
    (Algorithm.A1, 256, 32): 800,
    (Algorithm.A2, 256, 32): 800,
    (Algorithm.A3, 256, 32): 1312,
    (Algorithm.BT, 256, 32): 3084,
    (Algorithm.A1, 1024, 128): 3200,
    (Algorithm.A2, 1024, 128): 3200,
    (Algorithm.A3, 1024, 128): 5248,
    (Algorithm.BT, 1024, 128): 12300,
}

#: Suffix-tree encoder sizes quoted for comparison only; no ST encoder is built.
SUFFIX_TREE_PUBLISHED = {(256, 32): 7440, (1024, 128): 29712}


def memory_breakdown(cfg: EncoderConfig) -> MemoryReport:
    m, n = cfg.dict_len, cfg.lab_len
    width = np.dtype(np.uint16 if m + n <= 65536 else np.uint32).itemsize
    if cfg.algorithm in (Algorithm.A1, Algorithm.A2):
        formula = structure = m + n + width * m
    elif cfg.algorithm == Algorithm.A3:
        formula = m + n + 2 * width * m
        structure = m + n + 2 * width * (m + n)
    else:
        formula = structure = 3 * 4 * (m + n + 1)
    return MemoryReport(formula, structure, _PUBLISHED.get((cfg.algorithm, m, n)))


def memory_report(cfg: EncoderConfig) -> int:
    """Encoder memory in bytes by the published formula (see :func:`memory_breakdown`)."""
    return memory_breakdown(cfg).formula


def read_input(source) -> bytes:
    """Accept bytes-like data or a binary file object."""
    if isinstance(source, (bytes, bytearray, memoryview)):
        return bytes(source)
    if isinstance(source, np.ndarray):
        return source.astype(np.uint8, copy=False).tobytes()
    chunks = []
    done = 0
    while True:
        try:
            chunk = source.read(1 << 16)
        except OSError as exc:
            raise OSError(f"reading input failed after {done} bytes: {exc}") from exc
        if not chunk:
            break
        chunks.append(chunk)
        done += len(chunk)
    return b"".join(chunks)


def _run(source, cfg: EncoderConfig, expected: Algorithm) -> EncodeResult:
    if cfg.algorithm != expected:
        raise ContractError(f"config selects {cfg.algorithm.name}, not {expected.name}")
    data = read_input(source)
    arr = np.frombuffer(data, dtype=np.uint8)
    lz77 = int(cfg.token_format == TokenFormat.LZ77)
    t0 = time.perf_counter()
    if expected == Algorithm.BT:
        cols = _encode_bt(arr, cfg.dict_len, cfg.lab_len, lz77, cfg.min_match)
    else:
        cols = _encode_sa(
            arr, cfg.dict_len, cfg.lab_len, int(expected), lz77,
            int(cfg.parse), cfg.min_match, cfg.a3_extended,
        )
    elapsed = time.perf_counter() - t0
    tokens = TokenStream(*cols)
    stats = EncodeStats(
        input_bytes=len(data),
        output_bits=int(tokens.bit_costs(cfg).sum()),
        elapsed_time=elapsed,
        structure_bytes=memory_breakdown(cfg).structure,
    )
    return EncodeResult(tokens, stats, cfg, data[: cfg.dict_len])


def encode_a1(source, cfg: EncoderConfig) -> EncodeResult:
    """Rebuild the dictionary's suffix array for every look-ahead buffer."""
    return _run(source, cfg, Algorithm.A1)


def encode_a2(source, cfg: EncoderConfig) -> EncodeResult:
    """Build one suffix array, then shift/prune/merge it after every slide."""
    return _run(source, cfg, Algorithm.A2)


def encode_a3(source, cfg: EncoderConfig) -> EncodeResult:
    """Suffix array + LCP over dictionary||LAB; each LAB suffix checks its two SA neighbours."""
    return _run(source, cfg, Algorithm.A3)


def encode_bt(source, cfg: EncoderConfig) -> EncodeResult:
    return _run(source, cfg, Algorithm.BT)


_DISPATCH = {
    Algorithm.A1: encode_a1,
    Algorithm.A2: encode_a2,
    Algorithm.A3: encode_a3,
    Algorithm.BT: encode_bt,
}


def encode(source, cfg: EncoderConfig) -> EncodeResult:
    return _DISPATCH[cfg.algorithm](source, cfg)


def dictionary_starts(tokens: TokenStream, cfg: EncoderConfig) -> np.ndarray:
    """Absolute input offset of the dictionary each token refers to."""
    spans = tokens.spans()
    cursor = cfg.dict_len + np.concatenate(([0], np.cumsum(spans)[:-1])).astype(np.int64)
    if cfg.batch_slide:
        lab_start = cfg.dict_len + (cursor - cfg.dict_len) // cfg.lab_len * cfg.lab_len
        return lab_start - cfg.dict_len
    return cursor - cfg.dict_len


def verify_matches(data: bytes, result: EncodeResult) -> None:
    """Check every back-reference against the input it claims to reproduce."""
    cfg = result.config
    tokens = result.tokens
    if len(tokens) == 0:
        return
    starts = dictionary_starts(tokens, cfg)
    cursor = cfg.dict_len + np.concatenate(([0], np.cumsum(tokens.spans())[:-1]))
    total = cfg.dict_len + int(tokens.spans().sum())
    if total != len(data):
        raise ContractError(f"tokens cover {total} bytes, input has {len(data)}")
    for j in np.flatnonzero(tokens.kind != KIND_LITERAL):
        p, n, c, s = int(tokens.pos[j]), int(tokens.length[j]), int(cursor[j]), int(starts[j])
        if n == 0:
            continue
        if p + n > cfg.dict_len or data[s + p : s + p + n] != data[c : c + n]:
            raise ContractError(f"token {j} ({p}, {n}) does not reproduce input at {c}")


def warmup() -> None:
    """Compile every kernel once so later timings exclude JIT cost."""
    sample = bytes(range(64)) * 8
    for algo in Algorithm:
        for fmt in TokenFormat:
            encode(sample, EncoderConfig(16, 4, algo, fmt))
