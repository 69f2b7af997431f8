"""Suffix arrays, rank arrays, LCP arrays and the searches built on them.

Construction is prefix doubling with two counting-sort passes per round,
O(m log m) worst case. The ``_``-prefixed kernels are compiled with numba
and shared with the encoders; the public wrappers accept ``bytes`` or
uint8 arrays and return arrays of :func:`index_dtype`.
"""

from __future__ import annotations

import numba
import numpy as np

from .core import ContractError, Parse

_jit = numba.njit(cache=True, nogil=True)


def index_dtype(m: int):
    """2-byte entries while every index fits, wider otherwise."""
    return np.uint16 if m <= 65536 else np.uint32


def as_text(t) -> np.ndarray:
    if isinstance(t, np.ndarray):
        return np.ascontiguousarray(t, dtype=np.uint8)
    return np.frombuffer(bytes(t), dtype=np.uint8)


# --------------------------------------------------------------------------
# kernels


@_jit
def _suffix_array(t):
    n = t.shape[0]
    sa = np.empty(n, np.int32)
    if n == 0:
        return sa
    rank = np.empty(n, np.int32)
    tmp = np.empty(n, np.int32)
    cnt = np.zeros(max(n, 256) + 1, np.int32)

    # round 0: counting sort on the first byte
    for i in range(n):
        cnt[t[i] + 1] += 1
    for c in range(1, 257):
        cnt[c] += cnt[c - 1]
    for i in range(n):
        sa[cnt[t[i]]] = i
        cnt[t[i]] += 1
    classes = 1
    rank[sa[0]] = 0
    for j in range(1, n):
        if t[sa[j]] != t[sa[j - 1]]:
            classes += 1
        rank[sa[j]] = classes - 1

    k = 1
    while classes < n:
        # order by second key: suffixes without a partner k ahead come first
        p = 0
        for i in range(n - k, n):
            tmp[p] = i
            p += 1
        for j in range(n):
            if sa[j] >= k:
                tmp[p] = sa[j] - k
                p += 1
        # stable counting sort by first key
        for c in range(classes + 1):
            cnt[c] = 0
        for i in range(n):
            cnt[rank[i] + 1] += 1
        for c in range(1, classes + 1):
            cnt[c] += cnt[c - 1]
        for j in range(n):
            i = tmp[j]
            sa[cnt[rank[i]]] = i
            cnt[rank[i]] += 1
        # re-rank in tmp
        tmp[sa[0]] = 0
        classes = 1
        for j in range(1, n):
            a = sa[j - 1]
            b = sa[j]
            ra2 = rank[a + k] if a + k < n else -1
            rb2 = rank[b + k] if b + k < n else -1
            if rank[a] != rank[b] or ra2 != rb2:
                classes += 1
            tmp[b] = classes - 1
        for i in range(n):
            rank[i] = tmp[i]
        k *= 2
    return sa


@_jit
def _rank(sa):
    r = np.empty(sa.shape[0], np.int32)
    for j in range(sa.shape[0]):
        r[sa[j]] = j
    return r


@_jit
def _lcp(t, sa, r):
    n = t.shape[0]
    lcp = np.zeros(n, np.int32)
    h = 0
    for i in range(n):
        j = r[i]
        if j == 0:
            h = 0
            continue
        q = sa[j - 1]
        while i + h < n and q + h < n and t[i + h] == t[q + h]:
            h += 1
        lcp[j] = h
        if h > 0:
            h -= 1
    return lcp


@_jit
def _sa_range(t, sa, m, sym):
    """Rank interval [left, right] of suffixes starting with ``sym``; right < left if empty."""
    lo = 0
    hi = m
    while lo < hi:
        mid = (lo + hi) >> 1
        if t[sa[mid]] < sym:
            lo = mid + 1
        else:
            hi = mid
    left = lo
    hi = m
    while lo < hi:
        mid = (lo + hi) >> 1
        if t[sa[mid]] <= sym:
            lo = mid + 1
        else:
            hi = mid
    return left, lo - 1


@_jit
def _common(a, ia, b, ib, limit):
    n = 0
    while n < limit and a[ia + n] == b[ib + n]:
        n += 1
    return n


@_jit
def _longest_match(t, m, sa, left, right, pat, ip, plen, parse):
    """Best (pos, len) over ranks [left, right] of the m-byte text ``t``.

    The pattern is ``pat[ip:ip+plen]``; matches stay inside ``t``.
    """
    best_pos = -1
    best_len = 0
    if parse == 1:
        pos = sa[left]
        return pos, _common(t, pos, pat, ip, min(plen, m - pos))
    for r in range(left, right + 1):
        pos = sa[r]
        lim = min(plen, m - pos)
        if lim <= best_len:
            continue
        n = _common(t, pos, pat, ip, lim)
        if n > best_len:
            best_len = n
            best_pos = pos
            if n == plen:
                break
    return best_pos, best_len


@_jit
def _suffix_less(t, a, b):
    """Suffix ``t[a:]`` sorts strictly before ``t[b:]``."""
    n = t.shape[0]
    while a < n and b < n:
        if t[a] != t[b]:
            return t[a] < t[b]
        a += 1
        b += 1
    return a == n and b < n


@_jit
def _update_sa(p, new_text, k):
    """Shift, prune, and merge the LAB's suffix array into ``p``.

    ``p`` indexes the old dictionary; ``new_text`` is the new dictionary
    whose last ``k`` bytes are the slid-in LAB.
    """
    m = new_text.shape[0]
    out = np.empty(m, np.int32)
    kept = np.empty(p.shape[0], np.int32)
    nk = 0
    for j in range(p.shape[0]):
        q = np.int64(p[j]) - k
        if q >= 0:
            kept[nk] = q
            nk += 1
    lab_sa = _suffix_array(new_text[m - k :])
    base = m - k
    a = 0
    b = 0
    o = 0
    while a < nk and b < k:
        s = lab_sa[b] + base
        if _suffix_less(new_text, s, kept[a]):
            out[o] = s
            b += 1
        else:
            out[o] = kept[a]
            a += 1
        o += 1
    while a < nk:
        out[o] = kept[a]
        a += 1
        o += 1
    while b < k:
        out[o] = lab_sa[b] + base
        b += 1
        o += 1
    return out


# --------------------------------------------------------------------------
# public API


def build_suffix_array(t) -> np.ndarray:
    """Start positions of the suffixes of ``t`` in lexicographic order.

    >>> build_suffix_array(b"mississippi").tolist()
    [10, 7, 4, 1, 0, 9, 8, 6, 3, 5, 2]
    """
    text = as_text(t)
    return _suffix_array(text).astype(index_dtype(len(text)))


def build_rank(sa) -> np.ndarray:
    """Inverse permutation: ``r[sa[j]] == j``."""
    sa = np.asarray(sa)
    return _rank(sa.astype(np.int32)).astype(index_dtype(len(sa)))


def build_lcp(t, sa, r=None) -> np.ndarray:
    """``l[j]`` is the common-prefix length of the suffixes at ranks j-1 and j; ``l[0] = 0``.

    Linear time, after Kasai et al.
    """
    text = as_text(t)
    sa32 = np.asarray(sa).astype(np.int32)
    r32 = _rank(sa32) if r is None else np.asarray(r).astype(np.int32)
    if len(sa32) != len(text) or len(r32) != len(text):
        raise ContractError("suffix/rank arrays do not match the text length")
    return _lcp(text, sa32, r32).astype(index_dtype(len(text)))


def sa_range(t, sa, sym: int):
    """``(left, right)`` rank bounds of suffixes starting with ``sym``, or None."""
    text = as_text(t)
    sa32 = np.asarray(sa).astype(np.int32)
    left, right = _sa_range(text, sa32, len(sa32), np.uint8(sym))
    if right < left:
        return None
    return int(left), int(right)


def longest_match(t, sa, left: int, right: int, pattern, parse=Parse.GREEDY):
    """Pick a suffix from ranks ``[left, right]`` and measure its match with ``pattern``.

    GREEDY returns the longest match (smallest rank on ties); FIRST takes
    the suffix at ``left``. Lengths stop at the end of ``t`` as well as the
    end of the pattern.
    """
    text = as_text(t)
    pat = as_text(pattern)
    if len(pat) == 0:
        raise ContractError("pattern must be non-empty")
    sa32 = np.asarray(sa).astype(np.int32)
    pos, n = _longest_match(text, len(text), sa32, left, right, pat, 0, len(pat), int(Parse(parse)))
    return int(pos), int(n)


def update_sliding_sa(p, lab, new_dict) -> np.ndarray:
    """Suffix array of ``new_dict`` derived from ``p``, the array of the previous dictionary.

    Every entry is shifted left by ``len(lab)``; entries that fall off the
    front are dropped; the LAB's own sorted suffixes are offset to the end
    of the dictionary and merged in by full suffix comparison. Survivors
    keep their previous relative order.
    """
    p = np.asarray(p)
    lab = as_text(lab)
    text = as_text(new_dict)
    k = len(lab)
    if k > len(p):
        raise ContractError("LAB longer than the dictionary")
    if len(text) != len(p) or (k and not np.array_equal(text[len(text) - k :], lab)):
        raise ContractError("new_dict must be the old dictionary shifted by the LAB")
    if k == 0:
        return p.copy()
    return _update_sa(p.astype(np.int32), text, k).astype(index_dtype(len(text)))
