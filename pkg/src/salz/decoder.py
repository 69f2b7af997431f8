"""Reconstruct the original bytes from a SALZ container.

Back-references are resolved against the dictionary the encoder saw: the
window at the start of the current LAB for the suffix-array encoders, the
window just before the token for the tree encoder.
"""

from __future__ import annotations

import numba
import numpy as np

from .codec import read_container
from .core import CorruptStreamError, EncoderConfig, TokenStream

_jit = numba.njit(cache=True, nogil=True)


@_jit
def _apply(prefix, original_len, kind, pos, length, symbol, dict_len, lab_len, batch):
    out = np.empty(original_len, np.uint8)
    d0 = prefix.shape[0]
    out[:d0] = prefix
    cur = d0
    for j in range(kind.shape[0]):
        if batch:
            lab_start = d0 + (cur - d0) // lab_len * lab_len
        else:
            lab_start = cur
        base = lab_start - dict_len
        k = kind[j]
        n = length[j]
        span = 1 if k == 0 else (n if k == 1 else n + 1)
        if cur + span > original_len or cur + span > lab_start + lab_len or base < 0:
            return out, j
        if k != 0 and n > 0:
            p = pos[j]
            if p < 0 or p + n > dict_len:
                return out, j
            for t in range(n):
                out[cur + t] = out[base + p + t]
        if k == 0:
            out[cur] = symbol[j]
        elif k == 2:
            out[cur + n] = symbol[j]
        cur += span
    if cur != original_len:
        return out, kind.shape[0]
    return out, -1


def decode_tokens(tokens, cfg: EncoderConfig, dictionary: bytes, original_len: int) -> bytes:
    """Replay ``tokens`` after the initial ``dictionary``."""
    ts = TokenStream.from_tokens(tokens)
    prefix = np.frombuffer(bytes(dictionary), dtype=np.uint8)
    if len(prefix) > original_len:
        raise CorruptStreamError("dictionary longer than the output")
    out, bad = _apply(
        prefix, original_len, ts.kind, ts.pos, ts.length, ts.symbol,
        cfg.dict_len, cfg.lab_len, cfg.batch_slide,
    )
    if bad == len(ts):
        raise CorruptStreamError(f"tokens do not reproduce {original_len} bytes")
    if bad >= 0:
        raise CorruptStreamError(f"token {bad} ({ts[bad]!r}) reaches outside its window")
    return out.tobytes()


def decode(container) -> bytes:
    """Decode a container given as bytes or a binary file object."""
    buf = container if isinstance(container, (bytes, bytearray, memoryview)) else container.read()
    buf = bytes(buf)
    header, tokens = read_container(buf)
    return decode_tokens(tokens, header.config(), header.dictionary, header.original_len)
