"""The SALZ container and token (de)serialization.

Layout, all multi-byte integers little-endian::

    magic        4  b"SALZ"
    version      1  1
    algorithm    1  0=A1 1=A2 2=A3 3=BT
    token_format 1  0=LZ77 1=LZSS
    log2_dict    1
    log2_lab     1
    min_match    1
    original_len 8  unsigned
    dict_len     4  unsigned, = min(2**log2_dict, original_len)
    dictionary   dict_len raw bytes
    payload      MSB-first token bits, last byte zero-padded

LZSS tokens are a flag bit followed by an 8-bit symbol (flag 0) or by
log2_dict bits of position and log2_lab bits of length-1 (flag 1). LZ77
tokens are position, raw length and symbol; position = length = 0 means
no match.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numba
import numpy as np

from .bitio import pack_fields
from .core import (
    KIND_LITERAL,
    KIND_MATCH,
    KIND_TRIPLE,
    MAX_LOG2,
    Algorithm,
    CorruptStreamError,
    DecodeError,
    EncoderConfig,
    SerializationError,
    TokenFormat,
    TokenStream,
    validate_token,
)

MAGIC = b"SALZ"
VERSION = 1
_HEADER = struct.Struct("<4sBBBBBBQI")
HEADER_SIZE = _HEADER.size

_jit = numba.njit(cache=True, nogil=True)


@dataclass(frozen=True)
class ContainerHeader:
    algorithm: Algorithm
    token_format: TokenFormat
    log2_dict: int
    log2_lab: int
    min_match: int
    original_len: int
    dictionary: bytes

    @classmethod
    def for_config(cls, cfg: EncoderConfig, original_len: int, dictionary: bytes):
        return cls(cfg.algorithm, cfg.token_format, cfg.dict_bits, cfg.lab_bits,
                   cfg.min_match, original_len, bytes(dictionary))

    def config(self) -> EncoderConfig:
        return EncoderConfig(
            dict_len=1 << self.log2_dict,
            lab_len=1 << self.log2_lab,
            algorithm=self.algorithm,
            token_format=self.token_format,
            min_match=self.min_match,
        )

    def pack(self) -> bytes:
        return _HEADER.pack(
            MAGIC, VERSION, int(self.algorithm), int(self.token_format),
            self.log2_dict, self.log2_lab, self.min_match,
            self.original_len, len(self.dictionary),
        ) + self.dictionary

    @classmethod
    def unpack(cls, buf: bytes) -> tuple["ContainerHeader", int]:
        """Parse a header; returns it with the payload offset."""
        if len(buf) < HEADER_SIZE:
            raise DecodeError("container shorter than its header", len(buf) * 8)
        magic, version, algo, fmt, ld, ll, mm, original_len, stored = _HEADER.unpack_from(buf)
        if magic != MAGIC:
            raise DecodeError(f"bad magic {magic!r}", 0)
        if version != VERSION:
            raise DecodeError(f"unsupported version {version}", 32)
        if algo > max(Algorithm) or fmt > max(TokenFormat):
            raise DecodeError("unknown algorithm or token format", 40)
        if not ll <= ld <= MAX_LOG2:
            raise DecodeError(f"invalid window sizes 2**{ld} / 2**{ll}", 56)
        if not 1 <= mm <= 1 << ll:
            raise DecodeError(f"invalid min_match {mm}", 72)
        if stored != min(1 << ld, original_len):
            raise DecodeError("stored dictionary length inconsistent with header", 144)
        end = HEADER_SIZE + stored
        if len(buf) < end:
            raise DecodeError("truncated dictionary", len(buf) * 8)
        header = cls(Algorithm(algo), TokenFormat(fmt), ld, ll, mm, original_len,
                     bytes(buf[HEADER_SIZE:end]))
        return header, end


# --------------------------------------------------------------------------
# tokens <-> bits


def _fields(tokens: TokenStream, cfg: EncoderConfig):
    n = len(tokens)
    values = np.zeros((n, 3), np.int64)
    widths = np.zeros((n, 3), np.int64)
    if cfg.token_format == TokenFormat.LZSS:
        lit = tokens.kind == KIND_LITERAL
        values[:, 0] = ~lit
        widths[:, 0] = 1
        values[lit, 1] = tokens.symbol[lit]
        widths[lit, 1] = 8
        values[~lit, 1] = tokens.pos[~lit]
        widths[~lit, 1] = cfg.dict_bits
        values[~lit, 2] = tokens.length[~lit] - 1
        widths[~lit, 2] = cfg.lab_bits
    else:
        values[:, 0] = tokens.pos
        values[:, 1] = tokens.length
        values[:, 2] = tokens.symbol
        widths[:] = (cfg.dict_bits, cfg.lab_bits, 8)
    return values, widths


def _check_tokens(tokens: TokenStream, cfg: EncoderConfig) -> None:
    if cfg.token_format == TokenFormat.LZSS:
        lit = tokens.kind == KIND_LITERAL
        ok = lit | (
            (tokens.kind == KIND_MATCH)
            & (tokens.pos >= 0) & (tokens.pos < cfg.dict_len)
            & (tokens.length >= cfg.min_match) & (tokens.length <= cfg.lab_len)
        )
    else:
        ok = (
            (tokens.kind == KIND_TRIPLE)
            & (tokens.pos >= 0) & (tokens.pos < cfg.dict_len)
            & (tokens.length >= 0) & (tokens.length < cfg.lab_len)
            & ((tokens.length > 0) | (tokens.pos == 0))
        )
    if not ok.all():
        j = int(np.flatnonzero(~ok)[0])
        validate_token(tokens[j], cfg)
        raise SerializationError(f"token {j} is invalid: {tokens[j]!r}")


def pack_tokens(tokens, cfg: EncoderConfig) -> tuple[bytes, int]:
    """Serialize tokens; returns the padded payload and its exact bit count."""
    ts = TokenStream.from_tokens(tokens)
    _check_tokens(ts, cfg)
    values, widths = _fields(ts, cfg)
    return pack_fields(values, widths)


def write_tokens(tokens, cfg: EncoderConfig, sink) -> int:
    """Write the token payload to ``sink`` (anything with ``write``); returns its bit count."""
    payload, nbits = pack_tokens(tokens, cfg)
    sink.write(payload)
    return nbits


@_jit
def _getbits(buf, at, width):
    v = 0
    for b in range(at, at + width):
        v = (v << 1) | ((buf[b >> 3] >> (7 - (b & 7))) & 1)
    return v


@_jit
def _read_tokens(buf, nbits, dict_bits, lab_bits, lzss, min_match, expected):
    if lzss:
        min_cost = min(9, 1 + dict_bits + lab_bits)
    else:
        min_cost = dict_bits + lab_bits + 8
    cap = nbits // min_cost + 1
    if expected < cap:
        cap = expected
    kind = np.empty(cap, np.uint8)
    pos = np.zeros(cap, np.int32)
    length = np.zeros(cap, np.int32)
    symbol = np.zeros(cap, np.uint8)
    bit = 0
    covered = 0
    nt = 0
    while covered < expected:
        start = bit
        if nt == cap:
            return kind[:nt], pos[:nt], length[:nt], symbol[:nt], 1, start
        if lzss:
            if bit + 1 > nbits:
                return kind[:nt], pos[:nt], length[:nt], symbol[:nt], 1, start
            flag = _getbits(buf, bit, 1)
            bit += 1
            if flag == 0:
                if bit + 8 > nbits:
                    return kind[:nt], pos[:nt], length[:nt], symbol[:nt], 1, start
                kind[nt] = 0
                symbol[nt] = _getbits(buf, bit, 8)
                bit += 8
                covered += 1
            else:
                if bit + dict_bits + lab_bits > nbits:
                    return kind[:nt], pos[:nt], length[:nt], symbol[:nt], 1, start
                kind[nt] = 1
                pos[nt] = _getbits(buf, bit, dict_bits)
                bit += dict_bits
                ln = _getbits(buf, bit, lab_bits) + 1
                bit += lab_bits
                if ln < min_match:
                    return kind[:nt], pos[:nt], length[:nt], symbol[:nt], 2, start
                length[nt] = ln
                covered += ln
        else:
            if bit + dict_bits + lab_bits + 8 > nbits:
                return kind[:nt], pos[:nt], length[:nt], symbol[:nt], 1, start
            kind[nt] = 2
            p = _getbits(buf, bit, dict_bits)
            bit += dict_bits
            ln = _getbits(buf, bit, lab_bits)
            bit += lab_bits
            symbol[nt] = _getbits(buf, bit, 8)
            bit += 8
            if ln == 0 and p != 0:
                return kind[:nt], pos[:nt], length[:nt], symbol[:nt], 2, start
            pos[nt] = p
            length[nt] = ln
            covered += ln + 1
        nt += 1
        if covered > expected:
            return kind[:nt], pos[:nt], length[:nt], symbol[:nt], 3, start
    return kind[:nt], pos[:nt], length[:nt], symbol[:nt], 0, bit


def read_tokens(source, cfg: EncoderConfig, expected_bytes: int, nbits: int | None = None) -> TokenStream:
    """Parse tokens until they reproduce ``expected_bytes`` bytes.

    ``source`` is bytes or a binary file object. Raises DecodeError (with
    the bit offset of the offending token) on truncation or invalid fields.
    """
    data = source if isinstance(source, (bytes, bytearray, memoryview)) else source.read()
    buf = np.frombuffer(bytes(data), dtype=np.uint8)
    if nbits is None:
        nbits = len(buf) * 8
    lzss = cfg.token_format == TokenFormat.LZSS
    min_cost = min(9, 1 + cfg.dict_bits + cfg.lab_bits) if lzss else cfg.dict_bits + cfg.lab_bits + 8
    if expected_bytes < 0 or expected_bytes > (nbits // min_cost) * cfg.lab_len:
        raise DecodeError(f"payload of {nbits} bits cannot encode {expected_bytes} bytes", nbits)
    *cols, status, at = _read_tokens(
        buf, nbits, cfg.dict_bits, cfg.lab_bits,
        cfg.token_format == TokenFormat.LZSS, cfg.min_match, expected_bytes,
    )
    if status == 1:
        raise DecodeError("truncated token stream", int(at))
    if status == 2:
        raise DecodeError("invalid token field", int(at))
    if status == 3:
        raise CorruptStreamError("token overruns the declared length", int(at))
    return TokenStream(*cols)


def bpb(input_bytes: int, output_bits: int) -> float:
    """Bits of output per byte of input."""
    if input_bytes <= 0:
        raise ValueError("bpb needs a non-empty input")
    return output_bits / input_bytes


# --------------------------------------------------------------------------
# containers


def write_container(result) -> bytes:
    """Container bytes for an :class:`~salz.encoders.EncodeResult`."""
    header = ContainerHeader.for_config(result.config, result.stats.input_bytes, result.dictionary)
    payload, _ = pack_tokens(result.tokens, result.config)
    return header.pack() + payload


def read_container(buf: bytes):
    """Split a container into its header and token stream."""
    header, offset = ContainerHeader.unpack(buf)
    cfg = header.config()
    expected = header.original_len - len(header.dictionary)
    try:
        tokens = read_tokens(memoryview(buf)[offset:], cfg, expected)
    except DecodeError as exc:
        if exc.bit_offset is None:
            raise
        raise type(exc)(exc.reason, exc.bit_offset + offset * 8) from None
    return header, tokens


def compress(data, cfg: EncoderConfig) -> bytes:
    from .encoders import encode

    return write_container(encode(data, cfg))
