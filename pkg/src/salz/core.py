"""Window, token and configuration types shared by the encoders and the codec.

Positions are 0-based throughout; 1-based suffix numbering maps onto
this by subtracting one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

#: Largest supported log2 of the dictionary / look-ahead buffer length.
MAX_LOG2 = 20


class SalzError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(SalzError, ValueError):
    pass


class ContractError(SalzError, ValueError):
    """An operation was called outside its precondition."""


class SerializationError(SalzError, ValueError):
    pass


class DecodeError(SalzError):
    """A container or token payload could not be parsed."""

    def __init__(self, message: str, bit_offset: int | None = None):
        self.reason = message
        if bit_offset is not None:
            message = f"{message} (bit offset {bit_offset})"
        super().__init__(message)
        self.bit_offset = bit_offset


class CorruptStreamError(DecodeError):
    """The payload parsed, but describes an impossible reconstruction."""


class Algorithm(enum.IntEnum):
    A1 = 0  # suffix array rebuilt for every dictionary
    A2 = 1  # sliding-window suffix array, updated per LAB
    A3 = 2  # suffix array + LCP over dictionary||LAB
    BT = 3  # binary search tree baseline, per-token sliding


class TokenFormat(enum.IntEnum):
    LZ77 = 0
    LZSS = 1


class Parse(enum.IntEnum):
    GREEDY = 0  # longest match over the first-symbol interval
    FIRST = 1  # suffix at the left end of the interval


def _log2_exact(value: int, name: str) -> int:
    if not isinstance(value, (int, np.integer)) or value < 1 or value & (value - 1):
        raise ConfigError(f"{name} must be a positive power of two, got {value!r}")
    bits = int(value).bit_length() - 1
    if bits > MAX_LOG2:
        raise ConfigError(f"{name}={value} exceeds 2**{MAX_LOG2}")
    return bits


@dataclass(frozen=True)
class EncoderConfig:
    dict_len: int = 256
    lab_len: int = 32
    algorithm: Algorithm = Algorithm.A1
    token_format: TokenFormat = TokenFormat.LZSS
    parse: Parse = Parse.GREEDY
    min_match: int = 2
    # A3 only: keep scanning past neighbours that fall inside the LAB.
    a3_extended: bool = False
    dict_bits: int = field(init=False, repr=False, compare=False)
    lab_bits: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dict_bits", _log2_exact(self.dict_len, "dict_len"))
        object.__setattr__(self, "lab_bits", _log2_exact(self.lab_len, "lab_len"))
        if self.lab_len > self.dict_len:
            raise ConfigError("lab_len must not exceed dict_len")
        if not 1 <= self.min_match <= self.lab_len:
            raise ConfigError(f"min_match must lie in [1, {self.lab_len}], got {self.min_match}")
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        object.__setattr__(self, "token_format", TokenFormat(self.token_format))
        object.__setattr__(self, "parse", Parse(self.parse))

    @property
    def batch_slide(self) -> bool:
        """True when the window slides once per full LAB rather than per token."""
        return self.algorithm != Algorithm.BT


# --------------------------------------------------------------------------
# tokens


class Literal(NamedTuple):
    symbol: int


class Match(NamedTuple):
    pos: int
    length: int


class Triple(NamedTuple):
    pos: int
    length: int
    symbol: int


Token = Union[Literal, Match, Triple]

KIND_LITERAL = 0
KIND_MATCH = 1
KIND_TRIPLE = 2


def token_span(t: Token) -> int:
    """Number of input bytes a token reproduces."""
    if isinstance(t, Literal):
        return 1
    if isinstance(t, Triple):
        return t.length + 1
    return t.length


def validate_token(t: Token, cfg: EncoderConfig) -> None:
    """Raise SerializationError unless ``t`` can be written under ``cfg``."""
    if cfg.token_format == TokenFormat.LZSS:
        if isinstance(t, Literal):
            if not 0 <= t.symbol < 256:
                raise SerializationError(f"literal symbol out of range: {t.symbol}")
            return
        if isinstance(t, Match):
            if not 0 <= t.pos < cfg.dict_len:
                raise SerializationError(f"match pos {t.pos} outside [0, {cfg.dict_len})")
            if not cfg.min_match <= t.length <= cfg.lab_len:
                raise SerializationError(
                    f"match length {t.length} outside [{cfg.min_match}, {cfg.lab_len}]"
                )
            return
        raise SerializationError(f"{type(t).__name__} is not an LZSS token")
    if not isinstance(t, Triple):
        raise SerializationError(f"{type(t).__name__} is not an LZ77 token")
    if not 0 <= t.pos < cfg.dict_len:
        raise SerializationError(f"triple pos {t.pos} outside [0, {cfg.dict_len})")
    if not 0 <= t.length < cfg.lab_len:
        raise SerializationError(f"triple length {t.length} outside [0, {cfg.lab_len})")
    if t.length == 0 and t.pos != 0:
        raise SerializationError("a triple without a match must have pos 0")
    if not 0 <= t.symbol < 256:
        raise SerializationError(f"triple symbol out of range: {t.symbol}")


def token_bit_cost(t: Token, cfg: EncoderConfig) -> int:
    if isinstance(t, Literal):
        return 9
    if isinstance(t, Match):
        return 1 + cfg.dict_bits + cfg.lab_bits
    return cfg.dict_bits + cfg.lab_bits + 8


class TokenStream:
    """Columnar token storage: one row per token.

    ``kind`` holds KIND_LITERAL / KIND_MATCH / KIND_TRIPLE. Iterating yields
    the NamedTuple tokens.
    """

    __slots__ = ("kind", "pos", "length", "symbol")

    def __init__(self, kind, pos, length, symbol):
        self.kind = np.asarray(kind, dtype=np.uint8)
        self.pos = np.asarray(pos, dtype=np.int32)
        self.length = np.asarray(length, dtype=np.int32)
        self.symbol = np.asarray(symbol, dtype=np.uint8)

    @classmethod
    def from_tokens(cls, tokens) -> "TokenStream":
        if isinstance(tokens, TokenStream):
            return tokens
        n = len(tokens)
        kind = np.zeros(n, np.uint8)
        pos = np.zeros(n, np.int32)
        length = np.zeros(n, np.int32)
        symbol = np.zeros(n, np.uint8)
        try:
            cls._fill(tokens, kind, pos, length, symbol)
        except OverflowError as exc:
            raise SerializationError(f"token field out of range: {exc}") from None
        return cls(kind, pos, length, symbol)

    @staticmethod
    def _fill(tokens, kind, pos, length, symbol):
        for i, t in enumerate(tokens):
            if isinstance(t, Literal):
                kind[i] = KIND_LITERAL
                symbol[i] = t.symbol
            elif isinstance(t, Match):
                kind[i] = KIND_MATCH
                pos[i] = t.pos
                length[i] = t.length
            elif isinstance(t, Triple):
                kind[i] = KIND_TRIPLE
                pos[i] = t.pos
                length[i] = t.length
                symbol[i] = t.symbol
            else:
                raise SerializationError(f"not a token: {t!r}")

    def __len__(self):
        return len(self.kind)

    def __getitem__(self, i) -> Token:
        k = self.kind[i]
        if k == KIND_LITERAL:
            return Literal(int(self.symbol[i]))
        if k == KIND_MATCH:
            return Match(int(self.pos[i]), int(self.length[i]))
        return Triple(int(self.pos[i]), int(self.length[i]), int(self.symbol[i]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other):
        if not isinstance(other, TokenStream):
            try:
                other = TokenStream.from_tokens(other)
            except (SerializationError, TypeError):
                return NotImplemented
        return (
            np.array_equal(self.kind, other.kind)
            and np.array_equal(self.pos, other.pos)
            and np.array_equal(self.length, other.length)
            and np.array_equal(self.symbol, other.symbol)
        )

    def __repr__(self):
        return f"TokenStream({len(self)} tokens)"

    def to_list(self) -> list:
        return list(self)

    def spans(self) -> np.ndarray:
        """Bytes reproduced by each token."""
        out = self.length.astype(np.int64)
        out[self.kind == KIND_LITERAL] = 1
        out[self.kind == KIND_TRIPLE] += 1
        return out

    def bit_costs(self, cfg: EncoderConfig) -> np.ndarray:
        out = np.full(len(self), 9, dtype=np.int64)
        out[self.kind == KIND_MATCH] = 1 + cfg.dict_bits + cfg.lab_bits
        out[self.kind == KIND_TRIPLE] = cfg.dict_bits + cfg.lab_bits + 8
        return out


# --------------------------------------------------------------------------
# sliding window


@dataclass
class SlidingWindow:
    """A dictionary of ``dict_len`` bytes followed by up to ``lab_len`` LAB bytes."""

    dict_len: int
    lab_len: int
    buf: bytearray
    lab_fill: int = 0

    def __post_init__(self):
        self.buf = bytearray(self.buf)
        if len(self.buf) != self.dict_len + self.lab_len:
            raise ContractError("buffer length must equal dict_len + lab_len")
        if not 0 <= self.lab_fill <= self.lab_len:
            raise ContractError("lab_fill outside [0, lab_len]")

    @classmethod
    def create(cls, dictionary: bytes, lab: bytes, lab_len: int) -> "SlidingWindow":
        if len(lab) > lab_len:
            raise ContractError("LAB longer than lab_len")
        buf = bytearray(dictionary) + bytearray(lab) + bytearray(lab_len - len(lab))
        return cls(len(dictionary), lab_len, buf, len(lab))

    @classmethod
    def from_input(cls, data: bytes, offset: int, dict_len: int, lab_len: int) -> "SlidingWindow":
        """Window whose LAB starts at ``data[offset]`` (requires offset >= dict_len)."""
        if offset < dict_len:
            raise ContractError("offset must leave room for a full dictionary")
        lab = data[offset : offset + lab_len]
        return cls.create(data[offset - dict_len : offset], lab, lab_len)

    @property
    def dictionary(self) -> bytes:
        return bytes(self.buf[: self.dict_len])

    @property
    def lab(self) -> bytes:
        return bytes(self.buf[self.dict_len : self.dict_len + self.lab_fill])


def window_slide(w: SlidingWindow, encoded_len: int, next_bytes: bytes) -> SlidingWindow:
    """Slide ``encoded_len`` encoded LAB bytes into the dictionary.

    The oldest ``encoded_len`` dictionary bytes drop out; the unencoded LAB
    remainder is followed by ``next_bytes``.
    """
    if not 0 <= encoded_len <= w.lab_fill:
        raise ContractError(f"encoded_len {encoded_len} exceeds lab_fill {w.lab_fill}")
    end = w.dict_len + w.lab_fill
    dictionary = w.buf[encoded_len : w.dict_len + encoded_len]
    lab = w.buf[w.dict_len + encoded_len : end] + bytearray(next_bytes)
    if len(lab) > w.lab_len:
        raise ContractError("next_bytes overflow the look-ahead buffer")
    return SlidingWindow.create(bytes(dictionary), bytes(lab), w.lab_len)
