"""Suffix-array LZ77/LZSS compression with a bit-exact container."""

from .codec import bpb, compress, read_tokens, write_tokens
from .core import (
    Algorithm,
    ConfigError,
    ContractError,
    CorruptStreamError,
    DecodeError,
    EncoderConfig,
    Literal,
    Match,
    Parse,
    SalzError,
    SerializationError,
    SlidingWindow,
    TokenFormat,
    TokenStream,
    Triple,
    token_bit_cost,
    window_slide,
)
from .decoder import decode
from .encoders import (
    encode,
    encode_a1,
    encode_a2,
    encode_a3,
    encode_bt,
    memory_breakdown,
    memory_report,
)
from .suffix import (
    build_lcp,
    build_rank,
    build_suffix_array,
    longest_match,
    sa_range,
    update_sliding_sa,
)

__version__ = "0.1.0"
