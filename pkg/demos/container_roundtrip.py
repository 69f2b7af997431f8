"""
Writing and reading a SALZ container
====================================

Compresses a buffer, takes the container apart field by field and
decodes it again.
"""

from salz import Algorithm, EncoderConfig, SalzError, TokenFormat, compress, decode
from salz.codec import read_container

data = b"Peter Piper picked a peck of pickled peppers. " * 50
cfg = EncoderConfig(64, 8, Algorithm.A3, TokenFormat.LZ77)
blob = compress(data, cfg)
print(f"{len(data)} bytes -> {len(blob)} bytes")

header, tokens = read_container(blob)
print("algorithm:", header.algorithm.name, "format:", header.token_format.name)
print("window:", 1 << header.log2_dict, "/", 1 << header.log2_lab)
print("stored dictionary:", header.dictionary[:32], "...")
print("tokens:", len(tokens), "first:", tokens.to_list()[:4])

assert decode(blob) == data

# any corruption is reported with a bit offset instead of garbage output
damaged = blob[: len(blob) - 10]
try:
    decode(damaged)
except SalzError as exc:
    print("damaged container:", type(exc).__name__, exc)
