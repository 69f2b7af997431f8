"""
Comparing the four encoders
===========================

Encodes one text with every algorithm and both token formats and prints
the payload size, the timing and the memory estimate for each.
Run from the repository root so the bundled corpus is found.
"""

from pathlib import Path

from salz import Algorithm, EncoderConfig, TokenFormat, encode, memory_breakdown
from salz.encoders import warmup

path = Path("tests/data/canterbury/alice29.txt")
data = path.read_bytes()
warmup()  # keep JIT compilation out of the timings

for dict_len, lab_len in [(256, 32), (1024, 128)]:
    print(f"\n{path.name}, dictionary {dict_len}, look-ahead {lab_len}")
    for fmt in TokenFormat:
        for algo in Algorithm:
            cfg = EncoderConfig(dict_len, lab_len, algo, fmt)
            res = encode(data, cfg)
            mem = memory_breakdown(cfg)
            print(f"  {fmt.name:5s} {algo.name:3s}  {res.payload_bpb:.3f} bpb"
                  f"  {res.stats.elapsed_time * 1e3:7.1f} ms  memory {mem.formula} B")

# the first few tokens show the literal/match mix
res = encode(data, EncoderConfig(256, 32))
print("\nfirst tokens:", res.tokens.to_list()[:8])
