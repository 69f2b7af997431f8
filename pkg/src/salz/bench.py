"""Corpus benchmark: encoding time, bpb and structure size per file and configuration."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .codec import HEADER_SIZE, bpb
from .core import Algorithm, EncoderConfig, Parse, TokenFormat
from .encoders import encode, warmup

CONFIGS = ((256, 32), (1024, 128))
COLUMNS = (
    "file", "size", "algo", "dict", "lab", "format", "parse",
    "time_s", "payload_bpb", "container_bpb", "structure_bytes",
)


def corpus_files(directory) -> list[Path]:
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {root}")
    files = sorted(p for p in root.iterdir() if p.is_file() and not p.name.startswith("."))
    if not files:
        raise FileNotFoundError(f"no corpus files in {root}")
    return files


def bench_file(path, configs=CONFIGS, algorithms=tuple(Algorithm),
               token_format=TokenFormat.LZSS, parse=Parse.GREEDY) -> list[dict]:
    path = Path(path)
    data = path.read_bytes()
    rows = []
    for dict_len, lab_len in configs:
        for algo in algorithms:
            cfg = EncoderConfig(dict_len, lab_len, algo, token_format, parse)
            res = encode(data, cfg)
            payload_bits = res.stats.output_bits
            container_bits = 8 * (HEADER_SIZE + len(res.dictionary) + (payload_bits + 7) // 8)
            rows.append({
                "file": path.name,
                "size": len(data),
                "algo": algo.name.lower(),
                "dict": dict_len,
                "lab": lab_len,
                "format": token_format.name.lower(),
                "parse": parse.name.lower(),
                "time_s": res.stats.elapsed_time,
                "payload_bpb": bpb(len(data), payload_bits) if data else 0.0,
                "container_bpb": bpb(len(data), container_bits) if data else 0.0,
                "structure_bytes": res.stats.structure_bytes,
            })
    return rows


def _bench_worker(args):
    warmup()
    return bench_file(*args)


def run_bench(directory, configs=CONFIGS, algorithms=tuple(Algorithm),
              token_format=TokenFormat.LZSS, parse=Parse.GREEDY, jobs=1) -> list[dict]:
    """One row per file x config x algorithm, ordered that way.

    With ``jobs > 1`` files are spread over worker processes; each file is
    still encoded on a single thread.
    """
    files = corpus_files(directory)
    tasks = [(f, configs, algorithms, token_format, parse) for f in files]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            per_file = list(pool.map(_bench_worker, tasks))
    else:
        warmup()
        per_file = [bench_file(*t) for t in tasks]
    return [row for rows in per_file for row in rows]


def to_csv(rows, sink=None) -> str:
    out = io.StringIO() if sink is None else sink
    writer = csv.DictWriter(out, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({**row, "time_s": f"{row['time_s']:.4f}",
                         "payload_bpb": f"{row['payload_bpb']:.4f}",
                         "container_bpb": f"{row['container_bpb']:.4f}"})
    return out.getvalue() if sink is None else ""


def format_table(rows) -> str:
    """Tables in the shape of file x algorithm (time / bpb), one per window configuration."""
    lines = []
    configs = sorted({(r["dict"], r["lab"]) for r in rows})
    for dict_len, lab_len in configs:
        sub = [r for r in rows if (r["dict"], r["lab"]) == (dict_len, lab_len)]
        algos = list(dict.fromkeys(r["algo"] for r in sub))
        lines.append(f"(|dict|, |LAB|) = ({dict_len}, {lab_len})")
        head = f"{'file':<16}{'size':>9}" + "".join(f"{a.upper() + ' time':>10}{'bpb':>7}" for a in algos)
        lines.append(head)
        for name in dict.fromkeys(r["file"] for r in sub):
            cells = {r["algo"]: r for r in sub if r["file"] == name}
            size = next(iter(cells.values()))["size"]
            line = f"{name:<16}{size:>9}"
            for a in algos:
                line += f"{cells[a]['time_s']:>10.3f}{cells[a]['payload_bpb']:>7.2f}"
            lines.append(line)
        mem = {r["algo"]: r["structure_bytes"] for r in sub}
        lines.append("structure bytes: " + ", ".join(f"{a.upper()}={b}" for a, b in mem.items()))
        lines.append("")
    return "\n".join(lines)
