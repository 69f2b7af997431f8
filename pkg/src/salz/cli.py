"""``salz`` command line: compress, decompress, inspect, bench."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import bench
from .codec import HEADER_SIZE, ContainerHeader, bpb, write_container
from .core import Algorithm, ConfigError, DecodeError, EncoderConfig, Parse, TokenFormat
from .decoder import decode
from .encoders import encode

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_CORRUPT = 4

_ALGOS = {a.name.lower(): a for a in Algorithm}
_FORMATS = {f.name.lower(): f for f in TokenFormat}
_PARSES = {"greedy": Parse.GREEDY, "first": Parse.FIRST}


class UsageError(Exception):
    pass


def _config(args) -> EncoderConfig:
    try:
        return EncoderConfig(
            dict_len=args.dict, lab_len=args.lab, algorithm=_ALGOS[args.algo],
            token_format=_FORMATS[args.format], parse=_PARSES[args.parse],
            min_match=args.min_match, a3_extended=args.a3_extended,
        )
    except ConfigError as exc:
        raise UsageError(str(exc)) from None


def cmd_compress(args) -> int:
    cfg = _config(args)
    data = Path(args.input).read_bytes()
    res = encode(data, cfg)
    blob = write_container(res)
    Path(args.output).write_bytes(blob)
    n = len(data)
    print(f"input:           {n} bytes")
    print(f"output:          {len(blob)} bytes")
    if n:
        print(f"payload bpb:     {bpb(n, res.stats.output_bits):.4f}")
        print(f"container bpb:   {bpb(n, 8 * len(blob)):.4f}")
    print(f"elapsed:         {res.stats.elapsed_time:.4f} s")
    print(f"structure bytes: {res.stats.structure_bytes}")
    return EXIT_OK


def cmd_decompress(args) -> int:
    blob = Path(args.input).read_bytes()
    t0 = time.perf_counter()
    data = decode(blob)
    elapsed = time.perf_counter() - t0
    Path(args.output).write_bytes(data)
    print(f"restored {len(data)} bytes in {elapsed:.4f} s")
    return EXIT_OK


def cmd_inspect(args) -> int:
    blob = Path(args.input).read_bytes()
    header, offset = ContainerHeader.unpack(blob)
    print(f"algorithm:    {header.algorithm.name}")
    print(f"token format: {header.token_format.name}")
    print(f"dict / LAB:   {1 << header.log2_dict} / {1 << header.log2_lab}")
    print(f"min match:    {header.min_match}")
    print(f"original:     {header.original_len} bytes")
    print(f"header:       {HEADER_SIZE} + {len(header.dictionary)} dictionary bytes")
    print(f"payload:      {len(blob) - offset} bytes")
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = bench.run_bench(
        args.corpus, token_format=_FORMATS[args.format], parse=_PARSES[args.parse], jobs=args.jobs,
    )
    print(bench.format_table(rows))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            bench.to_csv(rows, fh)
        print(f"wrote {len(rows)} rows to {args.csv}")
    return EXIT_OK


def _power_of_two(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1 or value & (value - 1):
        raise argparse.ArgumentTypeError(f"{value} is not a power of two")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="salz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def encoder_flags(p, with_algo=True):
        if with_algo:
            p.add_argument("--algo", choices=sorted(_ALGOS), default="a1")
            p.add_argument("--dict", type=_power_of_two, default=256)
            p.add_argument("--lab", type=_power_of_two, default=32)
            p.add_argument("--min-match", type=int, default=2)
            p.add_argument("--a3-extended", action="store_true",
                           help="A3: scan past neighbours that lie in the LAB")
        p.add_argument("--format", choices=sorted(_FORMATS), default="lzss")
        p.add_argument("--parse", choices=sorted(_PARSES), default="greedy")

    p = sub.add_parser("compress", help="write a SALZ container")
    p.add_argument("input")
    p.add_argument("output")
    encoder_flags(p)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="restore the original bytes")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("inspect", help="print a container header")
    p.add_argument("input")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("bench", help="run the (256,32) and (1024,128) matrix over a corpus")
    p.add_argument("corpus", help="directory of corpus files")
    p.add_argument("--csv", help="also write rows to this CSV file")
    p.add_argument("--jobs", type=int, default=1)
    encoder_flags(p, with_algo=False)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"salz: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DecodeError as exc:
        print(f"salz: corrupt container: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except OSError as exc:
        print(f"salz: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
