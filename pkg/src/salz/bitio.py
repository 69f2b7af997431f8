"""MSB-first bit packing.

:class:`BitWriter` and :class:`BitReader` are simple streaming objects, one
owner each. :func:`pack_fields` does the same packing for whole arrays of
fields at once and is what the codec uses for large token streams.
"""

from __future__ import annotations

import numpy as np

from .core import DecodeError


class BitWriter:
    def __init__(self):
        self._out = bytearray()
        self._acc = 0
        self._nacc = 0
        self.bit_length = 0

    def write(self, value: int, width: int) -> None:
        if width < 0 or value < 0 or value >> width:
            raise ValueError(f"{value} does not fit in {width} bits")
        self._acc = (self._acc << width) | value
        self._nacc += width
        self.bit_length += width
        while self._nacc >= 8:
            self._nacc -= 8
            self._out.append((self._acc >> self._nacc) & 0xFF)
        self._acc &= (1 << self._nacc) - 1

    def getvalue(self) -> bytes:
        """Bytes written so far, the last one zero-padded."""
        if self._nacc:
            return bytes(self._out) + bytes([(self._acc << (8 - self._nacc)) & 0xFF])
        return bytes(self._out)


class BitReader:
    def __init__(self, data: bytes, nbits: int | None = None):
        self._data = bytes(data)
        self.nbits = len(self._data) * 8 if nbits is None else nbits
        self.offset = 0

    def read(self, width: int) -> int:
        if self.offset + width > self.nbits:
            raise DecodeError("unexpected end of bit stream", self.offset)
        value = 0
        for _ in range(width):
            byte = self._data[self.offset >> 3]
            value = (value << 1) | ((byte >> (7 - (self.offset & 7))) & 1)
            self.offset += 1
        return value

    @property
    def remaining(self) -> int:
        return self.nbits - self.offset


def pack_fields(values, widths) -> tuple[bytes, int]:
    """Concatenate ``values[i]`` in ``widths[i]`` bits each, MSB first.

    Returns the zero-padded bytes and the exact bit count.
    """
    values = np.asarray(values, dtype=np.int64).ravel()
    widths = np.asarray(widths, dtype=np.int64).ravel()
    total = int(widths.sum())
    if total == 0:
        return b"", 0
    owner = np.repeat(np.arange(len(widths)), widths)
    starts = np.cumsum(widths) - widths
    within = np.arange(total) - starts[owner]
    shift = widths[owner] - 1 - within
    bits = ((values[owner] >> shift) & 1).astype(np.uint8)
    return np.packbits(bits).tobytes(), total
