"""The two file formats this tool speaks: variant manifests and RDCB dumps.

Manifest: JSON Lines, one object per variant with sent_index, sent_id,
span (null or [start, len]) and words.

Dump (binary, little-endian): magic "RDCB", u32 version = 1, u32 dim, then
one record per variant: u32 sent_index, i32 span_start (-1 for the
undeleted base), u32 span_len (0 for base), u32 n_words, followed by
n_words * dim float32 values, row-major.
"""

import json
import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterable

import numpy as np

MAGIC = b"RDCB"
VERSION = 1

_HEADER = struct.Struct("<4sII")
_RECORD = struct.Struct("<IiII")


@dataclass(frozen=True)
class ManifestEntry:
    sent_index: int
    sent_id: str
    span: tuple[int, int] | None  # (start, length)
    words: tuple[str, ...]


def read_manifest(lines: Iterable[str]) -> list[ManifestEntry]:
    entries = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        span = None if obj["span"] is None else (int(obj["span"][0]), int(obj["span"][1]))
        entries.append(ManifestEntry(int(obj["sent_index"]), obj["sent_id"],
                                     span, tuple(obj["words"])))
    return entries


class DumpWriter:
    """Streams records into a dump file; the header carries the vector width."""

    def __init__(self, out: BinaryIO, dim: int):
        self.out = out
        self.dim = dim
        self.count = 0
        out.write(_HEADER.pack(MAGIC, VERSION, dim))

    def write(self, sent_index: int, span: tuple[int, int] | None, vectors: np.ndarray) -> None:
        vectors = np.ascontiguousarray(vectors, dtype="<f4")
        if vectors.ndim != 2 or vectors.shape[1] != self.dim:
            raise ValueError(f"expected (*, {self.dim}) vectors, got {vectors.shape}")
        start, length = (-1, 0) if span is None else span
        self.out.write(_RECORD.pack(sent_index, start, length, vectors.shape[0]))
        self.out.write(vectors.tobytes(order="C"))
        self.count += 1
