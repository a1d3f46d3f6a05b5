"""Deletion variants of sentences, the embedding dump format, and a mock embedder.

A variant is the sentence with one contiguous span of words removed; the
BASE variant (span = None) is the unmodified sentence. Variants are keyed
by (sent_index, span) so duplicate surface strings never collide.
"""

import json
import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Iterator, TextIO

import numpy as np

from .treebank import Corpus, Sentence

DUMP_MAGIC = b"RDCB"
DUMP_VERSION = 1

BOS = "<s>"
EOS = "</s>"


class DumpFormatError(ValueError):
    """Raised for malformed embedding dump files."""


@dataclass(frozen=True, slots=True)
class Span:
    """A contiguous phrase: 0-based word offset plus word count."""

    start: int
    length: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.length < 1:
            raise ValueError(f"invalid span ({self.start}, {self.length})")

    @property
    def end(self) -> int:
        return self.start + self.length


@dataclass(frozen=True, slots=True)
class Variant:
    sent_index: int
    span: Span | None
    words: tuple[str, ...]


@dataclass(eq=False, slots=True)
class EmbeddingBlock:
    """Per-variant word vectors: one float32 row per remaining word."""

    sent_index: int
    span: Span | None
    vectors: np.ndarray


def enumerate_variants(sentence: Sentence, sent_index: int,
                       max_phrase_len: int | None = None) -> list[Variant]:
    """List the BASE variant followed by every span deletion, ordered by (start, len).

    Span lengths run from 1 to min(max_phrase_len, n - 1); deleting the whole
    sentence is never produced. max_phrase_len = None means no cap.
    """
    forms = tuple(sentence.forms())
    n = len(forms)
    cap = n - 1 if max_phrase_len is None else min(max_phrase_len, n - 1)
    variants = [Variant(sent_index, None, forms)]
    for start in range(n):
        for length in range(1, min(cap, n - start) + 1):
            span = Span(start, length)
            variants.append(Variant(sent_index, span, forms[:start] + forms[span.end:]))
    return variants


def remaining_alignment(n: int, span: Span) -> dict[int, int]:
    """Map each variant position to the original position it came from."""
    if span.end > n:
        raise ValueError(f"span ({span.start}, {span.length}) exceeds sentence length {n}")
    return {j: j if j < span.start else j + span.length for j in range(n - span.length)}


def enumerate_corpus_variants(corpus: Corpus, max_phrase_len: int | None = None,
                              max_sentence_len: int = 30) -> Iterator[tuple[Sentence, Variant]]:
    """Enumerate variants corpus-wide, BASE first within each sentence.

    Sentences longer than max_sentence_len keep only single-word spans, which
    bounds the otherwise quadratic number of variants.
    """
    for sent_index, sent in enumerate(corpus):
        cap = max_phrase_len
        if len(sent) > max_sentence_len:
            cap = 1
        for variant in enumerate_variants(sent, sent_index, cap):
            yield sent, variant


# --- variant manifest (JSON Lines) ---

@dataclass(frozen=True, slots=True)
class ManifestEntry:
    sent_index: int
    sent_id: str
    span: Span | None
    words: tuple[str, ...]


def write_manifest(pairs: Iterable[tuple[Sentence, Variant]], out: TextIO) -> int:
    """Write one JSON object per variant; returns the number of lines."""
    count = 0
    for sent, variant in pairs:
        span = None if variant.span is None else [variant.span.start, variant.span.length]
        obj = {
            "sent_index": variant.sent_index,
            "sent_id": sent.sent_id,
            "span": span,
            "words": list(variant.words),
        }
        out.write(json.dumps(obj, ensure_ascii=False) + "\n")
        count += 1
    return count


def read_manifest(lines: Iterable[str]) -> list[ManifestEntry]:
    entries = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        span = None if obj["span"] is None else Span(obj["span"][0], obj["span"][1])
        entries.append(ManifestEntry(obj["sent_index"], obj["sent_id"], span,
                                     tuple(obj["words"])))
    return entries


# --- embedding dump (binary, little-endian) ---
#
# header: magic "RDCB", u32 version, u32 dim
# record: u32 sent_index, i32 span_start (-1 = BASE), u32 span_len (0 = BASE),
#         u32 n_words, then n_words * dim float32, row-major

_HEADER = struct.Struct("<4sII")
_RECORD = struct.Struct("<IiII")


def write_dump(blocks: Iterable[EmbeddingBlock], dim: int, out: BinaryIO) -> int:
    """Write blocks to a dump stream; returns the number of records written."""
    out.write(_HEADER.pack(DUMP_MAGIC, DUMP_VERSION, dim))
    count = 0
    for block in blocks:
        vectors = np.asarray(block.vectors, dtype="<f4")
        if vectors.ndim != 2 or vectors.shape[1] != dim:
            raise DumpFormatError(
                f"block (sent {block.sent_index}, span {block.span}) has shape "
                f"{vectors.shape}, expected (*, {dim})"
            )
        if block.span is None:
            start, length = -1, 0
        else:
            start, length = block.span.start, block.span.length
        out.write(_RECORD.pack(block.sent_index, start, length, vectors.shape[0]))
        out.write(vectors.tobytes(order="C"))
        count += 1
    return count


def read_dump(f: BinaryIO) -> Iterator[EmbeddingBlock]:
    """Yield blocks from a dump stream; raises DumpFormatError on corruption."""
    header = f.read(_HEADER.size)
    if len(header) < _HEADER.size:
        raise DumpFormatError("truncated header at byte 0")
    magic, version, dim = _HEADER.unpack(header)
    if magic != DUMP_MAGIC:
        raise DumpFormatError(f"bad magic {magic!r}")
    if version != DUMP_VERSION:
        raise DumpFormatError(f"unsupported dump version {version}")
    offset = _HEADER.size
    while True:
        rec = f.read(_RECORD.size)
        if not rec:
            return
        if len(rec) < _RECORD.size:
            raise DumpFormatError(f"truncated record header at byte {offset}")
        sent_index, start, length, n_words = _RECORD.unpack(rec)
        offset += _RECORD.size
        payload = f.read(n_words * dim * 4)
        if len(payload) < n_words * dim * 4:
            raise DumpFormatError(f"truncated vector data at byte {offset}")
        offset += len(payload)
        span = None if start < 0 else Span(start, length)
        vectors = np.frombuffer(payload, dtype="<f4").reshape(n_words, dim)
        yield EmbeddingBlock(sent_index, span, vectors)


def read_dump_grouped(f: BinaryIO) -> Iterator[list[EmbeddingBlock]]:
    """Group consecutive dump records by sent_index."""
    group: list[EmbeddingBlock] = []
    for block in read_dump(f):
        if group and block.sent_index != group[0].sent_index:
            yield group
            group = []
        group.append(block)
    if group:
        yield group


# --- mock embedder ---

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1


def _fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _U64
    return h


def _word_seed(word: str, left: str, right: str, corpus_seed: int) -> int:
    parts = (
        word.lower().encode("utf-8"), b"\x1f",
        left.lower().encode("utf-8"), b"\x1f",
        right.lower().encode("utf-8"), b"\x1f",
        struct.pack("<Q", corpus_seed & _U64),
    )
    return _fnv1a64(b"".join(parts))


def mock_embed(variant: Variant | ManifestEntry, dim: int, corpus_seed: int = 0) -> EmbeddingBlock:
    """Deterministic stand-in for a neural embedder.

    Each word's vector is drawn from a PCG64 stream seeded by an FNV-1a hash
    of (word, left neighbor, right neighbor, corpus seed), with components
    uniform in [-1, 1]. A vector therefore depends only on the word and its
    immediate neighbors, so deleting a span perturbs at most the two words
    adjacent to it.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    words = variant.words
    rows = np.empty((len(words), dim), dtype=np.float32)
    for j, word in enumerate(words):
        left = words[j - 1] if j > 0 else BOS
        right = words[j + 1] if j + 1 < len(words) else EOS
        rng = np.random.Generator(np.random.PCG64(_word_seed(word, left, right, corpus_seed)))
        rows[j] = rng.uniform(-1.0, 1.0, size=dim).astype(np.float32)
    return EmbeddingBlock(variant.sent_index, variant.span, rows)
