"""Reducibility scores: how much the remaining words' vectors move when a phrase is deleted.

The stored score is the raw change magnitude, so a HIGH score means the
phrase is hard to remove. All downstream comparisons are written against
that orientation.
"""

import json
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .treebank import Sentence
from .variants import EmbeddingBlock, Span, remaining_alignment


class AlignmentError(ValueError):
    """Base and variant blocks that cannot be paired word-for-word."""


@dataclass(slots=True)
class ScoreTable:
    """Per-sentence map from span to score, for a sentence of n words."""

    sent_index: int
    n: int
    scores: dict[Span, float]

    def word_score(self, i: int) -> float:
        """Score of the single word at 0-based position i."""
        try:
            return self.scores[Span(i, 1)]
        except KeyError:
            raise KeyError(f"no single-word score for position {i}") from None

    def word_scores(self) -> list[float]:
        return [self.word_score(i) for i in range(self.n)]


@dataclass(frozen=True, slots=True)
class LeafPrediction:
    sent_index: int
    is_leaf: tuple[bool, ...]
    threshold: float
    factor: float


def phrase_score(base: EmbeddingBlock, variant: EmbeddingBlock, span: Span) -> float:
    """Mean Euclidean distance between paired base and variant word vectors.

    Pairs variant position j with original position j (before the span) or
    j + span.length (after it). Accumulates in float64.
    """
    n = base.vectors.shape[0]
    if span.length >= n:
        raise ValueError("span covers the whole sentence; score undefined")
    if span.end > n:
        raise AlignmentError(f"span ({span.start}, {span.length}) exceeds {n} words")
    if variant.vectors.shape[0] != n - span.length:
        raise AlignmentError(
            f"variant has {variant.vectors.shape[0]} words, expected {n - span.length}"
        )
    if variant.vectors.shape[1] != base.vectors.shape[1]:
        raise AlignmentError("base and variant dims differ")
    keep = np.concatenate([np.arange(span.start), np.arange(span.end, n)])
    diff = base.vectors[keep].astype(np.float64) - variant.vectors.astype(np.float64)
    return float(np.linalg.norm(diff, axis=1).mean())


def score_sentence(blocks: Iterable[EmbeddingBlock]) -> ScoreTable:
    """Score every deleted-span block of one sentence against its BASE block."""
    base = None
    deleted: list[EmbeddingBlock] = []
    sent_index = None
    for block in blocks:
        if sent_index is None:
            sent_index = block.sent_index
        elif block.sent_index != sent_index:
            raise ValueError(
                f"blocks from sentences {sent_index} and {block.sent_index} mixed"
            )
        if block.span is None:
            if base is not None:
                raise ValueError(f"sentence {sent_index}: more than one BASE block")
            base = block
        else:
            deleted.append(block)
    if base is None:
        raise ValueError(f"sentence {sent_index}: no BASE block")
    scores: dict[Span, float] = {}
    for block in deleted:
        if block.span in scores:
            raise ValueError(f"sentence {sent_index}: duplicate span {block.span}")
        scores[block.span] = phrase_score(base, block, block.span)
    return ScoreTable(sent_index=sent_index, n=base.vectors.shape[0], scores=scores)


def classify_leaves(table: ScoreTable, factor: float = 1.2) -> LeafPrediction:
    """Predict leaves: words scoring strictly below factor * sentence mean.

    A word whose removal barely moves the other vectors is predicted to be a
    leaf; a word exactly at the threshold is not.
    """
    scores = table.word_scores()
    threshold = factor * (sum(scores) / len(scores))
    return LeafPrediction(
        sent_index=table.sent_index,
        is_leaf=tuple(s < threshold for s in scores),
        threshold=threshold,
        factor=factor,
    )


def punct_override(table: ScoreTable, sentence: Sentence) -> ScoreTable:
    """Force punctuation word scores to 0 so punctuation never wins a comparison.

    Multi-word span scores are left untouched.
    """
    if len(sentence) != table.n:
        raise ValueError(
            f"sentence {sentence.sent_id} has {len(sentence)} words, table has {table.n}"
        )
    scores = dict(table.scores)
    for i, word in enumerate(sentence.words):
        if word.is_punct:
            scores[Span(i, 1)] = 0.0
    return ScoreTable(sent_index=table.sent_index, n=table.n, scores=scores)


# --- score file (JSON Lines) ---

def write_scores(tables: Iterable[tuple[str, ScoreTable]], out: TextIO) -> int:
    """Write one JSON object per sentence: sent_index, sent_id, n, and span scores."""
    count = 0
    for sent_id, table in tables:
        entries = [
            {"start": span.start, "len": span.length, "score": score}
            for span, score in sorted(table.scores.items(),
                                      key=lambda kv: (kv[0].start, kv[0].length))
        ]
        obj = {"sent_index": table.sent_index, "sent_id": sent_id,
               "n": table.n, "scores": entries}
        out.write(json.dumps(obj, ensure_ascii=False) + "\n")
        count += 1
    return count


def read_scores(lines: Iterable[str]) -> list[tuple[str, ScoreTable]]:
    result = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        scores = {Span(e["start"], e["len"]): float(e["score"]) for e in obj["scores"]}
        result.append((obj["sent_id"],
                       ScoreTable(sent_index=obj["sent_index"], n=obj["n"], scores=scores)))
    return result
