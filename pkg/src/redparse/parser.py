"""Dependency tree construction from reducibility scores.

Trees are head arrays: entry i (0-based list position, word i+1) holds the
1-based head index, 0 for the root.
"""

from dataclasses import dataclass
from typing import Mapping, Sequence

from .reducibility import ScoreTable, punct_override
from .treebank import Corpus, validate_heads
from .variants import Span

VALID_MODES = ("left", "right", "algD", "algR")
ORIENTATIONS = ("constraint", "literal")


def left_chain(n: int) -> list[int]:
    """Attach each word to its left neighbor; the first word is the root."""
    return [i for i in range(n)]


def right_chain(n: int) -> list[int]:
    """Attach each word to its right neighbor; the last word is the root."""
    return [i + 2 for i in range(n - 1)] + [0]


def is_projective(heads: Sequence[int]) -> bool:
    """Interval test: words between a head and its dependent must stay inside.

    A root (head 0) lying strictly between the endpoints of any edge also
    makes the tree non-projective, since 0 falls outside every interval.
    """
    n = len(heads)
    for dep in range(1, n + 1):
        head = heads[dep - 1]
        if head == 0:
            continue
        lo, hi = min(head, dep), max(head, dep)
        for between in range(lo + 1, hi):
            if not (lo <= heads[between - 1] <= hi):
                return False
    return True


def algorithm_r(word_scores: Sequence[float], orientation: str = "constraint") -> list[int]:
    """Right-chain variant constrained by word scores.

    The leftmost highest-scoring word becomes the root. Under the default
    "constraint" orientation every other word attaches to the nearest
    following word with a strictly higher score, or to the root when no such
    word exists. The "literal" orientation flips the comparison (nearest
    following strictly lower score) while keeping the same root rule.
    """
    if orientation not in ORIENTATIONS:
        raise ValueError(f"unknown orientation {orientation!r}")
    n = len(word_scores)
    if n == 0:
        raise ValueError("empty score vector")
    root = max(range(n), key=lambda i: (word_scores[i], -i))
    heads = [0] * n
    for i in range(n):
        if i == root:
            continue
        parent = root + 1
        for j in range(i + 1, n):
            if orientation == "constraint":
                hit = word_scores[j] > word_scores[i]
            else:
                hit = word_scores[j] < word_scores[i]
            if hit:
                parent = j + 1
                break
        heads[i] = parent
    return heads


@dataclass(frozen=True, slots=True)
class HeadedBracketing:
    """Non-crossing spans, each with one designated head word.

    `brackets` holds the explicit spans only; the implicit full-sentence
    bracket exists in `head_of` under the key Span(0, n). Head indices are
    1-based word positions.
    """

    n: int
    brackets: tuple[Span, ...]
    head_of: Mapping[Span, int]

    @property
    def outer(self) -> Span:
        return Span(0, self.n)


@dataclass(frozen=True, slots=True)
class CandidateDecision:
    span: Span
    score: float
    accepted: bool
    violation: str | None  # "crossing" or "headless" when rejected


def _crosses(a: Span, b: Span) -> bool:
    return (a.start < b.start < a.end < b.end) or (b.start < a.start < b.end < a.end)


def _direct_positions(bracket: Span, others: Sequence[Span]) -> list[int]:
    """0-based positions inside `bracket` not covered by its child brackets."""
    inside = [s for s in others if s != bracket
              and s.start >= bracket.start and s.end <= bracket.end]
    maximal = [s for s in inside
               if not any(t != s and t.start <= s.start and s.end <= t.end for t in inside)]
    covered = [False] * bracket.length
    for s in maximal:
        for p in range(s.start, s.end):
            covered[p - bracket.start] = True
    return [bracket.start + i for i, flag in enumerate(covered) if not flag]


def _all_headed(brackets: Sequence[Span], n: int) -> bool:
    for b in list(brackets) + [Span(0, n)]:
        if not _direct_positions(b, brackets):
            return False
    return True


def algorithm_d_with_trace(table: ScoreTable) -> tuple[HeadedBracketing, list[CandidateDecision]]:
    """Greedy headed-bracket insertion, lowest span score first.

    Candidates are every span in the table of length 1..n-1, tried in order
    of ascending score (shorter span first, then leftmost, on ties). A
    candidate is kept only if the brackets stay non-crossing and every
    bracket, including the implicit outer one, still directly contains at
    least one word. Each bracket's head is its highest-scoring directly
    contained word.
    """
    n = table.n
    candidates = [(span, score) for span, score in table.scores.items()
                  if 1 <= span.length <= n - 1]
    candidates.sort(key=lambda item: (item[1], item[0].length, item[0].start))
    accepted: list[Span] = []
    decisions: list[CandidateDecision] = []
    for span, score in candidates:
        if any(_crosses(span, b) for b in accepted):
            decisions.append(CandidateDecision(span, score, False, "crossing"))
            continue
        if not _all_headed(accepted + [span], n):
            decisions.append(CandidateDecision(span, score, False, "headless"))
            continue
        accepted.append(span)
        decisions.append(CandidateDecision(span, score, True, None))
    head_of: dict[Span, int] = {}
    for bracket in accepted + [Span(0, n)]:
        direct = _direct_positions(bracket, accepted)
        if len(direct) == 1:
            head_of[bracket] = direct[0] + 1
            continue
        best = max(direct, key=lambda p: (table.word_score(p), -p))
        head_of[bracket] = best + 1
    return HeadedBracketing(n=n, brackets=tuple(accepted), head_of=head_of), decisions


def algorithm_d(table: ScoreTable) -> HeadedBracketing:
    bracketing, _ = algorithm_d_with_trace(table)
    return bracketing


def _check_bracketing(b: HeadedBracketing) -> None:
    outer = b.outer
    for s in b.brackets:
        if s == outer:
            raise ValueError("full-sentence span must stay implicit")
        if s.end > b.n:
            raise ValueError(f"bracket {s} exceeds sentence length {b.n}")
    for i, s in enumerate(b.brackets):
        for t in b.brackets[i + 1:]:
            if _crosses(s, t):
                raise ValueError(f"brackets {s} and {t} cross")
            if s == t:
                raise ValueError(f"duplicate bracket {s}")
    for bracket in list(b.brackets) + [outer]:
        head = b.head_of.get(bracket)
        if head is None:
            raise ValueError(f"bracket {bracket} has no head")
        direct = _direct_positions(bracket, b.brackets)
        if head - 1 not in direct:
            raise ValueError(f"head {head} of bracket {bracket} is not directly contained")


def brackets_to_tree(b: HeadedBracketing) -> list[int]:
    """Convert a headed bracketing to a head array.

    Each bracket's head attaches to the head of the smallest enclosing
    bracket; words that head no bracket attach to the head of the innermost
    bracket containing them; the outer head is the root.
    """
    _check_bracketing(b)
    outer = b.outer
    heads = [0] * b.n

    def enclosing(span: Span) -> Span:
        best = outer
        for other in b.brackets:
            if other == span:
                continue
            if other.start <= span.start and span.end <= other.end:
                if other.length < best.length:
                    best = other
        return best

    def innermost(pos: int) -> Span:
        best = outer
        for other in b.brackets:
            if other.start <= pos < other.end and other.length < best.length:
                best = other
        return best

    for bracket in b.brackets:
        head = b.head_of[bracket]
        heads[head - 1] = b.head_of[enclosing(bracket)]
    bracket_heads = {b.head_of[s] for s in b.brackets}
    for pos in range(b.n):
        word = pos + 1
        if word in bracket_heads or word == b.head_of[outer]:
            continue
        heads[pos] = b.head_of[innermost(pos)]
    heads[b.head_of[outer] - 1] = 0
    return heads


def parse_corpus(corpus: Corpus, tables: Mapping[str, ScoreTable] | None, mode: str,
                 punct: bool = False, r_orientation: str = "constraint",
                 max_sentence_len: int = 30) -> dict[str, list[int]]:
    """Parse every sentence with the selected mode; returns sent_id -> heads.

    Chain modes need no scores. With punct=True the punctuation override is
    applied to each table first. Sentences longer than max_sentence_len have
    no multi-word span scores, so algD falls back to algR there.
    """
    if mode not in VALID_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    trees: dict[str, list[int]] = {}
    for sent in corpus:
        n = len(sent)
        if mode == "left":
            trees[sent.sent_id] = left_chain(n)
            continue
        if mode == "right":
            trees[sent.sent_id] = right_chain(n)
            continue
        if tables is None or sent.sent_id not in tables:
            raise ValueError(f"no score table for sentence {sent.sent_id}")
        table = tables[sent.sent_id]
        if table.n != n:
            raise ValueError(
                f"{sent.sent_id}: table covers {table.n} words, sentence has {n}"
            )
        if punct:
            table = punct_override(table, sent)
        if mode == "algR" or n > max_sentence_len:
            trees[sent.sent_id] = algorithm_r(table.word_scores(), r_orientation)
        else:
            trees[sent.sent_id] = brackets_to_tree(algorithm_d(table))
    for sent_id, heads in trees.items():
        validate_heads(heads, sent_id)
    return trees
