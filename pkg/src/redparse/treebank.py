"""CoNLL-U treebank reading, vocabulary filtering, and writing.

Head indices follow the CoNLL-U convention throughout: 0 is the root,
words are numbered 1..n.
"""

import unicodedata
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

N_COLUMNS = 10


class ConlluParseError(ValueError):
    """A line that cannot be read as CoNLL-U."""


class TreeValidationError(ValueError):
    """Gold heads that do not form a single-rooted tree."""


def validate_heads(heads: Sequence[int], sent_id: str = "?") -> None:
    """Check that a head array is a single-rooted acyclic tree over 1..n.

    Raises TreeValidationError naming the sentence otherwise.
    """
    n = len(heads)
    if n == 0:
        raise TreeValidationError(f"{sent_id}: empty sentence")
    roots = [i + 1 for i, h in enumerate(heads) if h == 0]
    if len(roots) != 1:
        raise TreeValidationError(f"{sent_id}: expected exactly one root, found {len(roots)}")
    for i, h in enumerate(heads):
        if h < 0 or h > n:
            raise TreeValidationError(f"{sent_id}: head {h} of word {i + 1} out of range")
        if h == i + 1:
            raise TreeValidationError(f"{sent_id}: word {i + 1} is its own head")
    # Walk each word to the root; revisiting a word on the way means a cycle.
    for start in range(1, n + 1):
        seen = set()
        node = start
        while node != 0:
            if node in seen:
                raise TreeValidationError(f"{sent_id}: cycle through word {node}")
            seen.add(node)
            node = heads[node - 1]


def _all_punct_chars(form: str) -> bool:
    return bool(form) and all(unicodedata.category(ch).startswith("P") for ch in form)


@dataclass(frozen=True, slots=True)
class Word:
    index: int
    form: str
    upos: str
    gold_head: int
    columns: tuple[str, ...]

    @property
    def is_punct(self) -> bool:
        # UPOS is authoritative; character categories only cover untagged input.
        if self.upos == "_":
            return _all_punct_chars(self.form)
        return self.upos == "PUNCT"


@dataclass(frozen=True, slots=True)
class Sentence:
    sent_id: str
    words: tuple[Word, ...]
    comments: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.words)

    def forms(self) -> list[str]:
        return [w.form for w in self.words]

    def gold_heads(self) -> list[int]:
        return [w.gold_head for w in self.words]


@dataclass(frozen=True, slots=True)
class Corpus:
    """An ordered collection of sentences plus a log of dropped ones.

    `excluded` holds (sent_id, reason) pairs for sentences the producing
    operation dropped; it is bookkeeping, not part of the sentence data.
    """

    sentences: tuple[Sentence, ...]
    source_path: str = ""
    excluded: tuple[tuple[str, str], ...] = ()

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)


def _iter_blocks(lines: Iterable[str]):
    """Yield (first_line_number, [raw lines]) per blank-line-separated block."""
    block: list[tuple[int, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if line == "":
            if block:
                yield block
                block = []
        else:
            block.append((lineno, line))
    if block:
        yield block


def parse_conllu(text: str | Iterable[str], source_path: str = "") -> Corpus:
    """Parse CoNLL-U text into a Corpus.

    Sentences containing multiword-token ranges (ID "3-4") or empty nodes
    (ID "3.1") are dropped and recorded under `excluded`, because the
    downstream pipeline needs one embedding slot per treebank word.
    """
    if isinstance(text, str):
        text = text.splitlines()
    sentences: list[Sentence] = []
    excluded: list[tuple[str, str]] = []
    seen_ids: set[str] = set()
    for ordinal, block in enumerate(_iter_blocks(text), start=1):
        sent_id = None
        comments: list[str] = []
        word_list: list[Word] = []
        first_lineno = block[0][0]
        skip_reason = None
        for lineno, line in block:
            if line.startswith("#"):
                comments.append(line)
                if line[1:].split("=", 1)[0].strip() == "sent_id":
                    sent_id = line.split("=", 1)[1].strip()
                continue
            cols = line.split("\t")
            if len(cols) != N_COLUMNS:
                raise ConlluParseError(
                    f"line {lineno}: expected {N_COLUMNS} tab-separated columns, got {len(cols)}"
                )
            wid = cols[0]
            if "-" in wid:
                skip_reason = "multiword-token"
                continue
            if "." in wid:
                skip_reason = "empty-node"
                continue
            try:
                index = int(wid)
            except ValueError:
                raise ConlluParseError(f"line {lineno}: non-integer word ID {wid!r}") from None
            try:
                head = int(cols[6])
            except ValueError:
                raise ConlluParseError(f"line {lineno}: non-integer HEAD {cols[6]!r}") from None
            word_list.append(
                Word(index=index, form=cols[1], upos=cols[3], gold_head=head, columns=tuple(cols))
            )
        if sent_id is None:
            sent_id = f"s{ordinal}"
        if skip_reason is not None:
            excluded.append((sent_id, skip_reason))
            continue
        if not word_list:
            continue
        words = tuple(word_list)
        if [w.index for w in words] != list(range(1, len(words) + 1)):
            raise ConlluParseError(
                f"line {first_lineno}: word IDs of {sent_id} are not contiguous from 1"
            )
        validate_heads([w.gold_head for w in words], sent_id)
        if sent_id in seen_ids:
            raise ConlluParseError(f"duplicate sent_id {sent_id!r}")
        seen_ids.add(sent_id)
        sentences.append(Sentence(sent_id=sent_id, words=words, comments=tuple(comments)))
    return Corpus(tuple(sentences), source_path=source_path, excluded=tuple(excluded))


def load_conllu(path: str) -> Corpus:
    with open(path, encoding="utf-8") as f:
        return parse_conllu(f, source_path=path)


def load_vocab(path: str) -> set[str]:
    """Read a vocabulary file, one token per line.

    Wordpiece continuation entries ("##ing") are kept; they simply never
    match a whole word.
    """
    with open(path, encoding="utf-8") as f:
        return {line.rstrip("\n") for line in f if line.rstrip("\n")}


def filter_by_vocab(corpus: Corpus, vocab: set[str], lowercase: bool = True) -> Corpus:
    """Keep only sentences in which every word form is in the vocabulary."""
    if not vocab:
        raise ValueError("empty vocabulary")
    kept: list[Sentence] = []
    dropped: list[tuple[str, str]] = []
    for sent in corpus:
        forms = sent.forms()
        if lowercase:
            forms = [f.lower() for f in forms]
        if all(f in vocab for f in forms):
            kept.append(sent)
        else:
            dropped.append((sent.sent_id, "out-of-vocabulary"))
    return Corpus(tuple(kept), source_path=corpus.source_path, excluded=tuple(dropped))


def emit_conllu(corpus: Corpus, predicted: Mapping[str, Sequence[int]] | None = None) -> str:
    """Serialize a corpus back to CoNLL-U.

    With `predicted`, the HEAD column is replaced by the predicted heads
    (keyed by sent_id) and DEPREL becomes "_"; all other columns and the
    comment lines are preserved verbatim.
    """
    if predicted is not None:
        missing = [s.sent_id for s in corpus if s.sent_id not in predicted]
        if missing:
            raise ValueError(f"missing predicted trees for: {', '.join(missing)}")
    out: list[str] = []
    for sent in corpus:
        heads = None
        if predicted is not None:
            heads = predicted[sent.sent_id]
            if len(heads) != len(sent):
                raise ValueError(
                    f"{sent.sent_id}: predicted tree has {len(heads)} heads "
                    f"for {len(sent)} words"
                )
        out.extend(sent.comments)
        for w in sent.words:
            if heads is None:
                out.append("\t".join(w.columns))
            else:
                cols = list(w.columns)
                cols[6] = str(heads[w.index - 1])
                cols[7] = "_"
                out.append("\t".join(cols))
        out.append("")
    return "\n".join(out) + "\n" if out else ""
