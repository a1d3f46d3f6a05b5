"""Evaluation of predicted trees and score diagnostics against gold trees."""

import csv
import json
from dataclasses import asdict, dataclass
from typing import Mapping, Sequence, TextIO

from .reducibility import ScoreTable, classify_leaves
from .treebank import Corpus, Sentence


@dataclass(frozen=True, slots=True)
class RootResult:
    accuracy: float
    random_baseline: float
    no_eligible: int  # sentences where every word was excluded from the argmax


@dataclass(frozen=True, slots=True)
class EvalReport:
    uas: float | None
    uas_no_punct: float | None
    leaf_accuracy: float | None
    all_leaf_baseline: float | None
    root_accuracy: float | None
    root_accuracy_no_punct: float | None
    root_random_baseline: float | None
    direction_accuracy: float | None
    direction_right_baseline: float | None
    n_sentences: int
    n_words: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


def _check_coverage(pred: Mapping[str, Sequence[int]], gold: Corpus) -> None:
    for sent in gold:
        if sent.sent_id not in pred:
            raise ValueError(f"no predicted tree for sentence {sent.sent_id}")
        if len(pred[sent.sent_id]) != len(sent):
            raise ValueError(
                f"{sent.sent_id}: predicted tree has {len(pred[sent.sent_id])} heads "
                f"for {len(sent)} words"
            )


def uas(pred: Mapping[str, Sequence[int]], gold: Corpus, ignore_punct: bool = False) -> float:
    """Fraction of words whose predicted head equals the gold head."""
    _check_coverage(pred, gold)
    correct = 0
    total = 0
    for sent in gold:
        heads = pred[sent.sent_id]
        for word in sent.words:
            if ignore_punct and word.is_punct:
                continue
            total += 1
            if heads[word.index - 1] == word.gold_head:
                correct += 1
    if total == 0:
        raise ValueError("no words to evaluate")
    return correct / total


def gold_leaves(sentence: Sentence) -> list[bool]:
    """A word is a gold leaf iff no other word's head points to it."""
    has_child = [False] * len(sentence)
    for word in sentence.words:
        if word.gold_head > 0:
            has_child[word.gold_head - 1] = True
    return [not flag for flag in has_child]


def leaf_accuracy(predictions: Mapping[str, Sequence[bool]], gold: Corpus) -> tuple[float, float]:
    """Accuracy of leaf predictions, plus the accuracy of predicting all-leaf."""
    correct = 0
    leaves = 0
    total = 0
    for sent in gold:
        if sent.sent_id not in predictions:
            raise ValueError(f"no leaf prediction for sentence {sent.sent_id}")
        pred = predictions[sent.sent_id]
        if len(pred) != len(sent):
            raise ValueError(f"{sent.sent_id}: leaf prediction length mismatch")
        for flag_pred, flag_gold in zip(pred, gold_leaves(sent)):
            total += 1
            leaves += flag_gold
            correct += flag_pred == flag_gold
    if total == 0:
        raise ValueError("no words to evaluate")
    return correct / total, leaves / total


def root_accuracy(tables: Mapping[str, ScoreTable], gold: Corpus,
                  ignore_punct: bool = False) -> RootResult:
    """Predict each sentence's root as its highest-scoring word and compare to gold.

    The random baseline is the mean over sentences of 1 / (eligible words).
    A sentence with no eligible words counts as incorrect and contributes 0
    to the baseline.
    """
    correct = 0
    baseline = 0.0
    no_eligible = 0
    n_sent = 0
    for sent in gold:
        if sent.sent_id not in tables:
            raise ValueError(f"no score table for sentence {sent.sent_id}")
        table = tables[sent.sent_id]
        n_sent += 1
        eligible = [i for i in range(len(sent))
                    if not (ignore_punct and sent.words[i].is_punct)]
        if not eligible:
            no_eligible += 1
            continue
        baseline += 1.0 / len(eligible)
        best = max(eligible, key=lambda i: (table.word_score(i), -i))
        gold_root = next(w.index for w in sent.words if w.gold_head == 0)
        if best + 1 == gold_root:
            correct += 1
    if n_sent == 0:
        raise ValueError("no sentences to evaluate")
    return RootResult(correct / n_sent, baseline / n_sent, no_eligible)


def direction_accuracy(tables: Mapping[str, ScoreTable], gold: Corpus) -> tuple[float, float]:
    """Fraction of gold edges whose parent outscores its child (ties count as wrong).

    The second value is the right-attachment baseline: the fraction of gold
    edges whose parent sits to the right of the child.
    """
    correct = 0
    rightward = 0
    total = 0
    for sent in gold:
        if sent.sent_id not in tables:
            raise ValueError(f"no score table for sentence {sent.sent_id}")
        table = tables[sent.sent_id]
        for word in sent.words:
            if word.gold_head == 0:
                continue
            total += 1
            if table.word_score(word.gold_head - 1) > table.word_score(word.index - 1):
                correct += 1
            if word.gold_head > word.index:
                rightward += 1
    if total == 0:
        raise ValueError("no edges to evaluate")
    return correct / total, rightward / total


def pos_aggregate(tables: Mapping[str, ScoreTable], gold: Corpus):
    """Group word scores by UPOS tag.

    Returns (per_tag, per_word): per_tag rows are
    (upos, mean_score, count, leaf_fraction) sorted by tag; per_word rows are
    (sent_id, index, form, upos, score, is_gold_leaf) in corpus order.
    """
    per_word = []
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    leaf_counts: dict[str, int] = {}
    for sent in gold:
        if sent.sent_id not in tables:
            raise ValueError(f"no score table for sentence {sent.sent_id}")
        table = tables[sent.sent_id]
        leaves = gold_leaves(sent)
        for word, is_leaf in zip(sent.words, leaves):
            score = table.word_score(word.index - 1)
            per_word.append((sent.sent_id, word.index, word.form, word.upos, score, is_leaf))
            sums[word.upos] = sums.get(word.upos, 0.0) + score
            counts[word.upos] = counts.get(word.upos, 0) + 1
            leaf_counts[word.upos] = leaf_counts.get(word.upos, 0) + is_leaf
    per_tag = [(tag, sums[tag] / counts[tag], counts[tag], leaf_counts[tag] / counts[tag])
               for tag in sorted(counts)]
    return per_tag, per_word


def write_pos_csvs(tables: Mapping[str, ScoreTable], gold: Corpus,
                   per_tag_out: TextIO, per_word_out: TextIO) -> None:
    per_tag, per_word = pos_aggregate(tables, gold)
    tag_writer = csv.writer(per_tag_out)
    tag_writer.writerow(["upos", "mean_score", "count", "leaf_fraction"])
    tag_writer.writerows(per_tag)
    word_writer = csv.writer(per_word_out)
    word_writer.writerow(["sent_id", "index", "form", "upos", "score", "is_gold_leaf"])
    for sent_id, index, form, upos, score, is_leaf in per_word:
        word_writer.writerow([sent_id, index, form, upos, score, is_leaf])


def full_report(gold: Corpus, pred: Mapping[str, Sequence[int]] | None = None,
                tables: Mapping[str, ScoreTable] | None = None,
                leaf_factor: float = 1.2) -> EvalReport:
    """Aggregate every evaluation; fields without the needed input stay None.

    Tree metrics need `pred`; score diagnostics need `tables`. At least one
    must be supplied.
    """
    if len(gold) == 0:
        raise ValueError("no sentences")
    if pred is None and tables is None:
        raise ValueError("need predicted trees or score tables")
    uas_all = uas_np = None
    if pred is not None:
        uas_all = uas(pred, gold, ignore_punct=False)
        uas_np = uas(pred, gold, ignore_punct=True)
    leaf_acc = leaf_base = None
    root_acc = root_acc_np = root_base = None
    dir_acc = dir_base = None
    if tables is not None:
        predictions = {}
        for sent in gold:
            if sent.sent_id not in tables:
                raise ValueError(f"no score table for sentence {sent.sent_id}")
            predictions[sent.sent_id] = classify_leaves(tables[sent.sent_id], leaf_factor).is_leaf
        leaf_acc, leaf_base = leaf_accuracy(predictions, gold)
        with_punct = root_accuracy(tables, gold, ignore_punct=False)
        root_acc = with_punct.accuracy
        root_base = with_punct.random_baseline
        root_acc_np = root_accuracy(tables, gold, ignore_punct=True).accuracy
        dir_acc, dir_base = direction_accuracy(tables, gold)
    return EvalReport(
        uas=uas_all,
        uas_no_punct=uas_np,
        leaf_accuracy=leaf_acc,
        all_leaf_baseline=leaf_base,
        root_accuracy=root_acc,
        root_accuracy_no_punct=root_acc_np,
        root_random_baseline=root_base,
        direction_accuracy=dir_acc,
        direction_right_baseline=dir_base,
        n_sentences=len(gold),
        n_words=sum(len(s) for s in gold),
    )
