"""Command-line pipeline: filter -> variants -> mock-embed -> score -> parse -> eval.

Every stage reads and writes files, so the expensive embedding stage can run
once and be reused across parser configurations. Exit codes: 0 on success,
1 on validation or format errors, 2 on usage errors.
"""

import functools
import json
import sys
from pathlib import Path

import click

from . import evaluation, parser, reducibility, treebank, variants
from .reducibility import AlignmentError
from .treebank import ConlluParseError, TreeValidationError
from .variants import DumpFormatError

_FAILURES = (ConlluParseError, TreeValidationError, DumpFormatError, AlignmentError,
             ValueError, KeyError, OSError)


def _fails_cleanly(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except _FAILURES as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
    return wrapper


@click.group()
def main():
    """Reducibility scoring and unsupervised dependency parsing over CoNLL-U."""


@main.command("filter")
@click.argument("conllu", type=click.Path(exists=True, dir_okay=False))
@click.argument("vocab", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Filtered CoNLL-U.")
@click.option("--lowercase/--no-lowercase", default=True, show_default=True,
              help="Lowercase forms before the vocabulary lookup (uncased models).")
@_fails_cleanly
def filter_cmd(conllu, vocab, out, lowercase):
    """Keep only sentences whose every word is in VOCAB."""
    corpus = treebank.load_conllu(conllu)
    vocab_set = treebank.load_vocab(vocab)
    kept = treebank.filter_by_vocab(corpus, vocab_set, lowercase=lowercase)
    Path(out).write_text(treebank.emit_conllu(kept), encoding="utf-8")
    parse_drops = len(corpus.excluded)
    click.echo(f"parsed {len(corpus)} sentences"
               + (f" ({parse_drops} dropped at parse: "
                  + ", ".join(f"{sid}:{why}" for sid, why in corpus.excluded) + ")"
                  if parse_drops else ""))
    click.echo(f"kept {len(kept)}/{len(corpus)} sentences "
               f"({len(kept.excluded)} out-of-vocabulary)")


@main.command("variants")
@click.argument("conllu", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Variant manifest (JSON Lines).")
@click.option("--max-phrase-len", type=int, default=None,
              help="Longest deletable span; unlimited when omitted.")
@click.option("--max-sentence-len", type=int, default=30, show_default=True,
              help="Sentences longer than this keep only single-word spans.")
@_fails_cleanly
def variants_cmd(conllu, out, max_phrase_len, max_sentence_len):
    """Enumerate deletion variants of every sentence."""
    if max_phrase_len is not None and max_phrase_len < 1:
        raise ValueError("--max-phrase-len must be >= 1")
    if max_sentence_len < 1:
        raise ValueError("--max-sentence-len must be >= 1")
    corpus = treebank.load_conllu(conllu)
    with open(out, "w", encoding="utf-8") as f:
        count = variants.write_manifest(
            variants.enumerate_corpus_variants(corpus, max_phrase_len, max_sentence_len), f)
    click.echo(f"wrote {count} variants for {len(corpus)} sentences")


@main.command("mock-embed")
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Embedding dump (RDCB binary).")
@click.option("--dim", type=int, default=32, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_fails_cleanly
def mock_embed_cmd(manifest, out, dim, seed):
    """Produce deterministic mock embeddings for a manifest."""
    with open(manifest, encoding="utf-8") as f:
        entries = variants.read_manifest(f)
    with open(out, "wb") as f:
        count = variants.write_dump(
            (variants.mock_embed(e, dim, seed) for e in entries), dim, f)
    meta = {"tool": "mock-embed", "dim": dim, "seed": seed, "boundary_tokens": "none"}
    Path(out + ".meta.json").write_text(json.dumps(meta) + "\n", encoding="utf-8")
    click.echo(f"embedded {count} variants at dim {dim}")


@main.command("score")
@click.argument("dump", type=click.Path(exists=True, dir_okay=False))
@click.argument("conllu", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Score file (JSON Lines).")
@_fails_cleanly
def score_cmd(dump, conllu, out):
    """Score every span in the dump against its sentence's BASE block."""
    corpus = treebank.load_conllu(conllu)
    with open(dump, "rb") as f, open(out, "w", encoding="utf-8") as out_f:
        def scored():
            for group in variants.read_dump_grouped(f):
                table = reducibility.score_sentence(group)
                if table.sent_index >= len(corpus):
                    raise ValueError(f"dump refers to sentence {table.sent_index}, "
                                     f"corpus has {len(corpus)}")
                sent = corpus.sentences[table.sent_index]
                if table.n != len(sent):
                    raise ValueError(f"{sent.sent_id}: dump has {table.n} words, "
                                     f"sentence has {len(sent)}")
                yield sent.sent_id, table
        count = reducibility.write_scores(scored(), out_f)
    click.echo(f"scored {count} sentences")


def _load_tables(path):
    with open(path, encoding="utf-8") as f:
        return dict(reducibility.read_scores(f))


@main.command("parse")
@click.argument("scores", type=click.Path(exists=True, dir_okay=False))
@click.argument("conllu", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Parsed CoNLL-U.")
@click.option("--mode", type=click.Choice(parser.VALID_MODES), default="algR",
              show_default=True)
@click.option("--punct-override", "--punct", "punct", is_flag=True, default=False,
              help="Zero punctuation word scores before parsing.")
@click.option("--r-orientation", type=click.Choice(parser.ORIENTATIONS),
              default="constraint", show_default=True)
@click.option("--max-sentence-len", type=int, default=30, show_default=True,
              help="Length above which algD falls back to algR (match the variants stage).")
@click.option("--trace", type=click.Path(dir_okay=False), default=None,
              help="Write per-sentence algD accept/reject decisions (JSON Lines).")
@_fails_cleanly
def parse_cmd(scores, conllu, out, mode, punct, r_orientation, max_sentence_len, trace):
    """Build dependency trees from span scores."""
    if max_sentence_len < 1:
        raise ValueError("--max-sentence-len must be >= 1")
    corpus = treebank.load_conllu(conllu)
    tables = _load_tables(scores)
    trees = parser.parse_corpus(corpus, tables, mode, punct=punct,
                                r_orientation=r_orientation,
                                max_sentence_len=max_sentence_len)
    if trace is not None:
        with open(trace, "w", encoding="utf-8") as trace_f:
            if mode == "algD":
                _write_trace(trace_f, corpus, tables, punct, max_sentence_len)
    Path(out).write_text(treebank.emit_conllu(corpus, trees), encoding="utf-8")
    click.echo(f"parsed {len(trees)} sentences with {mode}"
               + (" + punct override" if punct else ""))


def _write_trace(trace_f, corpus, tables, punct, max_sentence_len):
    for sent in corpus:
        if len(sent) > max_sentence_len:
            trace_f.write(json.dumps({"sent_id": sent.sent_id, "fallback": "algR"}) + "\n")
            continue
        table = tables[sent.sent_id]
        if punct:
            table = reducibility.punct_override(table, sent)
        _, decisions = parser.algorithm_d_with_trace(table)
        trace_f.write(json.dumps({
            "sent_id": sent.sent_id,
            "decisions": [
                {"start": d.span.start, "len": d.span.length, "score": d.score,
                 "accepted": d.accepted, "violation": d.violation}
                for d in decisions
            ],
        }) + "\n")


@main.command("eval")
@click.argument("gold", type=click.Path(exists=True, dir_okay=False))
@click.option("--parsed", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Predicted CoNLL-U (enables attachment metrics).")
@click.option("--scores", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Score file (enables leaf/root/direction metrics and figure CSVs).")
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Report (JSON).")
@click.option("--figure-dir", type=click.Path(file_okay=False), default=None,
              help="Directory for per-word and per-tag score CSVs.")
@click.option("--leaf-factor", type=float, default=1.2, show_default=True)
@_fails_cleanly
def eval_cmd(gold, parsed, scores, out, figure_dir, leaf_factor):
    """Evaluate predicted trees and/or score diagnostics against gold trees."""
    if leaf_factor <= 0:
        raise ValueError("--leaf-factor must be > 0")
    gold_corpus = treebank.load_conllu(gold)
    pred = None
    if parsed is not None:
        pred_corpus = treebank.load_conllu(parsed)
        pred = {s.sent_id: s.gold_heads() for s in pred_corpus}
    tables = _load_tables(scores) if scores is not None else None
    report = evaluation.full_report(gold_corpus, pred=pred, tables=tables,
                                    leaf_factor=leaf_factor)
    Path(out).write_text(report.to_json(), encoding="utf-8")
    if figure_dir is not None:
        if tables is None:
            raise ValueError("--figure-dir needs --scores")
        fig = Path(figure_dir)
        fig.mkdir(parents=True, exist_ok=True)
        with open(fig / "scores_by_tag.csv", "w", encoding="utf-8", newline="") as tag_f, \
                open(fig / "scores_by_word.csv", "w", encoding="utf-8", newline="") as word_f:
            evaluation.write_pos_csvs(tables, gold_corpus, tag_f, word_f)
    click.echo(report.to_json(), nl=False)


TABLE1_CONFIGS = (
    ("left chain", "left", False),
    ("right chain", "right", False),
    ("algD", "algD", False),
    ("algD + punct", "algD", True),
    ("algR", "algR", False),
    ("algR + punct", "algR", True),
)


def run_table1(gold_corpus, tables, r_orientation="constraint", max_sentence_len=30):
    """UAS of the six built-in parser configurations, as (label, uas) pairs."""
    rows = []
    for label, mode, punct in TABLE1_CONFIGS:
        trees = parser.parse_corpus(gold_corpus, tables, mode, punct=punct,
                                    r_orientation=r_orientation,
                                    max_sentence_len=max_sentence_len)
        rows.append((label, evaluation.uas(trees, gold_corpus)))
    return rows


@main.command("table1")
@click.argument("scores", type=click.Path(exists=True, dir_okay=False))
@click.argument("gold", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["md", "csv"]), default="md",
              show_default=True)
@click.option("--r-orientation", type=click.Choice(parser.ORIENTATIONS),
              default="constraint", show_default=True)
@click.option("--max-sentence-len", type=int, default=30, show_default=True)
@_fails_cleanly
def table1_cmd(scores, gold, out, fmt, r_orientation, max_sentence_len):
    """Tabulate UAS for all six parser configurations."""
    if max_sentence_len < 1:
        raise ValueError("--max-sentence-len must be >= 1")
    gold_corpus = treebank.load_conllu(gold)
    tables = _load_tables(scores)
    rows = run_table1(gold_corpus, tables, r_orientation, max_sentence_len)
    if fmt == "csv":
        text = "parser,uas\n" + "".join(f"{label},{val:.4f}\n" for label, val in rows)
    else:
        width = max(len(label) for label, _ in rows)
        lines = [f"| {'parser'.ljust(width)} | UAS   |",
                 f"|{'-' * (width + 2)}|-------|"]
        lines += [f"| {label.ljust(width)} | {100 * val:5.1f} |" for label, val in rows]
        text = "\n".join(lines) + "\n"
    Path(out).write_text(text, encoding="utf-8")
    click.echo(text, nl=False)


if __name__ == "__main__":
    main()
