import json

import pytest
from click.testing import CliRunner

from conftest import toy_path
from redparse.cli import main, run_table1
from redparse.reducibility import ScoreTable, write_scores
from redparse.treebank import load_conllu
from redparse.variants import Span


@pytest.fixture()
def runner():
    return CliRunner()


def run_ok(runner, *args):
    result = runner.invoke(main, [str(a) for a in args])
    assert result.exit_code == 0, result.output
    return result


@pytest.fixture()
def pipeline(tmp_path, runner):
    """Run filter -> variants -> mock-embed -> score once and hand back the paths."""
    paths = {
        "filtered": tmp_path / "filtered.conllu",
        "manifest": tmp_path / "manifest.jsonl",
        "dump": tmp_path / "dump.rdcb",
        "scores": tmp_path / "scores.jsonl",
    }
    run_ok(runner, "filter", toy_path("toy.conllu"), toy_path("toy_vocab.txt"),
           "--out", paths["filtered"])
    run_ok(runner, "variants", paths["filtered"], "--out", paths["manifest"])
    run_ok(runner, "mock-embed", paths["manifest"], "--out", paths["dump"],
           "--dim", 16, "--seed", 1)
    run_ok(runner, "score", paths["dump"], paths["filtered"], "--out", paths["scores"])
    return paths


def test_filter_keeps_all_toy_sentences(tmp_path, runner):
    out = tmp_path / "filtered.conllu"
    result = run_ok(runner, "filter", toy_path("toy.conllu"), toy_path("toy_vocab.txt"),
                    "--out", out)
    assert "kept 20/20" in result.output
    assert len(load_conllu(str(out))) == 20


def test_variants_line_counts(tmp_path, runner):
    conllu = tmp_path / "tiny.conllu"
    conllu.write_text(
        "1\ta\t_\tX\t_\t_\t0\t_\t_\t_\n\n"
        "1\tb\t_\tX\t_\t_\t2\t_\t_\t_\n2\tc\t_\tX\t_\t_\t3\t_\t_\t_\n"
        "3\td\t_\tX\t_\t_\t0\t_\t_\t_\n",
        encoding="utf-8")
    manifest = tmp_path / "m.jsonl"
    run_ok(runner, "variants", conllu, "--out", manifest)
    lines = [json.loads(l) for l in manifest.read_text().splitlines()]
    assert len(lines) == 1 + 6  # n=1 -> BASE only; n=3 -> BASE + 5 spans
    assert lines[0]["span"] is None
    assert lines[0]["sent_id"] == "s1"


def test_variants_respects_phrase_cap(tmp_path, runner):
    conllu = tmp_path / "tiny.conllu"
    conllu.write_text(
        "1\tb\t_\tX\t_\t_\t2\t_\t_\t_\n2\tc\t_\tX\t_\t_\t3\t_\t_\t_\n"
        "3\td\t_\tX\t_\t_\t0\t_\t_\t_\n",
        encoding="utf-8")
    manifest = tmp_path / "m.jsonl"
    run_ok(runner, "variants", conllu, "--out", manifest, "--max-phrase-len", 1)
    lines = manifest.read_text().splitlines()
    assert len(lines) == 4


def test_mock_embed_is_byte_deterministic(pipeline, tmp_path, runner):
    again = tmp_path / "again.rdcb"
    run_ok(runner, "mock-embed", pipeline["manifest"], "--out", again,
           "--dim", 16, "--seed", 1)
    assert again.read_bytes() == pipeline["dump"].read_bytes()
    meta = json.loads((tmp_path / "dump.rdcb.meta.json").read_text())
    assert meta["dim"] == 16 and meta["seed"] == 1


def test_mock_embed_block_count_matches_manifest(pipeline):
    from redparse.variants import read_dump
    with open(pipeline["dump"], "rb") as f:
        blocks = list(read_dump(f))
    manifest_lines = pipeline["manifest"].read_text().splitlines()
    assert len(blocks) == len(manifest_lines)


def test_score_output_covers_corpus(pipeline):
    lines = [json.loads(l) for l in pipeline["scores"].read_text().splitlines()]
    corpus = load_conllu(str(pipeline["filtered"]))
    assert [l["sent_id"] for l in lines] == [s.sent_id for s in corpus]
    for line, sent in zip(lines, corpus):
        assert line["n"] == len(sent)
        singles = [e for e in line["scores"] if e["len"] == 1]
        assert len(singles) == len(sent)


def test_parse_produces_valid_conllu(pipeline, tmp_path, runner):
    from redparse.treebank import validate_heads
    for mode in ("left", "right", "algD", "algR"):
        out = tmp_path / f"parsed-{mode}.conllu"
        run_ok(runner, "parse", pipeline["scores"], pipeline["filtered"],
               "--out", out, "--mode", mode)
        parsed = load_conllu(str(out))
        assert len(parsed) == 20
        for sent in parsed:
            validate_heads(sent.gold_heads(), sent.sent_id)


def test_parse_right_mode_is_right_chain(pipeline, tmp_path, runner):
    out = tmp_path / "right.conllu"
    run_ok(runner, "parse", pipeline["scores"], pipeline["filtered"],
           "--out", out, "--mode", "right")
    for sent in load_conllu(str(out)):
        n = len(sent)
        assert sent.gold_heads() == [i + 2 for i in range(n - 1)] + [0]


def test_parse_trace_records_algd_decisions(pipeline, tmp_path, runner):
    out = tmp_path / "parsed.conllu"
    trace = tmp_path / "trace.jsonl"
    run_ok(runner, "parse", pipeline["scores"], pipeline["filtered"],
           "--out", out, "--mode", "algD", "--trace", trace)
    lines = [json.loads(l) for l in trace.read_text().splitlines()]
    assert len(lines) == 20
    first = lines[0]
    assert {"start", "len", "score", "accepted", "violation"} <= set(first["decisions"][0])
    assert any(d["accepted"] for d in first["decisions"])


def test_eval_report_and_figures(pipeline, tmp_path, runner):
    parsed = tmp_path / "parsed.conllu"
    run_ok(runner, "parse", pipeline["scores"], pipeline["filtered"],
           "--out", parsed, "--mode", "algR", "--punct-override")
    report_path = tmp_path / "report.json"
    figs = tmp_path / "figs"
    run_ok(runner, "eval", pipeline["filtered"], "--parsed", parsed,
           "--scores", pipeline["scores"], "--out", report_path, "--figure-dir", figs)
    report = json.loads(report_path.read_text())
    assert 0.0 <= report["uas"] <= 1.0
    assert report["n_sentences"] == 20
    per_word = (figs / "scores_by_word.csv").read_text().splitlines()
    assert per_word[0] == "sent_id,index,form,upos,score,is_gold_leaf"
    assert len(per_word) == 1 + report["n_words"]
    per_tag = (figs / "scores_by_tag.csv").read_text().splitlines()
    assert per_tag[0] == "upos,mean_score,count,leaf_fraction"
    tags = {line.split(",")[0] for line in per_tag[1:]}
    assert "PUNCT" in tags and "VERB" in tags


def test_eval_accepts_punct_alias(pipeline, tmp_path, runner):
    out = tmp_path / "p.conllu"
    run_ok(runner, "parse", pipeline["scores"], pipeline["filtered"],
           "--out", out, "--mode", "algR", "--punct")


def test_table1_has_six_rows(pipeline, tmp_path, runner):
    out = tmp_path / "table.csv"
    run_ok(runner, "table1", pipeline["scores"], pipeline["filtered"],
           "--out", out, "--format", "csv")
    lines = out.read_text().splitlines()
    assert lines[0] == "parser,uas"
    assert [l.split(",")[0] for l in lines[1:]] == [
        "left chain", "right chain", "algD", "algD + punct", "algR", "algR + punct"]
    values = [float(l.split(",")[1]) for l in lines[1:]]
    assert all(0.0 <= v <= 1.0 for v in values)


def test_table1_markdown_format(pipeline, tmp_path, runner):
    out = tmp_path / "table.md"
    result = run_ok(runner, "table1", pipeline["scores"], pipeline["filtered"], "--out", out)
    assert out.read_text().startswith("| parser")
    assert "right chain" in result.output


def test_gold_depth_scores_make_algr_beat_right_chain(toy_corpus):
    """Synthetic scores (sentence length minus gold depth) reward the score-aware parser."""
    def depth(heads, i):
        d = 0
        while heads[i - 1] != 0:
            i = heads[i - 1]
            d += 1
        return d

    tables = {}
    for sent in toy_corpus:
        heads = sent.gold_heads()
        n = len(sent)
        tables[sent.sent_id] = ScoreTable(
            0, n, {Span(i, 1): float(n - depth(heads, i + 1)) for i in range(n)})
    rows = dict(run_table1(toy_corpus, tables))
    assert rows["algR"] > rows["right chain"]
    # frozen expectations for this corpus
    assert rows["left chain"] == pytest.approx(5 / 52)
    assert rows["right chain"] == pytest.approx(5 / 13)
    assert rows["algR"] == 1.0


def test_cli_validation_error_exit_code(tmp_path, runner):
    bad = tmp_path / "bad.conllu"
    bad.write_text("1\ta\tb\n", encoding="utf-8")
    result = runner.invoke(main, ["variants", str(bad), "--out", str(tmp_path / "m.jsonl")])
    assert result.exit_code == 1
    assert "error:" in result.output


def test_cli_usage_error_exit_code(runner):
    result = runner.invoke(main, ["parse", "--mode", "bogus"])
    assert result.exit_code == 2


def test_cli_rejects_nonpositive_limits(pipeline, tmp_path, runner):
    result = runner.invoke(main, ["variants", str(pipeline["filtered"]),
                                  "--out", str(tmp_path / "m.jsonl"),
                                  "--max-sentence-len", "0"])
    assert result.exit_code == 1
    result = runner.invoke(main, ["eval", str(pipeline["filtered"]),
                                  "--scores", str(pipeline["scores"]),
                                  "--out", str(tmp_path / "r.json"),
                                  "--leaf-factor", "0"])
    assert result.exit_code == 1


def test_score_rejects_mismatched_corpus(pipeline, tmp_path, runner):
    from redparse.treebank import Corpus, emit_conllu
    short = tmp_path / "short.conllu"
    corpus = load_conllu(str(pipeline["filtered"]))
    short.write_text(emit_conllu(Corpus(corpus.sentences[:2])), encoding="utf-8")
    result = runner.invoke(main, ["score", str(pipeline["dump"]), str(short),
                                  "--out", str(tmp_path / "s.jsonl")])
    assert result.exit_code == 1
