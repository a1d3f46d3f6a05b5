"""Run a pretrained masked-LM encoder over manifest variants and dump word vectors.

Each variant is encoded with the model's boundary tokens present; the
final-layer hidden states at the word positions are kept and the boundary
positions stripped, so the dump rows align one-to-one with manifest words.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import torch
from transformers import AutoModel, AutoTokenizer

from .formats import DumpWriter, ManifestEntry, read_manifest

DEFAULT_MODEL = "bert-large-uncased"


class TokenizationMismatch(ValueError):
    """A manifest word that does not map to exactly one known subword unit."""


@dataclass
class ExtractorConfig:
    model: str = DEFAULT_MODEL
    batch_size: int = 16
    device: str = "auto"


def resolve_device(name: str) -> torch.device:
    if name == "auto":
        return torch.device("cuda" if torch.cuda.is_available() else "cpu")
    return torch.device(name)


def _batches(entries: Sequence[ManifestEntry], size: int):
    for i in range(0, len(entries), size):
        yield entries[i:i + size]


def _word_positions(word_ids: list[int | None], entry: ManifestEntry) -> list[int]:
    positions: dict[int, list[int]] = {}
    for pos, wid in enumerate(word_ids):
        if wid is not None:
            positions.setdefault(wid, []).append(pos)
    out = []
    for w, word in enumerate(entry.words):
        hits = positions.get(w, [])
        if len(hits) != 1:
            raise TokenizationMismatch(
                f"sentence {entry.sent_id}: word {word!r} tokenizes to {len(hits)} units; "
                "the upstream vocabulary filter should have removed this sentence"
            )
        out.append(hits[0])
    return out


def extract(manifest_path: str, out_path: str, config: ExtractorConfig) -> int:
    """Embed every manifest variant into an RDCB dump; returns the record count."""
    if config.batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    with open(manifest_path, encoding="utf-8") as f:
        entries = read_manifest(f)
    device = resolve_device(config.device)
    tokenizer = AutoTokenizer.from_pretrained(config.model)
    model = AutoModel.from_pretrained(config.model).to(device).eval()
    dim = model.config.hidden_size
    unk_id = tokenizer.unk_token_id
    with open(out_path, "wb") as out:
        writer = DumpWriter(out, dim)
        for batch in _batches(entries, config.batch_size):
            enc = tokenizer([list(e.words) for e in batch], is_split_into_words=True,
                            padding=True, return_tensors="pt")
            enc = enc.to(device)
            with torch.no_grad():
                hidden = model(**enc).last_hidden_state
            for i, entry in enumerate(batch):
                positions = _word_positions(enc.word_ids(i), entry)
                ids = enc["input_ids"][i]
                for pos, word in zip(positions, entry.words):
                    if int(ids[pos]) == unk_id and word != tokenizer.unk_token:
                        raise TokenizationMismatch(
                            f"sentence {entry.sent_id}: word {word!r} is out of the "
                            "model vocabulary"
                        )
                rows = hidden[i, positions].to(torch.float32).cpu().numpy()
                writer.write(entry.sent_index, entry.span, rows)
    meta = {"tool": "redparse-extract", "model": config.model, "dim": dim,
            "boundary_tokens": "encoded-then-stripped"}
    Path(out_path + ".meta.json").write_text(json.dumps(meta) + "\n", encoding="utf-8")
    return writer.count


def vocab_export(out_path: str, config: ExtractorConfig) -> int:
    """Write the model's token vocabulary, one token per line, ordered by id."""
    tokenizer = AutoTokenizer.from_pretrained(config.model)
    vocab = sorted(tokenizer.get_vocab().items(), key=lambda kv: kv[1])
    with open(out_path, "w", encoding="utf-8") as f:
        for token, _ in vocab:
            f.write(token + "\n")
    return len(vocab)
