"""Reducibility scores from perturbed contextual embeddings, and parsers built on them."""

from .evaluation import EvalReport, direction_accuracy, full_report, leaf_accuracy, \
    pos_aggregate, root_accuracy, uas
from .parser import HeadedBracketing, algorithm_d, algorithm_r, brackets_to_tree, \
    is_projective, left_chain, parse_corpus, right_chain
from .reducibility import LeafPrediction, ScoreTable, classify_leaves, phrase_score, \
    punct_override, score_sentence
from .treebank import Corpus, Sentence, Word, emit_conllu, filter_by_vocab, load_conllu, \
    load_vocab, parse_conllu, validate_heads
from .variants import EmbeddingBlock, Span, Variant, enumerate_variants, mock_embed, \
    read_dump, remaining_alignment, write_dump

__version__ = "0.1.0"

__all__ = [
    "Corpus", "EmbeddingBlock", "EvalReport", "HeadedBracketing", "LeafPrediction",
    "ScoreTable", "Sentence", "Span", "Variant", "Word",
    "algorithm_d", "algorithm_r", "brackets_to_tree", "classify_leaves",
    "direction_accuracy", "emit_conllu", "enumerate_variants", "filter_by_vocab",
    "full_report", "is_projective", "leaf_accuracy", "left_chain", "load_conllu",
    "load_vocab", "mock_embed", "parse_conllu", "parse_corpus", "phrase_score",
    "pos_aggregate", "punct_override", "read_dump", "remaining_alignment",
    "right_chain", "root_accuracy", "score_sentence", "uas", "validate_heads",
    "write_dump",
]
