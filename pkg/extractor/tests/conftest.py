import pytest
import torch
from transformers import BertConfig, BertModel, BertTokenizerFast

TINY_VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "dog", "barks", "cat", "sleeps", ".", "a", "big", "old",
    "play", "##ing",
]


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    """A small randomly initialized uncased encoder saved to disk."""
    path = tmp_path_factory.mktemp("tinybert")
    tokenizer = BertTokenizerFast(vocab={t: i for i, t in enumerate(TINY_VOCAB)},
                                  do_lower_case=True)
    config = BertConfig(vocab_size=len(TINY_VOCAB), hidden_size=16, num_hidden_layers=2,
                        num_attention_heads=2, intermediate_size=32,
                        max_position_embeddings=64)
    torch.manual_seed(1234)
    model = BertModel(config)
    model.eval()
    tokenizer.save_pretrained(str(path))
    model.save_pretrained(str(path))
    return str(path)
