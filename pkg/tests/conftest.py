import importlib.resources

import numpy as np
import pytest
from hypothesis import strategies as st

from redparse.treebank import load_conllu


def toy_path(name: str) -> str:
    return str(importlib.resources.files("redparse").joinpath("data", name))


@pytest.fixture(scope="session")
def toy_corpus():
    return load_conllu(toy_path("toy.conllu"))


def random_heads(rng: np.random.Generator, n: int) -> list[int]:
    """A uniform-ish random single-rooted tree: attach each word to an earlier pick."""
    order = rng.permutation(n)
    heads = [0] * n
    for k in range(1, n):
        parent = order[int(rng.integers(0, k))]
        heads[order[k]] = int(parent) + 1
    return heads


@st.composite
def head_arrays(draw, max_n: int = 12) -> list[int]:
    n = draw(st.integers(min_value=1, max_value=max_n))
    order = draw(st.permutations(list(range(1, n + 1))))
    heads = [0] * n
    for k in range(1, n):
        parent = draw(st.sampled_from(order[:k]))
        heads[order[k] - 1] = parent
    return heads
