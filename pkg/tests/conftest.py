import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
sys.path.insert(0, str(TESTS_DIR))

from tagsimp.align import build_vocab
from tagsimp.core import TagVocabulary, tokenize


@pytest.fixture(scope="session")
def example_pairs() -> list[tuple[str, str]]:
    pairs = []
    with open(TESTS_DIR / "fixtures" / "example_pairs.tsv", encoding="utf-8") as fh:
        for line in fh:
            src, tgt = line.rstrip("\n").split("\t")
            pairs.append((src, tgt))
    assert len(pairs) == 5
    return pairs


@pytest.fixture(scope="session")
def example_vocab(example_pairs) -> TagVocabulary:
    pairs = [(tokenize(s), tokenize(t)) for s, t in example_pairs]
    return build_vocab(pairs, capacity=5000)


def vocab_for(pairs_text: list[tuple[str, str]], capacity: int = 5000) -> TagVocabulary:
    pairs = [(tokenize(s), tokenize(t)) for s, t in pairs_text]
    return build_vocab(pairs, capacity=capacity)
