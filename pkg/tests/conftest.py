from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from textprobe.lexicon import load_wordnet

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def wordnet_mini_dir() -> Path:
    return FIXTURES / "wordnet_mini"


@pytest.fixture(scope="session")
def mini_lexicon(wordnet_mini_dir):
    return load_wordnet(wordnet_mini_dir)
