"""Lexical resources: tokenizer, synonym lexicon, embeddings, transform space."""

from __future__ import annotations

from textprobe.lexicon.embeddings import EmbeddingTable, cosine, load_embeddings
from textprobe.lexicon.stopwords import ENGLISH_STOPWORDS, load_stopwords
from textprobe.lexicon.tokenizer import (
    POS_TAGS,
    Token,
    TokenizedInput,
    detokenize,
    tokenize,
    word_tokens,
)
from textprobe.lexicon.transform import (
    PROVIDERS,
    LexiconConfig,
    TransformSpace,
    build_transform_space,
)
from textprobe.lexicon.wordnet import SynsetLexicon, load_wordnet, pos_tag

__all__ = [
    "EmbeddingTable",
    "ENGLISH_STOPWORDS",
    "LexiconConfig",
    "POS_TAGS",
    "PROVIDERS",
    "SynsetLexicon",
    "Token",
    "TokenizedInput",
    "TransformSpace",
    "build_transform_space",
    "cosine",
    "detokenize",
    "load_embeddings",
    "load_stopwords",
    "load_wordnet",
    "pos_tag",
    "prepare_input",
    "tokenize",
    "word_tokens",
]


def prepare_input(
    text: str,
    lexicon: SynsetLexicon | None = None,
    stopwords: frozenset[str] = ENGLISH_STOPWORDS,
    example_span: tuple[int, int] | None = None,
    freeze_prompt: bool = True,
) -> TokenizedInput:
    """Tokenize, flag stop words, mark the prompt region, and POS-tag."""
    inp = tokenize(text).with_stopwords(stopwords)
    if example_span is not None:
        inp = inp.with_example_region(example_span, freeze_prompt=freeze_prompt)
    return inp.with_pos(pos_tag(inp.surfaces, lexicon))
