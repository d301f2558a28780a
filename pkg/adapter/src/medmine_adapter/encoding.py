"""Word-level tokenization and the vocabulary for the built-in encoder.

Tokenization with character offsets lives entirely on this side of the
file boundary; the corpus tooling never sees a model vocabulary.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

TOKEN_RE = re.compile(r"\w+|[^\w\s]")

PAD, UNK, CLS = "[PAD]", "[UNK]", "[CLS]"
PAD_ID, UNK_ID, CLS_ID = 0, 1, 2


def tokenize(text: str) -> list[tuple[int, int, str]]:
    """Word and punctuation tokens with character offsets."""
    return [(m.start(), m.end(), m.group()) for m in TOKEN_RE.finditer(text)]


@dataclass
class Vocab:
    tokens: list[str]

    def __post_init__(self) -> None:
        self._index = {tok: i for i, tok in enumerate(self.tokens)}

    def __len__(self) -> int:
        return len(self.tokens)

    def id_of(self, token: str) -> int:
        return self._index.get(token.casefold(), UNK_ID)

    @classmethod
    def build(cls, texts: list[str], max_size: int = 20_000) -> "Vocab":
        counts: Counter[str] = Counter()
        for text in texts:
            counts.update(tok.casefold() for _, _, tok in tokenize(text))
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        kept = [tok for tok, _ in ranked[: max_size - 3]]
        return cls(tokens=[PAD, UNK, CLS] + kept)


@dataclass
class EncodedText:
    """Model input ids aligned with the source-token character spans."""

    ids: list[int]
    # offsets[i] is the char span feeding position i+1 (position 0 is CLS)
    offsets: list[tuple[int, int]]


def encode(text: str, vocab: Vocab, max_len: int) -> EncodedText:
    toks = tokenize(text)[: max_len - 1]
    return EncodedText(
        ids=[CLS_ID] + [vocab.id_of(tok) for _, _, tok in toks],
        offsets=[(s, e) for s, e, _ in toks])
