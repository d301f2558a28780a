"""Encoder backends and task heads.

Two backends sit behind one interface: a small self-contained transformer
trained from scratch (always available, used by the test suite), and a
wrapper around a pretrained checkpoint loaded through the optional
``transformers`` dependency. The training loop and the heads never care
which one they run on.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import torch
from torch import nn

from medmine_adapter.encoding import PAD_ID, Vocab, encode
from medmine_adapter.errors import ResourceError

# token-level tag ids: outside / begin / inside
TAG_O, TAG_B, TAG_I = 0, 1, 2


@dataclass
class TinyConfig:
    vocab_size: int
    dim: int = 64
    layers: int = 2
    heads: int = 4
    feedforward: int = 128
    max_len: int = 64


@dataclass
class Batch:
    """Backend-agnostic encoded batch.

    ``token_slots[i]`` lists (position, char span) pairs for text i: the
    positions in the state tensor that carry real source tokens.
    """

    tensors: dict[str, torch.Tensor]
    token_slots: list[list[tuple[int, tuple[int, int]]]]


class TinyBackend(nn.Module):
    """From-scratch word-level transformer encoder."""

    name = "tiny"

    def __init__(self, vocab: Vocab, config: TinyConfig):
        super().__init__()
        self.vocab = vocab
        self.config = config
        self.dim = config.dim
        self.embed = nn.Embedding(config.vocab_size, config.dim,
                                  padding_idx=PAD_ID)
        self.position = nn.Embedding(config.max_len, config.dim)
        layer = nn.TransformerEncoderLayer(
            d_model=config.dim, nhead=config.heads,
            dim_feedforward=config.feedforward, dropout=0.0,
            batch_first=True)
        # the nested-tensor fast path is nondeterministic across batch
        # shapes and warns; keep the plain kernel
        self.encoder = nn.TransformerEncoder(layer, num_layers=config.layers,
                                             enable_nested_tensor=False)

    def encode_batch(self, texts: list[str]) -> Batch:
        encoded = [encode(t, self.vocab, self.config.max_len) for t in texts]
        width = max(len(e.ids) for e in encoded)
        ids = torch.full((len(texts), width), PAD_ID, dtype=torch.long)
        pad_mask = torch.ones((len(texts), width), dtype=torch.bool)
        slots: list[list[tuple[int, tuple[int, int]]]] = []
        for i, e in enumerate(encoded):
            ids[i, :len(e.ids)] = torch.tensor(e.ids, dtype=torch.long)
            pad_mask[i, :len(e.ids)] = False
            slots.append([(j + 1, span) for j, span in enumerate(e.offsets)])
        return Batch(tensors={"ids": ids, "pad_mask": pad_mask},
                     token_slots=slots)

    def forward(self, tensors: dict[str, torch.Tensor]) -> torch.Tensor:
        ids, pad_mask = tensors["ids"], tensors["pad_mask"]
        positions = torch.arange(ids.shape[1], device=ids.device)
        states = self.embed(ids) + self.position(positions)[None, :, :]
        return self.encoder(states, src_key_padding_mask=pad_mask)

    def manifest_state(self) -> dict:
        return {"model": self.name, "vocab": self.vocab.tokens,
                "config": asdict(self.config)}


class PretrainedBackend(nn.Module):
    """Wrapper over a pretrained encoder from the ``transformers`` hub.

    Untouched by the default test suite: it needs the optional dependency
    and a downloadable checkpoint. Subword offsets come from the fast
    tokenizer, so span decoding works the same as for the tiny backend.
    """

    def __init__(self, identifier: str, max_len: int):
        super().__init__()
        try:
            from transformers import AutoModel, AutoTokenizer
        except ImportError:
            raise ResourceError(
                f"model {identifier!r} needs the 'transformers' package; "
                f"install medmine-adapter[hf]") from None
        try:
            self.tokenizer = AutoTokenizer.from_pretrained(identifier,
                                                           use_fast=True)
            self.inner = AutoModel.from_pretrained(identifier)
        except OSError as exc:
            raise ResourceError(f"cannot load {identifier!r}: {exc}") from None
        self.name = identifier
        self.max_len = max_len
        self.dim = self.inner.config.hidden_size

    def encode_batch(self, texts: list[str]) -> Batch:
        enc = self.tokenizer(texts, padding=True, truncation=True,
                             max_length=self.max_len,
                             return_offsets_mapping=True,
                             return_tensors="pt")
        offsets = enc.pop("offset_mapping")
        specials = [self.tokenizer.get_special_tokens_mask(
            row, already_has_special_tokens=True)
            for row in enc["input_ids"].tolist()]
        slots = []
        for i in range(len(texts)):
            row = []
            for j, (s, e) in enumerate(offsets[i].tolist()):
                if not specials[i][j] and e > s:
                    row.append((j, (s, e)))
            slots.append(row)
        return Batch(tensors=dict(enc), token_slots=slots)

    def forward(self, tensors: dict[str, torch.Tensor]) -> torch.Tensor:
        return self.inner(**tensors).last_hidden_state

    def manifest_state(self) -> dict:
        return {"model": self.name, "vocab": None,
                "config": {"max_len": self.max_len, "dim": self.dim}}


def make_backend(identifier: str, max_len: int,
                 vocab: Vocab | None = None) -> nn.Module:
    if identifier == "tiny":
        if vocab is None:
            raise ValueError("tiny backend needs a vocabulary")
        return TinyBackend(vocab, TinyConfig(vocab_size=len(vocab),
                                             max_len=max_len))
    return PretrainedBackend(identifier, max_len)


class AdapterModel(nn.Module):
    """Backend plus both task heads; the mode picks which head runs."""

    def __init__(self, backend: nn.Module):
        super().__init__()
        self.backend = backend
        self.classify_head = nn.Linear(backend.dim, 2)
        self.tag_head = nn.Linear(backend.dim, 3)

    def classify_logits(self, batch: Batch) -> torch.Tensor:
        states = self.backend(batch.tensors)
        return self.classify_head(states[:, 0])

    def tag_logits(self, batch: Batch) -> torch.Tensor:
        return self.tag_head(self.backend(batch.tensors))
