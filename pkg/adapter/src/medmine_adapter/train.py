"""Fine-tuning loop producing a self-describing checkpoint directory."""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable

import torch
from torch import nn

from medmine_adapter.data import Example, read_interchange
from medmine_adapter.encoding import Vocab
from medmine_adapter.errors import FormatError
from medmine_adapter.metrics import binary_counts, micro_prf, strict_span_counts
from medmine_adapter.model import AdapterModel, make_backend
from medmine_adapter.tags import assign_bio, decode_bio

MODES = ("tweet-classification", "span-tagging")

MANIFEST_NAME = "manifest.json"
WEIGHTS_NAME = "weights.pt"
CHECKPOINT_FORMAT = "medmine-adapter-checkpoint"


@dataclass(frozen=True)
class TrainSpec:
    model: str
    mode: str
    train_path: str
    val_path: str
    epochs: int = 10
    learning_rate: float = 3e-3
    batch_size: int = 32
    seed: int = 42
    max_len: int = 64

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; "
                             f"expected one of {', '.join(MODES)}")
        if self.epochs < 1 or self.batch_size < 1 or self.max_len < 2:
            raise ValueError("epochs, batch_size, and max_len must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        for path in (self.train_path, self.val_path):
            if not Path(path).is_file():
                raise FormatError(path, None, "no such file")


def _load_examples(path: str, mode: str) -> list[Example]:
    examples = read_interchange(
        path,
        require_label=mode == "tweet-classification",
        require_spans=mode == "span-tagging")
    if not examples:
        raise FormatError(path, None, "no rows to train on")
    return examples


def _classification_loss(model: AdapterModel, batch, examples) -> torch.Tensor:
    logits = model.classify_logits(batch)
    targets = torch.tensor([ex.label for ex in examples], dtype=torch.long)
    return nn.functional.cross_entropy(logits, targets)


def _tagging_loss(model: AdapterModel, batch, examples) -> torch.Tensor:
    logits = model.tag_logits(batch)
    targets = torch.full(logits.shape[:2], -100, dtype=torch.long)
    for i, ex in enumerate(examples):
        for pos, tag in assign_bio(batch.token_slots[i], ex.spans).items():
            targets[i, pos] = tag
    return nn.functional.cross_entropy(logits.reshape(-1, 3),
                                       targets.reshape(-1),
                                       ignore_index=-100)


def _iter_batches(examples: list[Example], order: list[int], size: int):
    for lo in range(0, len(order), size):
        yield [examples[i] for i in order[lo:lo + size]]


def classify_examples(model: AdapterModel, examples: list[Example],
                      batch_size: int = 64) -> list[int]:
    labels: list[int] = []
    with torch.no_grad():
        for chunk in _iter_batches(examples, list(range(len(examples))),
                                   batch_size):
            batch = model.backend.encode_batch([ex.text for ex in chunk])
            labels.extend(model.classify_logits(batch).argmax(dim=1).tolist())
    return labels


def tag_examples(model: AdapterModel, examples: list[Example],
                 batch_size: int = 64) -> list[list[tuple[int, int]]]:
    spans: list[list[tuple[int, int]]] = []
    with torch.no_grad():
        for chunk in _iter_batches(examples, list(range(len(examples))),
                                   batch_size):
            batch = model.backend.encode_batch([ex.text for ex in chunk])
            picks = model.tag_logits(batch).argmax(dim=2)
            for i in range(len(chunk)):
                tags = {pos: int(picks[i, pos])
                        for pos, _ in batch.token_slots[i]}
                spans.append(decode_bio(batch.token_slots[i], tags))
    return spans


def _validation_metrics(model: AdapterModel, mode: str,
                        val: list[Example]) -> tuple[float, float, float]:
    model.eval()
    try:
        if mode == "tweet-classification":
            counts = binary_counts([ex.label for ex in val],
                                   classify_examples(model, val))
        else:
            counts = strict_span_counts(
                [set(ex.spans) for ex in val],
                [set(spans) for spans in tag_examples(model, val)])
    finally:
        model.train()
    return micro_prf(*counts)


def train(spec: TrainSpec, out_dir: str | Path,
          log: Callable[[str], None] | None = None) -> Path:
    """Fine-tune per ``spec`` and write a checkpoint directory.

    The manifest echoes ``spec`` plus everything needed to rebuild the
    model, and records per-epoch validation precision/recall/F1. Output
    bytes depend only on ``spec`` and the input files.
    """
    train_examples = _load_examples(spec.train_path, spec.mode)
    val_examples = _load_examples(spec.val_path, spec.mode)

    # single-threaded math keeps runs bit-reproducible
    torch.set_num_threads(1)
    torch.manual_seed(spec.seed)

    vocab = None
    if spec.model == "tiny":
        vocab = Vocab.build([ex.text for ex in train_examples])
    model = AdapterModel(make_backend(spec.model, spec.max_len, vocab))
    optimizer = torch.optim.Adam(model.parameters(), lr=spec.learning_rate)
    loss_fn = (_classification_loss if spec.mode == "tweet-classification"
               else _tagging_loss)

    rng = random.Random(spec.seed)
    order = list(range(len(train_examples)))
    history = []
    model.train()
    for epoch in range(1, spec.epochs + 1):
        rng.shuffle(order)
        for chunk in _iter_batches(train_examples, order, spec.batch_size):
            batch = model.backend.encode_batch([ex.text for ex in chunk])
            optimizer.zero_grad()
            loss = loss_fn(model, batch, chunk)
            loss.backward()
            optimizer.step()
        precision, recall, f1 = _validation_metrics(model, spec.mode,
                                                    val_examples)
        history.append({"epoch": epoch, "val_precision": precision,
                        "val_recall": recall, "val_f1": f1})
        if log is not None:
            log(f"epoch {epoch}: val_precision={precision:.4f} "
                f"val_recall={recall:.4f} val_f1={f1:.4f}")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {
        "format": CHECKPOINT_FORMAT,
        "spec": asdict(spec),
        "backend": model.backend.manifest_state(),
        "labels": ["O", "B", "I"],
        "history": history,
    }
    (out / MANIFEST_NAME).write_text(
        json.dumps(manifest, sort_keys=True, indent=2, ensure_ascii=False)
        + "\n", encoding="utf-8")
    model.eval()
    torch.save(model.state_dict(), out / WEIGHTS_NAME)
    return out
