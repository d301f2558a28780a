"""Checkpoint loading and prediction export."""

from __future__ import annotations

import json
from pathlib import Path

import torch

from medmine_adapter.data import (
    PredictionRow,
    read_interchange,
    read_offset_sidecar,
    write_prediction_tsv,
)
from medmine_adapter.encoding import Vocab
from medmine_adapter.errors import CheckpointError, FormatError
from medmine_adapter.model import AdapterModel, TinyBackend, TinyConfig, make_backend
from medmine_adapter.train import (
    CHECKPOINT_FORMAT,
    MANIFEST_NAME,
    WEIGHTS_NAME,
    classify_examples,
    tag_examples,
)


def load_checkpoint(checkpoint_dir: str | Path) -> tuple[dict, AdapterModel]:
    cdir = Path(checkpoint_dir)
    manifest_path = cdir / MANIFEST_NAME
    weights_path = cdir / WEIGHTS_NAME
    if not manifest_path.is_file() or not weights_path.is_file():
        raise CheckpointError(f"{cdir} is not a checkpoint directory "
                              f"(needs {MANIFEST_NAME} and {WEIGHTS_NAME})")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"{manifest_path}: invalid JSON: {exc.msg}") from None
    if (not isinstance(manifest, dict)
            or manifest.get("format") != CHECKPOINT_FORMAT
            or "spec" not in manifest or "backend" not in manifest):
        raise CheckpointError(f"{manifest_path}: not a recognized manifest")

    backend_state = manifest["backend"]
    try:
        if backend_state["model"] == "tiny":
            backend = TinyBackend(Vocab(tokens=backend_state["vocab"]),
                                  TinyConfig(**backend_state["config"]))
        else:
            backend = make_backend(backend_state["model"],
                                   backend_state["config"]["max_len"])
        model = AdapterModel(backend)
        model.load_state_dict(torch.load(weights_path, map_location="cpu",
                                         weights_only=True))
    except CheckpointError:
        raise
    except Exception as exc:
        raise CheckpointError(f"{cdir}: cannot rebuild model: {exc}") from None
    model.eval()
    return manifest, model


def _project(entries: list[int], start: int, end: int,
             offsets_path: str, tweet_id: str) -> tuple[int, int]:
    if end > len(entries):
        raise FormatError(offsets_path, None,
                          f"offsets for tweet {tweet_id!r} are shorter than "
                          f"its text")
    return entries[start], entries[end - 1] + 1


def predict(checkpoint_dir: str | Path, test_path: str | Path,
            out_path: str | Path, offsets_path: str | Path | None = None,
            header: str | None = None) -> int:
    """Write evaluator-ready predictions; returns the row count.

    With an offset sidecar, span coordinates are projected back into the
    original pre-cleaning text; the surface column is left empty because
    the original text is not available here. Without one, coordinates
    refer to the interchange text as-is.
    """
    manifest, model = load_checkpoint(checkpoint_dir)
    mode = manifest["spec"]["mode"]
    examples = read_interchange(test_path)
    maps = (read_offset_sidecar(offsets_path)
            if offsets_path is not None else None)

    torch.set_num_threads(1)

    def span_of(ex, start, end):
        if maps is None:
            return PredictionRow(ex.id, start, end, ex.text[start:end])
        entries = maps.get(ex.id)
        if entries is None:
            raise FormatError(str(offsets_path), None,
                              f"no offsets for tweet {ex.id!r}")
        if not entries:
            return None
        ostart, oend = _project(entries, start, end, str(offsets_path), ex.id)
        return PredictionRow(ex.id, ostart, oend, "")

    rows: list[PredictionRow] = []
    if examples:
        if mode == "tweet-classification":
            for ex, label in zip(examples, classify_examples(model, examples)):
                if label == 1 and ex.text:
                    row = span_of(ex, 0, len(ex.text))
                    if row is not None:
                        rows.append(row)
        else:
            for ex, spans in zip(examples, tag_examples(model, examples)):
                for start, end in spans:
                    row = span_of(ex, start, end)
                    if row is not None:
                        rows.append(row)
    write_prediction_tsv(rows, out_path, header)
    return len(rows)
