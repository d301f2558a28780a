"""Provenance headers stamped onto every artifact the CLI writes.

The header is a single comment line recording tool version, subcommand
and seed. Formats whose readers skip leading ``#`` lines carry it in the
file itself; JSON-lines files get it in a ``.prov`` sidecar instead. No
timestamps anywhere: identical inputs and settings must produce
byte-identical artifacts.
"""

from __future__ import annotations

from pathlib import Path

from medmine import __version__


def provenance_line(subcommand: str, seed: int) -> str:
    """The comment line written at the top of each output artifact."""
    return f"# medmine {__version__} cmd={subcommand} seed={seed}"


def sidecar_path(path: str | Path) -> str:
    return str(path) + ".prov"


def write_sidecar(path: str | Path, header: str) -> None:
    with open(sidecar_path(path), "w", encoding="utf-8", newline="") as fh:
        fh.write(header)
        fh.write("\n")


def read_header(path: str | Path) -> str | None:
    """The first line when it is a provenance comment, else None."""
    with open(path, encoding="utf-8", newline="") as fh:
        first = fh.readline().rstrip("\n")
    return first if first.startswith("# medmine ") else None
