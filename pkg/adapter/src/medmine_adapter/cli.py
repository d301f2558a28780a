"""Command-line entry points: train and predict."""

from __future__ import annotations

import argparse
import sys

from medmine_adapter import __version__
from medmine_adapter.errors import AdapterError
from medmine_adapter.predict import predict
from medmine_adapter.train import MODES, TrainSpec, train


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return number


def cmd_train(args: argparse.Namespace) -> int:
    spec = TrainSpec(model=args.model, mode=args.mode,
                     train_path=args.train, val_path=args.val,
                     epochs=args.epochs, learning_rate=args.learning_rate,
                     batch_size=args.batch_size, seed=args.seed,
                     max_len=args.max_len)
    out = train(spec, args.out_dir, log=print)
    print(f"checkpoint -> {out}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    header = f"# medmine-adapter {__version__} cmd=predict"
    count = predict(args.checkpoint, args.test, args.out,
                    offsets_path=args.offsets, header=header)
    print(f"predictions: {count} rows -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medmine-adapter",
        description="Fine-tune an encoder on interchange files and emit "
                    "prediction TSVs.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("train", help="fine-tune and write a checkpoint")
    p.add_argument("--model", default="tiny",
                   help="'tiny' or a pretrained encoder identifier")
    p.add_argument("--mode", required=True, choices=MODES)
    p.add_argument("--train", required=True, help="training interchange file")
    p.add_argument("--val", required=True, help="validation interchange file")
    p.add_argument("--out-dir", required=True, help="checkpoint directory")
    p.add_argument("--epochs", type=_positive_int, default=10)
    p.add_argument("--learning-rate", type=float, default=3e-3)
    p.add_argument("--batch-size", type=_positive_int, default=32)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-len", type=_positive_int, default=64)
    p.set_defaults(func=cmd_train)

    p = subs.add_parser("predict", help="emit predictions from a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--test", required=True, help="test interchange file")
    p.add_argument("--out", required=True, help="prediction TSV")
    p.add_argument("--offsets", default=None,
                   help="offset sidecar for projecting spans back to the "
                        "original text")
    p.set_defaults(func=cmd_predict)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"medmine-adapter: {exc}", file=sys.stderr)
        return 2
    except AdapterError as exc:
        print(f"medmine-adapter: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        name = exc.filename if exc.filename else ""
        print(f"medmine-adapter: {name}: {exc.strerror}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
