"""Command-line entry point.

One executable, `medmine`, with a subcommand per pipeline stage plus a
`pipeline` runner that chains them from a declarative recipe file. Exit
codes: 0 success, 1 validation error in input data (messages name file
and line where known), 2 usage or configuration error.

Every artifact written here starts with a provenance comment line (or
carries a ``.prov`` sidecar when the format has no comments) recording
tool version, subcommand and seed. Outputs contain no timestamps, so
identical inputs and settings give byte-identical files.

Seed precedence: ``--seed`` flag, then config/recipe file, then the
``MEDMINE_SEED`` environment variable, then 42.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from medmine import __version__
from medmine.augment import STRATEGY_CODES, AugmentationPlan, PlanStep, run_plan
from medmine.baseline import Gazetteer
from medmine.corpus import (
    AnnotatedTweet,
    Corpus,
    Mention,
    Tweet,
    corpus_stats,
    load_corpus,
    read_interchange,
    write_corpus_tsv,
    write_interchange,
)
from medmine.datamix import DEDUPE_POLICIES, MixRecipe, merge, split
from medmine.errors import ConfigError, MedmineError
from medmine.evaluate import evaluate, read_prediction_tsv, write_prediction_tsv
from medmine.normalize import clean_text, project_to_cleaned, write_offset_sidecar
from medmine.pool import (
    EntityPool,
    FixtureFetcher,
    TermList,
    build_pool,
    fetch_corpus,
    merge_terms,
    read_pool_tsv,
    write_fetch_report,
    write_pool_tsv,
    write_term_list,
)
from medmine.provenance import provenance_line, write_sidecar

# Final-run augmentation plans: (strategy, rounds) pairs. Which corpora
# feed the pool and which get augmented stays caller-chosen.
PRESETS: dict[str, tuple[tuple[str, int], ...]] = {
    "submission1": (("replace", 1),),
    "submission2": (("replace", 10), ("drop", 1)),
    "submission3": (("replace", 3), ("drop", 1)),
}

DEFAULT_SEED = 42


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _ratio(value: str) -> tuple[int, int]:
    parts = value.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("ratio must look like 8:2")
    try:
        train_parts, val_parts = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError("ratio parts must be integers") from None
    if train_parts <= 0 or val_parts <= 0:
        raise argparse.ArgumentTypeError("ratio parts must be positive")
    return train_parts, val_parts


def _read_config(path: str, allowed: frozenset[str],
                 repeatable: frozenset[str] = frozenset()
                 ) -> dict[str, list[str]]:
    """Parse a ``key=value`` file; unknown or repeated-scalar keys rejected."""
    values: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{line_no}: expected key=value")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in allowed:
                raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
            if key in values and key not in repeatable:
                raise ConfigError(f"{path}:{line_no}: duplicate key {key!r}")
            values.setdefault(key, []).append(value)
    return values


def _config_int(values: dict[str, list[str]], key: str, path: str) -> int | None:
    if key not in values:
        return None
    raw = values[key][0]
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{path}: key {key!r} must be an integer, got {raw!r}") \
            from None


def _resolve_seed(cli_seed: int | None, config_seed: int | None) -> int:
    if cli_seed is not None:
        return cli_seed
    if config_seed is not None:
        return config_seed
    env = os.environ.get("MEDMINE_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"MEDMINE_SEED must be an integer, got {env!r}") \
                from None
    return DEFAULT_SEED


def _seed_from_args(args: argparse.Namespace) -> int:
    config_seed = None
    if getattr(args, "config", None):
        values = _read_config(args.config, frozenset({"seed", "threads"}))
        config_seed = _config_int(values, "seed", args.config)
        if getattr(args, "threads", None) is None:
            args.threads = _config_int(values, "threads", args.config)
    return _resolve_seed(getattr(args, "seed", None), config_seed)


def _threads(args: argparse.Namespace) -> int:
    return getattr(args, "threads", None) or 1


def _load_single(tweets_path: str, annotations: str | None,
                 name: str | None) -> Corpus:
    if tweets_path.endswith(".jsonl"):
        if annotations:
            raise ConfigError("--annotations does not apply to interchange input")
        return read_interchange(tweets_path, name=name)
    return load_corpus(tweets_path, annotations, name=name)


def _parse_named_input(value: str) -> tuple[str, str, str | None]:
    name, sep, rest = value.partition("=")
    if not sep or not name or not rest:
        raise ConfigError(f"input must look like NAME=TWEETS[,ANNOTATIONS]: "
                          f"{value!r}")
    tweets_path, _, ann_path = rest.partition(",")
    return name, tweets_path, ann_path or None


def _load_named_inputs(specs: list[str]) -> list[Corpus]:
    corpora: list[Corpus] = []
    seen: set[str] = set()
    for spec in specs:
        name, tweets_path, ann_path = _parse_named_input(spec)
        if name in seen:
            raise ConfigError(f"duplicate input name {name!r}")
        seen.add(name)
        corpora.append(_load_single(tweets_path, ann_path, name))
    return corpora


def _write_corpus(corpus: Corpus, out: str, out_annotations: str | None,
                  header: str) -> None:
    if out.endswith(".jsonl"):
        write_interchange(corpus, out, header=header)
    else:
        write_corpus_tsv(corpus, out, out_annotations, header=header)


def _clean_corpus(corpus: Corpus, name: str | None = None
                  ) -> tuple[Corpus, list]:
    """Clean every tweet and project its mentions into cleaned coordinates.

    Mentions whose characters are all removed by cleaning are dropped;
    partial survivors keep the surviving slice as their surface.
    """
    cleaned_tweets = []
    annotated: list[AnnotatedTweet] = []
    for at in corpus.tweets:
        ct = clean_text(at.tweet.text, source_id=at.tweet.id)
        cleaned_tweets.append(ct)
        mentions: list[Mention] = []
        for m in at.mentions:
            proj = project_to_cleaned(ct.map, m.start, m.end)
            if proj.tag == "empty":
                continue
            mentions.append(Mention(proj.start, proj.end,
                                    ct.cleaned_text[proj.start:proj.end]))
        tweet = Tweet(id=at.tweet.id, user_id=at.tweet.user_id,
                      created_at=at.tweet.created_at, text=ct.cleaned_text)
        annotated.append(AnnotatedTweet(tweet=tweet, mentions=mentions,
                                        provenance=at.provenance))
    return Corpus(name=name or corpus.name, tweets=annotated), cleaned_tweets


def _read_terms_file(path: str) -> list[str]:
    terms: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            term = line.strip()
            if term and not term.startswith("#"):
                terms.append(term)
    return terms


def _plan_steps(args: argparse.Namespace) -> tuple[tuple[str, int], ...]:
    if getattr(args, "preset", None):
        return PRESETS[args.preset]
    strategies: list[str] = args.strategy or []
    if not strategies:
        raise ConfigError("no augmentation steps: pass --strategy or --preset")
    rounds: list[int] = args.rounds or [1] * len(strategies)
    if len(rounds) != len(strategies):
        raise ConfigError(f"{len(strategies)} --strategy flags need "
                          f"{len(strategies)} --rounds flags, got {len(rounds)}")
    return tuple(zip(strategies, rounds))


def _build_plan(steps: tuple[tuple[str, int], ...], seed: int,
                pool: EntityPool | None) -> AugmentationPlan:
    plan_steps = tuple(
        PlanStep(strategy=code, rounds=rounds,
                 pool=pool if code == "replace" else None)
        for code, rounds in steps)
    return AugmentationPlan(steps=plan_steps, seed=seed)


def cmd_ingest(args: argparse.Namespace) -> int:
    seed = _seed_from_args(args)
    corpus = _load_single(args.input, args.annotations, args.name)
    header = provenance_line("ingest", seed)
    _write_corpus(corpus, args.out, args.out_annotations, header)
    print(f"{corpus.name}: {len(corpus)} tweets -> {args.out}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    corpus = _load_single(args.input, args.annotations, args.name)
    stats = corpus_stats(corpus)
    print(f"corpus\t{corpus.name}")
    print(f"total\t{stats.total}")
    print(f"positive\t{stats.positive}")
    print(f"negative\t{stats.negative}")
    print(f"multi_mention\t{stats.multi_mention}")
    print(f"positive_pct\t{stats.positive_pct_display()}")
    return 0


def cmd_normalize(args: argparse.Namespace) -> int:
    seed = _seed_from_args(args)
    corpus = _load_single(args.input, args.annotations, args.name)
    header = provenance_line("normalize", seed)
    cleaned_corpus, cleaned_tweets = _clean_corpus(corpus)
    _write_corpus(cleaned_corpus, args.out, args.out_annotations, header)
    offsets_path = args.out_offsets or args.out + ".offsets"
    write_offset_sidecar(cleaned_tweets, offsets_path, header=header)
    print(f"{corpus.name}: {len(corpus)} tweets cleaned -> {args.out}")
    return 0


def cmd_pool(args: argparse.Namespace) -> int:
    seed = _seed_from_args(args)
    corpora = _load_named_inputs(args.input)
    pool = build_pool(corpora)
    write_pool_tsv(pool, args.out, header=provenance_line("pool", seed))
    print(f"pool: {len(pool)} surfaces from {len(corpora)} corpora -> {args.out}")
    return 0


def cmd_terms(args: argparse.Namespace) -> int:
    seed = _seed_from_args(args)
    pool = read_pool_tsv(args.pool) if args.pool else None
    if pool is None and not args.curated:
        raise ConfigError("nothing to merge: pass --pool and/or --curated")
    terms = merge_terms(pool, list(args.curated or []))
    write_term_list(terms, args.out, header=provenance_line("terms", seed))
    print(f"terms: {len(terms)} -> {args.out}")
    return 0


def cmd_fetch(args: argparse.Namespace) -> int:
    seed = _seed_from_args(args)
    term_strings: list[str] = []
    if args.terms:
        term_strings.extend(_read_terms_file(args.terms))
    if args.pool:
        term_strings.extend(read_pool_tsv(args.pool).surfaces())
    if not term_strings:
        raise ConfigError("no search terms: pass --terms and/or --pool")
    terms = TermList(terms=sorted({t.casefold() for t in term_strings}))
    client = FixtureFetcher(args.fixture)
    result = fetch_corpus(client, terms, args.limit, name=args.name or "fetched",
                          assume_positive=args.assume_positive_on_term_match,
                          threads=_threads(args))
    header = provenance_line("fetch", seed)
    _write_corpus(result.corpus, args.out, args.out_annotations, header)
    if args.report:
        write_fetch_report(result.report, args.report, header=header)
    print(f"fetched {len(result.corpus)} tweets for {len(terms)} terms "
          f"-> {args.out}")
    return 0


def cmd_augment(args: argparse.Namespace) -> int:
    seed = _seed_from_args(args)
    corpora = _load_named_inputs(args.input)
    by_name = {c.name: c for c in corpora}

    pool: EntityPool | None = None
    if args.pool:
        pool = read_pool_tsv(args.pool)
    else:
        pool_names = (args.pool_from.split(",") if args.pool_from
                      else list(by_name))
        missing = [n for n in pool_names if n not in by_name]
        if missing:
            raise ConfigError(f"--pool-from names unknown inputs: "
                              f"{', '.join(missing)}")
        sources = [by_name[n] for n in pool_names]
        if any(code == "replace" for code, _ in _plan_steps(args)):
            pool = build_pool(sources)

    plan = _build_plan(_plan_steps(args), seed, pool)

    target_names = args.targets.split(",") if args.targets else list(by_name)
    missing = [n for n in target_names if n not in by_name]
    if missing:
        raise ConfigError(f"--targets names unknown inputs: {', '.join(missing)}")

    augmented: list[AnnotatedTweet] = []
    for target in target_names:
        out = run_plan(by_name[target], plan, threads=_threads(args))
        augmented.extend(out.tweets)
    combined = Corpus(name=args.name or "augmented", tweets=augmented)
    header = provenance_line("augment", seed)
    _write_corpus(combined, args.out, args.out_annotations, header)
    print(f"augmented: {len(combined)} tweets -> {args.out}")
    return 0


def cmd_mix(args: argparse.Namespace) -> int:
    seed = _seed_from_args(args)
    corpora = _load_named_inputs(args.input)
    recipe = MixRecipe(inputs=tuple(corpora), dedupe=args.dedupe,
                       split_ratio=args.ratio,
                       stratify=not args.no_stratify, seed=seed)
    merged = merge(recipe, name=args.name)
    train, val = split(merged, recipe.split_ratio, recipe.stratify, seed)
    header = provenance_line("mix", seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for part in (train, val):
        base = out_dir / part.name
        write_corpus_tsv(part, f"{base}.tsv", f"{base}.ann.tsv", header=header)
        write_interchange(part, f"{base}.jsonl", header=header)
    print(f"mix: {len(merged)} merged -> train {len(train)} / val {len(val)} "
          f"in {out_dir}")
    return 0


def cmd_baseline(args: argparse.Namespace) -> int:
    seed = _seed_from_args(args)
    corpus = _load_single(args.input, args.annotations, args.name)
    gazetteer = Gazetteer.from_pool(read_pool_tsv(args.pool))
    predictions = gazetteer.predict(corpus)
    write_prediction_tsv(predictions, args.out,
                         header=provenance_line("baseline", seed))
    total = sum(len(spans) for spans in predictions.spans.values())
    print(f"baseline: {total} predicted spans -> {args.out}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    gold = _load_single(args.gold, args.gold_annotations, name="gold")
    predictions = read_prediction_tsv(args.pred)
    report = evaluate(gold, predictions)
    output = report.to_record() if args.format == "record" else report.to_text()
    print(output)
    if args.out:
        seed = _seed_from_args(args)
        header = provenance_line("eval", seed)
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.to_record())
            fh.write("\n")
        write_sidecar(args.out, header)
    return 0


RECIPE_KEYS = frozenset({"seed", "threads", "input", "preset", "strategy",
                         "pool_from", "augment", "dedupe", "ratio",
                         "stratify", "out_dir", "name"})
RECIPE_REPEATABLE = frozenset({"input", "strategy"})


def cmd_pipeline(args: argparse.Namespace) -> int:
    values = _read_config(args.recipe, RECIPE_KEYS, RECIPE_REPEATABLE)
    rpath = args.recipe

    seed = _resolve_seed(args.seed, _config_int(values, "seed", rpath))
    threads = args.threads or _config_int(values, "threads", rpath) or 1
    if "input" not in values:
        raise ConfigError(f"{rpath}: recipe needs at least one input= line")
    if "out_dir" not in values:
        raise ConfigError(f"{rpath}: recipe needs an out_dir= line")

    corpora = _load_named_inputs(values["input"])
    by_name = {c.name: c for c in corpora}

    if "preset" in values:
        preset = values["preset"][0]
        if preset not in PRESETS:
            raise ConfigError(f"{rpath}: unknown preset {preset!r}")
        steps = PRESETS[preset]
    elif "strategy" in values:
        steps_list: list[tuple[str, int]] = []
        for raw in values["strategy"]:
            code, _, rounds_raw = raw.partition(":")
            if code not in STRATEGY_CODES:
                raise ConfigError(f"{rpath}: unknown strategy {code!r}")
            try:
                rounds = int(rounds_raw) if rounds_raw else 1
            except ValueError:
                raise ConfigError(f"{rpath}: bad rounds in {raw!r}") from None
            if rounds < 1:
                raise ConfigError(f"{rpath}: rounds must be >= 1 in {raw!r}")
            steps_list.append((code, rounds))
        steps = tuple(steps_list)
    else:
        raise ConfigError(f"{rpath}: recipe needs preset= or strategy= lines")

    dedupe = values.get("dedupe", ["id"])[0]
    if dedupe not in DEDUPE_POLICIES:
        raise ConfigError(f"{rpath}: unknown dedupe policy {dedupe!r}")
    try:
        ratio = _ratio(values.get("ratio", ["8:2"])[0])
    except argparse.ArgumentTypeError as exc:
        raise ConfigError(f"{rpath}: {exc}") from None
    stratify_raw = values.get("stratify", ["true"])[0].lower()
    if stratify_raw not in ("true", "false"):
        raise ConfigError(f"{rpath}: stratify must be true or false")
    stratify = stratify_raw == "true"
    mix_name = values.get("name", ["mixed"])[0]

    def resolve_names(key: str) -> list[str]:
        if key not in values:
            return list(by_name)
        names = [n.strip() for n in values[key][0].split(",") if n.strip()]
        missing = [n for n in names if n not in by_name]
        if missing:
            raise ConfigError(f"{rpath}: {key}= names unknown inputs: "
                              f"{', '.join(missing)}")
        return names

    pool_names = resolve_names("pool_from")
    target_names = resolve_names("augment")

    out_dir = Path(values["out_dir"][0])
    out_dir.mkdir(parents=True, exist_ok=True)
    header = provenance_line("pipeline", seed)

    for corpus in corpora:
        write_interchange(corpus, out_dir / f"ingested-{corpus.name}.jsonl",
                          header=header)

    cleaned: dict[str, Corpus] = {}
    for corpus in corpora:
        cc, cleaned_tweets = _clean_corpus(corpus)
        base = out_dir / f"cleaned-{corpus.name}"
        write_corpus_tsv(cc, f"{base}.tsv", f"{base}.ann.tsv", header=header)
        write_offset_sidecar(cleaned_tweets, f"{base}.offsets", header=header)
        cleaned[corpus.name] = cc

    pool: EntityPool | None = None
    if any(code == "replace" for code, _ in steps):
        pool = build_pool([cleaned[n] for n in pool_names])
        write_pool_tsv(pool, out_dir / "pool.tsv", header=header)

    plan = _build_plan(steps, seed, pool)
    augmented: list[Corpus] = []
    for target in target_names:
        aug = run_plan(cleaned[target], plan, threads=threads)
        base = out_dir / f"augmented-{target}"
        write_corpus_tsv(aug, f"{base}.tsv", f"{base}.ann.tsv", header=header)
        augmented.append(aug)

    mix_inputs = tuple(cleaned[c.name] for c in corpora) + tuple(augmented)
    recipe = MixRecipe(inputs=mix_inputs, dedupe=dedupe, split_ratio=ratio,
                       stratify=stratify, seed=seed)
    merged = merge(recipe, name=mix_name)
    train, val = split(merged, ratio, stratify, seed)
    for part in (train, val):
        base = out_dir / part.name
        write_corpus_tsv(part, f"{base}.tsv", f"{base}.ann.tsv", header=header)
        write_interchange(part, f"{base}.jsonl", header=header)

    if pool is None:
        pool = build_pool([cleaned[n] for n in pool_names])
        write_pool_tsv(pool, out_dir / "pool.tsv", header=header)
    gazetteer = Gazetteer.from_pool(pool)
    predictions = gazetteer.predict(val)
    write_prediction_tsv(predictions, out_dir / "predictions.tsv", header=header)

    report = evaluate(val, predictions)
    eval_path = out_dir / "eval.json"
    with open(eval_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(report.to_record())
        fh.write("\n")
    write_sidecar(eval_path, header)
    print(report.to_text())
    print(f"pipeline: {len(merged)} tweets mixed, artifacts in {out_dir}")
    return 0


def _add_seed_config(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=None,
                     help="rng seed (default: config, MEDMINE_SEED, then 42)")
    sub.add_argument("--config", default=None,
                     help="key=value file with keys: seed, threads")
    sub.add_argument("--threads", type=_positive_int, default=None,
                     help="worker thread cap; never changes outputs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medmine",
        description="Deterministic corpus tooling for medication-mention "
                    "detection in tweets.")
    parser.add_argument("--version", action="version",
                        version=f"medmine {__version__}")
    subs = parser.add_subparsers(dest="cmd", required=True)

    p = subs.add_parser("ingest", help="validate a corpus and convert formats")
    p.add_argument("--input", required=True, help="tweet TSV or .jsonl file")
    p.add_argument("--annotations", default=None, help="annotation TSV")
    p.add_argument("--name", default=None, help="corpus name (default: stem)")
    p.add_argument("--out", required=True, help="output .tsv or .jsonl")
    p.add_argument("--out-annotations", default=None,
                   help="annotation TSV to write alongside a .tsv output")
    _add_seed_config(p)
    p.set_defaults(func=cmd_ingest)

    p = subs.add_parser("stats", help="print corpus counts")
    p.add_argument("--input", required=True)
    p.add_argument("--annotations", default=None)
    p.add_argument("--name", default=None)
    p.set_defaults(func=cmd_stats)

    p = subs.add_parser("normalize",
                        help="clean text, keeping an offset map sidecar")
    p.add_argument("--input", required=True)
    p.add_argument("--annotations", default=None)
    p.add_argument("--name", default=None)
    p.add_argument("--out", required=True, help="cleaned corpus .tsv or .jsonl")
    p.add_argument("--out-annotations", default=None,
                   help="projected annotations TSV")
    p.add_argument("--out-offsets", default=None,
                   help="offset sidecar path (default: OUT.offsets)")
    _add_seed_config(p)
    p.set_defaults(func=cmd_normalize)

    p = subs.add_parser("pool", help="collect mention surfaces from corpora")
    p.add_argument("--input", action="append", required=True,
                   metavar="NAME=TWEETS[,ANNOTATIONS]")
    p.add_argument("--out", required=True, help="pool TSV")
    _add_seed_config(p)
    p.set_defaults(func=cmd_pool)

    p = subs.add_parser("terms", help="merge pool and curated term lists")
    p.add_argument("--pool", default=None, help="pool TSV")
    p.add_argument("--curated", action="append", default=None,
                   help="curated term file, one term per line")
    p.add_argument("--out", required=True)
    _add_seed_config(p)
    p.set_defaults(func=cmd_terms)

    p = subs.add_parser("fetch", help="replay canned tweets for search terms")
    p.add_argument("--fixture", required=True,
                   help="fixture TSV backing the offline fetcher")
    p.add_argument("--terms", default=None, help="term file, one per line")
    p.add_argument("--pool", default=None, help="pool TSV as term source")
    p.add_argument("--limit", type=_positive_int, default=100,
                   help="max tweets per term")
    p.add_argument("--assume-positive-on-term-match", action="store_true",
                   help="annotate each tweet at its term's first occurrence")
    p.add_argument("--name", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--out-annotations", default=None)
    p.add_argument("--report", default=None, help="per-term report TSV")
    _add_seed_config(p)
    p.set_defaults(func=cmd_fetch)

    p = subs.add_parser("augment", help="generate augmented positive tweets")
    p.add_argument("--input", action="append", required=True,
                   metavar="NAME=TWEETS[,ANNOTATIONS]")
    p.add_argument("--strategy", action="append", choices=STRATEGY_CODES,
                   help="augmentation step; repeat for multi-step plans")
    p.add_argument("--rounds", action="append", type=_positive_int,
                   help="rounds for the matching --strategy flag")
    p.add_argument("--preset", choices=sorted(PRESETS),
                   help="predefined step plan (overrides --strategy)")
    p.add_argument("--pool", default=None, help="replacement pool TSV")
    p.add_argument("--pool-from", default=None,
                   help="comma-separated input names to build the pool from")
    p.add_argument("--targets", default=None,
                   help="comma-separated input names to augment (default: all)")
    p.add_argument("--name", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--out-annotations", default=None)
    _add_seed_config(p)
    p.set_defaults(func=cmd_augment)

    p = subs.add_parser("mix", help="merge corpora and emit a train/val split")
    p.add_argument("--input", action="append", required=True,
                   metavar="NAME=TWEETS[,ANNOTATIONS]")
    p.add_argument("--dedupe", choices=DEDUPE_POLICIES, default="id")
    p.add_argument("--ratio", type=_ratio, default=(8, 2), metavar="T:V")
    p.add_argument("--no-stratify", action="store_true")
    p.add_argument("--name", default="mixed")
    p.add_argument("--out-dir", required=True)
    _add_seed_config(p)
    p.set_defaults(func=cmd_mix)

    p = subs.add_parser("baseline", help="dictionary span predictions")
    p.add_argument("--pool", required=True, help="pool TSV")
    p.add_argument("--input", required=True)
    p.add_argument("--annotations", default=None)
    p.add_argument("--name", default=None)
    p.add_argument("--out", required=True, help="prediction TSV")
    _add_seed_config(p)
    p.set_defaults(func=cmd_baseline)

    p = subs.add_parser("eval", help="score predictions against gold")
    p.add_argument("--gold", required=True)
    p.add_argument("--gold-annotations", default=None)
    p.add_argument("--pred", required=True, help="prediction TSV")
    p.add_argument("--format", choices=("text", "record"), default="text")
    p.add_argument("--out", default=None, help="write the record to a file")
    _add_seed_config(p)
    p.set_defaults(func=cmd_eval)

    p = subs.add_parser("pipeline", help="run a full recipe end to end")
    p.add_argument("--recipe", required=True,
                   help="key=value recipe file; keys: " +
                        ", ".join(sorted(RECIPE_KEYS)))
    _add_seed_config(p)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"medmine: {exc}", file=sys.stderr)
        return 2
    except MedmineError as exc:
        print(f"medmine: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        name = exc.filename if exc.filename else ""
        print(f"medmine: {name}: {exc.strerror}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
