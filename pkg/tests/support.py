"""Shared fixture builders for the test suite."""

from __future__ import annotations

from medmine.corpus import AnnotatedTweet, Corpus, Mention, Tweet


def annotated(tid: str, text: str, spans: list[tuple[int, int]] | None = None,
              **tweet_fields) -> AnnotatedTweet:
    """Build an AnnotatedTweet with surfaces cut from the text."""
    mentions = [Mention(s, e, text[s:e]) for s, e in (spans or [])]
    return AnnotatedTweet(tweet=Tweet(id=tid, text=text, **tweet_fields),
                          mentions=mentions)


def corpus_of(name: str, *tweets: AnnotatedTweet) -> Corpus:
    return Corpus(name=name, tweets=list(tweets))


def write_lines(path, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")
