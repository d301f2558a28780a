"""Pool construction, term merging, and the fixture fetcher."""

import itertools

import pytest
from support import annotated, corpus_of, write_lines

from medmine.corpus import Tweet
from medmine.errors import EmptyPool, FetchError, MalformedRow
from medmine.pool import (
    EntityPool,
    FixtureFetcher,
    PoolEntry,
    TermList,
    build_pool,
    fetch_corpus,
    merge_terms,
    read_pool_tsv,
    write_fetch_report,
    write_pool_tsv,
    write_term_list,
)


def two_corpora():
    c1 = corpus_of("one",
                   annotated("1", "took tylenol", [(5, 12)]),
                   annotated("2", "took Advil", [(5, 10)]))
    c2 = corpus_of("two",
                   annotated("3", "ADVIL again", [(0, 5)]),
                   annotated("4", "some zofran", [(5, 11)]))
    return c1, c2


class TestBuildPool:
    def test_casefold_dedupe_with_sources(self):
        pool = build_pool(list(two_corpora()))
        assert sorted(s.casefold() for s in pool.surfaces()) == [
            "advil", "tylenol", "zofran"]
        advil = next(e for e in pool.entries if e.surface.casefold() == "advil")
        assert advil.surface == "Advil"  # first-seen casing
        assert advil.sources == {"one", "two"}

    def test_empty_pool_error(self):
        with pytest.raises(EmptyPool):
            build_pool([corpus_of("c", annotated("1", "nothing"))])

    def test_repeated_mention_single_entry(self):
        tweets = [annotated(str(i), "took advil", [(5, 10)]) for i in range(5)]
        pool = build_pool([corpus_of("c", *tweets)])
        assert len(pool) == 1

    def test_order_independent_as_set(self):
        corpora = list(two_corpora())
        baseline = None
        for perm in itertools.permutations(corpora):
            pool = build_pool(list(perm))
            view = {(s.casefold(),
                     frozenset(e.sources))
                    for e in pool.entries for s in [e.surface]}
            if baseline is None:
                baseline = view
            assert view == baseline

    def test_whitespace_only_surface_skipped(self):
        c = corpus_of("c", annotated("1", "a   b", [(1, 3)]),
                      annotated("2", "took advil", [(5, 10)]))
        pool = build_pool([c])
        assert pool.surfaces() == ["advil"]


class TestPoolTsv:
    def test_round_trip(self, tmp_path):
        pool = build_pool(list(two_corpora()))
        path = tmp_path / "pool.tsv"
        write_pool_tsv(pool, path, header="# medmine 0 cmd=pool seed=1")
        loaded = read_pool_tsv(path)
        assert loaded.surfaces() == pool.surfaces()
        assert [e.sources for e in loaded.entries] == \
               [e.sources for e in pool.entries]

    def test_escaped_surface(self, tmp_path):
        pool = EntityPool(entries=[PoolEntry("odd\tname", {"c"})])
        path = tmp_path / "pool.tsv"
        write_pool_tsv(pool, path)
        assert read_pool_tsv(path).surfaces() == ["odd\tname"]

    def test_rejects_duplicates_and_empties(self, tmp_path):
        path = tmp_path / "pool.tsv"
        write_lines(path, ["advil\tc", "ADVIL\td"])
        with pytest.raises(MalformedRow):
            read_pool_tsv(path)
        write_lines(path, [" \tc"])
        with pytest.raises(MalformedRow):
            read_pool_tsv(path)
        write_lines(path, ["# only a header"])
        with pytest.raises(EmptyPool):
            read_pool_tsv(path)


class TestMergeTerms:
    def test_union_casefolded_sorted(self, tmp_path):
        pool = EntityPool(entries=[PoolEntry("tylenol", {"c"})])
        curated = tmp_path / "curated.txt"
        write_lines(curated, ["Prenatal Vitamin", "tylenol", "", "# note"])
        terms = merge_terms(pool, [curated])
        assert terms.terms == ["prenatal vitamin", "tylenol"]

    def test_empty_curated_list(self):
        pool = EntityPool(entries=[PoolEntry("Advil", {"c"}),
                                   PoolEntry("tylenol", {"c"})])
        assert merge_terms(pool, []).terms == ["advil", "tylenol"]

    def test_invariant_to_duplication_and_casing(self, tmp_path):
        f1 = tmp_path / "a.txt"
        f2 = tmp_path / "b.txt"
        write_lines(f1, ["Advil", "ZOFRAN"])
        write_lines(f2, ["advil", "zofran", "advil"])
        pool = EntityPool(entries=[PoolEntry("AdViL", {"c"})])
        assert merge_terms(pool, [f1]).terms == merge_terms(pool, [f1, f2]).terms

    def test_merge_at_220_distinct_terms(self, tmp_path):
        # pool of 120 surfaces plus two curated files; overlaps collapse
        # to 220 distinct terms overall
        pool = EntityPool(entries=[PoolEntry(f"drug{i:03d}", {"c"})
                                   for i in range(120)])
        f1 = tmp_path / "otc.txt"
        f2 = tmp_path / "pregnancy.txt"
        write_lines(f1, [f"DRUG{i:03d}" for i in range(100, 170)])
        write_lines(f2, [f"drug{i:03d}" for i in range(150, 220)])
        terms = merge_terms(pool, [f1, f2])
        assert len(terms) == 220
        assert terms.terms == sorted(terms.terms)


def fetch_fixture(tmp_path):
    path = tmp_path / "canned.tsv"
    write_lines(path, [
        "tylenol\tf3\tu3\t\tTylenol helped me sleep",
        "tylenol\tf1\tu1\t\ttook tylenol today",
        "tylenol\tf2\tu2\t\tno mention of it here",
        "advil\tf4\tu4\t\tadvil is fine",
        "advil\tf1\tu1\t\ttook tylenol today plus advil",
        "!error\tzofran",
    ])
    return FixtureFetcher(path)


class TestFixtureFetcher:
    def test_respects_limit(self, tmp_path):
        client = fetch_fixture(tmp_path)
        assert len(client.fetch("tylenol", 2)) == 2
        assert len(client.fetch("tylenol", 10)) == 3

    def test_case_insensitive_term(self, tmp_path):
        client = fetch_fixture(tmp_path)
        assert len(client.fetch("TYLENOL", 10)) == 3

    def test_unknown_term_empty(self, tmp_path):
        assert fetch_fixture(tmp_path).fetch("unknown", 5) == []

    def test_error_term_raises(self, tmp_path):
        with pytest.raises(FetchError):
            fetch_fixture(tmp_path).fetch("zofran", 5)

    def test_malformed_fixture(self, tmp_path):
        path = tmp_path / "bad.tsv"
        write_lines(path, ["term\tid\tonly four\tfields"])
        with pytest.raises(MalformedRow):
            FixtureFetcher(path)


class TestFetchCorpus:
    def test_valid_filter_and_report(self, tmp_path):
        client = fetch_fixture(tmp_path)
        result = fetch_corpus(client, TermList(["tylenol"]), 10)
        # f2 lacks the term and is filtered out
        assert [at.tweet.id for at in result.corpus.tweets] == ["f1", "f3"]
        row = result.report[0]
        assert (row.term, row.requested, row.returned, row.status) == \
               ("tylenol", 10, 2, "ok")

    def test_every_tweet_contains_its_term(self, tmp_path):
        client = fetch_fixture(tmp_path)
        result = fetch_corpus(client, TermList(["advil", "tylenol"]), 10)
        for at in result.corpus.tweets:
            term = at.provenance.split("term=", 1)[1]
            assert term in at.tweet.text.casefold()

    def test_dedupe_by_id_keeps_first_term(self, tmp_path):
        client = fetch_fixture(tmp_path)
        result = fetch_corpus(client, TermList(["advil", "tylenol"]), 10)
        ids = [at.tweet.id for at in result.corpus.tweets]
        assert ids == ["f1", "f4", "f3"]  # advil first (sorted terms)
        f1 = result.corpus.tweets[0]
        assert f1.provenance == "fetch:term=advil"

    def test_failing_term_recorded_and_skipped(self, tmp_path):
        client = fetch_fixture(tmp_path)
        result = fetch_corpus(client, TermList(["tylenol", "zofran"]), 5)
        statuses = {row.term: row.status for row in result.report}
        assert statuses["tylenol"] == "ok"
        assert statuses["zofran"] != "ok"
        assert all("zofran" not in (at.provenance or "")
                   for at in result.corpus.tweets)

    def test_assume_positive_synthesizes_span(self, tmp_path):
        client = fetch_fixture(tmp_path)
        result = fetch_corpus(client, TermList(["tylenol"]), 10,
                              assume_positive=True)
        for at in result.corpus.tweets:
            assert len(at.mentions) == 1
            m = at.mentions[0]
            assert at.tweet.text[m.start:m.end].casefold() == "tylenol"

    def test_thread_count_does_not_change_output(self, tmp_path):
        client = fetch_fixture(tmp_path)
        terms = TermList(["advil", "tylenol", "zofran"])
        serial = fetch_corpus(client, terms, 10)
        threaded = fetch_corpus(client, terms, 10, threads=4)
        assert [(at.tweet.id, at.tweet.text) for at in serial.corpus.tweets] == \
               [(at.tweet.id, at.tweet.text) for at in threaded.corpus.tweets]
        assert serial.report == threaded.report

    def test_report_tsv(self, tmp_path):
        client = fetch_fixture(tmp_path)
        result = fetch_corpus(client, TermList(["tylenol"]), 10)
        path = tmp_path / "report.tsv"
        write_fetch_report(result.report, path, header="# medmine 0 cmd=f seed=1")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("# medmine")
        assert lines[1] == "tylenol\t10\t2\tok"


def test_term_list_file(tmp_path):
    path = tmp_path / "terms.txt"
    write_term_list(TermList(["advil", "tylenol"]), path,
                    header="# medmine 0 cmd=terms seed=1")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines == ["# medmine 0 cmd=terms seed=1", "advil", "tylenol"]
