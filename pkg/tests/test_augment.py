"""Augmentation strategies: mechanics, determinism, plan execution."""

import random
import string

import pytest
from support import annotated, corpus_of

from medmine.augment import (
    AugmentationPlan,
    PlanStep,
    augment_random_string,
    augment_replace_entity,
    augment_word_drop,
    derive_seed,
    run_plan,
)
from medmine.corpus import Mention
from medmine.errors import EmptyPool, NotPositive
from medmine.pool import EntityPool, PoolEntry


def pool_of(*surfaces: str) -> EntityPool:
    return EntityPool(entries=[PoolEntry(s, {"test"}) for s in surfaces])


class FirstChoiceRng:
    """Stand-in rng whose choices are forced, for mechanics tests."""

    def choice(self, seq):
        return seq[0]

    def randint(self, a, b):
        return a


def residue(at) -> str:
    """Text with all mention spans deleted."""
    out = []
    cursor = 0
    for m in at.mentions:
        out.append(at.tweet.text[cursor:m.start])
        cursor = m.end
    out.append(at.tweet.text[cursor:])
    return "".join(out)


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(42, "t1", "replace", 1) == \
               derive_seed(42, "t1", "replace", 1)

    def test_round_changes_seed(self):
        assert derive_seed(7, "t1", "replace", 1) != \
               derive_seed(7, "t1", "replace", 2)

    def test_tweet_changes_seed(self):
        assert derive_seed(7, "t1", "replace", 1) != \
               derive_seed(7, "t2", "replace", 1)

    def test_strategy_and_global_seed_change_seed(self):
        base = derive_seed(7, "t1", "replace", 1)
        assert base != derive_seed(7, "t1", "drop", 1)
        assert base != derive_seed(8, "t1", "replace", 1)

    def test_no_concatenation_collisions(self):
        # length prefixes keep ("t1","drop1") distinct from ("t1d","rop1")
        assert derive_seed(7, "t1", "drop1", 1) != derive_seed(7, "t1d", "rop1", 1)

    def test_64_bit_range(self):
        rng = random.Random(1)
        for _ in range(200):
            s = derive_seed(rng.randint(0, 2**63), f"id{rng.random()}",
                            "randstr", rng.randint(1, 99))
            assert 0 <= s < 2**64


class TestReplaceEntity:
    def test_single_mention(self):
        t = annotated("t2", "took tylenol today", [(5, 12)])
        out = augment_replace_entity(t, pool_of("benadryl"), FirstChoiceRng())
        assert out.tweet.text == "took benadryl today"
        assert out.mentions == [Mention(5, 13, "benadryl")]
        assert out.tweet.id == "t2#aug-replace1"

    def test_two_mentions_shift_left_to_right(self):
        t = annotated("t1", "tylenol and advil", [(0, 7), (12, 17)])
        out = augment_replace_entity(t, pool_of("zofran"), FirstChoiceRng())
        assert out.tweet.text == "zofran and zofran"
        assert out.mentions == [Mention(0, 6, "zofran"), Mention(11, 17, "zofran")]

    def test_excludes_casefolded_original_when_possible(self):
        t = annotated("t1", "took tylenol", [(5, 12)])
        pool = pool_of("Tylenol", "advil")
        for seed in range(200):
            out = augment_replace_entity(t, pool, random.Random(seed))
            assert out.mentions[0].surface == "advil"

    def test_fallback_when_only_original_available(self):
        t = annotated("t1", "took tylenol", [(5, 12)])
        out = augment_replace_entity(t, pool_of("Tylenol"), random.Random(0))
        assert out.mentions[0].surface == "Tylenol"

    def test_requires_positive_and_pool(self):
        with pytest.raises(NotPositive):
            augment_replace_entity(annotated("t1", "nothing"),
                                   pool_of("advil"), random.Random(0))
        with pytest.raises(EmptyPool):
            augment_replace_entity(annotated("t1", "took advil", [(5, 10)]),
                                   EntityPool(entries=[]), random.Random(0))

    def test_residue_preserved(self):
        rng = random.Random(11)
        pool = pool_of("a", "benadryl", "vitamin d", "x y z")
        t = annotated("t1", "pre advil mid tylenol post", [(4, 9), (14, 21)])
        for _ in range(100):
            out = augment_replace_entity(t, pool, rng)
            assert residue(out) == residue(t)
            for m in out.mentions:
                assert out.tweet.text[m.start:m.end] == m.surface


class TestRandomString:
    def test_surface_shape_over_many_runs(self):
        t = annotated("t1", "took tylenol", [(5, 12)])
        rng = random.Random(3)
        for _ in range(1000):
            out = augment_random_string(t, rng)
            surface = out.mentions[0].surface
            assert 3 <= len(surface) <= 10
            assert all(ch in string.ascii_letters for ch in surface)
            assert out.tweet.text[out.mentions[0].start:out.mentions[0].end] \
                   == surface

    def test_two_mentions_independent(self):
        t = annotated("t1", "tylenol and advil", [(0, 7), (12, 17)])
        out = augment_random_string(t, random.Random(5))
        assert len(out.mentions) == 2
        assert residue(out) == residue(t)
        assert out.tweet.id == "t1#aug-randstr1"

    def test_length_histogram_roughly_uniform(self):
        # chi-square over the 8 possible lengths; 24.32 is the 0.001
        # critical value at 7 degrees of freedom
        t = annotated("t1", "x advil", [(2, 7)])
        rng = random.Random(17)
        counts = {n: 0 for n in range(3, 11)}
        draws = 10_000
        for _ in range(draws):
            out = augment_random_string(t, rng)
            counts[len(out.mentions[0].surface)] += 1
        expected = draws / 8
        chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
        assert chi2 < 24.32, counts

    def test_requires_positive(self):
        with pytest.raises(NotPositive):
            augment_random_string(annotated("t1", "nothing"), random.Random(0))


class TestWordDrop:
    def test_drop_first_word_with_following_gap(self):
        t = annotated("t1", "I took tylenol", [(7, 14)])
        out = augment_word_drop(t, FirstChoiceRng())
        assert out.tweet.text == "took tylenol"
        assert out.mentions == [Mention(5, 12, "tylenol")]
        assert out.tweet.id == "t1#aug-drop1"

    def test_fully_mention_tweet_skipped(self):
        t = annotated("t1", "tylenol", [(0, 7)])
        assert augment_word_drop(t, random.Random(0)) is None

    def test_trailing_word_uses_preceding_gap(self):
        t = annotated("t1", "took tylenol now", [(5, 12)])
        rng = random.Random(0)
        seen = set()
        for seed in range(50):
            out = augment_word_drop(t, random.Random(seed))
            seen.add(out.tweet.text)
        assert "took tylenol" in seen  # dropping "now" eats the gap before it
        assert all(o in {"took tylenol", "tylenol now"} for o in seen)

    def test_punctuation_token_no_gap(self):
        t = annotated("t1", "took tylenol.", [(5, 12)])
        # candidates: "took" and "."; force "." via a seed that picks index 1
        outs = {augment_word_drop(t, random.Random(s)).tweet.text
                for s in range(50)}
        assert outs == {"tylenol.", "took tylenol"}

    def test_mention_never_clipped(self):
        rng = random.Random(23)
        words = ["alpha", "beta", "gamma", "delta", "x", ".", ","]
        for _ in range(500):
            k = rng.randint(1, 6)
            parts = [rng.choice(words) for _ in range(k)]
            drug = "advil"
            pos = rng.randint(0, k)
            parts.insert(pos, drug)
            text = " ".join(parts)
            start = text.index(drug)
            t = annotated("t1", text, [(start, start + len(drug))])
            out = augment_word_drop(t, rng)
            if out is None:
                continue
            assert len(out.mentions) == 1
            m = out.mentions[0]
            assert out.tweet.text[m.start:m.end] == "advil"
            assert len(out.tweet.text) < len(text)

    def test_requires_positive(self):
        with pytest.raises(NotPositive):
            augment_word_drop(annotated("t1", "nothing"), random.Random(0))


def plan_corpus(n_pos=10, n_neg=5):
    tweets = []
    for i in range(n_pos):
        prefix = f"w{i} "
        text = f"{prefix}tylenol after"
        tweets.append(annotated(f"p{i}", text,
                                [(len(prefix), len(prefix) + 7)]))
    for i in range(n_neg):
        tweets.append(annotated(f"n{i}", "nothing here"))
    return corpus_of("c", *tweets)


class TestPlanValidation:
    def test_rounds_must_be_positive(self):
        with pytest.raises(ValueError):
            PlanStep("drop", 0)

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            PlanStep("translate", 1)

    def test_replace_needs_pool(self):
        with pytest.raises(EmptyPool):
            PlanStep("replace", 1)
        with pytest.raises(EmptyPool):
            PlanStep("replace", 1, EntityPool(entries=[]))

    def test_plan_needs_steps(self):
        with pytest.raises(ValueError):
            AugmentationPlan(steps=(), seed=1)


class TestRunPlan:
    def test_cardinality_on_103_positives(self):
        corpus = plan_corpus(n_pos=103, n_neg=7)
        plan = AugmentationPlan(steps=(PlanStep("replace", 3, pool_of("advil")),),
                                seed=42)
        assert len(run_plan(corpus, plan)) == 309

    def test_zero_positives_empty_output(self):
        corpus = corpus_of("c", annotated("n0", "nothing at all"))
        plan = AugmentationPlan(steps=(PlanStep("drop", 4),), seed=1)
        assert len(run_plan(corpus, plan)) == 0

    def test_two_step_plan_without_skips(self):
        corpus = plan_corpus(n_pos=8)
        plan = AugmentationPlan(steps=(PlanStep("replace", 1, pool_of("advil")),
                                       PlanStep("drop", 1)), seed=9)
        out = run_plan(corpus, plan)
        assert len(out) == 16

    def test_round_numbers_accumulate_per_strategy(self):
        corpus = plan_corpus(n_pos=1, n_neg=0)
        plan = AugmentationPlan(steps=(PlanStep("replace", 2, pool_of("advil")),
                                       PlanStep("drop", 1),
                                       PlanStep("replace", 1, pool_of("advil"))),
                                seed=4)
        ids = [at.tweet.id for at in run_plan(corpus, plan)]
        assert ids == ["p0#aug-drop1", "p0#aug-replace1", "p0#aug-replace2",
                       "p0#aug-replace3"]

    def test_outputs_positive_with_same_mention_count(self):
        corpus = plan_corpus()
        plan = AugmentationPlan(steps=(PlanStep("replace", 2, pool_of("a", "b")),
                                       PlanStep("randstr", 1),
                                       PlanStep("drop", 1)), seed=13)
        sources = {at.tweet.id: at for at in corpus.tweets}
        for at in run_plan(corpus, plan):
            source_id = at.tweet.id.split("#aug-", 1)[0]
            assert len(at.mentions) == len(sources[source_id].mentions) >= 1

    def test_provenance_records_inputs(self):
        corpus = plan_corpus(n_pos=1, n_neg=0)
        plan = AugmentationPlan(steps=(PlanStep("drop", 1),), seed=77)
        out = run_plan(corpus, plan)
        assert out.tweets[0].provenance == "aug:drop:round1:src=p0:seed=77"

    def test_deterministic_and_thread_independent(self):
        corpus = plan_corpus(n_pos=30, n_neg=10)
        plan = AugmentationPlan(steps=(PlanStep("replace", 2,
                                                pool_of("advil", "zofran")),
                                       PlanStep("randstr", 1),
                                       PlanStep("drop", 1)), seed=5)

        def snapshot(c):
            return [(at.tweet.id, at.tweet.text, tuple(at.mentions),
                     at.provenance) for at in c.tweets]

        first = snapshot(run_plan(corpus, plan))
        assert snapshot(run_plan(corpus, plan)) == first
        assert snapshot(run_plan(corpus, plan, threads=4)) == first
        assert snapshot(run_plan(corpus, plan, threads=7)) == first

    def test_seed_changes_output(self):
        corpus = plan_corpus(n_pos=10, n_neg=0)
        pool = pool_of("advil", "zofran", "benadryl")
        out_a = run_plan(corpus, AugmentationPlan(
            steps=(PlanStep("replace", 1, pool),), seed=1))
        out_b = run_plan(corpus, AugmentationPlan(
            steps=(PlanStep("replace", 1, pool),), seed=2))
        texts_a = [at.tweet.text for at in out_a.tweets]
        texts_b = [at.tweet.text for at in out_b.tweets]
        assert texts_a != texts_b

    def test_output_sorted_by_source_strategy_round(self):
        corpus = plan_corpus(n_pos=3, n_neg=0)
        plan = AugmentationPlan(steps=(PlanStep("randstr", 2),
                                       PlanStep("drop", 1)), seed=3)
        out = run_plan(corpus, plan)
        keys = []
        for at in out.tweets:
            source_id, tail = at.tweet.id.split("#aug-", 1)
            code = tail.rstrip("0123456789")
            round_no = int(tail[len(code):])
            keys.append((source_id, code, round_no))
        assert keys == sorted(keys)


def test_span_integrity_fuzz():
    rng = random.Random(31)
    pool = pool_of("advil", "vitamin d", "z", "benadryl extra strength")
    strategies = [
        lambda t, r: augment_replace_entity(t, pool, r),
        augment_random_string,
        augment_word_drop,
    ]
    words = ["one", "two", "three", "longword", "a", ".", "!!", "mid"]
    for _ in range(2000):
        k = rng.randint(0, 5)
        parts = [rng.choice(words) for _ in range(k)]
        drug = rng.choice(["advil", "tylenol", "aspirin"])
        parts.insert(rng.randint(0, k), drug)
        text = " ".join(parts)
        start = text.index(drug)
        t = annotated("t", text, [(start, start + len(drug))])
        out = strategies[rng.randrange(3)](t, rng)
        if out is None:
            continue
        for m in out.mentions:
            assert out.tweet.text[m.start:m.end] == m.surface
