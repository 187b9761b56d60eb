"""The key-concept funnel: extraction, noise rules, grouping, ranking."""

import math

import numpy as np
import pytest

from convomine.config import ConceptsConfig
from convomine.concepts import (
    CorpusStats,
    Occurrence,
    PhraseCandidate,
    PhraseGroup,
    build_corpus_stats,
    collect_ner_strings,
    detect_conversational_stopwords,
    extract_phrases,
    normalize,
    rank,
    remove_noise,
)
from convomine.corpus import EmbeddingTable, Transcript

from conftest import CANCEL_RESERVATION, make_sentence, make_transcript


def candidate(text, lemma_key=None, pos=None, occurrences=None):
    tokens = tuple(text.split())
    return PhraseCandidate(
        tokens=tokens,
        lemma_key=lemma_key or text,
        pos_pattern=tuple(pos or ["NOUN"] * len(tokens)),
        occurrences=occurrences or [Occurrence(0, 0, False)],
    )


def stats_for(candidates, n_documents=10, df=1, conversational=()):
    phrase_df = {}
    token_df = {}
    for cand in candidates:
        phrase_df[cand.text] = df
        for tok in cand.tokens:
            token_df[tok] = df
    return CorpusStats(
        n_documents=n_documents,
        phrase_df=phrase_df,
        token_df=token_df,
        conversational_stopwords=frozenset(conversational),
    )


BIG_VOCAB = frozenset(
    "the a i want to cancel reservation hotel room deluxe loyalty point "
    "points billing invoice refund charge gon na like booking".split()
)


class TestExtractPhrases:
    def test_six_token_sentence_yields_twenty(self):
        transcript = Transcript(
            id="t", sentences=[make_sentence(0, CANCEL_RESERVATION)]
        )
        candidates = extract_phrases(transcript, None)
        # exhaustive enumeration over 6 tokens: 6+5+4+3+2 n-grams for n=1..5
        assert sum(len(c.occurrences) for c in candidates) == 20
        assert len(candidates) == 20  # all n-grams distinct here
        assert {c.n for c in candidates} == {1, 2, 3, 4, 5}

    def test_non_alphabetic_token_excluded(self):
        transcript = Transcript(id="t", sentences=[make_sentence(0, [
            "i|i|PRON|nsubj|1",
            "can't|can't|VERB|root|1",
            "go|=|VERB|xcomp|1",
        ])])
        candidates = extract_phrases(transcript, None)
        texts = {c.text for c in candidates}
        assert texts == {"i", "go"}

    def test_no_candidate_crosses_sentence_boundary(self):
        transcript = make_transcript("t", [
            ["alpha|=|NOUN|root|0", "beta|=|NOUN|flat|0"],
            ["gamma|=|NOUN|root|0", "delta|=|NOUN|flat|0"],
        ])
        texts = {c.text for c in extract_phrases(transcript, None)}
        assert "beta gamma" not in texts
        assert texts == {"alpha", "beta", "gamma", "delta",
                         "alpha beta", "gamma delta"}

    def test_casual_occurrences_flagged_and_not_counted(self):
        transcript = make_transcript("t", [
            ["hello|=|INTJ|root|0"],
            ["hello|=|INTJ|root|0"],
        ])
        candidates = extract_phrases(
            transcript, None, casual_flags=[True, False]
        )
        (cand,) = candidates
        assert len(cand.occurrences) == 2
        assert cand.frequency == 1
        assert [o.casual for o in cand.occurrences] == [True, False]

    def test_repeated_phrase_accumulates_occurrences(self):
        transcript = make_transcript("t", [
            ["room|=|NOUN|root|0", "rate|=|NOUN|compound|0"],
            ["room|=|NOUN|root|0", "rate|=|NOUN|compound|0"],
        ])
        by_text = {c.text: c for c in extract_phrases(transcript, None)}
        assert by_text["room rate"].frequency == 2


class TestConversationalStopwords:
    def corpus_with_flags(self, casual_lines, business_lines):
        sentences = []
        flags = []
        for line in casual_lines:
            specs = [f"{w}|=|INTJ|root|0" if i == 0 else f"{w}|=|INTJ|discourse|0"
                     for i, w in enumerate(line.split())]
            sentences.append(make_sentence(len(sentences), specs))
            flags.append(True)
        for line in business_lines:
            specs = [f"{w}|=|NOUN|root|0" if i == 0 else f"{w}|=|NOUN|obj|0"
                     for i, w in enumerate(line.split())]
            sentences.append(make_sentence(len(sentences), specs))
            flags.append(False)
        transcript = Transcript(id="t", sentences=sentences)
        return [transcript], {"t": flags}

    def test_casual_heavy_token_included(self):
        corpus, flags = self.corpus_with_flags(
            ["like filler chatter"] * 30, ["refund invoice amount"] * 30
        )
        found = detect_conversational_stopwords(
            corpus, None, ratio_threshold=3.0, min_count=10, casual_flags=flags
        )
        assert "like" in found

    def test_business_only_token_excluded(self):
        corpus, flags = self.corpus_with_flags(
            ["like filler chatter"] * 30, ["refund invoice amount"] * 30
        )
        found = detect_conversational_stopwords(
            corpus, None, casual_flags=flags
        )
        assert "refund" not in found

    def test_gon_na_class(self):
        corpus, flags = self.corpus_with_flags(
            ["gon na grab coffee"] * 15,
            ["refund invoice amount detail"] * 30 + ["gon na process refund"],
        )
        found = detect_conversational_stopwords(
            corpus, None, ratio_threshold=3.0, min_count=10, casual_flags=flags
        )
        assert "gon" in found and "na" in found

    def test_min_count_gate(self):
        corpus, flags = self.corpus_with_flags(
            ["like filler chatter"] * 3, ["refund invoice amount"] * 30
        )
        found = detect_conversational_stopwords(
            corpus, None, ratio_threshold=3.0, min_count=10, casual_flags=flags
        )
        assert "like" not in found


class TestRemoveNoise:
    CFG = ConceptsConfig()

    def run(self, cands, **kwargs):
        defaults = dict(
            stats=stats_for(cands),
            stopwords={"the", "a", "to"},
            english_vocab=BIG_VOCAB,
            ner_strings=(),
            embeddings=None,
            cfg=self.CFG,
        )
        defaults.update(kwargs)
        return remove_noise(cands, **defaults)

    def test_leading_stopword_dropped(self):
        cands = [candidate("the reservation"), candidate("hotel reservation")]
        survivors = self.run(cands)
        assert [c.text for c in survivors] == ["hotel reservation"]

    def test_trailing_stopword_dropped(self):
        cands = [candidate("reservation the")]
        assert self.run(cands) == []

    def test_out_of_vocabulary_token_dropped(self):
        cands = [candidate("resevation"), candidate("reservation")]
        survivors = self.run(cands)
        assert [c.text for c in survivors] == ["reservation"]

    def test_all_casual_occurrences_dropped(self):
        cands = [candidate("loyalty point",
                           occurrences=[Occurrence(0, 0, True),
                                        Occurrence(3, 1, True)])]
        assert self.run(cands) == []

    def test_conversational_stopword_dropped(self):
        cands = [candidate("gon na")]
        stats = stats_for(cands, conversational={"gon", "na"})
        assert self.run(cands, stats=stats) == []

    def test_phrase_in_every_document_dropped(self):
        cands = [candidate("billing invoice")]
        stats = stats_for(cands, n_documents=10, df=10)
        # ln(N/N) = 0 < any positive threshold
        assert self.run(cands, stats=stats) == []

    def test_low_mean_token_idf_dropped(self):
        cands = [candidate("billing invoice")]
        stats = stats_for(cands, n_documents=10, df=1)
        stats.token_df = {"billing": 10, "invoice": 10}
        assert self.run(cands, stats=stats) == []

    def test_ner_similar_phrase_dropped(self):
        table = EmbeddingTable(dim=2, entries={
            "john": np.array([1.0, 0.0]),
            "smith": np.array([0.98, 0.05]),
            "deluxe room": np.array([0.0, 1.0]),
        })
        cands = [candidate("smith"), candidate("deluxe room")]
        survivors = self.run(
            cands,
            english_vocab=BIG_VOCAB | {"smith"},
            ner_strings={"john"},
            embeddings=table,
        )
        assert [c.text for c in survivors] == ["deluxe room"]

    def test_phrase_without_vector_exempt_from_ner_rule(self):
        table = EmbeddingTable(dim=2, entries={"john": np.array([1.0, 0.0])})
        cands = [candidate("deluxe room")]
        survivors = self.run(
            cands, ner_strings={"john"}, embeddings=table
        )
        assert [c.text for c in survivors] == ["deluxe room"]

    def test_calibrated_200_phrase_reduction(self):
        # fixture built to mirror the observed 50-60% reduction band:
        # survivors must land within 40-50% of the input
        cands = []
        for i in range(60):
            cands.append(candidate(f"the word{i}"))          # rule 1
        for i in range(30):
            cands.append(candidate(f"zzz{i}"))               # rule 2 (not English)
        for i in range(20):
            cands.append(candidate(
                f"word{i}", occurrences=[Occurrence(0, 0, True)]))  # rule 3
        vocab = set(BIG_VOCAB)
        vocab.update(f"word{i}" for i in range(200))
        vocab.update(f"keep{i}" for i in range(200))
        for i in range(90):
            cands.append(candidate(f"keep{i} keep{i + 100}"))
        assert len(cands) == 200
        stats = stats_for(cands, n_documents=10, df=1)
        survivors = self.run(cands, stats=stats, english_vocab=vocab)
        surviving_fraction = len(survivors) / len(cands)
        assert 0.40 <= surviving_fraction <= 0.50


EMB = EmbeddingTable(dim=2, entries={
    "hotel reservation": np.array([1.0, 0.1]),
    "reservation": np.array([1.0, 0.2]),
    "deluxe room": np.array([0.0, 1.0]),
})


class TestNormalize:
    def test_lemma_variants_merge(self):
        a = candidate("reservation cancelled", lemma_key="reservation cancel",
                      occurrences=[Occurrence(0, 0, False)])
        b = candidate("reservations cancel", lemma_key="reservation cancel",
                      occurrences=[Occurrence(1, 0, False),
                                   Occurrence(2, 0, False)])
        groups = normalize([a, b], None)
        assert len(groups) == 1
        merged = groups[0].head
        assert merged.text == "reservations cancel"  # higher frequency kept
        assert merged.frequency == 3

    def test_bigram_preferred_as_head(self):
        uni = candidate("reservation",
                        occurrences=[Occurrence(0, 0, False)] * 7)
        bi = candidate("hotel reservation",
                       occurrences=[Occurrence(0, 0, False)] * 5)
        groups = normalize([uni, bi], EMB, sim_threshold=0.75)
        assert len(groups) == 1
        assert groups[0].head.text == "hotel reservation"
        assert groups[0].aggregate_frequency == 12

    def test_below_threshold_stays_separate(self):
        groups = normalize(
            [candidate("hotel reservation"), candidate("deluxe room")],
            EMB,
            sim_threshold=0.75,
        )
        assert len(groups) == 2
        assert all(len(g.members) == 1 for g in groups)

    def test_partition_property(self):
        cands = [
            candidate("hotel reservation"),
            candidate("reservation"),
            candidate("deluxe room"),
            candidate("unvectored phrase"),
        ]
        groups = normalize(cands, EMB)
        seen = [m.text for g in groups for m in g.members]
        assert sorted(seen) == sorted(c.text for c in cands)
        for g in groups:
            assert g.head.text in [m.text for m in g.members]
            assert g.aggregate_frequency == sum(m.frequency for m in g.members)


def rank_oracle(groups, transcript, weights, location_earliest_first=True):
    """Independent spreadsheet-style recomputation of scores."""
    raw = {}
    for g in groups:
        freq = math.log(1 + g.aggregate_frequency)
        noun = sum(
            1 for t in g.head.pos_pattern if t in ("NOUN", "PROPN")
        ) / len(g.head.pos_pattern)
        firsts = [o.sentence_index for m in g.members for o in m.occurrences
                  if not o.casual]
        if not firsts:
            firsts = [o.sentence_index for m in g.members for o in m.occurrences]
        n = len(transcript.sentences)
        norm = min(firsts) / (n - 1) if n > 1 else 0.0
        loc = (1 - norm) if location_earliest_first else norm
        raw[g.head.text] = (freq, noun, loc, float(len(g.members)))

    def scale(values):
        lo, hi = min(values), max(values)
        return [1.0 if hi == lo else (v - lo) / (hi - lo) for v in values]

    texts = [g.head.text for g in groups]
    freqs = scale([raw[t][0] for t in texts])
    sims = scale([raw[t][3] for t in texts])
    scores = {}
    for i, t in enumerate(texts):
        scores[t] = (
            weights["frequency"] * freqs[i]
            + weights["pos"] * raw[t][1]
            + weights["location"] * raw[t][2]
            + weights["similarity"] * sims[i]
        )
    return scores


class TestRank:
    def transcript(self, n=10):
        return Transcript(id="t", sentences=[
            make_sentence(i, ["word|=|NOUN|root|0"]) for i in range(n)
        ])

    def test_single_group_degenerate_normalization(self):
        # all-noun head with first occurrence at sentence 0: every signal 1.0
        group = PhraseGroup(head=candidate("hotel reservation"),
                            members=[candidate("hotel reservation")])
        (concept,) = rank([group], self.transcript())
        assert concept.score == pytest.approx(1.0)
        for name, weight in (("frequency", 0.5), ("pos", 0.2),
                             ("location", 0.15), ("similarity", 0.15)):
            assert concept.signals[name] == pytest.approx(weight)

    def test_all_noun_bigram_head_pos_signal(self):
        groups = [
            PhraseGroup(head=candidate("hotel reservation"),
                        members=[candidate("hotel reservation")]),
            PhraseGroup(
                head=candidate("very nice", pos=["ADV", "ADJ"]),
                members=[candidate("very nice", pos=["ADV", "ADJ"])],
            ),
        ]
        concepts = {c.phrase: c for c in rank(groups, self.transcript())}
        assert concepts["hotel reservation"].signals["pos"] == pytest.approx(0.2)
        assert concepts["very nice"].signals["pos"] == 0.0

    def test_twelve_group_fixture_matches_oracle(self):
        rng = np.random.default_rng(17)
        groups = []
        for i in range(12):
            n_members = int(rng.integers(1, 5))
            members = []
            for m in range(n_members):
                occurrences = [
                    Occurrence(int(rng.integers(0, 10)), 0, False)
                    for _ in range(int(rng.integers(1, 6)))
                ]
                pos = ["NOUN" if rng.random() < 0.6 else "ADJ"
                       for _ in range(2)]
                members.append(candidate(f"phrase{i} member{m}", pos=pos,
                                         occurrences=occurrences))
            groups.append(PhraseGroup(head=members[0], members=members))
        weights = {"frequency": 0.5, "pos": 0.2,
                   "location": 0.15, "similarity": 0.15}
        transcript = self.transcript()
        result = rank(groups, transcript, weights, top_k=12)
        expected = rank_oracle(groups, transcript, weights)
        assert len(result) == 12
        for concept in result:
            assert concept.score == pytest.approx(expected[concept.phrase],
                                                  abs=1e-12)
        ordered = sorted(expected.items(), key=lambda kv: (-kv[1], kv[0]))
        assert [c.phrase for c in result] == [t for t, _ in ordered]

    def test_score_decomposition_exact(self):
        rng = np.random.default_rng(3)
        groups = [
            PhraseGroup(head=candidate(f"g{i}"), members=[candidate(f"g{i}")])
            for i in range(6)
        ]
        concepts = rank(groups, self.transcript(), top_k=6)
        for c in concepts:
            assert abs(c.score - sum(c.signals.values())) <= 1e-9

    def test_empty_groups(self):
        assert rank([], self.transcript()) == []

    def test_location_direction_configurable(self):
        early = PhraseGroup(head=candidate("early phrase"),
                            members=[candidate("early phrase")])
        late_cand = candidate("late phrase",
                              occurrences=[Occurrence(9, 0, False)])
        late = PhraseGroup(head=late_cand, members=[late_cand])
        transcript = self.transcript(10)
        default = {c.phrase: c for c in rank([early, late], transcript)}
        inverted = {c.phrase: c for c in rank(
            [early, late], transcript, location_earliest_first=False
        )}
        assert default["early phrase"].signals["location"] > \
            default["late phrase"].signals["location"]
        assert inverted["late phrase"].signals["location"] > \
            inverted["early phrase"].signals["location"]


class TestCorpusStats:
    def test_document_frequencies(self):
        corpus = [
            make_transcript("t1", [["alpha|=|NOUN|root|0",
                                    "beta|=|NOUN|flat|0"]]),
            make_transcript("t2", [["alpha|=|NOUN|root|0"]]),
        ]
        stats = build_corpus_stats(corpus, None)
        assert stats.n_documents == 2
        assert stats.phrase_df["alpha"] == 2
        assert stats.phrase_df["alpha beta"] == 1
        assert stats.token_df["beta"] == 1

    def test_collect_ner_strings(self):
        corpus = [make_transcript("t1", [[
            "john|=|PROPN|root|0|PERSON",
            "smith|=|PROPN|flat|0|PERSON",
            "visited|visit|VERB|acl|0",
            "boston|=|PROPN|obj|2|LOCATION",
        ]])]
        assert collect_ner_strings(corpus) == {"john smith", "boston"}
