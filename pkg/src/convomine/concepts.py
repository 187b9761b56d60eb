"""Key-concept funnel: extract broadly, prune for precision, merge, rank.

Stage 1 enumerates every within-sentence n-gram as a candidate. Stage 2 drops
noise using stopword boundaries, vocabulary checks, casual-talk provenance,
conversational stopwords, NER-similarity, and corpus IDF. Stage 3 merges
lemma-identical candidates and groups the rest by embedding similarity under
preference-ordered heads. Stage 4 scores each group with four explainable
signals and returns the top concepts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .casual import CasualModel, classify_transcript
from .config import ConceptsConfig
from .corpus import EmbeddingTable, Transcript
from .errors import InputError
from .vectors import cosine

NER_NOISE_LABELS = frozenset({"PERSON", "LOCATION", "QUANTITY", "TIME"})

SIGNAL_NAMES = ("frequency", "pos", "location", "similarity")

DEFAULT_WEIGHTS = {
    "frequency": 0.5, "pos": 0.2, "location": 0.15, "similarity": 0.15,
}


@dataclass(frozen=True)
class Occurrence:
    sentence_index: int
    token_offset: int
    casual: bool


@dataclass
class PhraseCandidate:
    tokens: Tuple[str, ...]          # lowercased surfaces
    lemma_key: str                   # space-joined lowercased lemmas
    pos_pattern: Tuple[str, ...]
    occurrences: List[Occurrence] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.tokens)

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    @property
    def frequency(self) -> int:
        """Occurrence count over business sentences only."""
        return sum(1 for o in self.occurrences if not o.casual)

    @property
    def all_casual(self) -> bool:
        return all(o.casual for o in self.occurrences)


@dataclass
class CorpusStats:
    n_documents: int
    phrase_df: Dict[str, int]
    token_df: Dict[str, int]
    conversational_stopwords: FrozenSet[str]


@dataclass
class PhraseGroup:
    head: PhraseCandidate
    members: List[PhraseCandidate]   # includes the head

    @property
    def aggregate_frequency(self) -> int:
        return sum(m.frequency for m in self.members)


@dataclass
class RankedConcept:
    phrase: str
    score: float
    signals: Dict[str, float]        # signal name -> weighted contribution
    members: List[str]


def _sentence_ngrams(surfaces: Sequence[str], ngram_max: int):
    eligible = [s.isalpha() for s in surfaces]
    for size in range(1, ngram_max + 1):
        for start in range(0, len(surfaces) - size + 1):
            if all(eligible[start:start + size]):
                yield start, size


def extract_phrases(
    transcript: Transcript,
    casual_model: Optional[CasualModel],
    ngram_max: int = 5,
    casual_flags: Optional[Sequence[bool]] = None,
) -> List[PhraseCandidate]:
    """Enumerate all within-sentence n-grams (1..ngram_max) as candidates.

    Tokens with any non-alphabetic character (punctuation included) never
    enter a candidate, and no candidate crosses a sentence boundary. Casual
    sentences still contribute occurrences, flagged for the noise stage.
    """
    if casual_flags is None:
        if casual_model is None:
            casual_flags = [False] * len(transcript.sentences)
        else:
            casual_flags = classify_transcript(casual_model, transcript)
    by_text: Dict[Tuple[str, ...], PhraseCandidate] = {}
    for sent, is_casual in zip(transcript.sentences, casual_flags):
        surfaces = sent.surfaces()
        for start, size in _sentence_ngrams(surfaces, ngram_max):
            key = tuple(surfaces[start:start + size])
            candidate = by_text.get(key)
            if candidate is None:
                span = sent.tokens[start:start + size]
                candidate = PhraseCandidate(
                    tokens=key,
                    lemma_key=" ".join(t.lemma.lower() for t in span),
                    pos_pattern=tuple(t.upos for t in span),
                )
                by_text[key] = candidate
            candidate.occurrences.append(
                Occurrence(sent.index, start, is_casual)
            )
    return list(by_text.values())


def detect_conversational_stopwords(
    corpus: Sequence[Transcript],
    casual_model: Optional[CasualModel],
    ratio_threshold: float = 3.0,
    min_count: int = 10,
    casual_flags: Optional[Mapping[str, Sequence[bool]]] = None,
) -> FrozenSet[str]:
    """Tokens far more frequent in casual talk than in business talk.

    A token qualifies when its relative frequency among casual-sentence tokens
    divided by its relative frequency among business-sentence tokens reaches
    ratio_threshold, with at least min_count casual occurrences.
    """
    casual_counts: Dict[str, int] = {}
    business_counts: Dict[str, int] = {}
    casual_total = 0
    business_total = 0
    for transcript in corpus:
        if casual_flags is not None:
            flags = casual_flags[transcript.id]
        elif casual_model is not None:
            flags = classify_transcript(casual_model, transcript)
        else:
            flags = [False] * len(transcript.sentences)
        for sent, is_casual in zip(transcript.sentences, flags):
            for surface in sent.surfaces():
                if is_casual:
                    casual_counts[surface] = casual_counts.get(surface, 0) + 1
                    casual_total += 1
                else:
                    business_counts[surface] = business_counts.get(surface, 0) + 1
                    business_total += 1

    found: Set[str] = set()
    if casual_total == 0:
        return frozenset()
    for token, count in casual_counts.items():
        if count < min_count:
            continue
        casual_rel = count / casual_total
        b_count = business_counts.get(token, 0)
        if b_count == 0 or business_total == 0:
            found.add(token)
            continue
        business_rel = b_count / business_total
        if casual_rel / business_rel >= ratio_threshold:
            found.add(token)
    return frozenset(found)


def build_corpus_stats(
    corpus: Sequence[Transcript],
    casual_model: Optional[CasualModel],
    ngram_max: int = 5,
    ratio_threshold: float = 3.0,
    min_count: int = 10,
    casual_flags: Optional[Mapping[str, Sequence[bool]]] = None,
) -> CorpusStats:
    """One pass over the corpus: document frequencies plus casual stopwords.

    Document frequencies count any occurrence, casual or business; the IDF is
    learnt from the entire conversational corpus.
    """
    phrase_df: Dict[str, int] = {}
    token_df: Dict[str, int] = {}
    for transcript in corpus:
        phrases: Set[str] = set()
        tokens: Set[str] = set()
        for sent in transcript.sentences:
            surfaces = sent.surfaces()
            tokens.update(surfaces)
            for start, size in _sentence_ngrams(surfaces, ngram_max):
                phrases.add(" ".join(surfaces[start:start + size]))
        for p in phrases:
            phrase_df[p] = phrase_df.get(p, 0) + 1
        for t in tokens:
            token_df[t] = token_df.get(t, 0) + 1
    stopwords = detect_conversational_stopwords(
        corpus, casual_model, ratio_threshold, min_count, casual_flags
    )
    return CorpusStats(
        n_documents=len(corpus),
        phrase_df=phrase_df,
        token_df=token_df,
        conversational_stopwords=stopwords,
    )


def collect_ner_strings(corpus: Sequence[Transcript]) -> FrozenSet[str]:
    """Lowercased surface strings of PERSON/LOCATION/QUANTITY/TIME entities."""
    strings: Set[str] = set()
    for transcript in corpus:
        for sent in transcript.sentences:
            surfaces = sent.surfaces()
            for label, start, end in sent.entity_spans():
                if label in NER_NOISE_LABELS:
                    strings.add(" ".join(surfaces[start:end + 1]))
    return frozenset(strings)


def _idf(n_documents: int, df: int) -> float:
    return math.log(n_documents / max(1, df))


def remove_noise(
    candidates: Sequence[PhraseCandidate],
    stats: CorpusStats,
    stopwords: Iterable[str],
    english_vocab: Iterable[str],
    ner_strings: Iterable[str],
    embeddings: Optional[EmbeddingTable],
    cfg: ConceptsConfig,
) -> List[PhraseCandidate]:
    """Drop candidates that are highly unlikely to be key topics.

    A candidate is dropped when ANY of: it starts or ends with a stopword; a
    token falls outside the English vocabulary; every occurrence sits in a
    casual sentence; a token is a conversational stopword; its vector is too
    close to a corpus NER-entity string; or its IDF signals say it is
    uninformative (low phrase IDF or low mean token IDF).
    """
    stop = set(stopwords)
    vocab = set(english_vocab)
    ner_vectors = []
    if embeddings is not None:
        for s in ner_strings:
            vec = embeddings.lookup(s)
            if vec is not None:
                ner_vectors.append(vec)

    survivors: List[PhraseCandidate] = []
    for cand in candidates:
        if cand.tokens[0] in stop or cand.tokens[-1] in stop:
            continue
        if any(tok not in vocab for tok in cand.tokens):
            continue
        if cand.all_casual:
            continue
        if any(tok in stats.conversational_stopwords for tok in cand.tokens):
            continue
        phrase_idf = _idf(stats.n_documents, stats.phrase_df.get(cand.text, 0))
        token_idf = sum(
            _idf(stats.n_documents, stats.token_df.get(tok, 0))
            for tok in cand.tokens
        ) / cand.n
        if phrase_idf < cfg.idf_phrase_min or token_idf < cfg.idf_token_min:
            continue
        if embeddings is not None and ner_vectors:
            vec = embeddings.lookup(cand.text)
            if vec is not None and max(
                cosine(vec, nv) for nv in ner_vectors
            ) >= cfg.ner_sim_threshold:
                continue
        survivors.append(cand)
    return survivors


def _merge_lemma_variants(
    candidates: Sequence[PhraseCandidate],
) -> List[PhraseCandidate]:
    by_lemma: Dict[str, List[PhraseCandidate]] = {}
    for cand in candidates:
        by_lemma.setdefault(cand.lemma_key, []).append(cand)
    merged: List[PhraseCandidate] = []
    for variants in by_lemma.values():
        if len(variants) == 1:
            merged.append(variants[0])
            continue
        keeper = max(variants, key=lambda c: (c.frequency, c.text))
        occurrences = sorted(
            (o for v in variants for o in v.occurrences),
            key=lambda o: (o.sentence_index, o.token_offset),
        )
        merged.append(
            PhraseCandidate(
                tokens=keeper.tokens,
                lemma_key=keeper.lemma_key,
                pos_pattern=keeper.pos_pattern,
                occurrences=occurrences,
            )
        )
    return merged


def _head_order_key(cand: PhraseCandidate) -> Tuple[int, int, str]:
    # Bigrams and trigrams carry more information than unigrams and long
    # n-grams, so they get first claim on group headship.
    preference = 0 if cand.n in (2, 3) else 1
    return (preference, -cand.frequency, cand.text)


def normalize(
    candidates: Sequence[PhraseCandidate],
    embeddings: Optional[EmbeddingTable],
    sim_threshold: float = 0.75,
) -> List[PhraseGroup]:
    """Merge lemma-identical candidates, then group by embedding similarity.

    The remaining candidates are visited in head-preference order; each joins
    the first existing group whose head it matches at or above sim_threshold,
    else it founds a new group. The result is a partition of the input.
    """
    merged = _merge_lemma_variants(candidates)
    ordered = sorted(merged, key=_head_order_key)

    groups: List[PhraseGroup] = []
    head_vectors: List[Optional[object]] = []
    for cand in ordered:
        vec = embeddings.lookup(cand.text) if embeddings is not None else None
        assigned = False
        if vec is not None:
            for group, head_vec in zip(groups, head_vectors):
                if head_vec is None:
                    continue
                if cosine(vec, head_vec) >= sim_threshold:
                    group.members.append(cand)
                    assigned = True
                    break
        if not assigned:
            groups.append(PhraseGroup(head=cand, members=[cand]))
            head_vectors.append(vec)
    return groups


def _minmax(values: Sequence[float]) -> List[float]:
    lo, hi = min(values), max(values)
    if hi - lo <= 0.0:
        return [1.0] * len(values)
    return [(v - lo) / (hi - lo) for v in values]


def rank(
    groups: Sequence[PhraseGroup],
    transcript: Transcript,
    weights: Optional[Mapping[str, float]] = None,
    top_k: int = 10,
    location_earliest_first: bool = True,
) -> List[RankedConcept]:
    """Score each group with four normalized signals and keep the top_k.

    Signals: log-scaled aggregate frequency (min-max over groups), fraction of
    noun-tagged head tokens, how early the group first occurs, and group size
    (min-max over groups). The stored per-signal contributions sum exactly to
    the score, which is the explanation for the rank.
    """
    if weights is None:
        weights = DEFAULT_WEIGHTS
    missing = set(SIGNAL_NAMES) - set(weights)
    if missing:
        raise InputError(f"rank: missing weights for {sorted(missing)}")
    if any(weights[name] < 0 for name in SIGNAL_NAMES):
        raise InputError("rank: weights must be non-negative")
    if abs(sum(weights[name] for name in SIGNAL_NAMES) - 1.0) > 1e-9:
        raise InputError("rank: weights must sum to 1")
    if not groups:
        return []

    n_sentences = len(transcript.sentences)

    freq_raw = [math.log1p(g.aggregate_frequency) for g in groups]
    freq = _minmax(freq_raw)

    pos = [
        sum(1 for tag in g.head.pos_pattern if tag in ("NOUN", "PROPN"))
        / g.head.n
        for g in groups
    ]

    location = []
    for g in groups:
        business = [
            o.sentence_index
            for m in g.members
            for o in m.occurrences
            if not o.casual
        ]
        pool = business or [
            o.sentence_index for m in g.members for o in m.occurrences
        ]
        first = min(pool)
        norm = first / (n_sentences - 1) if n_sentences > 1 else 0.0
        location.append(1.0 - norm if location_earliest_first else norm)

    sim = _minmax([float(len(g.members)) for g in groups])

    concepts = []
    for i, g in enumerate(groups):
        signals = {
            "frequency": weights["frequency"] * freq[i],
            "pos": weights["pos"] * pos[i],
            "location": weights["location"] * location[i],
            "similarity": weights["similarity"] * sim[i],
        }
        concepts.append(
            RankedConcept(
                phrase=g.head.text,
                score=sum(signals.values()),
                signals=signals,
                members=[m.text for m in g.members],
            )
        )
    concepts.sort(key=lambda c: (-c.score, c.phrase))
    return concepts[:top_k]


def extract_concepts(
    transcript: Transcript,
    casual_model: Optional[CasualModel],
    stats: CorpusStats,
    stopwords: Iterable[str],
    english_vocab: Iterable[str],
    ner_strings: Iterable[str],
    embeddings: Optional[EmbeddingTable],
    cfg: ConceptsConfig,
) -> List[RankedConcept]:
    """Run the full funnel for one transcript."""
    candidates = extract_phrases(transcript, casual_model, cfg.ngram_max)
    survivors = remove_noise(
        candidates, stats, stopwords, english_vocab, ner_strings, embeddings, cfg
    )
    groups = normalize(survivors, embeddings, cfg.group_sim_threshold)
    weights = {
        "frequency": cfg.weight_frequency,
        "pos": cfg.weight_pos,
        "location": cfg.weight_location,
        "similarity": cfg.weight_similarity,
    }
    return rank(
        groups,
        transcript,
        weights,
        cfg.top_k,
        cfg.location_earliest_first,
    )
