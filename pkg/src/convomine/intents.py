"""Open intent segment extraction from annotated conversation sentences.

Potential intent sentences are found by question rules and by constraint
rules over dependency parses, conjunction-initial follow-ups attach to their
predecessor, contiguous runs become segments, and segments are ranked with
boosts for concepts, questions, and summary sentences before a differential
cutoff picks how many to emit.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np

from .casual import CasualModel, classify_transcript
from .concepts import RankedConcept
from .config import IntentsConfig
from .corpus import EmbeddingTable, Sentence, Transcript
from .errors import InputError
from .vectors import kmeans

FIVE_W_ONE_H = frozenset(
    {"who", "what", "when", "where", "why", "how", "which", "whom", "whose"}
)
WH_DEP_RELS = frozenset({"advmod", "obj", "nsubj"})
CLAUSE_EMBED_RELS = frozenset(
    {"ccomp", "xcomp", "acl", "advcl", "csubj", "parataxis"}
)
SUBJECT_PRONOUNS = frozenset({"i", "we", "you", "my", "our", "your"})
LEADING_CONJUNCTIONS = frozenset({"and", "but", "so", "also", "plus", "because"})

Q1 = "question_rule_1"
Q2 = "question_5w1h"
Q3 = "question_rule_3"
Q4 = "question_rule_4"
R1 = "intent_nsubj_aux_root"
R2 = "intent_pron_to"
CONJ = "conjunction_attach"

QUESTION_TRIGGERS = frozenset({Q1, Q2, Q3, Q4})


@dataclass
class SentenceTrigger:
    sentence_index: int
    triggers: Set[str] = field(default_factory=set)
    interrogative_start: Optional[int] = None


@dataclass
class IntentSegment:
    start: int
    end: int
    triggers: Dict[int, List[str]]
    base_score: float
    boosts: Dict[str, float] = field(default_factory=dict)
    transcript_id: str = ""

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    @property
    def final_score(self) -> float:
        return self.base_score + sum(self.boosts.values())

    @property
    def id(self) -> str:
        return f"{self.transcript_id}:{self.start}-{self.end}"

    def sentence_indices(self) -> range:
        return range(self.start, self.end + 1)


def _require_annotated(sentence: Sentence) -> None:
    if not sentence.annotated:
        raise InputError(
            f"sentence {sentence.index} is not annotated"
        )


def _base_rel(dep_rel: str) -> str:
    return dep_rel.split(":", 1)[0]


def _in_main_clause(tokens: Sequence, i: int) -> bool:
    """True when the head path from token i reaches the root without crossing
    a clause-embedding relation (the word sits at or under the root clause)."""
    if tokens[i].dep_rel == "root":
        return True
    cur = tokens[i].head
    for _ in range(len(tokens)):
        if tokens[cur].dep_rel == "root":
            return True
        if _base_rel(tokens[cur].dep_rel) in CLAUSE_EMBED_RELS:
            return False
        cur = tokens[cur].head
    return True


def detect_question(
    sentence: Sentence, cfg: Optional[IntentsConfig] = None
) -> Optional[SentenceTrigger]:
    """Apply the four question rules; earliest matching token wins as start.

    Q1: sentence-initial auxiliary or modal with a nominal subject after it.
    Q2: a 5W-1H word at a clause start, in an interrogative dependency role
        attached at or directly under the root.
    Q3: sentence-initial copula followed by its subject.
    Q4: terminal question-mark token (only usable when punctuation exists;
        the interrogative part is taken to start at the sentence opening).
    """
    _require_annotated(sentence)
    if cfg is None:
        cfg = IntentsConfig()
    tokens = sentence.tokens
    if not tokens:
        return None
    matches: List[Tuple[int, str]] = []

    has_later_subject = any(
        _base_rel(t.dep_rel) == "nsubj" for t in tokens[1:]
    )
    if cfg.enable_q1 and tokens[0].upos == "AUX" and has_later_subject:
        matches.append((0, Q1))

    if cfg.enable_q2:
        for i, tok in enumerate(tokens):
            if tok.surface.lower() not in FIVE_W_ONE_H:
                continue
            if _base_rel(tok.dep_rel) not in WH_DEP_RELS and tok.dep_rel != "root":
                continue
            clause_start = i == 0 or tokens[i - 1].upos in (
                "PUNCT", "CCONJ", "SCONJ"
            )
            if clause_start and _in_main_clause(tokens, i):
                matches.append((i, Q2))
                break

    if (
        cfg.enable_q3
        and tokens[0].lemma.lower() == "be"
        and tokens[0].upos in ("AUX", "VERB")
        and has_later_subject
    ):
        matches.append((0, Q3))

    if cfg.enable_q4 and tokens[-1].surface.endswith("?"):
        matches.append((0, Q4))

    if not matches:
        return None
    return SentenceTrigger(
        sentence_index=sentence.index,
        triggers={name for _, name in matches},
        interrogative_start=min(i for i, _ in matches),
    )


def detect_intent_sentence(sentence: Sentence) -> Optional[SentenceTrigger]:
    """Apply the two constraint rules for intent-conveying sentences.

    R1 fires on a skip-gram match of dependency relations nsubj .. aux .. root
    in surface order. R2 fires on a subject pronoun or possessive determiner
    followed within 3 tokens by an infinitival "to" introducing a verb.
    """
    _require_annotated(sentence)
    tokens = sentence.tokens
    triggers: Set[str] = set()

    rels = [_base_rel(t.dep_rel) for t in tokens]
    for i, rel_i in enumerate(rels):
        if rel_i != "nsubj":
            continue
        for j in range(i + 1, len(rels)):
            if rels[j] != "aux":
                continue
            if any(rels[k] == "root" for k in range(j + 1, len(rels))):
                triggers.add(R1)
                break
        if R1 in triggers:
            break

    for i, tok in enumerate(tokens):
        if tok.surface.lower() not in SUBJECT_PRONOUNS:
            continue
        for j in range(i + 1, min(i + 4, len(tokens))):
            if tokens[j].surface.lower() != "to":
                continue
            head = tokens[j].head
            heads_verb = 0 <= head < len(tokens) and tokens[head].upos == "VERB"
            next_is_verb = j + 1 < len(tokens) and tokens[j + 1].upos == "VERB"
            if heads_verb or next_is_verb:
                triggers.add(R2)
                break
        if R2 in triggers:
            break

    if not triggers:
        return None
    return SentenceTrigger(sentence_index=sentence.index, triggers=triggers)


def attach_conjunctions(
    triggers: Dict[int, SentenceTrigger],
    transcript: Transcript,
    casual_flags: Optional[Sequence[bool]] = None,
) -> Dict[int, SentenceTrigger]:
    """Attach conjunction-initial sentences to a triggered predecessor.

    Applied transitively left-to-right, so a chain of conjunction-initial
    sentences after one trigger all attach.
    """
    if casual_flags is None:
        casual_flags = [False] * len(transcript.sentences)
    result = dict(triggers)
    for sent, is_casual in zip(transcript.sentences, casual_flags):
        if is_casual or sent.index in result or not sent.tokens:
            continue
        if sent.index - 1 not in result:
            continue
        if sent.tokens[0].surface.lower() in LEADING_CONJUNCTIONS:
            result[sent.index] = SentenceTrigger(
                sentence_index=sent.index, triggers={CONJ}
            )
    return result


def form_segments(
    triggers: Mapping[int, SentenceTrigger],
    max_len: int = 6,
    transcript_id: str = "",
) -> List[IntentSegment]:
    """Turn maximal runs of consecutive triggered sentences into segments.

    Runs longer than max_len split greedily left-to-right. The base score is
    the number of distinct trigger kinds in the segment over its length.
    """
    if max_len < 1:
        raise InputError(f"form_segments: max_len must be >= 1, got {max_len}")
    indices = sorted(triggers)
    segments: List[IntentSegment] = []
    run: List[int] = []

    def emit(run_part: List[int]) -> None:
        names = set()
        for i in run_part:
            names.update(triggers[i].triggers)
        segments.append(
            IntentSegment(
                start=run_part[0],
                end=run_part[-1],
                triggers={i: sorted(triggers[i].triggers) for i in run_part},
                base_score=len(names) / len(run_part),
                transcript_id=transcript_id,
            )
        )

    def flush() -> None:
        for at in range(0, len(run), max_len):
            emit(run[at:at + max_len])
        run.clear()

    for idx in indices:
        if run and idx != run[-1] + 1:
            flush()
        run.append(idx)
    if run:
        flush()
    return segments


def sentence_vector(
    sentence: Sentence, embeddings: EmbeddingTable
) -> np.ndarray:
    """Ingested sentence vector if present, else the mean of token vectors."""
    direct = embeddings.entries.get(sentence.text.lower())
    if direct is not None:
        return direct
    found = [
        embeddings.entries[s]
        for s in sentence.surfaces()
        if s in embeddings.entries
    ]
    if not found:
        return np.zeros(embeddings.dim)
    return np.mean(found, axis=0)


def summary_size(n_business: int, fraction: float = 0.15, cap: int = 10) -> int:
    return min(max(1, math.ceil(fraction * n_business)), cap)


def summarize(
    transcript: Transcript,
    embeddings: EmbeddingTable,
    k: int,
    seed: int,
    casual_flags: Optional[Sequence[bool]] = None,
) -> Set[int]:
    """Representative business-sentence indices via k-means over embeddings."""
    if casual_flags is None:
        casual_flags = [False] * len(transcript.sentences)
    business = [
        sent.index
        for sent, is_casual in zip(transcript.sentences, casual_flags)
        if not is_casual
    ]
    if not business:
        return set()
    k = max(1, min(k, len(business)))
    points = [
        sentence_vector(transcript.sentences[i], embeddings) for i in business
    ]
    result = kmeans(points, k, seed)
    return {business[i] for i in result.representatives}


def transcript_seed(seed: int, transcript_id: str) -> int:
    """Stable per-transcript seed; independent of process hash randomization."""
    digest = hashlib.sha256(f"{seed}:{transcript_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _phrase_occurrences(
    phrases: Set[Tuple[str, ...]], sentences: Sequence[Sentence]
) -> int:
    count = 0
    for sent in sentences:
        surfaces = sent.surfaces()
        for size in {len(p) for p in phrases}:
            for start in range(0, len(surfaces) - size + 1):
                if tuple(surfaces[start:start + size]) in phrases:
                    count += 1
    return count


def rank_and_cutoff(
    segments: Sequence[IntentSegment],
    concepts: Sequence[RankedConcept],
    summary: Set[int],
    transcript: Transcript,
    cfg: IntentsConfig,
) -> List[IntentSegment]:
    """Boost, sort, and apply the differential cutoff.

    Boosts count top-concept occurrences, question-triggered sentences, and
    summary sentences inside each segment. The cutoff keeps everything above
    the largest gap between consecutive scores within the first
    max_intents + 1 entries; with no positive gap it keeps max_intents. At
    least one segment is returned whenever any exists.
    """
    if not segments:
        return []
    member_phrases = {
        tuple(text.split())
        for concept in concepts
        for text in concept.members
    }
    for seg in segments:
        span = [transcript.sentences[i] for i in seg.sentence_indices()]
        concept_hits = (
            _phrase_occurrences(member_phrases, span) if member_phrases else 0
        )
        question_hits = sum(
            1
            for names in seg.triggers.values()
            if QUESTION_TRIGGERS & set(names)
        )
        summary_hits = sum(1 for i in seg.sentence_indices() if i in summary)
        seg.boosts = {
            "concepts": cfg.boost_concepts * concept_hits,
            "questions": cfg.boost_questions * question_hits,
            "summary": cfg.boost_summary * summary_hits,
        }

    ordered = sorted(segments, key=lambda s: (-s.final_score, s.start))
    return ordered[:differential_cutoff(
        [s.final_score for s in ordered], cfg.max_intents
    )]


def differential_cutoff(scores: Sequence[float], max_intents: int) -> int:
    """How many of the descending scores to keep: cut at the largest gap.

    Only gaps within the first max_intents + 1 entries are considered; ties
    and all-equal lists fall back to max_intents. Always returns >= 1 for a
    non-empty list.
    """
    if max_intents < 1:
        raise InputError(f"differential_cutoff: max_intents must be >= 1")
    if not scores:
        return 0
    window = list(scores[:max_intents + 1])
    if len(window) == 1:
        return 1
    gaps = [window[i] - window[i + 1] for i in range(len(window) - 1)]
    best = max(gaps)
    if best <= 0.0:
        return min(len(scores), max_intents)
    return gaps.index(best) + 1


def extract_intents(
    transcript: Transcript,
    casual_model: Optional[CasualModel],
    embeddings: Optional[EmbeddingTable],
    concepts: Sequence[RankedConcept],
    cfg: IntentsConfig,
    seed: int,
) -> List[IntentSegment]:
    """Full per-transcript intent extraction over business sentences."""
    if casual_model is not None:
        casual_flags = classify_transcript(casual_model, transcript)
    else:
        casual_flags = [False] * len(transcript.sentences)

    triggers: Dict[int, SentenceTrigger] = {}
    for sent, is_casual in zip(transcript.sentences, casual_flags):
        if is_casual or not sent.tokens:
            continue
        merged = SentenceTrigger(sentence_index=sent.index)
        q = detect_question(sent, cfg)
        if q is not None:
            merged.triggers |= q.triggers
            merged.interrogative_start = q.interrogative_start
        r = detect_intent_sentence(sent)
        if r is not None:
            merged.triggers |= r.triggers
        if merged.triggers:
            triggers[sent.index] = merged

    triggers = attach_conjunctions(triggers, transcript, casual_flags)
    segments = form_segments(triggers, cfg.max_segment_len, transcript.id)

    summary: Set[int] = set()
    if embeddings is not None and segments:
        n_business = sum(1 for f in casual_flags if not f)
        k = summary_size(n_business, cfg.summary_fraction, cfg.summary_cap)
        summary = summarize(
            transcript,
            embeddings,
            k,
            transcript_seed(seed, transcript.id),
            casual_flags,
        )

    return rank_and_cutoff(segments, concepts, summary, transcript, cfg)
