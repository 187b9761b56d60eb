"""Data model and parsers for transcripts, annotations, embeddings, and labels.

All downstream modules consume the objects built here; none of them re-read
raw files. Parsed objects are treated as immutable after load and are safe
for concurrent reads.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Set

import numpy as np

from .errors import InputError

UPOS_TAGS = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
})

NER_NONE = "_"


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    upos: str
    dep_rel: str
    head: int  # token index within the sentence; self-index for the root
    ner: Optional[str] = None


@dataclass
class Sentence:
    index: int
    text: str
    tokens: List[Token] = field(default_factory=list)

    @property
    def annotated(self) -> bool:
        return bool(self.tokens) or not self.text.strip()

    def surfaces(self) -> List[str]:
        return [t.surface.lower() for t in self.tokens]

    def entity_spans(self) -> List[tuple]:
        """Maximal runs of tokens sharing one NER label, as (label, start, end)."""
        spans = []
        i = 0
        while i < len(self.tokens):
            label = self.tokens[i].ner
            if label is None:
                i += 1
                continue
            j = i
            while j + 1 < len(self.tokens) and self.tokens[j + 1].ner == label:
                j += 1
            spans.append((label, i, j))
            i = j + 1
        return spans


@dataclass
class Transcript:
    id: str
    sentences: List[Sentence]


def validate_transcript(transcript: Transcript) -> None:
    if not transcript.sentences:
        raise InputError(f"transcript {transcript.id!r} has no sentences")
    for i, sent in enumerate(transcript.sentences):
        if sent.index != i:
            raise InputError(
                f"transcript {transcript.id!r}: sentence index {sent.index} "
                f"at position {i} is not contiguous from 0"
            )


def validate_annotation(transcript_id: str, sentence: Sentence) -> None:
    """Check head ranges and the single-root invariant for one sentence."""
    n = len(sentence.tokens)
    if n == 0:
        if sentence.text.strip():
            raise InputError(
                f"transcript {transcript_id!r} sentence {sentence.index}: "
                "no token annotations for non-empty text"
            )
        return
    roots = 0
    for pos, tok in enumerate(sentence.tokens):
        if not 0 <= tok.head < n:
            raise InputError(
                f"transcript {transcript_id!r} sentence {sentence.index}: "
                f"token {pos} head {tok.head} out of range 0..{n - 1}"
            )
        if tok.dep_rel == "root":
            roots += 1
            if tok.head != pos:
                raise InputError(
                    f"transcript {transcript_id!r} sentence {sentence.index}: "
                    f"root token {pos} must head itself, not {tok.head}"
                )
        elif tok.head == pos:
            raise InputError(
                f"transcript {transcript_id!r} sentence {sentence.index}: "
                f"non-root token {pos} heads itself"
            )
    if roots != 1:
        raise InputError(
            f"transcript {transcript_id!r} sentence {sentence.index}: "
            f"expected exactly 1 root token, found {roots}"
        )


# ---------------------------------------------------------------------------
# Transcript files: one JSON object per line, {"id": ..., "sentences": [...]}.


def parse_transcripts(path: str | Path) -> List[Transcript]:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read transcript file {path}: {exc}") from exc

    transcripts: List[Transcript] = []
    seen: Set[str] = set()
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{lineno}: malformed record: {exc}") from exc
        if not isinstance(record, dict) or "id" not in record:
            raise InputError(f"{path}:{lineno}: record missing 'id'")
        if "sentences" not in record or not isinstance(record["sentences"], list):
            raise InputError(f"{path}:{lineno}: record missing 'sentences' list")
        tid = str(record["id"])
        if tid in seen:
            raise InputError(f"{path}:{lineno}: duplicate transcript id {tid!r}")
        seen.add(tid)
        sentences = [
            Sentence(index=i, text=str(text))
            for i, text in enumerate(record["sentences"])
        ]
        transcript = Transcript(id=tid, sentences=sentences)
        validate_transcript(transcript)
        transcripts.append(transcript)
    return transcripts


def serialize_transcripts(transcripts: Sequence[Transcript], path: str | Path) -> None:
    lines = []
    for t in transcripts:
        record = {"id": t.id, "sentences": [s.text for s in t.sentences]}
        lines.append(json.dumps(record, sort_keys=True))
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


# ---------------------------------------------------------------------------
# Annotation sidecar: tab-separated token rows, one blank line after each
# sentence block, with '# transcript = <id>' and '# sent = <index>' headers.
# Row columns: index, surface, lemma, upos, head, dep_rel, ner ('_' for none).


def parse_annotations(
    path: str | Path, transcripts: Sequence[Transcript]
) -> List[Transcript]:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read annotation file {path}: {exc}") from exc

    by_id = {t.id: t for t in transcripts}
    annotated: Dict[str, Set[int]] = {t.id: set() for t in transcripts}

    current_tid: Optional[str] = None
    current_sent: Optional[int] = None
    rows: List[Token] = []

    def flush() -> None:
        nonlocal rows, current_sent
        if current_sent is None:
            return
        transcript = by_id[current_tid]
        if not 0 <= current_sent < len(transcript.sentences):
            raise InputError(
                f"{path}: transcript {current_tid!r}: sentence index "
                f"{current_sent} out of range"
            )
        if current_sent in annotated[current_tid]:
            raise InputError(
                f"{path}: transcript {current_tid!r}: duplicate annotation "
                f"block for sentence {current_sent}"
            )
        sentence = transcript.sentences[current_sent]
        sentence.tokens = list(rows)
        validate_annotation(current_tid, sentence)
        annotated[current_tid].add(current_sent)
        rows = []
        current_sent = None

    for lineno, line in enumerate(raw.splitlines(), start=1):
        if line.startswith("# transcript = "):
            flush()
            current_tid = line[len("# transcript = "):]
            if current_tid not in by_id:
                raise InputError(
                    f"{path}:{lineno}: unknown transcript id {current_tid!r}"
                )
            continue
        if line.startswith("# sent = "):
            flush()
            if current_tid is None:
                raise InputError(f"{path}:{lineno}: sentence header before any "
                                 "transcript header")
            try:
                current_sent = int(line[len("# sent = "):])
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: bad sentence index") from exc
            continue
        if not line.strip():
            flush()
            continue
        if current_sent is None:
            raise InputError(f"{path}:{lineno}: token row outside a sentence block")
        cols = line.split("\t")
        if len(cols) != 7:
            raise InputError(
                f"{path}:{lineno}: expected 7 tab-separated columns, got {len(cols)}"
            )
        idx_s, surface, lemma, upos, head_s, dep_rel, ner = cols
        try:
            idx = int(idx_s)
            head = int(head_s)
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: non-integer index or head") from exc
        if idx != len(rows):
            raise InputError(
                f"{path}:{lineno}: token index {idx} out of order "
                f"(expected {len(rows)})"
            )
        if upos not in UPOS_TAGS:
            warnings.warn(
                f"{path}:{lineno}: unknown POS tag {upos!r}", stacklevel=2
            )
        rows.append(
            Token(
                surface=surface,
                lemma=lemma,
                upos=upos,
                dep_rel=dep_rel,
                head=head,
                ner=None if ner == NER_NONE else ner,
            )
        )
    flush()

    for t in transcripts:
        missing = set(range(len(t.sentences))) - annotated[t.id]
        if missing:
            raise InputError(
                f"{path}: transcript {t.id!r}: sentence count mismatch, "
                f"missing annotations for sentences {sorted(missing)}"
            )
    return list(transcripts)


def serialize_annotations(
    transcripts: Sequence[Transcript], path: str | Path
) -> None:
    lines: List[str] = []
    for t in transcripts:
        lines.append(f"# transcript = {t.id}")
        for sent in t.sentences:
            lines.append(f"# sent = {sent.index}")
            for i, tok in enumerate(sent.tokens):
                ner = tok.ner if tok.ner is not None else NER_NONE
                lines.append(
                    f"{i}\t{tok.surface}\t{tok.lemma}\t{tok.upos}"
                    f"\t{tok.head}\t{tok.dep_rel}\t{ner}"
                )
            lines.append("")
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


# ---------------------------------------------------------------------------
# Embedding table: one entry per line, 'key<TAB>v1 v2 ... vd'.


@dataclass
class EmbeddingTable:
    dim: int
    entries: Dict[str, np.ndarray]

    def lookup(self, text: str) -> Optional[np.ndarray]:
        """Vector for a token or phrase, lowercased.

        A multi-token phrase missing from the table falls back to the mean of
        its known token vectors; with zero known tokens there is no vector and
        the caller must skip similarity-based steps for it.
        """
        key = text.lower()
        hit = self.entries.get(key)
        if hit is not None:
            return hit
        parts = key.split()
        if len(parts) <= 1:
            return None
        found = [self.entries[p] for p in parts if p in self.entries]
        if not found:
            return None
        return np.mean(found, axis=0)


def load_embeddings(path: str | Path) -> EmbeddingTable:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read embedding file {path}: {exc}") from exc

    entries: Dict[str, np.ndarray] = {}
    dim: Optional[int] = None
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        if "\t" not in line:
            raise InputError(f"{path}:{lineno}: expected 'key<TAB>floats'")
        key, _, vec_s = line.partition("\t")
        try:
            vec = np.array([float(x) for x in vec_s.split()], dtype=float)
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: non-numeric component") from exc
        if vec.size == 0:
            raise InputError(f"{path}:{lineno}: empty vector")
        if not np.all(np.isfinite(vec)):
            raise InputError(f"{path}:{lineno}: non-finite component")
        if dim is None:
            dim = int(vec.size)
        elif vec.size != dim:
            raise InputError(
                f"{path}:{lineno}: dimension {vec.size} != expected {dim}"
            )
        key = key.lower()
        if key in entries:
            warnings.warn(f"{path}:{lineno}: duplicate key {key!r}", stacklevel=2)
        entries[key] = vec
    if dim is None:
        raise InputError(f"{path}: empty embedding file")
    return EmbeddingTable(dim=dim, entries=entries)


# ---------------------------------------------------------------------------
# Golden set and expert labels: JSON objects keyed by transcript id.


@dataclass
class GoldenEntry:
    concepts: List[str]
    intent_sentences: Set[int]
    category: str


@dataclass
class GoldenSet:
    entries: Dict[str, GoldenEntry]


def load_golden_set(
    path: str | Path,
    transcripts: Optional[Sequence[Transcript]] = None,
    categories: Optional[Set[str]] = None,
) -> GoldenSet:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read golden set {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed golden set: {exc}") from exc

    by_id = {t.id: t for t in transcripts} if transcripts is not None else None
    entries: Dict[str, GoldenEntry] = {}
    for tid, rec in data.items():
        entry = GoldenEntry(
            concepts=[str(c) for c in rec.get("concepts", [])],
            intent_sentences=set(int(i) for i in rec.get("intent_sentences", [])),
            category=str(rec.get("category", "")),
        )
        if by_id is not None:
            if tid not in by_id:
                raise InputError(f"{path}: golden entry for unknown transcript {tid!r}")
            n = len(by_id[tid].sentences)
            bad = [i for i in entry.intent_sentences if not 0 <= i < n]
            if bad:
                raise InputError(
                    f"{path}: transcript {tid!r}: gold intent sentences "
                    f"{sorted(bad)} do not exist"
                )
        if categories is not None and entry.category not in categories:
            raise InputError(
                f"{path}: transcript {tid!r}: gold category "
                f"{entry.category!r} not in the category set"
            )
        entries[tid] = entry
    return GoldenSet(entries=entries)


EXPERT_LABEL_VALUES = frozenset({"useful", "noisy"})


@dataclass
class ExpertLabels:
    concepts: Dict[str, Dict[str, str]]  # transcript id -> phrase -> label
    intents: Dict[str, Dict[str, str]]   # transcript id -> segment id -> label


def load_expert_labels(path: str | Path) -> ExpertLabels:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read expert labels {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed expert labels: {exc}") from exc

    concepts: Dict[str, Dict[str, str]] = {}
    intents: Dict[str, Dict[str, str]] = {}
    for tid, rec in data.items():
        for kind, sink in (("concepts", concepts), ("intents", intents)):
            labels = {str(k): str(v) for k, v in rec.get(kind, {}).items()}
            bad = {v for v in labels.values()} - EXPERT_LABEL_VALUES
            if bad:
                raise InputError(
                    f"{path}: transcript {tid!r}: invalid labels {sorted(bad)}"
                )
            if labels:
                sink[tid] = labels
    return ExpertLabels(concepts=concepts, intents=intents)
