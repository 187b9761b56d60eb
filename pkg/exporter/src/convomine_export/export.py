"""Export raw transcripts to the core's annotation and embedding formats.

The output is validated by re-parsing it with the core's own parsers with
warnings escalated, so a successful export is guaranteed to load cleanly.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List

import numpy as np

from convomine.corpus import (
    Token,
    load_embeddings,
    parse_annotations,
    parse_transcripts,
    serialize_annotations,
    validate_annotation,
)

from .toolchain import make_toolchain


class ValidationError(Exception):
    """Exporter output failed the core's parsers or invariants."""


@dataclass
class ExportJob:
    input_path: Path
    annotations_path: Path
    embeddings_path: Path
    ner_model: str = "builtin"
    embed_model: str = "builtin"
    dim: int = 32
    ngram_max: int = 5
    frequency_floor: int = 2


def _seeded_unit(key: str, dim: int) -> np.ndarray:
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
    vec = rng.normal(size=dim)
    return vec / np.linalg.norm(vec)


def build_embedding_entries(
    transcripts, job: ExportJob
) -> Dict[str, np.ndarray]:
    """All tokens, plus alphabetic n-grams at or above the frequency floor."""
    token_keys = set()
    ngram_counts: Dict[str, int] = {}
    for transcript in transcripts:
        for sentence in transcript.sentences:
            surfaces = [t.surface.lower() for t in sentence.tokens]
            token_keys.update(s for s in surfaces if s.isalpha())
            eligible = [s.isalpha() for s in surfaces]
            for n in range(2, job.ngram_max + 1):
                for start in range(0, len(surfaces) - n + 1):
                    if all(eligible[start:start + n]):
                        key = " ".join(surfaces[start:start + n])
                        ngram_counts[key] = ngram_counts.get(key, 0) + 1

    entries: Dict[str, np.ndarray] = {}
    for token in sorted(token_keys):
        entries[token] = _seeded_unit(f"{job.embed_model}:{token}", job.dim)
    for phrase, count in sorted(ngram_counts.items()):
        if count < job.frequency_floor:
            continue
        token_mean = np.mean([entries[t] for t in phrase.split()], axis=0)
        own = _seeded_unit(f"{job.embed_model}:{phrase}", job.dim)
        vec = 0.7 * token_mean + 0.3 * own
        entries[phrase] = vec / np.linalg.norm(vec)
    return entries


def export(job: ExportJob) -> None:
    """Annotate, write both files, and re-validate them with the core."""
    transcripts = parse_transcripts(job.input_path)
    toolchain = make_toolchain(job.ner_model)

    for transcript in transcripts:
        for sentence in transcript.sentences:
            rows = toolchain.annotate(sentence.text)
            sentence.tokens = [
                Token(
                    surface=row.surface,
                    lemma=row.lemma,
                    upos=row.upos,
                    dep_rel=row.dep_rel,
                    head=row.head,
                    ner=row.ner,
                )
                for row in rows
            ]
            try:
                validate_annotation(transcript.id, sentence)
            except Exception as exc:
                raise ValidationError(
                    f"toolchain {toolchain.name} produced an invalid parse "
                    f"for transcript {transcript.id!r} sentence "
                    f"{sentence.index}: {exc}"
                ) from exc

    serialize_annotations(transcripts, job.annotations_path)

    entries = build_embedding_entries(transcripts, job)
    lines = [
        key + "\t" + " ".join(f"{x:.6f}" for x in vec)
        for key, vec in sorted(entries.items())
    ]
    Path(job.embeddings_path).write_text(
        "\n".join(lines) + ("\n" if lines else ""), encoding="utf-8"
    )

    _validate_output(job)


def _validate_output(job: ExportJob) -> None:
    """Round-trip the written files through the core parsers, zero warnings."""
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        try:
            fresh = parse_transcripts(job.input_path)
            parse_annotations(job.annotations_path, fresh)
            load_embeddings(job.embeddings_path)
        except Warning as warning:
            raise ValidationError(
                f"exported files raise a parser warning: {warning}"
            ) from warning
        except Exception as exc:
            raise ValidationError(
                f"exported files fail the core parsers: {exc}"
            ) from exc
