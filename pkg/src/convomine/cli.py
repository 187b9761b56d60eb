"""Command-line pipeline: staged commands with auditable run manifests.

Each stage reads only its declared input files and writes its outputs (plus a
manifest with config snapshot, input digests, timings, and output digests),
so every stage is independently re-runnable. All randomness derives from the
single configured seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__, casual, concepts, intents, metrics, tagger
from .config import PipelineConfig, load_config
from .corpus import (
    EmbeddingTable,
    ExpertLabels,
    GoldenSet,
    Transcript,
    load_embeddings,
    load_expert_labels,
    load_golden_set,
    parse_annotations,
    parse_transcripts,
)
from .errors import ConfigError, InputError
from .textnorm import load_wordlist


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_json_lines(records: Sequence[dict], path: Path) -> None:
    lines = [json.dumps(r, sort_keys=True) for r in records]
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def _read_json_lines(path: Path) -> List[dict]:
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    records = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{lineno}: malformed record: {exc}") from exc
    return records


class Manifest:
    def __init__(self, command: str, config: PipelineConfig):
        self.data: Dict = {
            "tool": "convomine",
            "version": __version__,
            "command": command,
            "config": config.to_dict(),
            "inputs": {},
            "outputs": {},
            "timings_s": {},
        }

    def add_input(self, name: str, path: Path) -> None:
        self.data["inputs"][name] = {"path": str(path), "sha256": _digest(path)}

    def add_input_dir(self, name: str, directory: Path, pattern: str) -> None:
        for path in sorted(directory.rglob(pattern)):
            rel = path.relative_to(directory)
            self.add_input(f"{name}/{rel}", path)

    def add_output(self, name: str, path: Path) -> None:
        self.data["outputs"][name] = {"path": str(path), "sha256": _digest(path)}

    def add_timing(self, stage: str, seconds: float) -> None:
        self.data["timings_s"][stage] = round(seconds, 6)

    def write(self, path: Path) -> None:
        path.write_text(
            json.dumps(self.data, sort_keys=True, indent=1) + "\n",
            encoding="utf-8",
        )


def _load_corpus(corpus_path: Path, annotations_path: Path) -> List[Transcript]:
    transcripts = parse_transcripts(corpus_path)
    parse_annotations(annotations_path, transcripts)
    return transcripts


def _load_categories(categories_dir: Path) -> Dict[str, List[str]]:
    if not categories_dir.is_dir():
        raise InputError(f"categories directory not found: {categories_dir}")
    docs: Dict[str, List[str]] = {}
    for sub in sorted(p for p in categories_dir.iterdir() if p.is_dir()):
        files = sorted(sub.glob("*.txt"))
        if not files:
            continue
        docs[sub.name] = [f.read_text(encoding="utf-8") for f in files]
    if not docs:
        raise InputError(f"no category documents under {categories_dir}")
    return docs


# ---------------------------------------------------------------------------
# Stage implementations (file in, file out).


def stage_train_casual(
    corpus_path: Path,
    annotations_path: Path,
    stopwords_path: Path,
    out_path: Path,
    cfg: PipelineConfig,
) -> casual.CasualModel:
    transcripts = _load_corpus(corpus_path, annotations_path)
    stopwords = load_wordlist(stopwords_path)
    labeled = casual.auto_label(transcripts, cfg.casual.head_n, cfg.seed)
    model, _report = casual.train(
        labeled,
        cfg.casual.precision_target,
        cfg.seed,
        stopwords,
        n_trees=cfg.casual.n_trees,
        max_depth=cfg.casual.max_depth,
    )
    model.save(out_path)
    return model


def concept_record(transcript_id: str, ranked) -> dict:
    return {
        "transcript_id": transcript_id,
        "concepts": [
            {
                "phrase": c.phrase,
                "score": c.score,
                "signals": c.signals,
                "members": c.members,
            }
            for c in ranked
        ],
    }


def _concepts_worker(args: Tuple) -> dict:
    transcript, model, stats, stopwords, vocab, ner_strings, table, ccfg = args
    ranked = concepts.extract_concepts(
        transcript, model, stats, stopwords, vocab, ner_strings, table, ccfg
    )
    return concept_record(transcript.id, ranked)


def stage_extract_concepts(
    corpus_path: Path,
    annotations_path: Path,
    embeddings_path: Path,
    stopwords_path: Path,
    english_vocab_path: Path,
    model_path: Path,
    out_path: Path,
    cfg: PipelineConfig,
    jobs: int = 1,
    model: Optional[casual.CasualModel] = None,
) -> List[dict]:
    transcripts = _load_corpus(corpus_path, annotations_path)
    table = load_embeddings(embeddings_path)
    stopwords = load_wordlist(stopwords_path)
    vocab = load_wordlist(english_vocab_path)
    if model is None:
        model = casual.CasualModel.load(model_path)
    flags = {t.id: casual.classify_transcript(model, t) for t in transcripts}
    stats = concepts.build_corpus_stats(
        transcripts,
        model,
        cfg.concepts.ngram_max,
        cfg.concepts.stopword_ratio,
        cfg.concepts.stopword_min_count,
        casual_flags=flags,
    )
    ner_strings = concepts.collect_ner_strings(transcripts)
    tasks = [
        (t, model, stats, stopwords, vocab, ner_strings, table, cfg.concepts)
        for t in transcripts
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_concepts_worker, tasks))
    else:
        records = [_concepts_worker(task) for task in tasks]
    _write_json_lines(records, out_path)
    return records


def segment_record(transcript: Transcript, segment: intents.IntentSegment) -> dict:
    return {
        "id": segment.id,
        "start": segment.start,
        "end": segment.end,
        "sentences": [
            transcript.sentences[i].text for i in segment.sentence_indices()
        ],
        "triggers": {str(i): names for i, names in sorted(segment.triggers.items())},
        "base_score": segment.base_score,
        "boosts": segment.boosts,
        "final_score": segment.final_score,
    }


def _ranked_concepts_from_record(record: dict) -> List[concepts.RankedConcept]:
    return [
        concepts.RankedConcept(
            phrase=c["phrase"],
            score=c["score"],
            signals=c["signals"],
            members=c["members"],
        )
        for c in record.get("concepts", [])
    ]


def _intents_worker(args: Tuple) -> dict:
    transcript, model, table, ranked, icfg, seed = args
    segments = intents.extract_intents(
        transcript, model, table, ranked, icfg, seed
    )
    return {
        "transcript_id": transcript.id,
        "segments": [segment_record(transcript, s) for s in segments],
    }


def stage_extract_intents(
    corpus_path: Path,
    annotations_path: Path,
    embeddings_path: Path,
    model_path: Path,
    concepts_path: Path,
    out_path: Path,
    cfg: PipelineConfig,
    jobs: int = 1,
    model: Optional[casual.CasualModel] = None,
) -> List[dict]:
    transcripts = _load_corpus(corpus_path, annotations_path)
    table = load_embeddings(embeddings_path)
    if model is None:
        model = casual.CasualModel.load(model_path)
    by_id = {
        record["transcript_id"]: _ranked_concepts_from_record(record)
        for record in _read_json_lines(concepts_path)
    }
    tasks = [
        (t, model, table, by_id.get(t.id, []), cfg.intents, cfg.seed)
        for t in transcripts
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_intents_worker, tasks))
    else:
        records = [_intents_worker(task) for task in tasks]
    _write_json_lines(records, out_path)
    return records


def stage_tag(
    corpus_path: Path,
    annotations_path: Path,
    categories_dir: Path,
    stopwords_path: Path,
    out_path: Path,
    cfg: PipelineConfig,
) -> List[dict]:
    transcripts = _load_corpus(corpus_path, annotations_path)
    stopwords = load_wordlist(stopwords_path)
    category_docs = _load_categories(categories_dir)
    vocabulary = tagger.build_vocabulary(
        category_docs, stopwords, cfg.tagger.whitelist()
    )
    selection = tagger.select_features(vocabulary, cfg.tagger.top_m)
    models = tagger.vectorize(vocabulary, selection, cfg.tagger.mode)
    records = []
    for t in transcripts:
        result = tagger.tag(t, models, stopwords, cfg.tagger.top_k)
        records.append(
            {
                "transcript_id": result.transcript_id,
                "low_confidence": result.low_confidence,
                "categories": [[cat, sim] for cat, sim in result.ranking],
            }
        )
    _write_json_lines(records, out_path)
    return records


def _check_label_coverage(
    labels: Dict[str, Dict[str, str]], predicted: Dict[str, set], kind: str
) -> None:
    for tid, per_item in labels.items():
        extra = set(per_item) - predicted.get(tid, set())
        if extra:
            raise InputError(
                f"expert labels cover {kind} never predicted for transcript "
                f"{tid!r}: {sorted(extra)}"
            )


def stage_evaluate(
    predictions_dir: Path,
    golden_path: Path,
    stopwords_path: Path,
    report_path: Path,
    cfg: PipelineConfig,
    expert_labels_path: Optional[Path] = None,
) -> metrics.MetricsReport:
    stopwords = load_wordlist(stopwords_path)
    golden = load_golden_set(golden_path)
    labels = (
        load_expert_labels(expert_labels_path)
        if expert_labels_path is not None
        else ExpertLabels(concepts={}, intents={})
    )

    concept_preds: Dict[str, List[str]] = {}
    intent_spans: Dict[str, List[Tuple[int, int]]] = {}
    intent_ids: Dict[str, set] = {}
    tag_rankings: Dict[str, List[str]] = {}

    concepts_file = predictions_dir / "concepts.jsonl"
    if concepts_file.exists():
        for record in _read_json_lines(concepts_file):
            concept_preds[record["transcript_id"]] = [
                c["phrase"] for c in record.get("concepts", [])
            ]
    intents_file = predictions_dir / "intents.jsonl"
    if intents_file.exists():
        for record in _read_json_lines(intents_file):
            tid = record["transcript_id"]
            intent_spans[tid] = [
                (s["start"], s["end"]) for s in record.get("segments", [])
            ]
            intent_ids[tid] = {s["id"] for s in record.get("segments", [])}
    tags_file = predictions_dir / "tags.jsonl"
    if tags_file.exists():
        for record in _read_json_lines(tags_file):
            tag_rankings[record["transcript_id"]] = [
                cat for cat, _sim in record.get("categories", [])
            ]

    _check_label_coverage(
        labels.concepts,
        {tid: set(phrases) for tid, phrases in concept_preds.items()},
        "concepts",
    )
    _check_label_coverage(labels.intents, intent_ids, "intent segments")

    per_transcript = []
    for tid in sorted(golden.entries):
        entry = golden.entries[tid]
        tm = metrics.TranscriptMetrics(transcript_id=tid)
        if tid in concept_preds:
            tm.concept = metrics.concept_pr(
                concept_preds[tid],
                entry.concepts,
                stopwords,
                expert_labels=labels.concepts.get(tid),
                min_shared_tokens=cfg.metrics.min_shared_tokens,
            )
        if tid in intent_spans:
            tm.intent = metrics.intent_pr(
                intent_spans[tid], entry.intent_sentences
            )
        if tid in tag_rankings and entry.category:
            tm.recall_at_k = metrics.recall_at_k(
                tag_rankings[tid], entry.category, cfg.metrics.recall_k
            )
        per_transcript.append(tm)

    all_concept_labels = {
        f"{tid}:{phrase}": label
        for tid, per_item in labels.concepts.items()
        for phrase, label in per_item.items()
    }
    all_intent_labels = {
        f"{tid}:{seg}": label
        for tid, per_item in labels.intents.items()
        for seg, label in per_item.items()
    }
    report = metrics.build_report(
        per_transcript,
        vcp=metrics.vcp_vip(all_concept_labels),
        vip=metrics.vcp_vip(all_intent_labels),
        k=cfg.metrics.recall_k,
    )
    report_path.write_text(
        json.dumps(report.to_dict(), sort_keys=True, indent=1) + "\n",
        encoding="utf-8",
    )
    report_path.with_suffix(".txt").write_text(
        metrics.render_table(report), encoding="utf-8"
    )
    return report


# ---------------------------------------------------------------------------
# Argument parsing and command wiring.


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convomine",
        description="Unsupervised information extraction from conversation "
                    "transcripts.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, default=None,
                       help="INI config file; defaults apply when omitted")
        p.add_argument("--seed", type=int, default=None,
                       help="override the configured random seed")

    p = sub.add_parser("train-casual", help="train the casual-talk classifier")
    common(p)
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--annotations", type=Path, required=True)
    p.add_argument("--stopwords", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("extract-concepts", help="run the key-concept funnel")
    common(p)
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--annotations", type=Path, required=True)
    p.add_argument("--embeddings", type=Path, required=True)
    p.add_argument("--stopwords", type=Path, required=True)
    p.add_argument("--english-vocab", type=Path, required=True)
    p.add_argument("--casual-model", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("extract-intents", help="extract open intent segments")
    common(p)
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--annotations", type=Path, required=True)
    p.add_argument("--embeddings", type=Path, required=True)
    p.add_argument("--casual-model", type=Path, required=True)
    p.add_argument("--concepts", type=Path, required=True,
                   help="output file of extract-concepts")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("tag", help="tag transcripts against category documents")
    common(p)
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--annotations", type=Path, required=True)
    p.add_argument("--categories", type=Path, required=True,
                   help="directory with one subdirectory of .txt docs per category")
    p.add_argument("--stopwords", type=Path, required=True)
    p.add_argument("--mode", choices=tagger.MODES, default=None,
                   help="vectorization mode; overrides config")
    p.add_argument("--k", type=int, default=None, help="top-k categories")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("evaluate", help="score predictions against the golden set")
    common(p)
    p.add_argument("--predictions", type=Path, required=True,
                   help="directory holding concepts.jsonl/intents.jsonl/tags.jsonl")
    p.add_argument("--golden", type=Path, required=True)
    p.add_argument("--stopwords", type=Path, required=True)
    p.add_argument("--expert-labels", type=Path, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--report", type=Path, required=True)

    p = sub.add_parser("pipeline", help="run all stages in order")
    common(p)
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--annotations", type=Path, required=True)
    p.add_argument("--embeddings", type=Path, required=True)
    p.add_argument("--stopwords", type=Path, required=True)
    p.add_argument("--english-vocab", type=Path, required=True)
    p.add_argument("--categories", type=Path, required=True)
    p.add_argument("--golden", type=Path, default=None)
    p.add_argument("--expert-labels", type=Path, default=None)
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--jobs", type=int, default=1)

    return parser


def _load_cfg(args: argparse.Namespace) -> PipelineConfig:
    cfg = load_config(args.config) if args.config is not None else PipelineConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if getattr(args, "mode", None) is not None:
        cfg.tagger.mode = args.mode
    if getattr(args, "k", None) is not None:
        if args.command == "tag":
            cfg.tagger.top_k = args.k
        else:
            cfg.metrics.recall_k = args.k
    cfg.validate()
    return cfg


def _require_files(manifest: Manifest, **paths: Optional[Path]) -> None:
    for name, path in paths.items():
        if path is None:
            continue
        if not path.exists():
            raise InputError(f"missing {name} file: {path}")
        if path.is_file():
            manifest.add_input(name, path)


def _run(args: argparse.Namespace) -> int:
    cfg = _load_cfg(args)
    manifest = Manifest(args.command, cfg)
    started = time.perf_counter()

    if args.command == "train-casual":
        _require_files(manifest, corpus=args.corpus, annotations=args.annotations,
                       stopwords=args.stopwords)
        stage_train_casual(args.corpus, args.annotations, args.stopwords,
                           args.out, cfg)
        manifest.add_timing("train-casual", time.perf_counter() - started)
        manifest.add_output("model", args.out)
        manifest.write(args.out.with_name(args.out.name + ".manifest.json"))

    elif args.command == "extract-concepts":
        _require_files(manifest, corpus=args.corpus, annotations=args.annotations,
                       embeddings=args.embeddings, stopwords=args.stopwords,
                       english_vocab=args.english_vocab,
                       casual_model=args.casual_model)
        stage_extract_concepts(
            args.corpus, args.annotations, args.embeddings, args.stopwords,
            args.english_vocab, args.casual_model, args.out, cfg, args.jobs,
        )
        manifest.add_timing("extract-concepts", time.perf_counter() - started)
        manifest.add_output("concepts", args.out)
        manifest.write(args.out.with_name(args.out.name + ".manifest.json"))

    elif args.command == "extract-intents":
        _require_files(manifest, corpus=args.corpus, annotations=args.annotations,
                       embeddings=args.embeddings, casual_model=args.casual_model,
                       concepts=args.concepts)
        stage_extract_intents(
            args.corpus, args.annotations, args.embeddings, args.casual_model,
            args.concepts, args.out, cfg, args.jobs,
        )
        manifest.add_timing("extract-intents", time.perf_counter() - started)
        manifest.add_output("intents", args.out)
        manifest.write(args.out.with_name(args.out.name + ".manifest.json"))

    elif args.command == "tag":
        _require_files(manifest, corpus=args.corpus, annotations=args.annotations,
                       stopwords=args.stopwords)
        if not args.categories.is_dir():
            raise InputError(f"missing categories directory: {args.categories}")
        manifest.add_input_dir("categories", args.categories, "*.txt")
        stage_tag(args.corpus, args.annotations, args.categories,
                  args.stopwords, args.out, cfg)
        manifest.add_timing("tag", time.perf_counter() - started)
        manifest.add_output("tags", args.out)
        manifest.write(args.out.with_name(args.out.name + ".manifest.json"))

    elif args.command == "evaluate":
        _require_files(manifest, golden=args.golden, stopwords=args.stopwords,
                       expert_labels=args.expert_labels)
        if not args.predictions.is_dir():
            raise InputError(f"missing predictions directory: {args.predictions}")
        stage_evaluate(args.predictions, args.golden, args.stopwords,
                       args.report, cfg, args.expert_labels)
        manifest.add_timing("evaluate", time.perf_counter() - started)
        manifest.add_output("report", args.report)
        manifest.add_output("report_table", args.report.with_suffix(".txt"))
        manifest.write(args.report.with_name(args.report.name + ".manifest.json"))

    elif args.command == "pipeline":
        _require_files(manifest, corpus=args.corpus, annotations=args.annotations,
                       embeddings=args.embeddings, stopwords=args.stopwords,
                       english_vocab=args.english_vocab, golden=args.golden,
                       expert_labels=args.expert_labels)
        if not args.categories.is_dir():
            raise InputError(f"missing categories directory: {args.categories}")
        manifest.add_input_dir("categories", args.categories, "*.txt")
        out_dir = args.out_dir
        out_dir.mkdir(parents=True, exist_ok=True)

        model_path = out_dir / "casual_model.json"
        concepts_path = out_dir / "concepts.jsonl"
        intents_path = out_dir / "intents.jsonl"
        tags_path = out_dir / "tags.jsonl"

        t0 = time.perf_counter()
        model = stage_train_casual(args.corpus, args.annotations,
                                   args.stopwords, model_path, cfg)
        manifest.add_timing("train-casual", time.perf_counter() - t0)

        t0 = time.perf_counter()
        stage_extract_concepts(
            args.corpus, args.annotations, args.embeddings, args.stopwords,
            args.english_vocab, model_path, concepts_path, cfg, args.jobs,
            model=model,
        )
        manifest.add_timing("extract-concepts", time.perf_counter() - t0)

        t0 = time.perf_counter()
        stage_extract_intents(
            args.corpus, args.annotations, args.embeddings, model_path,
            concepts_path, intents_path, cfg, args.jobs, model=model,
        )
        manifest.add_timing("extract-intents", time.perf_counter() - t0)

        t0 = time.perf_counter()
        stage_tag(args.corpus, args.annotations, args.categories,
                  args.stopwords, tags_path, cfg)
        manifest.add_timing("tag", time.perf_counter() - t0)

        manifest.add_output("casual_model", model_path)
        manifest.add_output("concepts", concepts_path)
        manifest.add_output("intents", intents_path)
        manifest.add_output("tags", tags_path)

        if args.golden is not None:
            t0 = time.perf_counter()
            report_path = out_dir / "report.json"
            stage_evaluate(out_dir, args.golden, args.stopwords, report_path,
                           cfg, args.expert_labels)
            manifest.add_timing("evaluate", time.perf_counter() - t0)
            manifest.add_output("report", report_path)
            manifest.add_output("report_table", report_path.with_suffix(".txt"))

        manifest.write(out_dir / "manifest.json")

    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _run(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
