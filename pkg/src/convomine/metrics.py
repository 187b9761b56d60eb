"""Evaluation with partial-match and exact-sentence precision/recall.

Concept matching is partial: both sides are reduced to base-form token sets
with stopwords removed, and one shared token (configurable) makes a match.
Intent matching treats each sentence as a single entity. Recall@k covers
category tagging with a single gold category, and the valuable-concept /
valuable-intent percentages summarize expert usefulness labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .errors import InputError
from .textnorm import normalize_phrase

USEFUL = "useful"
NOISY = "noisy"


@dataclass
class MatchCounts:
    """A: unmatched predictions labeled noisy, B: unmatched labeled useful or
    unlabeled, C: predictions matched to ground truth, D: unmatched gold.

    A + B + C is always the prediction count. C + D is the recall denominator;
    with partial matching it equals the gold count only when matched items
    pair up one to one, because C counts predictions, not gold phrases.
    """
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if min(self.a, self.b, self.c, self.d) < 0:
            raise InputError("MatchCounts: tallies must be non-negative")

    @property
    def predicted(self) -> int:
        return self.a + self.b + self.c

    @property
    def gold(self) -> int:
        return self.c + self.d


@dataclass
class PRResult:
    counts: MatchCounts
    precision: float
    recall: float

    @property
    def f1(self) -> float:
        return f1_score(self.precision, self.recall)


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def concept_pr(
    predicted: Sequence[str],
    gold: Sequence[str],
    stopwords: Iterable[str],
    expert_labels: Optional[Mapping[str, str]] = None,
    min_shared_tokens: int = 1,
) -> PRResult:
    """Partial-match concept precision/recall.

    Both sides are normalized to base-form, stopword-free token sets; a
    prediction matches a gold phrase when they share at least
    min_shared_tokens tokens.
    """
    if min_shared_tokens < 1:
        raise InputError("concept_pr: min_shared_tokens must be >= 1")
    stop = set(stopwords)
    labels = expert_labels or {}
    pred_sets = [(p, normalize_phrase(p, stop)) for p in predicted]
    gold_sets = [normalize_phrase(g, stop) for g in gold]

    matched_gold = [False] * len(gold_sets)
    a = b = c = 0
    for phrase, pset in pred_sets:
        hit = False
        for gi, gset in enumerate(gold_sets):
            if len(pset & gset) >= min_shared_tokens:
                hit = True
                matched_gold[gi] = True
        if hit:
            c += 1
        elif labels.get(phrase) == NOISY:
            a += 1
        else:
            b += 1
    d = matched_gold.count(False)

    counts = MatchCounts(a=a, b=b, c=c, d=d)
    precision = c / counts.predicted if counts.predicted else 0.0
    recall = c / counts.gold if counts.gold else 0.0
    return PRResult(counts=counts, precision=precision, recall=recall)


def intent_pr(
    predicted_spans: Iterable[Tuple[int, int]],
    gold_sentence_indices: Iterable[int],
) -> PRResult:
    """Exact-sentence intent precision/recall.

    Predicted segments expand to their deduplicated sentence index set and
    each sentence counts as one entity.
    """
    predicted: Set[int] = set()
    for start, end in predicted_spans:
        predicted.update(range(start, end + 1))
    gold = set(gold_sentence_indices)

    c = len(predicted & gold)
    counts = MatchCounts(a=0, b=len(predicted) - c, c=c, d=len(gold) - c)
    precision = c / len(predicted) if predicted else 0.0
    recall = c / len(gold) if gold else 0.0
    return PRResult(counts=counts, precision=precision, recall=recall)


def recall_at_k(
    predicted_ranked_categories: Sequence[str], gold_category: str, k: int
) -> float:
    """1.0 iff the single gold category appears in the top-k predictions."""
    if k < 1:
        raise InputError(f"recall_at_k: k must be >= 1, got {k}")
    return 1.0 if gold_category in predicted_ranked_categories[:k] else 0.0


def vcp_vip(expert_labels: Mapping[str, str]) -> Optional[float]:
    """Percentage of labeled predictions the expert called useful.

    Undefined (None) with zero labeled items.
    """
    bad = set(expert_labels.values()) - {USEFUL, NOISY}
    if bad:
        raise InputError(f"vcp_vip: invalid labels {sorted(bad)}")
    if not expert_labels:
        return None
    useful = sum(1 for label in expert_labels.values() if label == USEFUL)
    return 100.0 * useful / len(expert_labels)


# ---------------------------------------------------------------------------
# Corpus-level report.


@dataclass
class TranscriptMetrics:
    transcript_id: str
    concept: Optional[PRResult] = None
    intent: Optional[PRResult] = None
    recall_at_k: Optional[float] = None


@dataclass
class MetricsReport:
    per_transcript: List[TranscriptMetrics]
    macro: Dict[str, float]
    vcp: Optional[float]
    vip: Optional[float]
    k: int

    def to_dict(self) -> Dict:
        rows = []
        for tm in self.per_transcript:
            row: Dict = {"transcript_id": tm.transcript_id}
            for name, pr in (("concept", tm.concept), ("intent", tm.intent)):
                if pr is not None:
                    row[name] = {
                        "a": pr.counts.a, "b": pr.counts.b,
                        "c": pr.counts.c, "d": pr.counts.d,
                        "precision": pr.precision,
                        "recall": pr.recall,
                        "f1": pr.f1,
                    }
            if tm.recall_at_k is not None:
                row[f"recall_at_{self.k}"] = tm.recall_at_k
            rows.append(row)
        return {
            "per_transcript": rows,
            "macro": self.macro,
            "vcp": self.vcp,
            "vip": self.vip,
            "k": self.k,
        }


def _macro(values: List[float]) -> Optional[float]:
    return sum(values) / len(values) if values else None


def build_report(
    per_transcript: List[TranscriptMetrics],
    vcp: Optional[float],
    vip: Optional[float],
    k: int,
) -> MetricsReport:
    macro: Dict[str, float] = {}
    for name, getter in (("concept", lambda t: t.concept),
                         ("intent", lambda t: t.intent)):
        prs = [getter(t) for t in per_transcript if getter(t) is not None]
        if prs:
            macro[f"{name}_precision"] = _macro([p.precision for p in prs])
            macro[f"{name}_recall"] = _macro([p.recall for p in prs])
            macro[f"{name}_f1"] = _macro([p.f1 for p in prs])
    recalls = [t.recall_at_k for t in per_transcript if t.recall_at_k is not None]
    if recalls:
        macro[f"recall_at_{k}"] = _macro(recalls)
    return MetricsReport(
        per_transcript=per_transcript, macro=macro, vcp=vcp, vip=vip, k=k
    )


def render_table(report: MetricsReport) -> str:
    """Aligned plain-text table for the report."""
    headers = ["transcript", "c_prec", "c_rec", "c_f1",
               "i_prec", "i_rec", "i_f1", f"r@{report.k}"]
    rows = []
    for tm in report.per_transcript:
        def fmt(pr: Optional[PRResult], attr: str) -> str:
            if pr is None:
                return "-"
            value = getattr(pr, attr) if attr != "f1" else pr.f1
            return f"{value:.3f}"
        rows.append([
            tm.transcript_id,
            fmt(tm.concept, "precision"), fmt(tm.concept, "recall"),
            fmt(tm.concept, "f1"),
            fmt(tm.intent, "precision"), fmt(tm.intent, "recall"),
            fmt(tm.intent, "f1"),
            f"{tm.recall_at_k:.1f}" if tm.recall_at_k is not None else "-",
        ])
    macro_row = ["MACRO"]
    for key in ("concept_precision", "concept_recall", "concept_f1",
                "intent_precision", "intent_recall", "intent_f1",
                f"recall_at_{report.k}"):
        value = report.macro.get(key)
        macro_row.append(f"{value:.3f}" if value is not None else "-")
    rows.append(macro_row)

    widths = [
        max(len(headers[i]), *(len(r[i]) for r in rows))
        for i in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    if report.vcp is not None:
        lines.append(f"VCP: {report.vcp:.1f}%")
    if report.vip is not None:
        lines.append(f"VIP: {report.vip:.1f}%")
    return "\n".join(lines) + "\n"
