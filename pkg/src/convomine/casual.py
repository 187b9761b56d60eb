"""Casual-talk sentence classifier trained from auto-generated labels.

Labels come free from call structure: the opening sentences of a call are
casual talk, and an equal number of sentences sampled from the rest count as
business talk. A bagged ensemble of depth-limited decision trees is then
tuned for high precision so that no valuable business sentence gets removed.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .corpus import Sentence, Transcript
from .errors import InputError

CASUAL = "casual"
BUSINESS = "business"

FEATURE_NAMES = (
    "position", "n_tokens", "n_stopwords", "n_entities", "n_person", "n_geo",
)

THRESHOLD_EPSILON = 1e-9


@dataclass(frozen=True)
class CasualFeatures:
    position: float
    n_tokens: int
    n_stopwords: int
    n_entities: int
    n_person: int
    n_geo: int

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.position, self.n_tokens, self.n_stopwords,
             self.n_entities, self.n_person, self.n_geo],
            dtype=float,
        )


@dataclass
class LabeledSentence:
    transcript: Transcript
    sentence: Sentence
    label: str


def auto_label(
    corpus: Sequence[Transcript], head_n: int, seed: int
) -> List[LabeledSentence]:
    """Build a balanced training set from call structure alone.

    Per transcript: the first ``head_n`` sentences are labeled casual and
    ``head_n`` sentences sampled (seeded) from the remainder are labeled
    business. Transcripts too short to supply both halves contribute nothing
    and are skipped with a warning.
    """
    if head_n < 1:
        raise InputError(f"auto_label: head_n must be >= 1, got {head_n}")
    rng = np.random.default_rng(seed)
    labeled: List[LabeledSentence] = []
    for transcript in corpus:
        n = len(transcript.sentences)
        if n < 2 * head_n:
            warnings.warn(
                f"auto_label: transcript {transcript.id!r} has {n} sentences, "
                f"needs at least {2 * head_n}; skipped",
                stacklevel=2,
            )
            continue
        for sent in transcript.sentences[:head_n]:
            labeled.append(LabeledSentence(transcript, sent, CASUAL))
        rest = list(range(head_n, n))
        picks = rng.choice(len(rest), size=head_n, replace=False)
        for offset in sorted(int(p) for p in picks):
            labeled.append(
                LabeledSentence(transcript, transcript.sentences[rest[offset]],
                                BUSINESS)
            )
    return labeled


def featurize(
    sentence: Sentence, transcript: Transcript, stopword_list: Iterable[str]
) -> CasualFeatures:
    if not sentence.annotated:
        raise InputError(
            f"featurize: transcript {transcript.id!r} sentence "
            f"{sentence.index} is not annotated"
        )
    stop = set(stopword_list)
    n_sentences = len(transcript.sentences)
    position = (
        sentence.index / (n_sentences - 1) if n_sentences > 1 else 0.0
    )
    spans = sentence.entity_spans()
    return CasualFeatures(
        position=position,
        n_tokens=len(sentence.tokens),
        n_stopwords=sum(1 for t in sentence.tokens if t.surface.lower() in stop),
        n_entities=len(spans),
        n_person=sum(1 for label, _, _ in spans if label == "PERSON"),
        n_geo=sum(1 for label, _, _ in spans if label == "LOCATION"),
    )


# ---------------------------------------------------------------------------
# Bagged depth-limited decision trees, dependency-free.


@dataclass
class TreeNode:
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None
    prob: Optional[float] = None  # leaf probability of the casual class

    def predict(self, x: np.ndarray) -> float:
        node = self
        while node.prob is None:
            node = node.left if x[node.feature] < node.threshold else node.right
        return node.prob

    def to_dict(self) -> dict:
        if self.prob is not None:
            return {"prob": self.prob}
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @staticmethod
    def from_dict(data: dict) -> "TreeNode":
        if "prob" in data:
            return TreeNode(prob=float(data["prob"]))
        return TreeNode(
            feature=int(data["feature"]),
            threshold=float(data["threshold"]),
            left=TreeNode.from_dict(data["left"]),
            right=TreeNode.from_dict(data["right"]),
        )


def _gini(y: np.ndarray) -> float:
    if y.size == 0:
        return 0.0
    p = float(y.mean())
    return 2.0 * p * (1.0 - p)


def _best_split(X: np.ndarray, y: np.ndarray) -> Optional[Tuple[int, float, float]]:
    n = y.size
    base = _gini(y)
    best: Optional[Tuple[int, float, float]] = None
    for f in range(X.shape[1]):
        values = np.unique(X[:, f])
        if values.size < 2:
            continue
        for threshold in (values[:-1] + values[1:]) / 2.0:
            mask = X[:, f] < threshold
            n_left = int(mask.sum())
            if n_left == 0 or n_left == n:
                continue
            cost = (n_left * _gini(y[mask]) + (n - n_left) * _gini(y[~mask])) / n
            if cost < base - 1e-12 and (best is None or cost < best[2] - 1e-12):
                best = (f, float(threshold), cost)
    return best


def _grow(X: np.ndarray, y: np.ndarray, depth: int, max_depth: int) -> TreeNode:
    if depth >= max_depth or y.size < 2 or y.min() == y.max():
        return TreeNode(prob=float(y.mean()))
    split = _best_split(X, y)
    if split is None:
        return TreeNode(prob=float(y.mean()))
    f, threshold, _ = split
    mask = X[:, f] < threshold
    return TreeNode(
        feature=f,
        threshold=threshold,
        left=_grow(X[mask], y[mask], depth + 1, max_depth),
        right=_grow(X[~mask], y[~mask], depth + 1, max_depth),
    )


@dataclass
class CasualModel:
    trees: List[TreeNode]
    threshold: float
    fail_safe: bool
    stopwords: FrozenSet[str]
    precision_target: float

    def score(self, features: CasualFeatures) -> float:
        return self.score_array(features.as_array())

    def score_array(self, x: np.ndarray) -> float:
        return float(np.mean([tree.predict(x) for tree in self.trees]))

    def is_casual(self, features: CasualFeatures) -> bool:
        return self.score(features) >= self.threshold

    def save(self, path: str | Path) -> None:
        payload = {
            "feature_names": list(FEATURE_NAMES),
            "threshold": self.threshold,
            "fail_safe": self.fail_safe,
            "precision_target": self.precision_target,
            "stopwords": sorted(self.stopwords),
            "trees": [t.to_dict() for t in self.trees],
        }
        Path(path).write_text(
            json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8"
        )

    @staticmethod
    def load(path: str | Path) -> "CasualModel":
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
            return CasualModel(
                trees=[TreeNode.from_dict(t) for t in payload["trees"]],
                threshold=float(payload["threshold"]),
                fail_safe=bool(payload["fail_safe"]),
                stopwords=frozenset(payload["stopwords"]),
                precision_target=float(payload["precision_target"]),
            )
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise InputError(f"cannot load casual model {path}: {exc}") from exc


@dataclass
class TrainReport:
    train_indices: List[int]
    validation_indices: List[int]
    validation_precision: Optional[float]
    validation_recall: Optional[float]
    threshold: float
    fail_safe: bool


def _stratified_split(
    labels: np.ndarray, seed: int
) -> Tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    train: List[int] = []
    val: List[int] = []
    for cls in (0, 1):
        idx = np.where(labels == cls)[0]
        perm = idx[rng.permutation(idx.size)]
        n_val = max(1, idx.size // 5)
        val.extend(int(i) for i in perm[:n_val])
        train.extend(int(i) for i in perm[n_val:])
    return np.array(sorted(train)), np.array(sorted(val))


def _precision_recall_at(
    scores: np.ndarray, labels: np.ndarray, threshold: float
) -> Tuple[Optional[float], float]:
    predicted = scores >= threshold
    tp = int(np.sum(predicted & (labels == 1)))
    fp = int(np.sum(predicted & (labels == 0)))
    pos = int(np.sum(labels == 1))
    precision = tp / (tp + fp) if tp + fp > 0 else None
    recall = tp / pos if pos > 0 else 0.0
    return precision, recall


def train(
    labeled: Sequence[LabeledSentence],
    precision_target: float,
    seed: int,
    stopword_list: Iterable[str],
    n_trees: int = 25,
    max_depth: int = 4,
) -> Tuple[CasualModel, TrainReport]:
    """Fit the bagged ensemble and pick the casual-score decision threshold.

    The threshold maximizes recall subject to precision >= precision_target on
    a held-out 80/20 split. If no threshold attains the target the model goes
    fail-safe: the threshold is pushed above the maximum attainable score so
    every sentence is kept as business.
    """
    if not 0.0 < precision_target <= 1.0:
        raise InputError("train: precision_target must be in (0, 1]")
    stop = frozenset(s.lower() for s in stopword_list)
    X = np.array(
        [featurize(ls.sentence, ls.transcript, stop).as_array() for ls in labeled]
    )
    y = np.array([1 if ls.label == CASUAL else 0 for ls in labeled])
    if y.size == 0 or y.min() == y.max():
        raise InputError("train: both casual and business examples are required")

    train_idx, val_idx = _stratified_split(y, seed)
    rng = np.random.default_rng(seed)
    trees = []
    for _ in range(n_trees):
        bag = rng.integers(0, train_idx.size, size=train_idx.size)
        rows = train_idx[bag]
        trees.append(_grow(X[rows], y[rows], 0, max_depth))

    model = CasualModel(
        trees=trees,
        threshold=0.0,
        fail_safe=False,
        stopwords=stop,
        precision_target=precision_target,
    )
    val_scores = np.array([model.score_array(X[i]) for i in val_idx])
    val_labels = y[val_idx]

    best: Optional[Tuple[float, float, float]] = None  # recall, precision, threshold
    for threshold in sorted(set(float(s) for s in val_scores)):
        precision, recall = _precision_recall_at(val_scores, val_labels, threshold)
        if precision is None or precision < precision_target:
            continue
        key = (recall, precision, threshold)
        if best is None or key > best:
            best = key

    if best is None:
        # Maximum attainable ensemble score is 1.0, so this keeps everything.
        model.threshold = 1.0 + THRESHOLD_EPSILON
        model.fail_safe = True
        val_precision: Optional[float] = None
        val_recall: Optional[float] = None
    else:
        val_recall, val_precision, model.threshold = best

    report = TrainReport(
        train_indices=[int(i) for i in train_idx],
        validation_indices=[int(i) for i in val_idx],
        validation_precision=val_precision,
        validation_recall=val_recall,
        threshold=model.threshold,
        fail_safe=model.fail_safe,
    )
    return model, report


def classify(
    model: CasualModel, sentence: Sentence, transcript: Transcript
) -> Tuple[str, float]:
    """Label one sentence; casual iff score >= threshold."""
    features = featurize(sentence, transcript, model.stopwords)
    score = model.score(features)
    return (CASUAL if score >= model.threshold else BUSINESS), score


def classify_transcript(model: CasualModel, transcript: Transcript) -> List[bool]:
    """Per-sentence casual flags for one transcript."""
    return [
        classify(model, sent, transcript)[0] == CASUAL
        for sent in transcript.sentences
    ]
