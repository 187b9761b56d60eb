"""Unsupervised multi-label transcript tagging against category descriptions.

Category description documents are reduced to lemmatized token counts,
discriminatory tokens are selected with chi-square and mutual information,
categories become weight vectors (tf-idf, bag-of-words, or binary), and each
transcript is projected into the same space and matched by cosine similarity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np

from .corpus import Transcript
from .errors import InputError
from .textnorm import lemmatize, tokenize
from .vectors import cosine

MODES = ("tfidf", "bow", "binary")


@dataclass
class CategoryVocabulary:
    token_counts: Dict[str, Dict[str, int]]   # category -> token -> count
    doc_tokens: Dict[str, List[Set[str]]]     # category -> per-document token sets

    @property
    def categories(self) -> List[str]:
        return sorted(self.token_counts)

    @property
    def n_documents(self) -> int:
        return sum(len(docs) for docs in self.doc_tokens.values())


@dataclass
class FeatureSelection:
    chi_square: Dict[str, Dict[str, float]]          # token -> category -> stat
    mutual_information: Dict[str, Dict[str, float]]
    selected: List[str]                              # sorted global feature set


@dataclass
class CategoryModel:
    category_id: str
    features: List[str]
    weights: np.ndarray


@dataclass
class CategoryModels:
    features: List[str]
    idf: np.ndarray          # ln(category count / category frequency) per feature
    mode: str
    models: List[CategoryModel]


@dataclass
class TagResult:
    transcript_id: str
    ranking: List[Tuple[str, float]]
    low_confidence: bool = False


def _doc_terms(text: str, stopwords: Set[str]) -> List[str]:
    terms = []
    for tok in tokenize(text):
        if tok in stopwords:
            continue
        lemma = lemmatize(tok)
        if lemma in stopwords:
            continue
        terms.append(lemma)
    return terms


def filter_sections(text: str, whitelist: Set[str]) -> str:
    """Keep only whitelisted sections of a document.

    Sections start at lines of the form '# <name>'. Documents without any
    section header pass through whole; in sectioned documents, text before
    the first header is always kept.
    """
    if not whitelist:
        return text
    lines = text.splitlines()
    if not any(line.startswith("# ") for line in lines):
        return text
    kept: List[str] = []
    active = True  # preamble before the first header
    for line in lines:
        if line.startswith("# "):
            active = line[2:].strip().lower() in whitelist
            continue
        if active:
            kept.append(line)
    return "\n".join(kept)


def build_vocabulary(
    category_docs: Mapping[str, Sequence[str]],
    stopwords: Iterable[str],
    section_whitelist: Optional[Iterable[str]] = None,
) -> CategoryVocabulary:
    """Lowercased, stopword-filtered, lemmatized token counts per category.

    With a section whitelist, sectioned documents contribute only their
    whitelisted sections (category-specific parts of otherwise general
    documents); the semantics of section names are the operator's.
    """
    if len(category_docs) < 2:
        raise InputError(
            "build_vocabulary: at least 2 categories are required "
            "(feature selection is undefined otherwise)"
        )
    stop = set(stopwords)
    sections = {s.strip().lower() for s in section_whitelist or ()} - {""}
    token_counts: Dict[str, Dict[str, int]] = {}
    doc_tokens: Dict[str, List[Set[str]]] = {}
    for category, docs in category_docs.items():
        if not docs:
            raise InputError(
                f"build_vocabulary: category {category!r} has no documents"
            )
        counts: Dict[str, int] = {}
        per_doc: List[Set[str]] = []
        for doc in docs:
            terms = _doc_terms(filter_sections(doc, sections), stop)
            per_doc.append(set(terms))
            for term in terms:
                counts[term] = counts.get(term, 0) + 1
        token_counts[category] = counts
        doc_tokens[category] = per_doc
    return CategoryVocabulary(token_counts=token_counts, doc_tokens=doc_tokens)


def chi_square_statistic(a: int, b: int, c: int, d: int) -> float:
    """2x2 contingency chi-square; 0 whenever a marginal is degenerate.

    a: in-category docs with the token, b: out-of-category docs with it,
    c: in-category docs without it, d: out-of-category docs without it.
    """
    n = a + b + c + d
    denom = (a + b) * (c + d) * (a + c) * (b + d)
    if denom == 0:
        return 0.0
    return n * (a * d - b * c) ** 2 / denom


def mutual_information_statistic(a: int, b: int, c: int, d: int) -> float:
    """Pointwise MI of token presence with the category, clamped at 0."""
    n = a + b + c + d
    if a == 0 or (a + b) == 0 or (a + c) == 0 or n == 0:
        return 0.0
    return max(0.0, math.log(a * n / ((a + b) * (a + c))))


def select_features(
    vocabulary: CategoryVocabulary, top_m: int = 500
) -> FeatureSelection:
    """Keep tokens in any category's top_m by chi-square OR by MI."""
    if top_m < 1:
        raise InputError(f"select_features: top_m must be >= 1, got {top_m}")
    categories = vocabulary.categories
    n_total = vocabulary.n_documents
    all_tokens = sorted(
        {tok for counts in vocabulary.token_counts.values() for tok in counts}
    )
    doc_freq: Dict[str, Dict[str, int]] = {
        cat: {} for cat in categories
    }
    for cat in categories:
        for doc in vocabulary.doc_tokens[cat]:
            for tok in doc:
                doc_freq[cat][tok] = doc_freq[cat].get(tok, 0) + 1

    chi: Dict[str, Dict[str, float]] = {t: {} for t in all_tokens}
    mi: Dict[str, Dict[str, float]] = {t: {} for t in all_tokens}
    for cat in categories:
        n_cat = len(vocabulary.doc_tokens[cat])
        for tok in all_tokens:
            a = doc_freq[cat].get(tok, 0)
            b = sum(doc_freq[other].get(tok, 0) for other in categories) - a
            c = n_cat - a
            d = (n_total - n_cat) - b
            chi[tok][cat] = chi_square_statistic(a, b, c, d)
            mi[tok][cat] = mutual_information_statistic(a, b, c, d)

    selected: Set[str] = set()
    for cat in categories:
        by_chi = sorted(all_tokens, key=lambda t: (-chi[t][cat], t))
        by_mi = sorted(all_tokens, key=lambda t: (-mi[t][cat], t))
        selected.update(by_chi[:top_m])
        selected.update(by_mi[:top_m])
    return FeatureSelection(
        chi_square=chi, mutual_information=mi, selected=sorted(selected)
    )


def vectorize(
    vocabulary: CategoryVocabulary,
    selection: FeatureSelection,
    mode: str = "tfidf",
) -> CategoryModels:
    """Represent each category over the global selected-feature index."""
    if mode not in MODES:
        raise InputError(f"vectorize: unknown mode {mode!r}")
    categories = vocabulary.categories
    features = list(selection.selected)
    n_categories = len(categories)
    cf = np.array(
        [
            sum(
                1
                for cat in categories
                if vocabulary.token_counts[cat].get(tok, 0) > 0
            )
            for tok in features
        ]
    )
    idf = np.log(n_categories / np.maximum(cf, 1))

    models = []
    for cat in categories:
        tf = np.array(
            [float(vocabulary.token_counts[cat].get(tok, 0)) for tok in features]
        )
        if mode == "tfidf":
            weights = tf * idf
        elif mode == "bow":
            weights = tf
        else:
            weights = (tf > 0).astype(float)
        models.append(
            CategoryModel(category_id=cat, features=features, weights=weights)
        )
    return CategoryModels(features=features, idf=idf, mode=mode, models=models)


def project_transcript(
    transcript: Transcript,
    models: CategoryModels,
    stopwords: Iterable[str],
) -> np.ndarray:
    """Project a transcript into the category feature space.

    Same pipeline as the categories: lowercase, stopword removal, lemmas
    (taken from the annotation layer), restriction to selected features, and
    the models' vectorization mode with category-level idf.
    """
    stop = set(stopwords)
    index = {tok: i for i, tok in enumerate(models.features)}
    tf = np.zeros(len(models.features))
    for sent in transcript.sentences:
        for token in sent.tokens:
            surface = token.surface.lower()
            if not surface.isalpha() or surface in stop:
                continue
            lemma = token.lemma.lower()
            if lemma in stop:
                continue
            i = index.get(lemma)
            if i is not None:
                tf[i] += 1.0
    if models.mode == "tfidf":
        return tf * models.idf
    if models.mode == "bow":
        return tf
    return (tf > 0).astype(float)


def tag(
    transcript: Transcript,
    models: CategoryModels,
    stopwords: Iterable[str],
    k: int = 2,
) -> TagResult:
    """Rank categories for one transcript by cosine similarity, top k."""
    if k < 1:
        raise InputError(f"tag: k must be >= 1, got {k}")
    vec = project_transcript(transcript, models, stopwords)
    sims = [
        (model.category_id, cosine(vec, model.weights))
        for model in models.models
    ]
    sims.sort(key=lambda pair: (-pair[1], pair[0]))
    low_confidence = not np.any(vec)
    return TagResult(
        transcript_id=transcript.id,
        ranking=sims[: min(k, len(sims))],
        low_confidence=bool(low_confidence),
    )
