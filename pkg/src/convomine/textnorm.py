"""Plain-text normalization helpers: tokenizing, stopword lists, rule lemmatizer.

Transcript tokens arrive with lemmas from the annotation sidecar; everything
that starts from raw text (category description documents, golden-set phrases,
predicted phrase strings) goes through the rule lemmatizer below so both sides
of a comparison are normalized the same way.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import FrozenSet, Iterable, List

from .errors import InputError

_TOKEN_RE = re.compile(r"[a-z]+(?:'[a-z]+)?")

VOWELS = "aeiou"

# Irregular forms plus fixture-relevant words the suffix rules get wrong.
IRREGULAR_LEMMAS = {
    "am": "be", "is": "be", "are": "be", "was": "be", "were": "be",
    "been": "be", "being": "be",
    "has": "have", "had": "have", "having": "have",
    "does": "do", "did": "do", "done": "do", "doing": "do",
    "goes": "go", "went": "go", "gone": "go", "going": "go",
    "made": "make", "making": "make",
    "said": "say", "saying": "say",
    "got": "get", "gotten": "get", "getting": "get",
    "took": "take", "taken": "take", "taking": "take",
    "gave": "give", "given": "give", "giving": "give",
    "came": "come", "coming": "come",
    "saw": "see", "seen": "see", "seeing": "see",
    "knew": "know", "known": "know",
    "thought": "think", "bought": "buy", "brought": "bring",
    "sent": "send", "paid": "pay", "found": "find", "felt": "feel",
    "kept": "keep", "left": "leave", "told": "tell", "met": "meet",
    "lost": "lose", "held": "hold", "spoke": "speak", "spoken": "speak",
    "wrote": "write", "written": "write", "writing": "write",
    "cancelled": "cancel", "cancelling": "cancel",
    "travelled": "travel", "travelling": "travel",
    "men": "man", "women": "woman", "children": "child",
    "people": "person", "feet": "foot", "teeth": "tooth",
}


def load_wordlist(path: str | Path) -> FrozenSet[str]:
    """Load a one-token-per-line word list, lowercased; '#' lines are comments."""
    words = set()
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read word list {path}: {exc}") from exc
    for line in raw.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.add(line.lower())
    return frozenset(words)


def tokenize(text: str) -> List[str]:
    """Lowercase a raw string and split it into alphabetic tokens."""
    return _TOKEN_RE.findall(text.lower())


def _undouble(stem: str) -> str:
    # 'll' and 'ss' endings are usually legitimate (call, pass); other doubled
    # consonants come from inflection doubling (planned, stopped).
    if (
        len(stem) >= 3
        and stem[-1] == stem[-2]
        and stem[-1] not in VOWELS
        and stem[-1] not in "ls"
    ):
        return stem[:-1]
    return stem


def lemmatize(token: str) -> str:
    """Map an English token to a base form with a small rule set.

    Approximate by design: the same function normalizes both sides of every
    comparison, so systematic quirks cancel out.
    """
    w = token.lower()
    if w in IRREGULAR_LEMMAS:
        return IRREGULAR_LEMMAS[w]
    if len(w) < 4:
        return w
    if w.endswith("ies") and len(w) >= 5:
        return w[:-3] + "y"
    if w.endswith("sses"):
        return w[:-2]
    if w.endswith(("ches", "shes", "xes", "zes")):
        return w[:-2]
    if w.endswith(("ss", "us", "is")):
        return w
    if w.endswith("s") and not w.endswith("'s"):
        return w[:-1]
    if w.endswith("'s"):
        return w[:-2]
    if w.endswith("ied") and len(w) >= 5:
        return w[:-3] + "y"
    if w.endswith("eed") and len(w) >= 5:
        return w[:-1]
    if w.endswith("ed") and len(w) >= 5:
        stem = _undouble(w[:-2])
        if stem.endswith("v"):
            return stem + "e"
        return stem
    if w.endswith("ing") and len(w) >= 6:
        stem = _undouble(w[:-3])
        if stem.endswith("v"):
            return stem + "e"
        return stem
    return w


def normalize_phrase(phrase: str, stopwords: Iterable[str]) -> FrozenSet[str]:
    """Reduce a phrase to its set of lemmatized, non-stopword tokens."""
    stop = set(stopwords)
    return frozenset(
        lemma
        for tok in tokenize(phrase)
        if tok not in stop
        for lemma in [lemmatize(tok)]
        if lemma not in stop
    )
