"""Annotation toolchains: the deterministic builtin and an optional spaCy one.

A toolchain turns one raw sentence string into token rows (surface, lemma,
POS, head, dep, NER). The builtin needs no models and is fully deterministic;
it guarantees the structural invariants the core validates (exactly one root,
root heads itself, heads in range). The spaCy backend delegates to an
installed model and maps its output onto the same row shape.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional


class ToolchainError(Exception):
    """The requested external toolchain is not installed or not resolvable."""


@dataclass
class TokenRow:
    surface: str
    lemma: str
    upos: str
    head: int
    dep_rel: str
    ner: Optional[str] = None


_TOKEN_RE = re.compile(r"[A-Za-z]+(?:'[A-Za-z]+)?|\d+|[^\sA-Za-z\d]")

DETERMINERS = {"a", "an", "the", "this", "that", "these", "those", "every",
               "each", "some", "any", "no"}
PRONOUNS = {"i", "we", "you", "he", "she", "it", "they", "me", "us", "them",
            "him", "her", "my", "our", "your", "his", "its", "their",
            "everyone", "someone", "anything", "something", "who", "whom",
            "what", "which"}
AUXILIARIES = {"am", "is", "are", "was", "were", "be", "been", "being",
               "do", "does", "did", "have", "has", "had", "can", "could",
               "will", "would", "shall", "should", "may", "might", "must"}
ADPOSITIONS = {"in", "on", "at", "of", "for", "with", "from", "by", "under",
               "over", "into", "about", "after", "before", "between", "till",
               "until", "during", "near", "without"}
COORDINATORS = {"and", "or", "but", "plus", "nor"}
SUBORDINATORS = {"if", "because", "while", "although", "though", "since",
                 "whereas", "unless", "so"}
INTERJECTIONS = {"hello", "hi", "hey", "yeah", "yes", "no", "um", "uh",
                 "okay", "ok", "please", "thanks", "sure", "wow", "oops"}
ADVERBS = {"when", "where", "why", "how", "not", "also", "very", "really",
           "still", "already", "again", "here", "there", "now", "then",
           "soon", "shortly", "overnight", "early", "late", "away", "back",
           "often", "never", "always"}
NUMBER_WORDS = {"zero", "one", "two", "three", "four", "five", "six",
                "seven", "eight", "nine", "ten", "eleven", "twelve",
                "twenty", "thirty", "forty", "fifty", "sixty", "seventy",
                "eighty", "ninety", "hundred", "thousand", "million"}
COMMON_VERBS = {"want", "need", "make", "get", "go", "see", "know", "take",
                "send", "check", "call", "cancel", "book", "reserve", "help",
                "work", "use", "find", "give", "tell", "pay", "update",
                "track", "print", "reset", "restore", "move", "schedule",
                "explain", "report", "dispute", "settle", "process", "ask",
                "say", "think", "come", "keep", "let", "start", "stop",
                "open", "close", "show", "read", "run", "arrive", "ship",
                "deliver", "expire", "confirm", "include", "cost", "cover",
                "fix", "log", "reach", "grab", "talk", "thank", "look",
                "sound", "load", "mention", "own", "visit", "rain", "play",
                "weigh", "land", "clear", "end", "total", "list", "appear",
                "crash", "freeze", "matter", "change", "charge"}

PERSON_NAMES = {"john", "mary", "smith", "alice", "bob", "carol", "david",
                "emma", "frank", "grace", "henry", "james", "karen", "linda",
                "michael", "nancy", "oliver", "patricia", "robert", "sarah",
                "thomas", "william"}
LOCATION_NAMES = {"boston", "dallas", "chicago", "seattle", "denver",
                  "austin", "miami", "portland", "atlanta", "london",
                  "paris", "tokyo", "berlin", "york"}
TIME_WORDS = {"monday", "tuesday", "wednesday", "thursday", "friday",
              "saturday", "sunday", "january", "february", "march", "april",
              "may", "june", "july", "august", "september", "october",
              "november", "december", "today", "tomorrow", "yesterday",
              "tonight", "noon", "midnight", "morning", "evening",
              "afternoon", "weekend"}


def tokenize(text: str) -> List[str]:
    return _TOKEN_RE.findall(text)


def _lemma(word: str, upos: str) -> str:
    w = word.lower()
    irregular = {
        "am": "be", "is": "be", "are": "be", "was": "be", "were": "be",
        "been": "be", "being": "be", "has": "have", "had": "have",
        "does": "do", "did": "do", "went": "go", "made": "make",
        "said": "say", "got": "get", "na": "to", "gon": "go",
    }
    if w in irregular:
        return irregular[w]
    if upos not in ("NOUN", "VERB", "PROPN", "ADJ") or len(w) < 4:
        return w
    if w.endswith("ies") and len(w) >= 5:
        return w[:-3] + "y"
    if w.endswith(("ches", "shes", "xes", "zes", "sses")):
        return w[:-2]
    if w.endswith("s") and not w.endswith(("ss", "us", "is")):
        return w[:-1]
    if w.endswith("ed") and len(w) >= 5:
        stem = w[:-2]
        if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in "aeiouls":
            stem = stem[:-1]
        return stem + "e" if stem.endswith("v") else stem
    if w.endswith("ing") and len(w) >= 6:
        stem = w[:-3]
        if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in "aeiouls":
            stem = stem[:-1]
        return stem + "e" if stem.endswith("v") else stem
    return w


def _tag(words: List[str]) -> List[str]:
    tags = []
    for i, word in enumerate(words):
        w = word.lower()
        if not any(ch.isalnum() for ch in word):
            tags.append("PUNCT")
        elif word.isdigit() or w in NUMBER_WORDS:
            tags.append("NUM")
        elif w in DETERMINERS:
            tags.append("DET")
        elif w in AUXILIARIES:
            tags.append("AUX")
        elif w in PRONOUNS:
            tags.append("PRON")
        elif w == "to":
            nxt = words[i + 1].lower() if i + 1 < len(words) else ""
            tags.append("PART" if nxt in COMMON_VERBS else "ADP")
        elif w in ADPOSITIONS:
            tags.append("ADP")
        elif w in COORDINATORS:
            tags.append("CCONJ")
        elif w in SUBORDINATORS:
            tags.append("SCONJ")
        elif w in INTERJECTIONS:
            tags.append("INTJ")
        elif w in ADVERBS or w.endswith("ly"):
            tags.append("ADV")
        elif w in PERSON_NAMES or w in LOCATION_NAMES or w in TIME_WORDS:
            tags.append("PROPN")
        elif w in COMMON_VERBS:
            tags.append("VERB")
        elif len(w) > 4 and (
            w[:-1] in COMMON_VERBS or w[:-2] in COMMON_VERBS
            or (w.endswith("ing") and w[:-3] in COMMON_VERBS)
        ):
            tags.append("VERB")
        elif w.endswith(("ous", "ful", "ive", "less", "able")):
            tags.append("ADJ")
        else:
            tags.append("NOUN")
    return tags


def _ner(words: List[str]) -> List[Optional[str]]:
    labels: List[Optional[str]] = []
    for word in words:
        w = word.lower()
        if w in PERSON_NAMES:
            labels.append("PERSON")
        elif w in LOCATION_NAMES:
            labels.append("LOCATION")
        elif w in TIME_WORDS:
            labels.append("TIME")
        elif word.isdigit():
            labels.append("QUANTITY")
        else:
            labels.append(None)
    return labels


class BuiltinToolchain:
    """Lexicon-and-rule annotator; no external models, fully deterministic."""

    name = "builtin"

    def annotate(self, text: str) -> List[TokenRow]:
        words = tokenize(text)
        if not words:
            return []
        tags = _tag(words)
        ner = _ner(words)

        root = next((i for i, t in enumerate(tags) if t == "VERB"), None)
        if root is None:
            root = next(
                (i for i, t in enumerate(tags) if t in ("NOUN", "PROPN")),
                None,
            )
        if root is None:
            root = 0

        heads = [root] * len(words)
        deps = ["dep"] * len(words)
        seen_subject = False
        for i, tag in enumerate(tags):
            if i == root:
                deps[i] = "root"
                continue
            nearest_noun = next(
                (j for j in range(i + 1, min(i + 4, len(words)))
                 if tags[j] in ("NOUN", "PROPN")),
                None,
            )
            if tag == "PUNCT":
                deps[i] = "punct"
            elif tag == "DET" and nearest_noun is not None:
                heads[i], deps[i] = nearest_noun, "det"
            elif tag == "ADJ" and nearest_noun is not None:
                heads[i], deps[i] = nearest_noun, "amod"
            elif tag == "NUM" and nearest_noun is not None:
                heads[i], deps[i] = nearest_noun, "nummod"
            elif tag == "ADP" and nearest_noun is not None:
                heads[i], deps[i] = nearest_noun, "case"
            elif tag == "PART":
                nxt_verb = next(
                    (j for j in range(i + 1, min(i + 3, len(words)))
                     if tags[j] == "VERB"),
                    None,
                )
                if nxt_verb is not None:
                    heads[i] = nxt_verb
                deps[i] = "mark"
            elif tag == "AUX":
                deps[i] = "aux" if i < root else "cop"
            elif tag == "PRON" and i < root and not seen_subject:
                deps[i] = "nsubj"
                seen_subject = True
            elif tag in ("NOUN", "PROPN") and i < root and not seen_subject:
                deps[i] = "nsubj"
                seen_subject = True
            elif tag in ("NOUN", "PROPN") and i > root:
                deps[i] = "obj"
            elif tag == "ADV":
                deps[i] = "advmod"
            elif tag in ("CCONJ",):
                deps[i] = "cc"
            elif tag in ("SCONJ",):
                deps[i] = "mark"
            elif tag == "INTJ":
                deps[i] = "discourse"
            elif tag == "VERB":
                deps[i] = "xcomp" if i > root else "advcl"
            if heads[i] == i:  # never self-head a non-root token
                heads[i] = root
        rows = []
        for i, word in enumerate(words):
            rows.append(
                TokenRow(
                    surface=word,
                    lemma=_lemma(word, tags[i]),
                    upos=tags[i],
                    head=heads[i],
                    dep_rel=deps[i],
                    ner=ner[i],
                )
            )
        return rows


SPACY_NER_MAP = {
    "PERSON": "PERSON",
    "GPE": "LOCATION",
    "LOC": "LOCATION",
    "FAC": "LOCATION",
    "QUANTITY": "QUANTITY",
    "CARDINAL": "QUANTITY",
    "MONEY": "QUANTITY",
    "PERCENT": "QUANTITY",
    "TIME": "TIME",
    "DATE": "TIME",
}


class SpacyToolchain:
    """Adapter around an installed spaCy pipeline."""

    def __init__(self, model_id: str):
        self.name = f"spacy:{model_id}"
        try:
            import spacy
        except ImportError as exc:
            raise ToolchainError(
                "spaCy is not installed; install it with "
                "'pip install convomine-exporter[spacy]' or use the "
                "builtin toolchain (--ner-model builtin)"
            ) from exc
        try:
            self._nlp = spacy.load(model_id)
        except OSError as exc:
            raise ToolchainError(
                f"spaCy model {model_id!r} is not downloadable here; run "
                f"'python -m spacy download {model_id}' first or use the "
                "builtin toolchain (--ner-model builtin)"
            ) from exc

    def annotate(self, text: str) -> List[TokenRow]:
        doc = self._nlp(text)
        tokens = list(doc)
        index = {tok.i: pos for pos, tok in enumerate(tokens)}
        rows = []
        for pos, tok in enumerate(tokens):
            is_root = tok.head.i == tok.i or tok.dep_ == "ROOT"
            rows.append(
                TokenRow(
                    surface=tok.text,
                    lemma=tok.lemma_ or tok.text,
                    upos=tok.pos_ if tok.pos_ else "X",
                    head=pos if is_root else index.get(tok.head.i, pos),
                    dep_rel="root" if is_root else (tok.dep_ or "dep"),
                    ner=SPACY_NER_MAP.get(tok.ent_type_),
                )
            )
        return rows


def make_toolchain(model_id: str):
    if model_id == "builtin":
        return BuiltinToolchain()
    if model_id.startswith("spacy:"):
        return SpacyToolchain(model_id.split(":", 1)[1])
    raise ToolchainError(
        f"unknown toolchain {model_id!r}; expected 'builtin' or "
        "'spacy:<model>'"
    )
