"""Shared test fixtures: a compact builder for hand-annotated sentences.

Token specs are strings "surface|lemma|upos|dep_rel|head[|ner]"; a lemma of
"=" means same as the surface. Head indices are within-sentence, root points
at itself.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Sequence

import pytest

from convomine.corpus import Sentence, Token, Transcript, validate_annotation

FIXTURES = Path(__file__).parent / "fixtures"

STOPWORDS = frozenset({
    "a", "an", "the", "and", "or", "of", "in", "on", "for", "to", "is",
    "are", "was", "were", "be", "you", "i", "we", "my", "our", "your",
    "me", "it", "this", "that", "how", "with", "at", "do", "does",
})


def make_tokens(specs: Sequence[str]) -> List[Token]:
    tokens = []
    for spec in specs:
        parts = spec.split("|")
        surface, lemma, upos, dep_rel, head = parts[:5]
        ner = parts[5] if len(parts) > 5 else None
        tokens.append(
            Token(
                surface=surface,
                lemma=surface if lemma == "=" else lemma,
                upos=upos,
                dep_rel=dep_rel,
                head=int(head),
                ner=ner,
            )
        )
    return tokens


def make_sentence(index: int, specs: Sequence[str], text: str = "") -> Sentence:
    tokens = make_tokens(specs)
    sentence = Sentence(
        index=index,
        text=text or " ".join(t.surface for t in tokens),
        tokens=tokens,
    )
    validate_annotation("fixture", sentence)
    return sentence


def make_transcript(tid: str, sentence_specs: Sequence[Sequence[str]]) -> Transcript:
    return Transcript(
        id=tid,
        sentences=[
            make_sentence(i, specs) for i, specs in enumerate(sentence_specs)
        ],
    )


# Hand parses for the documented example sentences.

LOYALTY_POINTS_QUESTION = [
    "Can|can|AUX|aux|4",
    "you|=|PRON|nsubj|4",
    "please|=|INTJ|discourse|4",
    "also|=|ADV|advmod|4",
    "tell|=|VERB|root|4",
    "me|=|PRON|iobj|4",
    "the|=|DET|det|8",
    "loyalty|=|NOUN|compound|8",
    "points|point|NOUN|obj|4",
    "I|i|PRON|nsubj|10",
    "have|=|VERB|acl:relcl|8",
    "in|=|ADP|case|13",
    "my|=|PRON|nmod:poss|13",
    "account|=|NOUN|obl|10",
    "?|?|PUNCT|punct|4",
]

CANCEL_RESERVATION = [
    "I|i|PRON|nsubj|1",
    "want|=|VERB|root|1",
    "to|=|PART|mark|3",
    "cancel|=|VERB|xcomp|1",
    "a|=|DET|det|5",
    "reservation|=|NOUN|obj|3",
]

HOTEL_ROOM_RESERVATION = [
    "I|i|PRON|nsubj|2",
    "would|=|AUX|aux|2",
    "like|=|VERB|root|2",
    "to|=|PART|mark|4",
    "make|=|VERB|xcomp|2",
    "a|=|DET|det|8",
    "hotel|=|NOUN|compound|8",
    "room|=|NOUN|compound|8",
    "reservation|=|NOUN|obj|4",
]

DELUXE_ROOM_FOLLOWUP = [
    "And|and|CCONJ|cc|6",
    "also|=|ADV|advmod|6",
    ",|,|PUNCT|punct|4",
    "if|=|SCONJ|mark|4",
    "available|=|ADJ|advcl|6",
    ",|,|PUNCT|punct|6",
    "make|=|VERB|root|6",
    "the|=|DET|det|8",
    "reservation|=|NOUN|obj|6",
    "for|=|ADP|case|12",
    "a|=|DET|det|12",
    "deluxe|=|ADJ|amod|12",
    "room|=|NOUN|nmod|8",
]

THE_WEATHER_IS_NICE = [
    "the|=|DET|det|1",
    "weather|=|NOUN|nsubj|3",
    "is|be|AUX|cop|3",
    "nice|=|ADJ|root|3",
]

MY_GOAL_TO_FINISH = [
    "my|=|PRON|nmod:poss|1",
    "goal|=|NOUN|root|1",
    "to|=|PART|mark|3",
    "finish|=|VERB|acl|1",
    "early|=|ADV|advmod|3",
]


@pytest.fixture
def stopwords():
    return STOPWORDS
