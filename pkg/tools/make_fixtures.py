#!/usr/bin/env python3
"""Generate the bundled synthetic conversation corpus and its resources.

Deterministic: rerunning produces byte-identical files. Sentences come from
hand-annotated templates (token rows carry lemma/POS/dep/head/NER), so the
corpus exercises every extraction rule with known ground truth. Expert labels
are derived from an in-process pipeline run so they cover exactly the items
the pipeline predicts on these fixtures.

Usage: python3 tools/make_fixtures.py [--out tests/fixtures]
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from convomine import casual as casual_mod
from convomine import concepts as concepts_mod
from convomine import intents as intents_mod
from convomine.corpus import Sentence, Token, Transcript, validate_annotation
from convomine.textnorm import normalize_phrase

SEED = 13
DIM = 24
N_PER_TOPIC = 6
TOPICS = ("reservations", "billing", "shipping", "support")

# --- sentence templates -----------------------------------------------------
# token spec: "surface|lemma|upos|dep|head[|ner]", lemma "=" repeats surface


def T(*rows):
    return list(rows)


CASUAL_HEAD = [
    T("hello|=|INTJ|discourse|1", "thanks|thank|NOUN|root|1",
      "for|=|SCONJ|mark|3", "calling|call|VERB|acl|1"),
    T("hi|=|INTJ|discourse|2", "john|=|PROPN|vocative|2|PERSON",
      "how|=|ADV|root|2", "are|be|AUX|cop|2", "you|=|PRON|nsubj|2"),
    T("good|=|ADJ|amod|1", "morning|=|NOUN|root|1",
      "everyone|=|PRON|vocative|1"),
    T("yeah|=|INTJ|discourse|6", "it|=|PRON|nsubj|6", "is|be|AUX|cop|6",
      "like|=|INTJ|discourse|6", "really|=|ADV|advmod|5", "nice|=|ADJ|amod|6",
      "weather|=|NOUN|root|6", "in|=|ADP|case|8",
      "boston|=|PROPN|nmod|6|LOCATION"),
    T("um|=|INTJ|discourse|3", "gon|go|VERB|aux|3", "na|to|PART|mark|3",
      "grab|=|VERB|root|3", "my|=|PRON|nmod:poss|5", "coffee|=|NOUN|obj|3",
      "real|=|ADV|advmod|7", "quick|=|ADJ|advmod|3"),
    T("uh|=|INTJ|discourse|3", "yeah|=|INTJ|discourse|3",
      "that|=|PRON|nsubj|3", "sounds|sound|VERB|root|3",
      "good|=|ADJ|xcomp|3"),
    T("it|=|PRON|nsubj|2", "was|be|AUX|cop|2", "great|=|ADJ|root|2",
      "talking|talk|VERB|csubj|2", "to|=|ADP|case|5",
      "mary|=|PROPN|obl|3|PERSON", "yesterday|=|NOUN|obl:tmod|3"),
    T("like|=|INTJ|discourse|2", "you|=|PRON|nsubj|2", "know|=|VERB|root|2",
      "the|=|DET|det|4", "kids|kid|NOUN|nsubj|5", "play|=|VERB|ccomp|2",
      "outside|=|ADV|advmod|5", "a|=|DET|det|8", "lot|=|NOUN|obl:tmod|5"),
    T("hey|=|INTJ|discourse|4", "is|be|AUX|aux|4", "it|=|PRON|nsubj|4",
      "still|=|ADV|advmod|4", "raining|rain|VERB|root|4",
      "over|=|ADV|advmod|6", "there|=|ADV|advmod|4"),
    T("my|=|PRON|nmod:poss|1", "cousin|=|NOUN|nsubj|2",
      "visited|visit|VERB|root|2", "dallas|=|PROPN|obj|2|LOCATION",
      "last|=|ADJ|amod|5", "weekend|=|NOUN|obl:tmod|2"),
    T("um|=|INTJ|discourse|7", "yeah|=|INTJ|discourse|7", "gon|go|VERB|aux|7",
      "na|to|PART|mark|7", "be|=|AUX|cop|7", "a|=|DET|det|7",
      "busy|=|ADJ|amod|7", "day|=|NOUN|root|7"),
]

CASUAL_TAIL = [
    T("thank|=|VERB|root|0", "you|=|PRON|obj|0", "so|=|ADV|advmod|3",
      "much|=|ADV|advmod|0", "for|=|ADP|case|6", "your|=|PRON|nmod:poss|6",
      "time|=|NOUN|obl|0", "today|=|NOUN|obl:tmod|0"),
    T("uh|=|INTJ|discourse|3", "yeah|=|INTJ|discourse|3",
      "that|=|PRON|nsubj|3", "sounds|sound|VERB|root|3",
      "good|=|ADJ|xcomp|3"),
]

# mid-call trivial chatter, deliberately left inside the business span
CASUAL_MID = [
    T("uh|=|INTJ|discourse|3", "yeah|=|INTJ|discourse|3",
      "that|=|PRON|nsubj|3", "sounds|sound|VERB|root|3",
      "good|=|ADJ|xcomp|3"),
    T("hey|=|INTJ|discourse|4", "is|be|AUX|aux|4", "it|=|PRON|nsubj|4",
      "still|=|ADV|advmod|4", "raining|rain|VERB|root|4",
      "over|=|ADV|advmod|6", "there|=|ADV|advmod|4"),
]

FILLER = [
    T("let|=|VERB|root|0", "me|=|PRON|obj|0", "pull|=|VERB|xcomp|0",
      "up|=|ADP|compound:prt|2", "the|=|DET|det|5",
      "details|detail|NOUN|obj|2", "here|=|ADV|advmod|2"),
    T("one|=|NUM|nummod|1", "moment|=|NOUN|root|1", "while|=|SCONJ|mark|5",
      "the|=|DET|det|4", "page|=|NOUN|nsubj|5", "loads|load|VERB|advcl|1"),
    T("i|i|PRON|nsubj|1", "see|=|VERB|root|1", "the|=|DET|det|3",
      "note|=|NOUN|obj|1", "on|=|ADP|case|6", "the|=|DET|det|6",
      "file|=|NOUN|nmod|3", "here|=|ADV|advmod|1"),
    T("that|=|PRON|nsubj|1", "sounds|sound|VERB|root|1",
      "correct|=|ADJ|xcomp|1", "to|=|ADP|case|4", "me|=|PRON|obl|1"),
    T("the|=|DET|det|1", "system|=|NOUN|nsubj|2", "takes|take|VERB|root|2",
      "a|=|DET|det|4", "minute|=|NOUN|obj|2", "to|=|PART|mark|6",
      "load|=|VERB|acl|4"),
    T("sure|=|INTJ|discourse|2", "that|=|PRON|nsubj|2",
      "works|work|VERB|root|2", "on|=|ADP|case|5", "our|=|PRON|nmod:poss|5",
      "end|=|NOUN|obl|2"),
    T("the|=|DET|det|1", "number|=|NOUN|nsubj|5", "on|=|ADP|case|4",
      "the|=|DET|det|4", "screen|=|NOUN|nmod|1", "reads|read|VERB|root|5",
      "four|=|NUM|obj|5|QUANTITY", "five|=|NUM|flat|6|QUANTITY",
      "six|=|NUM|flat|6|QUANTITY"),
    T("the|=|DET|det|3", "agent|=|NOUN|compound|3",
      "john|=|PROPN|nsubj|4|PERSON", "smith|=|PROPN|flat|2|PERSON",
      "owns|own|VERB|root|4", "this|=|DET|det|6", "case|=|NOUN|obj|4"),
]

OOV_FILLER = [
    T("the|=|DET|det|2", "resevation|=|NOUN|compound|2",
      "screen|=|NOUN|nsubj|3", "flags|flag|VERB|root|3", "a|=|DET|det|5",
      "problem|=|NOUN|obj|3"),
    T("the|=|DET|det|2", "invoce|=|NOUN|compound|2", "copy|=|NOUN|nsubj|3",
      "looks|look|VERB|root|3", "blurry|=|ADJ|xcomp|3"),
]

OOV_WORDS = {"resevation", "invoce"}

INTENTS = {
    "reservations": [
        T("i|i|PRON|nsubj|2", "would|=|AUX|aux|2", "like|=|VERB|root|2",
          "to|=|PART|mark|4", "make|=|VERB|xcomp|2", "a|=|DET|det|8",
          "hotel|=|NOUN|compound|8", "room|=|NOUN|compound|8",
          "reservation|=|NOUN|obj|4"),
        T("can|=|AUX|aux|4", "you|=|PRON|nsubj|4", "please|=|INTJ|discourse|4",
          "also|=|ADV|advmod|4", "tell|=|VERB|root|4", "me|=|PRON|iobj|4",
          "the|=|DET|det|8", "loyalty|=|NOUN|compound|8",
          "points|point|NOUN|obj|4", "i|i|PRON|nsubj|10",
          "have|=|VERB|acl:relcl|8", "in|=|ADP|case|13",
          "my|=|PRON|nmod:poss|13", "account|=|NOUN|obl|10"),
        T("i|i|PRON|nsubj|1", "want|=|VERB|root|1", "to|=|PART|mark|3",
          "cancel|=|VERB|xcomp|1", "a|=|DET|det|5",
          "reservation|=|NOUN|obj|3"),
        T("where|=|ADV|advmod|3", "do|=|AUX|aux|3", "i|i|PRON|nsubj|3",
          "find|=|VERB|root|3", "the|=|DET|det|6",
          "booking|=|NOUN|compound|6", "confirmation|=|NOUN|obj|3"),
        T("is|be|AUX|cop|4", "the|=|DET|det|3", "deluxe|=|ADJ|amod|3",
          "room|=|NOUN|nsubj|4", "available|=|ADJ|root|4", "for|=|ADP|case|6",
          "tonight|=|NOUN|nmod|4"),
        T("we|=|PRON|nsubj|1", "need|=|VERB|root|1", "to|=|PART|mark|3",
          "move|=|VERB|xcomp|1", "the|=|DET|det|5", "reservation|=|NOUN|obj|3",
          "to|=|ADP|case|8", "next|=|ADJ|amod|8", "week|=|NOUN|obl|3"),
    ],
    "billing": [
        T("i|i|PRON|nsubj|1", "want|=|VERB|root|1", "to|=|PART|mark|3",
          "dispute|=|VERB|xcomp|1", "a|=|DET|det|5", "charge|=|NOUN|obj|3",
          "on|=|ADP|case|8", "my|=|PRON|nmod:poss|8", "invoice|=|NOUN|obl|3"),
        T("can|=|AUX|aux|2", "you|=|PRON|nsubj|2", "explain|=|VERB|root|2",
          "the|=|DET|det|5", "late|=|ADJ|amod|5", "fee|=|NOUN|obj|2",
          "on|=|ADP|case|9", "the|=|DET|det|9", "billing|=|NOUN|compound|9",
          "invoice|=|NOUN|obl|2"),
        T("i|i|PRON|nsubj|1", "need|=|VERB|root|1", "to|=|PART|mark|3",
          "update|=|VERB|xcomp|1", "the|=|DET|det|6",
          "payment|=|NOUN|compound|6", "method|=|NOUN|obj|3"),
        T("we|=|PRON|nsubj|2", "should|=|AUX|aux|2", "update|=|VERB|root|2",
          "the|=|DET|det|5", "billing|=|NOUN|compound|5",
          "address|=|NOUN|obj|2"),
        T("where|=|ADV|advmod|3", "do|=|AUX|aux|3", "we|=|PRON|nsubj|3",
          "send|=|VERB|root|3", "the|=|DET|det|6", "refund|=|NOUN|compound|6",
          "request|=|NOUN|obj|3"),
        T("is|be|AUX|aux:pass|4", "the|=|DET|det|2", "refund|=|NOUN|nsubj:pass|4",
          "already|=|ADV|advmod|4", "processed|process|VERB|root|4"),
        T("my|=|PRON|nmod:poss|1", "goal|=|NOUN|root|1", "to|=|PART|mark|3",
          "settle|=|VERB|acl|1", "the|=|DET|det|5", "invoice|=|NOUN|obj|3",
          "early|=|ADV|advmod|3"),
    ],
    "shipping": [
        T("i|i|PRON|nsubj|1", "want|=|VERB|root|1", "to|=|PART|mark|3",
          "track|=|VERB|xcomp|1", "my|=|PRON|nmod:poss|5",
          "package|=|NOUN|obj|3"),
        T("can|=|AUX|aux|2", "you|=|PRON|nsubj|2", "give|=|VERB|root|2",
          "me|=|PRON|iobj|2", "the|=|DET|det|6", "tracking|=|NOUN|compound|6",
          "number|=|NOUN|obj|2"),
        T("when|=|ADV|advmod|4", "does|do|AUX|aux|4", "the|=|DET|det|3",
          "delivery|=|NOUN|nsubj|4", "arrive|=|VERB|root|4"),
        T("i|i|PRON|nsubj|1", "need|=|VERB|root|1", "to|=|PART|mark|3",
          "print|=|VERB|xcomp|1", "a|=|DET|det|7", "return|=|NOUN|compound|7",
          "shipping|=|NOUN|compound|7", "label|=|NOUN|obj|3"),
        T("we|=|PRON|nsubj|2", "would|=|AUX|aux|2", "like|=|VERB|root|2",
          "to|=|PART|mark|4", "schedule|=|VERB|xcomp|2", "a|=|DET|det|6",
          "pickup|=|NOUN|obj|4", "for|=|ADP|case|10", "the|=|DET|det|10",
          "return|=|NOUN|compound|10", "shipment|=|NOUN|obl|4"),
        T("is|be|AUX|cop|5", "the|=|DET|det|2", "package|=|NOUN|nsubj|5",
          "still|=|ADV|advmod|5", "in|=|ADP|case|5", "transit|=|NOUN|root|5"),
    ],
    "support": [
        T("i|i|PRON|nsubj|1", "want|=|VERB|root|1", "to|=|PART|mark|3",
          "report|=|VERB|xcomp|1", "an|a|DET|det|6", "error|=|NOUN|compound|6",
          "message|=|NOUN|obj|3", "after|=|ADP|case|10", "the|=|DET|det|10",
          "software|=|NOUN|compound|10", "update|=|NOUN|obl|3"),
        T("can|=|AUX|aux|2", "you|=|PRON|nsubj|2", "reset|=|VERB|root|2",
          "my|=|PRON|nmod:poss|5", "login|=|NOUN|compound|5",
          "password|=|NOUN|obj|2"),
        T("why|=|ADV|advmod|4", "does|do|AUX|aux|4", "the|=|DET|det|3",
          "application|=|NOUN|nsubj|4", "crash|=|VERB|root|4",
          "on|=|ADP|case|6", "startup|=|NOUN|obl|4"),
        T("we|=|PRON|nsubj|1", "need|=|VERB|root|1", "to|=|PART|mark|3",
          "restore|=|VERB|xcomp|1", "the|=|DET|det|6",
          "account|=|NOUN|compound|6", "access|=|NOUN|obj|3"),
        T("i|i|PRON|nsubj|2", "would|=|AUX|aux|2", "like|=|VERB|root|2",
          "to|=|PART|mark|4", "schedule|=|VERB|xcomp|2", "the|=|DET|det|7",
          "software|=|NOUN|compound|7", "update|=|NOUN|obj|4",
          "tonight|=|NOUN|obl:tmod|4"),
        T("is|be|AUX|cop|3", "the|=|DET|det|2", "server|=|NOUN|nsubj|3",
          "down|=|ADV|root|3", "again|=|ADV|advmod|3"),
    ],
}

CONJ_FOLLOWUPS = {
    "reservations": [
        T("and|=|CCONJ|cc|4", "also|=|ADV|advmod|4", "if|=|SCONJ|mark|3",
          "available|=|ADJ|advcl|4", "make|=|VERB|root|4", "the|=|DET|det|6",
          "reservation|=|NOUN|obj|4", "for|=|ADP|case|10", "a|=|DET|det|10",
          "deluxe|=|ADJ|amod|10", "room|=|NOUN|nmod|6"),
        T("and|=|CCONJ|cc|3", "the|=|DET|det|2", "upgrade|=|NOUN|nsubj|3",
          "matters|matter|VERB|root|3", "a|=|DET|det|5",
          "lot|=|NOUN|obl:tmod|3"),
    ],
    "billing": [
        T("and|=|CCONJ|cc|3", "also|=|ADV|advmod|3", "please|=|INTJ|discourse|3",
          "send|=|VERB|root|3", "a|=|DET|det|5", "copy|=|NOUN|obj|3",
          "of|=|ADP|case|8", "the|=|DET|det|8", "invoice|=|NOUN|nmod|5"),
        T("but|=|CCONJ|cc|3", "the|=|DET|det|2", "charge|=|NOUN|nsubj|3",
          "looks|look|VERB|root|3", "wrong|=|ADJ|xcomp|3"),
    ],
    "shipping": [
        T("and|=|CCONJ|cc|4", "plus|=|CCONJ|cc|4", "the|=|DET|det|3",
          "box|=|NOUN|nsubj|4", "arrived|arrive|VERB|root|4",
          "damaged|damage|VERB|xcomp|4"),
        T("so|=|CCONJ|cc|2", "we|=|PRON|nsubj|2", "want|=|VERB|root|2",
          "a|=|DET|det|4", "replacement|=|NOUN|obj|2"),
    ],
    "support": [
        T("and|=|CCONJ|cc|4", "because|=|SCONJ|mark|4", "the|=|DET|det|3",
          "screen|=|NOUN|nsubj|4", "freezes|freeze|VERB|root|4",
          "every|=|DET|det|6", "time|=|NOUN|obl:tmod|4"),
        T("so|=|CCONJ|cc|2", "we|=|PRON|nsubj|2", "want|=|VERB|root|2",
          "a|=|DET|det|4", "callback|=|NOUN|obj|2"),
    ],
}

STATEMENTS = {
    "reservations": [
        T("the|=|DET|det|2", "hotel|=|NOUN|compound|2",
          "reservation|=|NOUN|nsubj|3", "shows|show|VERB|root|3",
          "two|=|NUM|nummod|5", "nights|night|NOUN|obj|3"),
        T("the|=|DET|det|3", "deluxe|=|ADJ|amod|3", "room|=|NOUN|compound|3",
          "rate|=|NOUN|nsubj|4", "includes|include|VERB|root|4",
          "breakfast|=|NOUN|obj|4"),
        T("the|=|DET|det|3", "loyalty|=|NOUN|compound|3",
          "points|point|NOUN|compound|3", "balance|=|NOUN|nsubj|4",
          "updates|update|VERB|root|4", "overnight|=|ADV|advmod|4"),
        T("the|=|DET|det|3", "booking|=|NOUN|compound|3",
          "confirmation|=|NOUN|compound|3", "email|=|NOUN|nsubj|4",
          "arrives|arrive|VERB|root|4", "shortly|=|ADV|advmod|4"),
        T("the|=|DET|det|2", "front|=|NOUN|compound|2", "desk|=|NOUN|nsubj|3",
          "confirmed|confirm|VERB|root|3", "the|=|DET|det|5",
          "upgrade|=|NOUN|obj|3", "yesterday|=|NOUN|obl:tmod|3"),
    ],
    "billing": [
        T("the|=|DET|det|2", "billing|=|NOUN|compound|2",
          "invoice|=|NOUN|nsubj|3", "lists|list|VERB|root|3",
          "every|=|DET|det|5", "charge|=|NOUN|obj|3"),
        T("the|=|DET|det|2", "refund|=|NOUN|compound|2",
          "request|=|NOUN|nsubj|3", "takes|take|VERB|root|3",
          "five|=|NUM|nummod|6", "business|=|NOUN|compound|6",
          "days|day|NOUN|obj|3"),
        T("the|=|DET|det|2", "payment|=|NOUN|compound|2",
          "method|=|NOUN|nsubj|5", "on|=|ADP|case|4", "file|=|NOUN|nmod|2",
          "expired|expire|VERB|root|5", "last|=|ADJ|amod|7",
          "month|=|NOUN|obl:tmod|5"),
        T("the|=|DET|det|2", "late|=|ADJ|amod|2", "fee|=|NOUN|nsubj|3",
          "appears|appear|VERB|root|3", "under|=|ADP|case|7",
          "the|=|DET|det|7", "second|=|ADJ|amod|7", "line|=|NOUN|obl|3"),
        T("gon|go|VERB|aux|2", "na|to|PART|mark|2", "credit|=|VERB|root|2",
          "the|=|DET|det|5", "late|=|ADJ|amod|5", "fee|=|NOUN|obj|2",
          "right|=|ADV|advmod|7", "away|=|ADV|advmod|2"),
    ],
    "shipping": [
        T("the|=|DET|det|2", "tracking|=|NOUN|compound|2",
          "number|=|NOUN|nsubj|3", "starts|start|VERB|root|3",
          "with|=|ADP|case|7", "the|=|DET|det|7", "carrier|=|NOUN|compound|7",
          "code|=|NOUN|obl|3"),
        T("the|=|DET|det|2", "delivery|=|NOUN|compound|2",
          "date|=|NOUN|nsubj|3", "moved|move|VERB|root|3", "to|=|ADP|case|5",
          "friday|=|PROPN|obl|3|TIME"),
        T("the|=|DET|det|2", "shipping|=|NOUN|compound|2",
          "label|=|NOUN|nsubj|3", "prints|print|VERB|root|3",
          "from|=|ADP|case|6", "the|=|DET|det|6", "email|=|NOUN|obl|3"),
        T("the|=|DET|det|2", "return|=|NOUN|compound|2",
          "shipment|=|NOUN|nsubj|3", "needs|need|VERB|root|3",
          "the|=|DET|det|6", "original|=|ADJ|amod|6", "box|=|NOUN|obj|3"),
        T("the|=|DET|det|1", "warehouse|=|NOUN|nsubj|4", "in|=|ADP|case|3",
          "boston|=|PROPN|nmod|1|LOCATION", "ships|ship|VERB|root|4",
          "every|=|DET|det|6", "morning|=|NOUN|obl:tmod|4"),
    ],
    "support": [
        T("the|=|DET|det|2", "error|=|NOUN|compound|2",
          "message|=|NOUN|nsubj|3", "mentions|mention|VERB|root|3",
          "a|=|DET|det|6", "missing|=|ADJ|amod|6", "file|=|NOUN|obj|3"),
        T("the|=|DET|det|2", "software|=|NOUN|compound|2",
          "update|=|NOUN|nsubj|3", "fixes|fix|VERB|root|3", "the|=|DET|det|6",
          "login|=|NOUN|compound|6", "issue|=|NOUN|obj|3"),
        T("the|=|DET|det|2", "account|=|NOUN|compound|2",
          "access|=|NOUN|nsubj|3", "resets|reset|VERB|root|3",
          "after|=|ADP|case|5", "verification|=|NOUN|obl|3"),
        T("the|=|DET|det|2", "login|=|NOUN|compound|2",
          "password|=|NOUN|nsubj|3", "expires|expire|VERB|root|3",
          "every|=|DET|det|6", "ninety|=|NUM|nummod|6",
          "days|day|NOUN|obl:tmod|3"),
        T("the|=|DET|det|2", "help|=|NOUN|compound|2", "desk|=|NOUN|nsubj|3",
          "logged|log|VERB|root|3", "the|=|DET|det|5", "ticket|=|NOUN|obj|3",
          "this|=|DET|det|7", "morning|=|NOUN|obl:tmod|3"),
    ],
}

# content-dense read-off statements, ASR style: almost no function words,
# so their n-grams pass the stopword-boundary rule
CONTENT_STATEMENTS = {
    "reservations": [
        T("hotel|=|NOUN|compound|2", "reservation|=|NOUN|compound|2",
          "number|=|NOUN|root|2", "nine|=|NUM|appos|2|QUANTITY",
          "nine|=|NUM|flat|3|QUANTITY", "two|=|NUM|flat|3|QUANTITY",
          "four|=|NUM|flat|3|QUANTITY"),
        T("deluxe|=|ADJ|amod|2", "room|=|NOUN|compound|2",
          "upgrade|=|NOUN|nsubj|3", "costs|cost|VERB|root|3",
          "forty|=|NUM|nummod|5|QUANTITY", "points|point|NOUN|obj|3"),
        T("loyalty|=|NOUN|compound|2", "points|point|NOUN|compound|2",
          "balance|=|NOUN|nsubj|3", "shows|show|VERB|root|3",
          "twelve|=|NUM|nummod|6|QUANTITY", "thousand|=|NUM|flat|4|QUANTITY",
          "points|point|NOUN|obj|3"),
        T("booking|=|NOUN|compound|2", "confirmation|=|NOUN|compound|2",
          "code|=|NOUN|nsubj|3", "shows|show|VERB|root|3",
          "seven|=|NUM|obj|3|QUANTITY", "seven|=|NUM|flat|4|QUANTITY",
          "nine|=|NUM|flat|4|QUANTITY"),
        T("hotel|=|NOUN|compound|1", "reservation|=|NOUN|nsubj|2",
          "covers|cover|VERB|root|2", "breakfast|=|NOUN|obj|2",
          "plus|=|CCONJ|cc|5", "parking|=|NOUN|conj|3"),
        T("deluxe|=|ADJ|amod|2", "room|=|NOUN|compound|2",
          "checkout|=|NOUN|nsubj|3", "runs|run|VERB|root|3",
          "till|=|ADP|case|5", "noon|=|NOUN|obl|3|TIME"),
    ],
    "billing": [
        T("billing|=|NOUN|compound|2", "invoice|=|NOUN|compound|2",
          "total|=|NOUN|nsubj|3", "reads|read|VERB|root|3",
          "ninety|=|NUM|nummod|5|QUANTITY", "dollars|dollar|NOUN|obj|3"),
        T("refund|=|NOUN|compound|2", "request|=|NOUN|compound|2",
          "number|=|NOUN|root|2", "four|=|NUM|appos|2|QUANTITY",
          "four|=|NUM|flat|3|QUANTITY", "eight|=|NUM|flat|3|QUANTITY"),
        T("payment|=|NOUN|compound|2", "method|=|NOUN|compound|2",
          "card|=|NOUN|nsubj|3", "ends|end|VERB|root|3",
          "nine|=|NUM|obj|3|QUANTITY", "nine|=|NUM|flat|4|QUANTITY",
          "one|=|NUM|flat|4|QUANTITY"),
        T("late|=|ADJ|amod|1", "fee|=|NOUN|nsubj|2",
          "totals|total|VERB|root|2", "fifteen|=|NUM|nummod|4|QUANTITY",
          "dollars|dollar|NOUN|obj|2"),
        T("billing|=|NOUN|compound|1", "cycle|=|NOUN|nsubj|2",
          "closes|close|VERB|root|2", "friday|=|PROPN|compound|4|TIME",
          "evening|=|NOUN|obl:tmod|2|TIME"),
        T("refund|=|NOUN|compound|1", "request|=|NOUN|nsubj|2",
          "clears|clear|VERB|root|2", "monday|=|PROPN|compound|4|TIME",
          "morning|=|NOUN|obl:tmod|2|TIME"),
    ],
    "shipping": [
        T("tracking|=|NOUN|compound|1", "number|=|NOUN|nsubj|2",
          "reads|read|VERB|root|2", "eight|=|NUM|obj|2|QUANTITY",
          "seven|=|NUM|flat|3|QUANTITY", "seven|=|NUM|flat|3|QUANTITY",
          "five|=|NUM|flat|3|QUANTITY"),
        T("delivery|=|NOUN|compound|1", "date|=|NOUN|nsubj|2",
          "lands|land|VERB|root|2", "thursday|=|PROPN|compound|4|TIME",
          "afternoon|=|NOUN|obl:tmod|2|TIME"),
        T("shipping|=|NOUN|compound|1", "label|=|NOUN|nsubj|2",
          "covers|cover|VERB|root|2", "ground|=|NOUN|compound|4",
          "service|=|NOUN|obj|2"),
        T("return|=|NOUN|compound|1", "shipment|=|NOUN|nsubj|2",
          "weighs|weigh|VERB|root|2", "five|=|NUM|nummod|4|QUANTITY",
          "pounds|pound|NOUN|obj|2"),
        T("package|=|NOUN|compound|1", "insurance|=|NOUN|nsubj|2",
          "covers|cover|VERB|root|2", "eighty|=|NUM|nummod|4|QUANTITY",
          "dollars|dollar|NOUN|obj|2"),
        T("carrier|=|NOUN|compound|2", "pickup|=|NOUN|compound|2",
          "window|=|NOUN|nsubj|3", "opens|open|VERB|root|3",
          "nine|=|NUM|obl|3|TIME", "sharp|=|ADV|advmod|4"),
    ],
    "support": [
        T("error|=|NOUN|compound|2", "message|=|NOUN|compound|2",
          "code|=|NOUN|nsubj|3", "reads|read|VERB|root|3",
          "five|=|NUM|obj|3|QUANTITY", "zero|=|NUM|flat|4|QUANTITY",
          "two|=|NUM|flat|4|QUANTITY"),
        T("software|=|NOUN|compound|2", "update|=|NOUN|compound|2",
          "version|=|NOUN|nsubj|3", "lands|land|VERB|root|3",
          "next|=|ADJ|amod|5", "week|=|NOUN|obl:tmod|3"),
        T("account|=|NOUN|compound|1", "access|=|NOUN|nsubj|2",
          "needs|need|VERB|root|2", "badge|=|NOUN|compound|4",
          "verification|=|NOUN|obj|2", "first|=|ADV|advmod|2"),
        T("login|=|NOUN|compound|2", "password|=|NOUN|compound|2",
          "resets|reset|NOUN|nsubj|3", "take|=|VERB|root|3",
          "ten|=|NUM|nummod|5|QUANTITY", "minutes|minute|NOUN|obj|3"),
        T("server|=|NOUN|compound|1", "maintenance|=|NOUN|nsubj|2",
          "runs|run|VERB|root|2", "sunday|=|PROPN|compound|4|TIME",
          "night|=|NOUN|obl:tmod|2|TIME"),
        T("error|=|NOUN|compound|1", "report|=|NOUN|nsubj|2",
          "covers|cover|VERB|root|2", "crash|=|NOUN|compound|4",
          "logs|log|NOUN|obj|2"),
    ],
}

# spoken-code read-offs: "<head> code reads tango romeo kilo" style lines,
# instantiated with seeded draws from the spelling alphabet; each topic gets
# its own letter subpool so the letters stay rare at corpus level (IDF)
NATO = """alpha bravo charlie delta echo foxtrot golf india juliet kilo
lima mike november oscar papa quebec romeo sierra tango victor whiskey
zulu""".split()

NATO_BY_TOPIC = {
    topic: NATO[i::len(TOPICS)] for i, topic in enumerate(TOPICS)
}

READOFF_HEADS = {
    "reservations": [("hotel", "reservation"), ("booking", "confirmation")],
    "billing": [("refund", "request"), ("payment", "method")],
    "shipping": [("tracking", "number"), ("carrier", "route")],
    "support": [("error", "message"), ("ticket", "number")],
}


def readoff_rows(head_pair, letters):
    first, second = head_pair
    rows = [
        f"{first}|=|NOUN|compound|2",
        f"{second}|=|NOUN|compound|2",
        "code|=|NOUN|nsubj|3",
        "reads|read|VERB|root|3",
        f"{letters[0]}|=|PROPN|obj|3",
    ]
    for i, letter in enumerate(letters[1:], start=5):
        rows.append(f"{letter}|=|PROPN|flat|4")
    return rows


GOLD_CONCEPTS = {
    "reservations": ["hotel reservation", "deluxe room", "loyalty points",
                     "booking confirmation"],
    "billing": ["billing invoice", "refund request", "payment method",
                "late fee"],
    "shipping": ["tracking number", "delivery date", "shipping label",
                 "return shipment"],
    "support": ["error message", "software update", "account access",
                "login password"],
}

# phrase families sharing an embedding direction (base-form driven)
EMBED_FAMILIES = {
    "reservations.rooms": ["reservation", "booking", "hotel", "room",
                           "deluxe", "suite", "upgrade", "night", "nights",
                           "reservations"],
    "reservations.loyalty": ["loyalty", "points", "point", "account",
                             "balance"],
    "billing.money": ["invoice", "billing", "charge", "fee", "refund",
                      "payment", "credit", "settle", "dispute"],
    "shipping.move": ["package", "shipment", "shipping", "delivery",
                      "tracking", "carrier", "box", "pickup", "transit",
                      "warehouse", "label"],
    "support.tech": ["error", "software", "update", "login", "password",
                     "server", "application", "startup", "screen", "crash",
                     "access", "verification", "ticket"],
    "entity.person": ["john", "mary", "smith"],
    "entity.place": ["boston", "dallas"],
    "entity.time": ["friday", "tonight", "yesterday", "today", "tomorrow",
                    "overnight", "weekend"],
}

PHRASE_KEYS = [
    "hotel reservation", "hotel room reservation", "deluxe room",
    "loyalty points", "booking confirmation", "billing invoice",
    "refund request", "payment method", "late fee", "tracking number",
    "delivery date", "shipping label", "return shipment", "error message",
    "software update", "account access", "login password", "john smith",
]

STOPWORDS = """
a an the and or but so of in on for to from with at by as if while
when where why how is are was were be been being am do does did have has
had can could would should will shall may might must not no yes i we you
he she it they me us them my our your his her its their this that these
those please
""".split()

CATEGORY_DOCS = {
    "reservations": [
        "Guests contact the desk to create a hotel reservation, confirm a "
        "booking, or change the room type. Deluxe rooms and suites can be "
        "reserved with loyalty points, and every booking confirmation is "
        "sent by email within minutes of the reservation.",
        "The loyalty program awards points for each completed night. Members "
        "redeem points for room upgrades, and the points balance appears on "
        "the reservation page together with the booking confirmation number.",
        "Cancellations of a reservation are free until the arrival day. The "
        "hotel releases the room and returns any loyalty points used for the "
        "booking.",
    ],
    "billing": [
        "The billing team issues an invoice for every stay. Customers "
        "dispute a charge, question a late fee, or ask for a refund; each "
        "refund request is processed within five business days.",
        "A payment method on file is charged automatically. Expired cards "
        "cause a failed payment and a late fee on the next invoice, and the "
        "billing address must match the card statement.",
        "Invoices list every charge line by line. Credits for a disputed "
        "charge appear on the following billing cycle after the refund "
        "request is approved.",
    ],
    "shipping": [
        "Every shipment receives a tracking number that starts with the "
        "carrier code. The delivery date is an estimate and the package can "
        "be followed from the warehouse to the door.",
        "Returns need a shipping label printed from the email. The return "
        "shipment must use the original box, and a pickup can be scheduled "
        "with the carrier.",
        "Damaged packages qualify for a replacement. The warehouse inspects "
        "the return shipment and updates the tracking number for the new "
        "delivery.",
    ],
    "support": [
        "Technical support handles every error message, crash, and login "
        "problem. A software update usually fixes the issue, and account "
        "access can be restored after verification.",
        "A forgotten login password can be reset from the portal. The help "
        "desk logs a ticket and confirms account access once the password "
        "reset completes.",
        "When the application crashes on startup the error message names "
        "the missing file. Installing the software update and rebooting "
        "clears the crash for most users.",
    ],
}


# --- template utilities ------------------------------------------------------


def to_tokens(rows):
    tokens = []
    for row in rows:
        parts = row.split("|")
        surface, lemma, upos, dep, head = parts[:5]
        ner = parts[5] if len(parts) > 5 else None
        tokens.append(Token(
            surface=surface,
            lemma=surface if lemma == "=" else lemma,
            upos=upos,
            dep_rel=dep,
            head=int(head),
            ner=ner,
        ))
    return tokens


def template_sentence(rows, index):
    tokens = to_tokens(rows)
    sentence = Sentence(
        index=index, text=" ".join(t.surface for t in tokens), tokens=tokens
    )
    validate_annotation("template", sentence)
    return sentence


def template_triggers(rows):
    sentence = template_sentence(rows, 0)
    names = set()
    q = intents_mod.detect_question(sentence)
    if q:
        names |= q.triggers
    r = intents_mod.detect_intent_sentence(sentence)
    if r:
        names |= r.triggers
    return names


def verify_templates():
    for topic, templates in INTENTS.items():
        for rows in templates:
            assert template_triggers(rows), (
                f"intent template failed to trigger ({topic}): "
                f"{' '.join(r.split('|')[0] for r in rows)}"
            )
    quiet_pools = (
        [rows for group in STATEMENTS.values() for rows in group]
        + [rows for group in CONTENT_STATEMENTS.values() for rows in group]
        + [rows for group in CONJ_FOLLOWUPS.values() for rows in group]
        + FILLER + OOV_FILLER + CASUAL_TAIL + CASUAL_MID + CASUAL_HEAD
    )
    for rows in quiet_pools:
        fired = template_triggers(rows)
        assert not fired, (
            f"non-intent template fires {fired}: "
            f"{' '.join(r.split('|')[0] for r in rows)}"
        )


# --- corpus assembly ---------------------------------------------------------


def build_transcript(tid, topic, rng):
    blocks = []  # list of (rows, is_intent)

    n_head = int(rng.integers(5, 7))
    head_picks = rng.choice(len(CASUAL_HEAD), size=n_head, replace=False)
    for i in head_picks:
        blocks.append(([CASUAL_HEAD[int(i)]], False))

    intent_pool = INTENTS[topic]
    n_intents = int(rng.integers(3, min(6, len(intent_pool)) + 1))
    intent_ids = rng.choice(len(intent_pool), size=n_intents, replace=False)
    intent_blocks = []
    for i in intent_ids:
        block = [intent_pool[int(i)]]
        if rng.random() < 0.5:
            conj = CONJ_FOLLOWUPS[topic]
            block.append(conj[int(rng.integers(0, len(conj)))])
        intent_blocks.append(block)

    body = []
    statements = STATEMENTS[topic]
    n_statements = int(rng.integers(6, 10))
    for i in rng.integers(0, len(statements), size=n_statements):
        body.append([statements[int(i)]])
    content = CONTENT_STATEMENTS[topic]
    n_content = int(rng.integers(8, 12))
    for i in rng.integers(0, len(content), size=n_content):
        body.append([content[int(i)]])
    n_readoffs = int(rng.integers(15, 20))
    heads = READOFF_HEADS[topic]
    pool = NATO_BY_TOPIC[topic]
    for _ in range(n_readoffs):
        head_pair = heads[int(rng.integers(0, len(heads)))]
        letters = [pool[int(i)] for i in
                   rng.choice(len(pool), size=int(rng.integers(3, 6)),
                              replace=False)]
        body.append([readoff_rows(head_pair, letters)])
    n_fillers = int(rng.integers(5, 9))
    for i in rng.integers(0, len(FILLER), size=n_fillers):
        body.append([FILLER[int(i)]])
    if rng.random() < 0.7:
        body.append([OOV_FILLER[int(rng.integers(0, len(OOV_FILLER)))]])
    if rng.random() < 0.5:
        body.append([CASUAL_MID[int(rng.integers(0, len(CASUAL_MID)))]])
    order = rng.permutation(len(body))
    body = [body[int(i)] for i in order]

    # insert intent blocks at distinct gaps: one body sentence always
    # separates consecutive blocks, so planted intents do not merge
    gaps = sorted(
        int(g) for g in rng.choice(
            len(body) + 1, size=min(len(intent_blocks), len(body) + 1),
            replace=False,
        )
    )
    for offset, (gap, block) in enumerate(zip(gaps, intent_blocks)):
        body.insert(gap + offset, block)

    for block in body:
        is_intent = block[0] in intent_pool
        blocks.append((block, is_intent))

    blocks.append(([CASUAL_TAIL[0]], False))

    sentences = []
    gold_intents = []
    for block, is_intent in blocks:
        for rows in block:
            index = len(sentences)
            sentences.append(template_sentence(rows, index))
            if is_intent:
                gold_intents.append(index)
    transcript = Transcript(id=tid, sentences=sentences)
    return transcript, sorted(gold_intents)


def gold_concepts_present(transcript, topic):
    text_blob = " ".join(
        " ".join(t.surface.lower() for t in s.tokens)
        for s in transcript.sentences
    )
    present = []
    for phrase in GOLD_CONCEPTS[topic]:
        head_token = phrase.split()[0]
        if head_token in text_blob:
            present.append(phrase)
    return present


# --- embeddings --------------------------------------------------------------


def unit(v):
    return v / np.linalg.norm(v)


def build_embeddings(vocabulary, rng):
    family_dirs = {
        name: unit(rng.normal(size=DIM)) for name in sorted(EMBED_FAMILIES)
    }
    word_family = {}
    for name, words in EMBED_FAMILIES.items():
        for w in words:
            word_family[w] = name

    entries = {}

    def vector_for(key, tokens):
        noise_rng = np.random.default_rng(
            abs(hash_stable(key)) % (2 ** 32)
        )
        noise = unit(noise_rng.normal(size=DIM))
        families = [word_family[t] for t in tokens if t in word_family]
        if families:
            base = unit(np.mean([family_dirs[f] for f in families], axis=0))
            return unit(0.9 * base + 0.44 * noise)
        return noise

    for word in sorted(vocabulary):
        entries[word] = vector_for(word, [word])
    for phrase in PHRASE_KEYS:
        entries[phrase] = vector_for(phrase, phrase.split())
    return entries


def hash_stable(text):
    import hashlib

    return int.from_bytes(
        hashlib.sha256(text.encode("utf-8")).digest()[:8], "big"
    )


# --- expert labels from an in-process pipeline run ---------------------------


def derive_expert_labels(out_dir, golden, stopword_set):
    from convomine.cli import (
        stage_extract_concepts,
        stage_extract_intents,
        stage_train_casual,
    )
    from convomine.config import PipelineConfig

    cfg = PipelineConfig()
    cfg.seed = SEED
    cfg.casual.precision_target = 0.9
    model_path = out_dir / "_tmp_model.json"
    concepts_path = out_dir / "_tmp_concepts.jsonl"
    intents_path = out_dir / "_tmp_intents.jsonl"
    model = stage_train_casual(
        out_dir / "transcripts.jsonl", out_dir / "annotations.tsv",
        out_dir / "stopwords.txt", model_path, cfg,
    )
    concept_records = stage_extract_concepts(
        out_dir / "transcripts.jsonl", out_dir / "annotations.tsv",
        out_dir / "embeddings.vec", out_dir / "stopwords.txt",
        out_dir / "english_vocab.txt", model_path, concepts_path, cfg,
        model=model,
    )
    intent_records = stage_extract_intents(
        out_dir / "transcripts.jsonl", out_dir / "annotations.tsv",
        out_dir / "embeddings.vec", model_path, concepts_path, intents_path,
        cfg, model=model,
    )
    for tmp in (model_path, concepts_path, intents_path):
        tmp.unlink()

    labels = {}
    for record in concept_records:
        tid = record["transcript_id"]
        gold_sets = [
            normalize_phrase(g, stopword_set)
            for g in golden[tid]["concepts"]
        ]
        per = {}
        for c in record["concepts"]:
            pset = normalize_phrase(c["phrase"], stopword_set)
            matched = any(pset & gs for gs in gold_sets)
            per[c["phrase"]] = "useful" if matched else "noisy"
        if per:
            labels.setdefault(tid, {})["concepts"] = per
    for record in intent_records:
        tid = record["transcript_id"]
        gold_idx = set(golden[tid]["intent_sentences"])
        per = {}
        for seg in record["segments"]:
            span = set(range(seg["start"], seg["end"] + 1))
            per[seg["id"]] = "useful" if span & gold_idx else "noisy"
        if per:
            labels.setdefault(tid, {})["intents"] = per
    return labels


# --- main --------------------------------------------------------------------


def collect_vocabulary():
    words = set()
    pools = (
        CASUAL_HEAD + CASUAL_TAIL + CASUAL_MID + FILLER + OOV_FILLER
        + [rows for group in INTENTS.values() for rows in group]
        + [rows for group in CONJ_FOLLOWUPS.values() for rows in group]
        + [rows for group in STATEMENTS.values() for rows in group]
        + [rows for group in CONTENT_STATEMENTS.values() for rows in group]
    )
    for rows in pools:
        for row in rows:
            surface = row.split("|", 1)[0].lower()
            if surface.isalpha():
                words.add(surface)
    words.update(NATO)
    words.update(first for first, _ in
                 (p for group in READOFF_HEADS.values() for p in group))
    words.update(second for _, second in
                 (p for group in READOFF_HEADS.values() for p in group))
    words.update({"code", "reads"})
    return words


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path,
                        default=Path(__file__).resolve().parent.parent
                        / "tests" / "fixtures" / "corpus")
    args = parser.parse_args(argv)
    out_dir = args.out
    out_dir.mkdir(parents=True, exist_ok=True)

    verify_templates()
    rng = np.random.default_rng(SEED)

    transcripts = []
    golden = {}
    topics = {}
    for i in range(N_PER_TOPIC * len(TOPICS)):
        topic = TOPICS[i % len(TOPICS)]
        tid = f"call_{i:04d}"
        transcript, gold_intents = build_transcript(tid, topic, rng)
        transcripts.append(transcript)
        topics[tid] = topic
        golden[tid] = {
            "concepts": gold_concepts_present(transcript, topic),
            "intent_sentences": gold_intents,
            "category": topic,
        }

    # transcripts.jsonl
    lines = [
        json.dumps(
            {"id": t.id, "sentences": [s.text for s in t.sentences]},
            sort_keys=True,
        )
        for t in transcripts
    ]
    (out_dir / "transcripts.jsonl").write_text(
        "\n".join(lines) + "\n", encoding="utf-8"
    )

    # annotations.tsv
    ann_lines = []
    for t in transcripts:
        ann_lines.append(f"# transcript = {t.id}")
        for s in t.sentences:
            ann_lines.append(f"# sent = {s.index}")
            for i, tok in enumerate(s.tokens):
                ner = tok.ner if tok.ner is not None else "_"
                ann_lines.append(
                    f"{i}\t{tok.surface}\t{tok.lemma}\t{tok.upos}"
                    f"\t{tok.head}\t{tok.dep_rel}\t{ner}"
                )
            ann_lines.append("")
    (out_dir / "annotations.tsv").write_text(
        "\n".join(ann_lines) + "\n", encoding="utf-8"
    )

    # resources
    vocabulary = collect_vocabulary() - OOV_WORDS
    (out_dir / "english_vocab.txt").write_text(
        "\n".join(sorted(vocabulary)) + "\n", encoding="utf-8"
    )
    (out_dir / "stopwords.txt").write_text(
        "\n".join(sorted(set(STOPWORDS))) + "\n", encoding="utf-8"
    )

    entries = build_embeddings(vocabulary, rng)
    vec_lines = [
        key + "\t" + " ".join(f"{x:.6f}" for x in vec)
        for key, vec in sorted(entries.items())
    ]
    (out_dir / "embeddings.vec").write_text(
        "\n".join(vec_lines) + "\n", encoding="utf-8"
    )

    # golden set
    golden_payload = {
        tid: {
            "concepts": golden[tid]["concepts"],
            "intent_sentences": golden[tid]["intent_sentences"],
            "category": golden[tid]["category"],
        }
        for tid in sorted(golden)
    }
    (out_dir / "golden.json").write_text(
        json.dumps(golden_payload, sort_keys=True, indent=1) + "\n",
        encoding="utf-8",
    )

    # category documents
    for category, docs in CATEGORY_DOCS.items():
        cat_dir = out_dir / "categories" / category
        cat_dir.mkdir(parents=True, exist_ok=True)
        for i, doc in enumerate(docs):
            (cat_dir / f"doc_{i}.txt").write_text(doc + "\n", encoding="utf-8")

    # config
    (out_dir / "config.ini").write_text(
        "\n".join([
            "[pipeline]",
            f"seed = {SEED}",
            "",
            "[casual]",
            "head_n = 5",
            "precision_target = 0.9",
            "",
            "[tagger]",
            "mode = tfidf",
            "top_k = 2",
            "",
        ]),
        encoding="utf-8",
    )

    # expert labels need pipeline predictions over the files just written
    stopword_set = frozenset(STOPWORDS)
    labels = derive_expert_labels(out_dir, golden, stopword_set)
    (out_dir / "expert_labels.json").write_text(
        json.dumps(labels, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )

    n_sentences = sum(len(t.sentences) for t in transcripts)
    print(f"wrote {len(transcripts)} transcripts, {n_sentences} sentences "
          f"to {out_dir}")

    write_golden_snapshots(out_dir)


def write_golden_snapshots(corpus_dir):
    """Run the full pipeline once and freeze its outputs next to the corpus."""
    from convomine.cli import main as cli_main

    golden_dir = corpus_dir.parent / "golden_outputs"
    golden_dir.mkdir(parents=True, exist_ok=True)
    status = cli_main([
        "pipeline",
        "--corpus", str(corpus_dir / "transcripts.jsonl"),
        "--annotations", str(corpus_dir / "annotations.tsv"),
        "--embeddings", str(corpus_dir / "embeddings.vec"),
        "--stopwords", str(corpus_dir / "stopwords.txt"),
        "--english-vocab", str(corpus_dir / "english_vocab.txt"),
        "--categories", str(corpus_dir / "categories"),
        "--golden", str(corpus_dir / "golden.json"),
        "--expert-labels", str(corpus_dir / "expert_labels.json"),
        "--config", str(corpus_dir / "config.ini"),
        "--out-dir", str(golden_dir),
    ])
    assert status == 0, f"golden pipeline run failed with exit {status}"
    # the manifest carries wall-clock timings; the snapshot is the outputs
    (golden_dir / "manifest.json").unlink()
    print(f"froze golden snapshots in {golden_dir}")


if __name__ == "__main__":
    main()
