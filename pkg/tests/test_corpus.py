"""Parser contracts and round-trip guarantees for the corpus layer."""

import json

import numpy as np
import pytest

from convomine.corpus import (
    EmbeddingTable,
    load_embeddings,
    load_expert_labels,
    load_golden_set,
    parse_annotations,
    parse_transcripts,
    serialize_annotations,
    serialize_transcripts,
)
from convomine.errors import InputError

from conftest import make_transcript


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestParseTranscripts:
    def test_single_record_three_sentences(self, tmp_path):
        path = write(tmp_path / "t.jsonl", json.dumps(
            {"id": "t1", "sentences": ["first one", "second one", "third one"]}
        ) + "\n")
        transcripts = parse_transcripts(path)
        assert len(transcripts) == 1
        assert [s.index for s in transcripts[0].sentences] == [0, 1, 2]
        assert transcripts[0].sentences[2].text == "third one"
        assert transcripts[0].sentences[0].tokens == []

    def test_empty_file(self, tmp_path):
        assert parse_transcripts(write(tmp_path / "t.jsonl", "")) == []

    def test_missing_id_names_line(self, tmp_path):
        path = write(
            tmp_path / "t.jsonl",
            json.dumps({"id": "a", "sentences": ["x"]}) + "\n"
            + json.dumps({"sentences": ["y"]}) + "\n",
        )
        with pytest.raises(InputError, match=":2"):
            parse_transcripts(path)

    def test_malformed_json_names_line(self, tmp_path):
        path = write(tmp_path / "t.jsonl", "{not json}\n")
        with pytest.raises(InputError, match=":1"):
            parse_transcripts(path)

    def test_duplicate_id(self, tmp_path):
        record = json.dumps({"id": "t1", "sentences": ["x"]})
        with pytest.raises(InputError, match="duplicate"):
            parse_transcripts(write(tmp_path / "t.jsonl", record + "\n" + record))

    def test_round_trip(self, tmp_path):
        path = write(tmp_path / "t.jsonl", "\n".join(
            json.dumps({"id": f"t{i}", "sentences": ["hello there", "  ", "bye"]},
                       sort_keys=True)
            for i in range(3)
        ) + "\n")
        transcripts = parse_transcripts(path)
        out = tmp_path / "back.jsonl"
        serialize_transcripts(transcripts, out)
        assert out.read_bytes() == path.read_bytes()


ANNOTATION = """\
# transcript = t1
# sent = 0
0\thello\thello\tINTJ\t1\tdiscourse\t_
1\tthere\tthere\tADV\t1\troot\t_

# sent = 1
0\ti\ti\tPRON\t1\tnsubj\t_
1\tbooked\tbook\tVERB\t1\troot\t_
2\ta\ta\tDET\t3\tdet\t_
3\troom\troom\tNOUN\t1\tobj\t_
4\tin\tin\tADP\t5\tcase\t_
5\tboston\tboston\tPROPN\t1\tobl\tLOCATION

"""


def transcript_file(tmp_path):
    return write(
        tmp_path / "t.jsonl",
        json.dumps({"id": "t1", "sentences": ["hello there",
                                              "i booked a room in boston"]}) + "\n",
    )


class TestParseAnnotations:
    def test_attaches_tokens(self, tmp_path):
        transcripts = parse_transcripts(transcript_file(tmp_path))
        ann = write(tmp_path / "a.tsv", ANNOTATION)
        parse_annotations(ann, transcripts)
        sent = transcripts[0].sentences[1]
        assert len(sent.tokens) == 6
        assert sent.tokens[1].lemma == "book"
        assert sent.tokens[5].ner == "LOCATION"
        assert sent.entity_spans() == [("LOCATION", 5, 5)]

    def test_head_out_of_range(self, tmp_path):
        transcripts = parse_transcripts(transcript_file(tmp_path))
        bad = ANNOTATION.replace("5\tboston\tboston\tPROPN\t1\tobl",
                                 "5\tboston\tboston\tPROPN\t9\tobl")
        with pytest.raises(InputError, match="head 9 out of range"):
            parse_annotations(write(tmp_path / "a.tsv", bad), transcripts)

    def test_two_roots(self, tmp_path):
        transcripts = parse_transcripts(transcript_file(tmp_path))
        bad = ANNOTATION.replace("0\thello\thello\tINTJ\t1\tdiscourse",
                                 "0\thello\thello\tINTJ\t0\troot")
        with pytest.raises(InputError, match="exactly 1 root"):
            parse_annotations(write(tmp_path / "a.tsv", bad), transcripts)

    def test_missing_sentence_is_count_mismatch(self, tmp_path):
        transcripts = parse_transcripts(transcript_file(tmp_path))
        partial = ANNOTATION.split("# sent = 1")[0]
        with pytest.raises(InputError, match="mismatch"):
            parse_annotations(write(tmp_path / "a.tsv", partial), transcripts)

    def test_unknown_transcript(self, tmp_path):
        transcripts = parse_transcripts(transcript_file(tmp_path))
        bad = ANNOTATION.replace("# transcript = t1", "# transcript = zz")
        with pytest.raises(InputError, match="unknown transcript"):
            parse_annotations(write(tmp_path / "a.tsv", bad), transcripts)

    def test_round_trip(self, tmp_path):
        transcripts = parse_transcripts(transcript_file(tmp_path))
        ann = write(tmp_path / "a.tsv", ANNOTATION)
        parse_annotations(ann, transcripts)
        out = tmp_path / "back.tsv"
        serialize_annotations(transcripts, out)
        assert out.read_bytes() == ann.read_bytes()


class TestEmbeddings:
    def test_two_entries(self, tmp_path):
        path = write(tmp_path / "e.vec",
                     "alpha\t1 0 0 0\nbeta\t0 1 0 0\n")
        table = load_embeddings(path)
        assert table.dim == 4
        assert len(table.entries) == 2

    def test_dim_mismatch(self, tmp_path):
        path = write(tmp_path / "e.vec", "alpha\t1 0 0\nbeta\t0 1 0 0\n")
        with pytest.raises(InputError, match="dimension"):
            load_embeddings(path)

    def test_non_numeric(self, tmp_path):
        with pytest.raises(InputError, match="non-numeric"):
            load_embeddings(write(tmp_path / "e.vec", "alpha\t1 x 0\n"))

    def test_lowercased_lookup(self, tmp_path):
        table = load_embeddings(
            write(tmp_path / "e.vec", "reservation\t1 2 3\n")
        )
        np.testing.assert_array_equal(
            table.lookup("Reservation"), table.lookup("reservation")
        )

    def test_phrase_falls_back_to_token_mean(self, tmp_path):
        table = load_embeddings(
            write(tmp_path / "e.vec", "hotel\t1 0\nreservation\t0 1\n")
        )
        np.testing.assert_allclose(
            table.lookup("hotel reservation"), [0.5, 0.5]
        )

    def test_no_known_tokens_has_no_vector(self, tmp_path):
        table = load_embeddings(write(tmp_path / "e.vec", "hotel\t1 0\n"))
        assert table.lookup("unknown words") is None
        assert table.lookup("unknown") is None

    def test_duplicate_key_warns(self, tmp_path):
        path = write(tmp_path / "e.vec", "a\t1 0\na\t0 1\n")
        with pytest.warns(UserWarning, match="duplicate"):
            load_embeddings(path)


class TestGoldenAndLabels:
    def test_golden_validates_sentence_indices(self, tmp_path):
        transcript = make_transcript("t1", [
            ["hello|=|INTJ|root|0"], ["bye|=|INTJ|root|0"],
        ])
        path = write(tmp_path / "g.json", json.dumps(
            {"t1": {"concepts": ["x"], "intent_sentences": [5],
                    "category": "c"}}
        ))
        with pytest.raises(InputError, match="do not exist"):
            load_golden_set(path, [transcript])

    def test_golden_validates_category(self, tmp_path):
        path = write(tmp_path / "g.json", json.dumps(
            {"t1": {"concepts": [], "intent_sentences": [],
                    "category": "nope"}}
        ))
        with pytest.raises(InputError, match="not in the category set"):
            load_golden_set(path, categories={"billing"})

    def test_expert_labels_reject_unknown_value(self, tmp_path):
        path = write(tmp_path / "l.json", json.dumps(
            {"t1": {"concepts": {"phrase": "great"}}}
        ))
        with pytest.raises(InputError, match="invalid labels"):
            load_expert_labels(path)

    def test_expert_labels_load(self, tmp_path):
        path = write(tmp_path / "l.json", json.dumps(
            {"t1": {"concepts": {"room": "useful"},
                    "intents": {"t1:3-4": "noisy"}}}
        ))
        labels = load_expert_labels(path)
        assert labels.concepts["t1"]["room"] == "useful"
        assert labels.intents["t1"]["t1:3-4"] == "noisy"
