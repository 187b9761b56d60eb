"""Exporter output must always satisfy the core's parsers, warning-free."""

import json
import warnings
from pathlib import Path

import numpy as np
import pytest

from convomine.corpus import (
    load_embeddings,
    parse_annotations,
    parse_transcripts,
    serialize_annotations,
)
from convomine_export.cli import main
from convomine_export.export import ExportJob, export
from convomine_export.toolchain import BuiltinToolchain, ToolchainError, make_toolchain

SAMPLE_SENTENCES = {
    "conv_0": [
        "hello thanks for calling john",
        "i want to cancel a reservation",
        "the hotel reservation shows two nights",
        "can you check the loyalty points in my account",
        "thank you so much",
    ],
    "conv_1": [
        "hi mary how are you",
        "we need to update the billing address",
        "the refund request takes five business days",
    ],
    "conv_2": [
        "good morning everyone",
        "",
        "the package ships from boston on friday",
    ],
    "conv_3": [
        "is the deluxe room available tonight",
        "and also make the reservation for a deluxe room",
        "the deluxe room rate includes breakfast",
    ],
    "conv_4": [
        "my tracking number reads 4417",
        "when does the delivery arrive",
        "one moment while the page loads",
    ],
}


@pytest.fixture
def sample_file(tmp_path):
    path = tmp_path / "transcripts.jsonl"
    path.write_text(
        "\n".join(
            json.dumps({"id": tid, "sentences": sentences})
            for tid, sentences in SAMPLE_SENTENCES.items()
        ) + "\n",
        encoding="utf-8",
    )
    return path


def run_export(tmp_path, sample_file, **kwargs):
    job = ExportJob(
        input_path=sample_file,
        annotations_path=tmp_path / "out.tsv",
        embeddings_path=tmp_path / "out.vec",
        **kwargs,
    )
    export(job)
    return job


class TestRoundTrip:
    def test_five_transcript_sample_parses_with_zero_warnings(
        self, tmp_path, sample_file
    ):
        job = run_export(tmp_path, sample_file)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            transcripts = parse_transcripts(sample_file)
            parse_annotations(job.annotations_path, transcripts)
            table = load_embeddings(job.embeddings_path)
        assert len(transcripts) == 5
        assert all(
            s.tokens or not s.text.strip()
            for t in transcripts for s in t.sentences
        )
        assert table.dim == 32
        print("\nACCEPTANCE PASS: exporter round-trip on the 5-transcript "
              "sample, zero warnings")

    def test_annotation_format_is_bit_exact(self, tmp_path, sample_file):
        job = run_export(tmp_path, sample_file)
        raw = job.annotations_path.read_text(encoding="utf-8")
        assert raw.startswith("# transcript = conv_0\n# sent = 0\n")
        transcripts = parse_transcripts(sample_file)
        parse_annotations(job.annotations_path, transcripts)
        back = tmp_path / "back.tsv"
        serialize_annotations(transcripts, back)
        assert back.read_bytes() == job.annotations_path.read_bytes()

    def test_empty_sentence_block_is_retained(self, tmp_path, sample_file):
        job = run_export(tmp_path, sample_file)
        raw = job.annotations_path.read_text(encoding="utf-8")
        assert "# transcript = conv_2" in raw
        block = raw.split("# transcript = conv_2\n", 1)[1]
        assert block.startswith("# sent = 0")
        assert "# sent = 1\n\n# sent = 2" in block

    def test_deterministic_output(self, tmp_path, sample_file):
        first = run_export(tmp_path, sample_file)
        a_ann = first.annotations_path.read_bytes()
        a_vec = first.embeddings_path.read_bytes()
        second = run_export(tmp_path, sample_file)
        assert second.annotations_path.read_bytes() == a_ann
        assert second.embeddings_path.read_bytes() == a_vec


class TestEmbeddingCoverage:
    def test_all_tokens_and_frequent_ngrams(self, tmp_path, sample_file):
        job = run_export(tmp_path, sample_file)
        table = load_embeddings(job.embeddings_path)
        # every alphabetic token is covered
        assert "reservation" in table.entries
        assert "hello" in table.entries
        # "deluxe room" occurs 3 times in conv_3: above the floor
        assert "deluxe room" in table.entries
        # "loyalty points" occurs once: below the default floor of 2
        assert "loyalty points" not in table.entries
        # non-alphabetic tokens never get keys
        assert "4417" not in table.entries

    def test_frequency_floor_configurable(self, tmp_path, sample_file):
        job = run_export(tmp_path, sample_file, frequency_floor=1)
        table = load_embeddings(job.embeddings_path)
        assert "loyalty points" in table.entries

    def test_vectors_unit_norm_and_dim(self, tmp_path, sample_file):
        job = run_export(tmp_path, sample_file, dim=16)
        table = load_embeddings(job.embeddings_path)
        assert table.dim == 16
        for vec in list(table.entries.values())[:20]:
            assert abs(np.linalg.norm(vec) - 1.0) < 1e-4


class TestBuiltinToolchain:
    def test_structural_invariants_on_random_soup(self):
        rng = np.random.default_rng(42)
        words = ["alpha", "the", "runs", "quickly", "boston", "42", "?",
                 "to", "check", "and", "seven", "reservation", "it", "is"]
        toolchain = BuiltinToolchain()
        for _ in range(200):
            n = int(rng.integers(1, 12))
            text = " ".join(str(rng.choice(words)) for _ in range(n))
            rows = toolchain.annotate(text)
            assert rows
            roots = [i for i, r in enumerate(rows) if r.dep_rel == "root"]
            assert len(roots) == 1
            for i, row in enumerate(rows):
                assert 0 <= row.head < len(rows)
                if i == roots[0]:
                    assert row.head == i
                else:
                    assert row.head != i

    def test_known_sentence_shape(self):
        rows = BuiltinToolchain().annotate("i want to cancel a reservation")
        assert [r.upos for r in rows] == [
            "PRON", "VERB", "PART", "VERB", "DET", "NOUN",
        ]
        assert rows[1].dep_rel == "root"
        assert rows[0].dep_rel == "nsubj"
        assert rows[5].lemma == "reservation"

    def test_ner_gazetteer(self):
        rows = BuiltinToolchain().annotate("john flew from boston on friday")
        by_surface = {r.surface: r.ner for r in rows}
        assert by_surface["john"] == "PERSON"
        assert by_surface["boston"] == "LOCATION"
        assert by_surface["friday"] == "TIME"

    def test_unknown_toolchain_rejected(self):
        with pytest.raises(ToolchainError, match="unknown toolchain"):
            make_toolchain("magic")

    def test_missing_spacy_is_actionable(self):
        try:
            import spacy  # noqa: F401
            pytest.skip("spaCy installed in this environment")
        except ImportError:
            pass
        with pytest.raises(ToolchainError, match="builtin"):
            make_toolchain("spacy:en_core_web_sm")


class TestCli:
    def test_successful_run(self, tmp_path, sample_file):
        status = main([
            "--in", str(sample_file),
            "--annotations", str(tmp_path / "a.tsv"),
            "--embeddings", str(tmp_path / "e.vec"),
        ])
        assert status == 0
        assert (tmp_path / "a.tsv").exists()
        assert (tmp_path / "e.vec").exists()

    def test_missing_input_is_exit_1(self, tmp_path, capsys):
        status = main([
            "--in", str(tmp_path / "nope.jsonl"),
            "--annotations", str(tmp_path / "a.tsv"),
            "--embeddings", str(tmp_path / "e.vec"),
        ])
        assert status == 1
        assert "nope.jsonl" in capsys.readouterr().err

    def test_missing_toolchain_is_exit_2(self, tmp_path, sample_file, capsys):
        try:
            import spacy  # noqa: F401
            pytest.skip("spaCy installed in this environment")
        except ImportError:
            pass
        status = main([
            "--in", str(sample_file),
            "--annotations", str(tmp_path / "a.tsv"),
            "--embeddings", str(tmp_path / "e.vec"),
            "--ner-model", "spacy:en_core_web_sm",
        ])
        assert status == 2
        assert "builtin" in capsys.readouterr().err

    def test_unknown_flag_is_exit_2(self):
        assert main(["--frobnicate"]) == 2
