"""Command line for the exporter.

Exit codes: 0 success, 1 input error, 2 toolchain missing/unknown,
3 output validation failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from convomine.errors import InputError

from . import __version__
from .export import ExportJob, ValidationError, export
from .toolchain import ToolchainError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convomine-export",
        description="Convert raw transcripts into the annotation sidecar and "
                    "embedding files consumed by convomine.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--in", dest="input_path", type=Path, required=True,
                        help="transcript file (one JSON object per line)")
    parser.add_argument("--annotations", type=Path, required=True,
                        help="annotation sidecar output path")
    parser.add_argument("--embeddings", type=Path, required=True,
                        help="embedding table output path")
    parser.add_argument("--ner-model", default="builtin",
                        help="'builtin' or 'spacy:<model>' (default builtin)")
    parser.add_argument("--embed-model", default="builtin",
                        help="identifier mixed into the embedding seeds")
    parser.add_argument("--dim", type=int, default=32)
    parser.add_argument("--ngram-max", type=int, default=5)
    parser.add_argument("--freq-floor", type=int, default=2,
                        help="minimum corpus frequency for phrase vectors")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    job = ExportJob(
        input_path=args.input_path,
        annotations_path=args.annotations,
        embeddings_path=args.embeddings,
        ner_model=args.ner_model,
        embed_model=args.embed_model,
        dim=args.dim,
        ngram_max=args.ngram_max,
        frequency_floor=args.freq_floor,
    )
    try:
        export(job)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except ToolchainError as exc:
        print(f"toolchain error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
