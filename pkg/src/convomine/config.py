"""Pipeline configuration: every tunable, with defaults, loaded from INI files.

Sections mirror module names ([pipeline], [casual], [concepts], [intents],
[tagger], [metrics]); any key not listed below is rejected so typos fail fast.
With a fixed config (seed included) the whole pipeline is deterministic.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict

from .errors import ConfigError


@dataclass
class CasualConfig:
    head_n: int = 5
    precision_target: float = 0.95
    n_trees: int = 25
    max_depth: int = 4


@dataclass
class ConceptsConfig:
    ngram_max: int = 5
    idf_phrase_min: float = 0.5
    idf_token_min: float = 0.3
    ner_sim_threshold: float = 0.80
    group_sim_threshold: float = 0.75
    weight_frequency: float = 0.5
    weight_pos: float = 0.2
    weight_location: float = 0.15
    weight_similarity: float = 0.15
    top_k: int = 10
    stopword_ratio: float = 3.0
    stopword_min_count: int = 10
    location_earliest_first: bool = True


@dataclass
class IntentsConfig:
    max_segment_len: int = 6
    boost_concepts: float = 0.2
    boost_questions: float = 0.3
    boost_summary: float = 0.2
    max_intents: int = 5
    summary_fraction: float = 0.15
    summary_cap: int = 10
    enable_q1: bool = True
    enable_q2: bool = True
    enable_q3: bool = True
    enable_q4: bool = True


@dataclass
class TaggerConfig:
    top_m: int = 500
    mode: str = "tfidf"
    top_k: int = 2
    # comma-separated section names; empty string disables section filtering
    section_whitelist: str = ""

    def whitelist(self) -> tuple:
        return tuple(
            s.strip() for s in self.section_whitelist.split(",") if s.strip()
        )


@dataclass
class MetricsConfig:
    min_shared_tokens: int = 1
    recall_k: int = 2


@dataclass
class PipelineConfig:
    seed: int = 13
    casual: CasualConfig = field(default_factory=CasualConfig)
    concepts: ConceptsConfig = field(default_factory=ConceptsConfig)
    intents: IntentsConfig = field(default_factory=IntentsConfig)
    tagger: TaggerConfig = field(default_factory=TaggerConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)

    def validate(self) -> None:
        c = self.casual
        if c.head_n < 1:
            raise ConfigError("casual.head_n must be >= 1")
        if not 0.0 < c.precision_target <= 1.0:
            raise ConfigError("casual.precision_target must be in (0, 1]")
        if c.n_trees < 1 or c.max_depth < 1:
            raise ConfigError("casual.n_trees and casual.max_depth must be >= 1")
        k = self.concepts
        if not 1 <= k.ngram_max <= 5:
            raise ConfigError("concepts.ngram_max must be in 1..5")
        for name in ("ner_sim_threshold", "group_sim_threshold"):
            v = getattr(k, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"concepts.{name} must be in [0, 1]")
        weights = (k.weight_frequency, k.weight_pos, k.weight_location,
                   k.weight_similarity)
        if any(w < 0 for w in weights):
            raise ConfigError("concepts ranking weights must be non-negative")
        if abs(sum(weights) - 1.0) > 1e-9:
            raise ConfigError("concepts ranking weights must sum to 1")
        if k.top_k < 1:
            raise ConfigError("concepts.top_k must be >= 1")
        i = self.intents
        if i.max_segment_len < 1:
            raise ConfigError("intents.max_segment_len must be >= 1")
        if i.max_intents < 1:
            raise ConfigError("intents.max_intents must be >= 1")
        if any(b < 0 for b in (i.boost_concepts, i.boost_questions, i.boost_summary)):
            raise ConfigError("intents boosts must be non-negative")
        if not 0.0 < i.summary_fraction <= 1.0:
            raise ConfigError("intents.summary_fraction must be in (0, 1]")
        if i.summary_cap < 1:
            raise ConfigError("intents.summary_cap must be >= 1")
        t = self.tagger
        if t.mode not in ("tfidf", "bow", "binary"):
            raise ConfigError("tagger.mode must be one of tfidf, bow, binary")
        if t.top_m < 1 or t.top_k < 1:
            raise ConfigError("tagger.top_m and tagger.top_k must be >= 1")
        m = self.metrics
        if m.min_shared_tokens < 1 or m.recall_k < 1:
            raise ConfigError("metrics.min_shared_tokens and metrics.recall_k "
                              "must be >= 1")

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


_SECTIONS = {
    "pipeline": PipelineConfig,
    "casual": CasualConfig,
    "concepts": ConceptsConfig,
    "intents": IntentsConfig,
    "tagger": TaggerConfig,
    "metrics": MetricsConfig,
}


def _coerce(section: str, key: str, raw: str, target_type: type) -> Any:
    try:
        if target_type is bool:
            low = raw.strip().lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError(raw)
        return target_type(raw)
    except ValueError as exc:
        raise ConfigError(
            f"[{section}] {key} = {raw!r} is not a valid {target_type.__name__}"
        ) from exc


def load_config(path: str | Path) -> PipelineConfig:
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc

    config = PipelineConfig()
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown config section [{section}]")
        target = config if section == "pipeline" else getattr(config, section)
        fields = {f.name: f for f in dataclasses.fields(target)}
        for key, raw in parser.items(section):
            if key not in fields or dataclasses.is_dataclass(
                getattr(target, key, None)
            ):
                raise ConfigError(f"unknown config key [{section}] {key}")
            target_type = type(getattr(target, key))
            setattr(target, key, _coerce(section, key, raw, target_type))
    config.validate()
    return config
