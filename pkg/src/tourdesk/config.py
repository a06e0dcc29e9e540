"""Configuration loading and engine assembly.

A config file is a YAML mapping with `assets` (file paths, relative to
the config file) and `engine` (runtime settings) sections.  Omitted
entries fall back to the packaged defaults.  DATA_DIR and LOG_LEVEL
environment variables override their config counterparts.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .da import load_ontology
from .dst import StateTracker
from .nlg import load_cue_rules, load_templates
from .nlu import ExternalNluClient, LexiconMatcher, load_corpus, load_lexicon
from .policy import PolicyConfig, load_attraction_db

_DATA = resources.files("tourdesk") / "data"


@dataclass
class AppConfig:
    ontology_path: Path
    lexicon_path: Path
    corpus_path: Path
    attractions_path: Path
    template_paths: tuple[Path, ...]
    cues_path: Path
    language: str = "en"
    profile_order: tuple[str, ...] = ("user_name", "user_accompany", "user_food_type")
    turn_budget: int = 30
    restaurant_followup: bool = True
    fixed_clock: bool = False
    seed: int | None = None
    data_dir: Path = Path("transcripts")
    external_nlu_url: str | None = None
    external_nlu_timeout: float = 2.0

    @classmethod
    def with_defaults(cls, **overrides) -> "AppConfig":
        config = cls(
            ontology_path=Path(str(_DATA / "ontology.yaml")),
            lexicon_path=Path(str(_DATA / "lexicon.yaml")),
            corpus_path=Path(str(_DATA / "corpus.tsv")),
            attractions_path=Path(str(_DATA / "attractions.yaml")),
            template_paths=(
                Path(str(_DATA / "templates_en.yaml")),
                Path(str(_DATA / "templates_ja.yaml")),
            ),
            cues_path=Path(str(_DATA / "cues.yaml")),
        )
        if env_dir := os.environ.get("DATA_DIR"):
            config.data_dir = Path(env_dir)
        return replace(config, **overrides) if overrides else config

    @classmethod
    def from_file(cls, path, **overrides) -> "AppConfig":
        import yaml

        path = Path(path)
        with open(path, "r", encoding="utf-8") as handle:
            doc = yaml.safe_load(handle) or {}
        base = path.parent

        def resolve(value):
            p = Path(str(value))
            return p if p.is_absolute() else base / p

        assets = doc.get("assets", {})
        engine = doc.get("engine", {})
        config = cls.with_defaults()
        if "ontology" in assets:
            config.ontology_path = resolve(assets["ontology"])
        if "lexicon" in assets:
            config.lexicon_path = resolve(assets["lexicon"])
        if "corpus" in assets:
            config.corpus_path = resolve(assets["corpus"])
        if "attractions" in assets:
            config.attractions_path = resolve(assets["attractions"])
        if "templates" in assets:
            config.template_paths = tuple(resolve(p) for p in assets["templates"])
        if "cues" in assets:
            config.cues_path = resolve(assets["cues"])
        for key in (
            "language",
            "turn_budget",
            "restaurant_followup",
            "fixed_clock",
            "seed",
            "external_nlu_url",
            "external_nlu_timeout",
        ):
            if key in engine:
                setattr(config, key, engine[key])
        if "profile_order" in engine:
            config.profile_order = tuple(engine["profile_order"])
        if "data_dir" in engine and "DATA_DIR" not in os.environ:
            config.data_dir = resolve(engine["data_dir"])
        return replace(config, **overrides) if overrides else config

    def policy_config(self) -> PolicyConfig:
        return PolicyConfig(
            profile_order=self.profile_order,
            turn_budget=self.turn_budget,
            restaurant_followup=self.restaurant_followup,
        )


@dataclass
class EngineAssets:
    ontology: object
    matcher: LexiconMatcher
    external_nlu: ExternalNluClient | None
    db: object
    templates: object
    cue_rules: dict
    tracker: StateTracker = field(init=False)

    def __post_init__(self):
        self.tracker = StateTracker(self.ontology, self.db.names())


def load_assets(config: AppConfig) -> EngineAssets:
    ontology = load_ontology(config.ontology_path)
    corpus = load_corpus(config.corpus_path, ontology)
    entries = load_lexicon(config.lexicon_path, ontology)
    matcher = LexiconMatcher(ontology, entries, corpus)
    external = (
        ExternalNluClient(config.external_nlu_url, matcher, config.external_nlu_timeout)
        if config.external_nlu_url
        else None
    )
    return EngineAssets(
        ontology=ontology,
        matcher=matcher,
        external_nlu=external,
        db=load_attraction_db(config.attractions_path),
        templates=load_templates(config.template_paths),
        cue_rules=load_cue_rules(config.cues_path, ontology),
    )


def configure_logging() -> None:
    level = os.environ.get("LOG_LEVEL", "INFO").upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")


def build_engine(config_path=None, **overrides):
    from .engine import Engine

    if config_path:
        config = AppConfig.from_file(config_path, **overrides)
    else:
        config = AppConfig.with_defaults(**overrides)
    return Engine(load_assets(config), config)
