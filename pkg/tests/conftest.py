import pytest

from tourdesk.config import AppConfig, build_engine
from tourdesk.da import load_ontology
from tourdesk.nlg import load_cue_rules, load_templates
from tourdesk.nlu import LexiconMatcher, load_corpus, load_lexicon
from tourdesk.policy import load_attraction_db


@pytest.fixture(scope="session")
def app_config():
    return AppConfig.with_defaults()


@pytest.fixture(scope="session")
def ontology(app_config):
    return load_ontology(app_config.ontology_path)


@pytest.fixture(scope="session")
def db(app_config):
    return load_attraction_db(app_config.attractions_path)


@pytest.fixture(scope="session")
def templates(app_config):
    return load_templates(app_config.template_paths)


@pytest.fixture(scope="session")
def cue_rules(app_config, ontology):
    return load_cue_rules(app_config.cues_path, ontology)


@pytest.fixture(scope="session")
def corpus(app_config, ontology):
    return load_corpus(app_config.corpus_path, ontology)


@pytest.fixture(scope="session")
def matcher(app_config, ontology, corpus):
    entries = load_lexicon(app_config.lexicon_path, ontology)
    return LexiconMatcher(ontology, entries, corpus)


@pytest.fixture()
def engine(tmp_path):
    # fixed clock => deterministic ids, zero latencies, byte-stable transcripts
    return build_engine(data_dir=tmp_path / "transcripts", fixed_clock=True)
