"""tourdesk: a rule-driven travel attraction recommendation dialogue engine."""

from .config import AppConfig, build_engine
from .da import DialogueAct, Ontology, SlotValue, parse_da_list, serialize_da_list
from .dst import DialogueState, FlowPhase, StateTracker
from .engine import Engine, SimReport, SimScript, TurnRecord, load_script
from .nlu import LexiconMatcher, NluHypothesis
from .policy import AttractionDb, PolicyConfig, PolicyDecision, decide

__version__ = "0.1.0"

__all__ = [
    "AppConfig",
    "AttractionDb",
    "DialogueAct",
    "DialogueState",
    "Engine",
    "FlowPhase",
    "LexiconMatcher",
    "NluHypothesis",
    "Ontology",
    "PolicyConfig",
    "PolicyDecision",
    "SimReport",
    "SimScript",
    "SlotValue",
    "StateTracker",
    "TurnRecord",
    "build_engine",
    "decide",
    "load_script",
    "parse_da_list",
    "serialize_da_list",
    "__version__",
]
