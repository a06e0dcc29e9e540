"""Template realization and robot expression/motion cues.

Template lookup is exact on (intent, slot-name set, language); a missing
combination is a hard error so paraphrase drift cannot slip through.
Every slot value is interpolated verbatim into the output.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .da import DialogueAct, Ontology

EXPRESSIONS = ("neutral", "small_smile", "large_smile", "concerned")
MOTIONS = ("none", "nod", "bow", "gesture_point")

Shape = tuple[str, frozenset[str]]


class TemplateError(Exception):
    pass


class TemplateMissError(TemplateError):
    """No template for one or more (intent, slot set) combinations."""

    def __init__(self, misses: Sequence[Shape], language: str):
        self.misses = list(misses)
        self.language = language
        described = "; ".join(f"{intent}({', '.join(sorted(slots))})" for intent, slots in misses)
        super().__init__(f"no {language} template for: {described}")


class CueError(Exception):
    pass


@dataclass(frozen=True)
class Template:
    intent: str
    slots: frozenset[str]
    pattern: str
    language: str


@dataclass(frozen=True)
class CueState:
    expression: str
    motion: str


@dataclass(frozen=True)
class CueRule:
    intent: str
    during: CueState
    after: CueState


@dataclass(frozen=True)
class Cue:
    intent: str
    during: CueState
    after: CueState

    def to_dict(self) -> dict:
        return {
            "intent": self.intent,
            "during": {"expression": self.during.expression, "motion": self.during.motion},
            "after": {"expression": self.after.expression, "motion": self.after.motion},
        }


class TemplateSet:
    def __init__(self, templates: Iterable[Template]):
        self._index: dict[tuple[str, frozenset[str], str], Template] = {}
        self.languages: set[str] = set()
        for template in templates:
            key = (template.intent, template.slots, template.language)
            if key in self._index:
                raise TemplateError(
                    f"duplicate template for {template.intent}/{sorted(template.slots)}/{template.language}"
                )
            self._index[key] = template
            self.languages.add(template.language)

    def find(self, intent: str, slots: frozenset[str], language: str) -> Template | None:
        return self._index.get((intent, slots, language))


def _placeholders(pattern: str) -> set[str]:
    return {name for _, name, _, _ in string.Formatter().parse(pattern) if name}


def load_templates(paths: Iterable) -> TemplateSet:
    """Each file: intent -> list of {slots, pattern, language}."""
    import yaml

    templates: list[Template] = []
    for path in paths:
        with open(path, "r", encoding="utf-8") as handle:
            doc = yaml.safe_load(handle)
        if not isinstance(doc, Mapping):
            raise TemplateError(f"{path}: expected a mapping keyed by intent")
        for intent, variants in doc.items():
            for variant in variants or []:
                slots = frozenset(str(s) for s in variant.get("slots", []))
                pattern = str(variant["pattern"])
                extra = _placeholders(pattern) - slots
                if extra:
                    raise TemplateError(
                        f"{path}: template {intent}/{sorted(slots)} uses unknown placeholders {sorted(extra)}"
                    )
                templates.append(
                    Template(str(intent), slots, pattern, str(variant.get("language", "en")))
                )
    return TemplateSet(templates)


def realize(das: Sequence[DialogueAct], templates: TemplateSet, language: str = "en") -> str:
    """Deterministically render acts to one utterance; a miss is fatal."""
    misses: list[Shape] = []
    parts: list[str] = []
    for da in das:
        template = templates.find(da.intent, da.slot_names(), language)
        if template is None:
            misses.append((da.intent, da.slot_names()))
            continue
        values = {pair.slot: pair.value for pair in da.pairs}
        parts.append(template.pattern.format_map(values))
    if misses:
        raise TemplateMissError(misses, language)
    return " ".join(parts)


def load_cue_rules(path, ontology: Ontology) -> dict[str, CueRule]:
    """intent -> {during, after}; must be total over system intents."""
    import yaml

    with open(path, "r", encoding="utf-8") as handle:
        doc = yaml.safe_load(handle)
    if not isinstance(doc, Mapping):
        raise CueError(f"{path}: expected a mapping keyed by intent")
    rules: dict[str, CueRule] = {}
    for intent, spec in doc.items():
        rules[str(intent)] = CueRule(
            intent=str(intent),
            during=_cue_state(spec.get("during"), intent, "during"),
            after=_cue_state(spec.get("after"), intent, "after"),
        )
    system_intents = {i.name for i in ontology.intents_for("system")}
    missing = system_intents - set(rules)
    if missing:
        raise CueError(f"missing cue rules for system intents: {sorted(missing)}")
    unknown = set(rules) - system_intents
    if unknown:
        raise CueError(f"cue rules for unknown system intents: {sorted(unknown)}")
    return rules


def _cue_state(raw, intent, which) -> CueState:
    if not isinstance(raw, Mapping):
        raise CueError(f"cue rule {intent}.{which} must define expression and motion")
    expression = str(raw.get("expression", "neutral"))
    motion = str(raw.get("motion", "none"))
    if expression not in EXPRESSIONS:
        raise CueError(f"cue rule {intent}.{which}: unknown expression {expression!r}")
    if motion not in MOTIONS:
        raise CueError(f"cue rule {intent}.{which}: unknown motion {motion!r}")
    return CueState(expression, motion)


def cues_for(das: Sequence[DialogueAct], cue_rules: Mapping[str, CueRule]) -> list[Cue]:
    """One cue per act; rules are total, so this never fails after load."""
    cues = []
    for da in das:
        rule = cue_rules[da.intent]
        cues.append(Cue(da.intent, rule.during, rule.after))
    return cues


def coverage_check(
    templates: TemplateSet,
    shapes: Iterable[Shape],
    languages: Iterable[str] | None = None,
) -> list[tuple[str, frozenset[str], str]]:
    """Gaps between what the policy can emit and what templates can say.

    Coverage is one-directional: unused templates are fine, missing ones
    are listed.
    """
    langs = sorted(languages) if languages is not None else sorted(templates.languages)
    gaps = []
    for intent, slots in sorted(set(shapes), key=lambda s: (s[0], sorted(s[1]))):
        for language in langs:
            if templates.find(intent, slots, language) is None:
                gaps.append((intent, slots, language))
    return gaps


def decision_shapes(decisions: Iterable) -> set[Shape]:
    """Collect the (intent, slot set) shapes from policy decisions."""
    shapes: set[Shape] = set()
    for decision in decisions:
        for da in decision.das:
            shapes.add((da.intent, da.slot_names()))
    return shapes
