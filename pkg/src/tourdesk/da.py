"""Dialogue acts: the semantic currency shared by every engine module.

A dialogue act (DA) pairs an intent with zero or more slot=value pairs.
DA lists travel between modules and files as text in a small grammar:

    da_list := da ("," da)*
    da      := intent [ "(" [pair ("," pair)*] ")" ]
    pair    := slot "=" value
    value   := "?" | value-string

A comma after a closing parenthesis (or after a bare intent token)
separates acts; commas inside parentheses separate pairs.  Values may
contain anything except "," "(" ")" "=", so spaces, colons, hyphens and
non-ASCII text are all legal ("11:00-21:00", "Tokyo Trick Art Museum").
"?" is the requested-value marker carried by `request` acts.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping, Sequence

REQUESTED = "?"

Speaker = Literal["system", "customer"]

_TOKEN_RE = re.compile(r"[A-Za-z0-9_-]+")
_VALUE_FORBIDDEN = frozenset(",()=")


class DaError(Exception):
    """Base class for dialogue-act errors."""


class DaSyntaxError(DaError):
    """Unparseable DA text.  Carries the offset and what was expected."""

    def __init__(self, position: int, expected: str, found: str = ""):
        self.position = position
        self.expected = expected
        self.found = found
        shown = repr(found) if found else "end of input"
        super().__init__(f"expected {expected} at position {position}, found {shown}")


class ValidationError(DaError):
    """One or more DAs violate the ontology."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class CapacityError(DaError):
    """Enumeration would exceed the configured ceiling."""


class OntologyError(DaError):
    """Ontology document violates its own invariants."""


@dataclass(frozen=True)
class SlotDef:
    """A slot declaration: free string or closed categorical value list."""

    name: str
    value_type: Literal["string", "categorical"]
    allowed_values: tuple[str, ...] = ()
    description: str = ""


@dataclass(frozen=True)
class IntentDef:
    name: str
    speaker: Literal["system", "customer", "both"]
    allowed_slots: tuple[str, ...] = ()
    max_slots_per_da: int = 0

    def speakable_by(self, speaker: Speaker) -> bool:
        return self.speaker == "both" or self.speaker == speaker


class Ontology:
    """Validated inventory of intents and slots; immutable after load."""

    def __init__(self, name: str, version: str, intents: Sequence[IntentDef], slots: Sequence[SlotDef]):
        self.name = name
        self.version = version
        self.intents = tuple(intents)
        self.slots = tuple(slots)
        self._intent_index = {i.name: i for i in intents}
        self._slot_index = {s.name: s for s in slots}
        self._check()

    def _check(self) -> None:
        if len(self._intent_index) != len(self.intents):
            raise OntologyError("duplicate intent names")
        if len(self._slot_index) != len(self.slots):
            raise OntologyError("duplicate slot names")
        for slot in self.slots:
            if slot.value_type == "categorical":
                if not slot.allowed_values:
                    raise OntologyError(f"categorical slot {slot.name} has no allowed values")
                if len(set(slot.allowed_values)) != len(slot.allowed_values):
                    raise OntologyError(f"slot {slot.name} repeats an allowed value")
            elif slot.allowed_values:
                raise OntologyError(f"string slot {slot.name} must not list allowed values")
        for intent in self.intents:
            for slot_name in intent.allowed_slots:
                if slot_name not in self._slot_index:
                    raise OntologyError(f"intent {intent.name} references unknown slot {slot_name}")

    def intent(self, name: str) -> IntentDef | None:
        return self._intent_index.get(name)

    def slot(self, name: str) -> SlotDef | None:
        return self._slot_index.get(name)

    def intents_for(self, speaker: Speaker) -> list[IntentDef]:
        return [i for i in self.intents if i.speakable_by(speaker)]


@dataclass(frozen=True)
class SlotValue:
    slot: str
    value: str

    @property
    def is_requested(self) -> bool:
        return self.value == REQUESTED

    def __str__(self) -> str:
        return f"{self.slot}={self.value}"


@dataclass(frozen=True)
class DialogueAct:
    intent: str
    pairs: tuple[SlotValue, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(self.pairs))

    @property
    def signature(self) -> tuple[str, frozenset[tuple[str, str]]]:
        """Order-insensitive identity used where pair order is irrelevant."""
        return (self.intent, frozenset((p.slot, p.value) for p in self.pairs))

    def slot_names(self) -> frozenset[str]:
        return frozenset(p.slot for p in self.pairs)

    def value_of(self, slot: str) -> str | None:
        for pair in self.pairs:
            if pair.slot == slot:
                return pair.value
        return None

    def __str__(self) -> str:
        return serialize_da(self)


def make_da(intent: str, *pairs: tuple[str, str]) -> DialogueAct:
    return DialogueAct(intent, tuple(SlotValue(s, v) for s, v in pairs))


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        self.violations.append(message)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, char: str, expected: str) -> None:
        if self.peek() != char:
            raise DaSyntaxError(self.pos, expected, self.peek())
        self.pos += 1

    def token(self, expected: str) -> str:
        match = _TOKEN_RE.match(self.text, self.pos)
        if not match:
            raise DaSyntaxError(self.pos, expected, self.peek())
        self.pos = match.end()
        return match.group()

    def value(self) -> str:
        start = self.pos
        chars: list[str] = []
        while self.pos < len(self.text) and self.text[self.pos] not in ",)":
            char = self.text[self.pos]
            if char in "(=":
                raise DaSyntaxError(self.pos, "',' or ')'", char)
            chars.append(char)
            self.pos += 1
        value = "".join(chars).strip()
        if not value:
            raise DaSyntaxError(start, "slot value", self.peek())
        return value


def parse_da_list(text: str, ontology: Ontology | None = None, validate: bool = False) -> list[DialogueAct]:
    """Parse a textual DA list; optionally validate against the ontology.

    Raises DaSyntaxError on malformed input and ValidationError (with all
    collected violations) when `validate` is set and any act is invalid.
    """
    scanner = _Scanner(text)
    scanner.skip_ws()
    if scanner.at_end():
        raise DaSyntaxError(scanner.pos, "dialogue act")
    das: list[DialogueAct] = []
    while True:
        intent = scanner.token("intent name")
        scanner.skip_ws()
        pairs: list[SlotValue] = []
        if scanner.peek() == "(":
            scanner.pos += 1
            scanner.skip_ws()
            if scanner.peek() == ")":
                scanner.pos += 1
            else:
                while True:
                    slot = scanner.token("slot name")
                    scanner.skip_ws()
                    scanner.expect("=", "'='")
                    pairs.append(SlotValue(slot, scanner.value()))
                    if scanner.peek() == ",":
                        scanner.pos += 1
                        scanner.skip_ws()
                        continue
                    scanner.expect(")", "',' or ')'")
                    break
        das.append(DialogueAct(intent, tuple(pairs)))
        scanner.skip_ws()
        if scanner.at_end():
            break
        scanner.expect(",", "','")
        scanner.skip_ws()
        if scanner.at_end():
            raise DaSyntaxError(scanner.pos, "dialogue act")
    if validate:
        if ontology is None:
            raise ValueError("validate=True requires an ontology")
        violations: list[str] = []
        for da in das:
            violations.extend(validate_da(da, ontology).violations)
        if violations:
            raise ValidationError(violations)
    return das


def serialize_da(da: DialogueAct) -> str:
    inner = ", ".join(f"{p.slot}={p.value}" for p in da.pairs)
    return f"{da.intent} ({inner})"


def serialize_da_list(das: Iterable[DialogueAct]) -> str:
    """Canonical surface form; inverse of parse_da_list for valid acts."""
    return ", ".join(serialize_da(da) for da in das)


def validate_da(da: DialogueAct, ontology: Ontology, speaker: Speaker | None = None) -> ValidationReport:
    """Check one act against the ontology; the report lists every violation."""
    report = ValidationReport()
    intent = ontology.intent(da.intent)
    if intent is None:
        report.add(f"unknown intent {da.intent!r}")
        return report
    if speaker is not None and not intent.speakable_by(speaker):
        report.add(f"intent {da.intent!r} is not a {speaker} intent")
    seen: set[str] = set()
    for pair in da.pairs:
        if pair.slot in seen:
            report.add(f"duplicate slot {pair.slot!r} in {da.intent}")
            continue
        seen.add(pair.slot)
        slot = ontology.slot(pair.slot)
        if slot is None:
            report.add(f"unknown slot {pair.slot!r}")
            continue
        if pair.slot not in intent.allowed_slots:
            report.add(f"slot {pair.slot!r} not allowed for intent {da.intent!r}")
            continue
        if pair.value != pair.value.strip() or not pair.value:
            report.add(f"value for {pair.slot!r} has stray whitespace or is empty")
            continue
        if any(c in _VALUE_FORBIDDEN for c in pair.value):
            report.add(f"value for {pair.slot!r} contains a reserved character")
            continue
        if pair.is_requested:
            if da.intent != "request":
                report.add(f"requested marker '?' outside request (intent {da.intent!r})")
        elif slot.value_type == "categorical" and pair.value not in slot.allowed_values:
            report.add(f"value {pair.value!r} not allowed for categorical slot {pair.slot!r}")
    return report


def enumerate_das(
    ontology: Ontology,
    speaker: Speaker,
    max_pairs: int,
    seed_values: Mapping[str, Sequence[str]] | None = None,
    ceiling: int = 50_000,
) -> list[DialogueAct]:
    """All valid acts for one speaker, deterministically ordered.

    Per intent (declaration order), every slot combination of size
    0..min(max_pairs, intent.max_slots_per_da) is expanded, combinations
    in lexicographic slot-name order.  `request` slots carry only the
    requested marker; categorical slots range over their allowed values;
    string slots range over `seed_values` entries and are skipped when
    none are given.
    """
    if max_pairs < 0:
        raise ValueError("max_pairs must be >= 0")
    seeds = seed_values or {}
    out: list[DialogueAct] = []
    for intent in ontology.intents:
        if not intent.speakable_by(speaker):
            continue
        options: list[tuple[str, list[str]]] = []
        for slot_name in sorted(intent.allowed_slots):
            slot = ontology.slot(slot_name)
            assert slot is not None
            if intent.name == "request":
                values = [REQUESTED]
            elif slot.value_type == "categorical":
                values = list(slot.allowed_values)
            else:
                values = [str(v) for v in seeds.get(slot_name, ())]
            if values:
                options.append((slot_name, values))
        cap = min(max_pairs, intent.max_slots_per_da, len(options))
        for size in range(cap + 1):
            for combo in itertools.combinations(options, size):
                for values in itertools.product(*(vals for _, vals in combo)):
                    pairs = tuple(SlotValue(name, value) for (name, _), value in zip(combo, values))
                    out.append(DialogueAct(intent.name, pairs))
                    if len(out) > ceiling:
                        raise CapacityError(f"enumeration exceeds ceiling of {ceiling}")
    return out


def _as_str_list(raw: object, context: str) -> list[str]:
    if raw is None:
        return []
    if not isinstance(raw, list):
        raise OntologyError(f"{context} must be a list")
    return [_coerce_token(item) for item in raw]


def _coerce_token(raw: object) -> str:
    # YAML 1.1 turns bare yes/no into booleans; categorical values keep the words.
    if isinstance(raw, bool):
        return "yes" if raw else "no"
    return str(raw)


def ontology_from_dict(doc: Mapping) -> Ontology:
    intents_raw = doc.get("intents")
    slots_raw = doc.get("slots")
    if not isinstance(intents_raw, list) or not isinstance(slots_raw, list):
        raise OntologyError("ontology document needs top-level 'intents' and 'slots' lists")
    intents = []
    for item in intents_raw:
        allowed = tuple(_as_str_list(item.get("allowed_slots"), "allowed_slots"))
        speaker = str(item.get("speaker", ""))
        if speaker not in ("system", "customer", "both"):
            raise OntologyError(f"intent {item.get('name')!r} has invalid speaker {speaker!r}")
        intents.append(
            IntentDef(
                name=str(item["name"]),
                speaker=speaker,  # type: ignore[arg-type]
                allowed_slots=allowed,
                max_slots_per_da=int(item.get("max_slots_per_da", len(allowed))),
            )
        )
    slots = []
    for item in slots_raw:
        value_type = str(item.get("value_type", ""))
        if value_type not in ("string", "categorical"):
            raise OntologyError(f"slot {item.get('name')!r} has invalid value_type {value_type!r}")
        slots.append(
            SlotDef(
                name=str(item["name"]),
                value_type=value_type,  # type: ignore[arg-type]
                allowed_values=tuple(_as_str_list(item.get("allowed_values"), "allowed_values")),
                description=str(item.get("description", "")),
            )
        )
    return Ontology(
        name=str(doc.get("name", "ontology")),
        version=str(doc.get("version", "0")),
        intents=intents,
        slots=slots,
    )


def load_ontology(path) -> Ontology:
    import yaml

    with open(path, "r", encoding="utf-8") as handle:
        doc = yaml.safe_load(handle)
    if not isinstance(doc, Mapping):
        raise OntologyError(f"{path}: not a mapping document")
    return ontology_from_dict(doc)
