"""Deterministic language understanding.

Maps a customer utterance to dialogue acts in three tiers: exact corpus
match, then lexicon keyword/capture matching, then a non-understanding
fallback (empty act list).  An optional HTTP client delegates to an
external generative NLU service and degrades to the lexicon on any
failure.

Keyword matching is case-folded and whitespace-normalized, never
stemmed.  ASCII keywords match at word boundaries ("ok" must not fire
inside "Tokyo"); non-ASCII keywords match as substrings because
Japanese text has no word delimiters.
"""

from __future__ import annotations

import logging
import re
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import httpx

from .da import (
    DialogueAct,
    Ontology,
    SlotValue,
    parse_da_list,
    serialize_da_list,
    validate_da,
)

logger = logging.getLogger(__name__)

_PLACEHOLDER_RE = re.compile(r"^\{([A-Za-z0-9_-]+)\}$")
_VALUE_CLEAN_RE = re.compile(r"[,()=]")


class CorpusError(Exception):
    """Problem in a corpus file; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class CorpusParseError(CorpusError):
    pass


class CorpusValidationError(CorpusError):
    pass


class LexiconError(Exception):
    pass


@dataclass(frozen=True)
class CorpusPair:
    da_string: str
    utterance: str
    das: tuple[DialogueAct, ...] = ()


@dataclass(frozen=True)
class Capture:
    slot: str
    pattern: re.Pattern


@dataclass(frozen=True)
class LexiconEntry:
    keywords: tuple[tuple[str, ...], ...]  # all groups must match; a group matches on any keyword
    da_template: tuple[DialogueAct, ...]
    captures: tuple[Capture, ...] = ()
    priority: int = 0


@dataclass(frozen=True)
class NluHypothesis:
    das: tuple[DialogueAct, ...]
    score: int
    source: str  # lexicon | exact_corpus | external | fallback | scripted

    def to_dict(self) -> dict:
        return {
            "das": serialize_da_list(self.das),
            "score": self.score,
            "source": self.source,
        }


def normalize(text: str) -> str:
    folded = unicodedata.normalize("NFKC", text).casefold()
    return " ".join(folded.split())


def _keyword_matches(keyword: str, normalized_utterance: str) -> bool:
    if keyword.isascii():
        return re.search(rf"\b{re.escape(keyword)}\b", normalized_utterance) is not None
    return keyword in normalized_utterance


def load_corpus(path, ontology: Ontology) -> list[CorpusPair]:
    """Tab-separated pairs, one per line: DA list, tab, utterance."""
    pairs: list[CorpusPair] = []
    seen: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            if "\t" not in line:
                raise CorpusParseError(number, "missing tab between DA and utterance")
            da_string, utterance = line.split("\t", 1)
            da_string = da_string.strip()
            utterance = utterance.strip()
            if not utterance:
                raise CorpusParseError(number, "empty utterance")
            try:
                das = parse_da_list(da_string)
            except Exception as exc:
                raise CorpusParseError(number, f"bad DA string: {exc}") from exc
            for da in das:
                report = validate_da(da, ontology, speaker="customer")
                if not report.ok:
                    raise CorpusValidationError(number, "; ".join(report.violations))
            key = normalize(utterance)
            if key in seen:
                raise CorpusValidationError(number, f"duplicate utterance (first on line {seen[key]})")
            seen[key] = number
            pairs.append(CorpusPair(serialize_da_list(das), utterance, tuple(das)))
    return pairs


def load_lexicon(path, ontology: Ontology) -> list[LexiconEntry]:
    import yaml

    with open(path, "r", encoding="utf-8") as handle:
        doc = yaml.safe_load(handle)
    if not isinstance(doc, list):
        raise LexiconError(f"{path}: expected a list of entries")
    entries: list[LexiconEntry] = []
    for position, item in enumerate(doc):
        groups_raw = item.get("keywords")
        if not groups_raw or not all(isinstance(g, list) and g for g in groups_raw):
            raise LexiconError(f"entry {position}: keywords must be non-empty groups")
        groups = tuple(tuple(normalize(str(k)) for k in group) for group in groups_raw)
        captures = tuple(
            Capture(str(c["slot"]), re.compile(str(c["pattern"]), re.IGNORECASE))
            for c in item.get("captures", [])
        )
        capture_slots = {c.slot for c in captures}
        try:
            template = tuple(parse_da_list(str(item["da"])))
        except Exception as exc:
            raise LexiconError(f"entry {position}: bad da template: {exc}") from exc
        for da in template:
            for pair in da.pairs:
                placeholder = _PLACEHOLDER_RE.match(pair.value)
                if placeholder and placeholder.group(1) not in capture_slots:
                    raise LexiconError(f"entry {position}: placeholder {pair.value} has no capture")
        bound = _bind_template(template, {slot: "x" for slot in capture_slots})
        for bda in bound:
            report = validate_da(bda, ontology, speaker="customer")
            # placeholder dummies may fail categorical checks; everything else must hold
            hard = [v for v in report.violations if "not allowed for categorical" not in v]
            if hard:
                raise LexiconError(f"entry {position}: {'; '.join(hard)}")
        entries.append(
            LexiconEntry(
                keywords=groups,
                da_template=template,
                captures=captures,
                priority=int(item.get("priority", 0)),
            )
        )
    return entries


def _bind_template(template: Sequence[DialogueAct], bindings: Mapping[str, str]) -> list[DialogueAct]:
    bound: list[DialogueAct] = []
    for da in template:
        pairs = []
        for pair in da.pairs:
            match = _PLACEHOLDER_RE.match(pair.value)
            value = bindings.get(match.group(1), pair.value) if match else pair.value
            pairs.append(SlotValue(pair.slot, value))
        bound.append(DialogueAct(da.intent, tuple(pairs)))
    return bound


class LexiconMatcher:
    """Immutable after construction; safe to share across sessions."""

    def __init__(
        self,
        ontology: Ontology,
        entries: Sequence[LexiconEntry],
        corpus: Sequence[CorpusPair] = (),
    ):
        self.ontology = ontology
        self.entries = tuple(entries)
        self.corpus_index = {normalize(p.utterance): p for p in corpus}

    def understand(self, utterance: str, state_hint=None) -> NluHypothesis:
        """Total function: silence, corpus hit, lexicon merge, or fallback."""
        normalized = normalize(utterance)
        if not normalized:
            return NluHypothesis((), 0, "fallback")
        hit = self.corpus_index.get(normalized)
        if hit is not None:
            return NluHypothesis(hit.das, 1, "exact_corpus")
        candidates = self._matching_entries(utterance, normalized)
        if not candidates:
            return NluHypothesis((), 0, "fallback")
        return self._merge(candidates)

    def _matching_entries(self, raw: str, normalized: str):
        found = []
        for position, entry in enumerate(self.entries):
            if not all(
                any(_keyword_matches(k, normalized) for k in group) for group in entry.keywords
            ):
                continue
            bindings: dict[str, str] = {}
            ok = True
            for capture in entry.captures:
                match = capture.pattern.search(raw)
                value = match.group("value").strip() if match and "value" in match.groupdict() else None
                if not value or _VALUE_CLEAN_RE.search(value):
                    ok = False
                    break
                bindings[capture.slot] = value
            if not ok:
                continue
            das = _bind_template(entry.da_template, bindings)
            if all(validate_da(da, self.ontology, speaker="customer").ok for da in das):
                found.append((entry, position, das))
        return found

    def _merge(self, candidates) -> NluHypothesis:
        ordered = sorted(candidates, key=lambda item: (-item[0].priority, item[1]))
        assigned: dict[str, str] = {}
        intents_present: set[str] = set()
        accepted: list[tuple[LexiconEntry, list[DialogueAct]]] = []
        for entry, _, das in ordered:
            conflict = False
            for da in das:
                opposite = {"affirm": "negate", "negate": "affirm"}.get(da.intent)
                if opposite and opposite in intents_present:
                    conflict = True
                for pair in da.pairs:
                    if assigned.get(pair.slot, pair.value) != pair.value:
                        conflict = True
            if conflict:
                continue
            for da in das:
                intents_present.add(da.intent)
                for pair in da.pairs:
                    assigned[pair.slot] = pair.value
            accepted.append((entry, das))
        merged: list[DialogueAct] = []
        position_by_intent: dict[str, int] = {}
        for _, das in accepted:
            for da in das:
                if da.intent in position_by_intent:
                    index = position_by_intent[da.intent]
                    existing = merged[index]
                    known = {p.slot for p in existing.pairs}
                    extra = tuple(p for p in da.pairs if p.slot not in known)
                    merged[index] = DialogueAct(existing.intent, existing.pairs + extra)
                else:
                    position_by_intent[da.intent] = len(merged)
                    merged.append(da)
        score = sum(len(entry.keywords) for entry, _ in accepted)
        return NluHypothesis(tuple(merged), score, "lexicon")


class ExternalNluClient:
    """Delegates understanding to an HTTP service, falling back to the matcher.

    Wire contract: POST {utterance, history} as JSON, response {"da": "<DA list>"}.
    Failures never surface; they are logged, counted, and answered by the
    local matcher instead.
    """

    def __init__(self, endpoint: str, matcher: LexiconMatcher, timeout: float = 2.0):
        self.endpoint = endpoint
        self.matcher = matcher
        self.timeout = timeout
        self.failure_count = 0

    def understand(self, utterance: str, history: Iterable[str] = (), state_hint=None) -> NluHypothesis:
        if not normalize(utterance):
            return self.matcher.understand(utterance)
        try:
            response = httpx.post(
                self.endpoint,
                json={"utterance": utterance, "history": list(history)},
                timeout=self.timeout,
            )
            response.raise_for_status()
            da_text = response.json()["da"]
            das = parse_da_list(str(da_text))
            for da in das:
                report = validate_da(da, self.matcher.ontology, speaker="customer")
                if not report.ok:
                    raise ValueError("; ".join(report.violations))
            return NluHypothesis(tuple(das), 1, "external")
        except Exception as exc:
            self.failure_count += 1
            logger.warning("external NLU failed (%s); using lexicon", exc)
            return self.matcher.understand(utterance)
