"""Turn orchestration: NLU -> DST -> policy -> NLG.

Owns sessions, serializes turns within a session, persists transcripts
as JSON lines (one file per session), and runs scripted simulations.
A fixed-clock engine is fully deterministic: stable session ids, zero
latencies, byte-identical transcript files for identical scripts.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence

from .config import AppConfig, EngineAssets
from .da import DialogueAct, parse_da_list, serialize_da_list, validate_da
from .dst import DialogueState, FlowPhase
from .nlg import Cue, CueState, cues_for, realize
from .nlu import NluHypothesis
from .policy import PolicyConfig, decide


class EngineError(Exception):
    pass


class UnknownSessionError(EngineError):
    pass


class SessionDoneError(EngineError):
    pass


class SessionBusyError(EngineError):
    pass


class StageError(EngineError):
    """A pipeline stage failed; the session state is untouched."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {cause}")


class ExpectationFailure(EngineError):
    pass


@dataclass(frozen=True)
class TurnRecord:
    customer_utterance: str
    nlu: NluHypothesis
    system_das: tuple[DialogueAct, ...]
    system_utterance: str
    cues: tuple[Cue, ...]
    phase_before: FlowPhase
    phase_after: FlowPhase
    latency_ms: int
    ts: float

    def system_intents(self) -> tuple[str, ...]:
        return tuple(da.intent for da in self.system_das)

    def to_dict(self) -> dict:
        return {
            "type": "turn",
            "customer_utterance": self.customer_utterance,
            "nlu": self.nlu.to_dict(),
            "system_das": serialize_da_list(self.system_das),
            "system_utterance": self.system_utterance,
            "cues": [cue.to_dict() for cue in self.cues],
            "phase_before": self.phase_before.value,
            "phase_after": self.phase_after.value,
            "latency_ms": self.latency_ms,
            "ts": self.ts,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TurnRecord":
        nlu_doc = doc["nlu"]
        das_text = nlu_doc["das"]
        return cls(
            customer_utterance=doc["customer_utterance"],
            nlu=NluHypothesis(
                das=tuple(parse_da_list(das_text)) if das_text else (),
                score=int(nlu_doc["score"]),
                source=str(nlu_doc["source"]),
            ),
            system_das=tuple(parse_da_list(doc["system_das"])) if doc["system_das"] else (),
            system_utterance=doc["system_utterance"],
            cues=tuple(
                Cue(
                    c["intent"],
                    CueState(c["during"]["expression"], c["during"]["motion"]),
                    CueState(c["after"]["expression"], c["after"]["motion"]),
                )
                for c in doc["cues"]
            ),
            phase_before=FlowPhase(doc["phase_before"]),
            phase_after=FlowPhase(doc["phase_after"]),
            latency_ms=int(doc["latency_ms"]),
            ts=float(doc["ts"]),
        )


@dataclass
class SessionConfig:
    language: str
    policy: PolicyConfig


@dataclass
class Session:
    id: str
    state: DialogueState
    config: SessionConfig
    created_at: str
    transcript: list[TurnRecord] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    transcript_path: Path | None = None


@dataclass(frozen=True)
class SimStep:
    kind: str  # "utterance" | "da" | "silence"
    text: str = ""
    das: tuple[DialogueAct, ...] = ()
    expect: tuple[str, ...] | None = None


@dataclass
class SimScript:
    steps: list[SimStep] = field(default_factory=list)
    preset_profile: dict[str, str] = field(default_factory=dict)
    preset_belief: dict[str, str] = field(default_factory=dict)
    preset_phase: FlowPhase = FlowPhase.GREETING
    introduced: bool = False
    language: str | None = None
    turn_budget: int | None = None
    restaurant_followup: bool | None = None
    profile_order: tuple[str, ...] | None = None


@dataclass(frozen=True)
class SimStepReport:
    index: int
    kind: str
    given: str
    system_intents: tuple[str, ...]
    system_utterance: str
    expected: tuple[str, ...] | None
    ok: bool


@dataclass
class SimReport:
    session_id: str
    steps: list[SimStepReport]
    final_phase: FlowPhase
    customer_turns: int
    records: list[TurnRecord]

    @property
    def system_intent_sequence(self) -> list[str]:
        return [intent for step in self.steps for intent in step.system_intents]

    @property
    def failures(self) -> list[SimStepReport]:
        return [step for step in self.steps if not step.ok]

    @property
    def ok(self) -> bool:
        return not self.failures


class Engine:
    def __init__(self, assets: EngineAssets, config: AppConfig):
        self.assets = assets
        self.config = config
        self._sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()
        self._id_counter = 0
        self._clock: Callable[[], float] = (lambda: 0.0) if config.fixed_clock else time.time

    # -- session lifecycle -------------------------------------------------

    def _new_id(self) -> str:
        if self.config.fixed_clock:
            self._id_counter += 1
            return f"s{self._id_counter:06d}"
        return uuid.uuid4().hex

    def open_session(
        self,
        preset_profile: dict | None = None,
        preset_belief: dict | None = None,
        preset_phase: FlowPhase = FlowPhase.GREETING,
        introduced: bool = False,
        language: str | None = None,
        policy: PolicyConfig | None = None,
    ) -> Session:
        state = self.assets.tracker.new_state(
            preset_profile=preset_profile,
            preset_belief=preset_belief,
            phase=preset_phase,
            introduced=introduced,
        )
        created = (
            "1970-01-01T00:00:00+00:00"
            if self.config.fixed_clock
            else datetime.now(timezone.utc).isoformat()
        )
        session = Session(
            id=self._new_id(),
            state=state,
            config=SessionConfig(
                language=language or self.config.language,
                policy=policy or self.config.policy_config(),
            ),
            created_at=created,
        )
        with self._registry_lock:
            self._sessions[session.id] = session
        self._write_meta(session)
        return session

    def get_session(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise UnknownSessionError(session_id) from None

    def get_state(self, session_id: str) -> dict:
        return self.assets.tracker.snapshot(self.get_session(session_id).state)

    def close_session(self, session_id: str) -> None:
        with self._registry_lock:
            if session_id not in self._sessions:
                raise UnknownSessionError(session_id)
            del self._sessions[session_id]

    # -- the turn pipeline ---------------------------------------------------

    def run_turn(self, session: Session | str, utterance: str) -> TurnRecord:
        return self._locked_turn(session, utterance=utterance)

    def run_scripted_turn(self, session: Session | str, das: Sequence[DialogueAct]) -> TurnRecord:
        """Feed customer DAs straight into DST, bypassing NLU."""
        for da in das:
            report = validate_da(da, self.assets.ontology, speaker="customer")
            if not report.ok:
                raise StageError("nlu", ValueError("; ".join(report.violations)))
        return self._locked_turn(session, das=tuple(das))

    def _locked_turn(self, session: Session | str, utterance: str = "", das=None) -> TurnRecord:
        if isinstance(session, str):
            session = self.get_session(session)
        if not session.lock.acquire(blocking=False):
            raise SessionBusyError(session.id)
        try:
            return self._turn(session, utterance, das)
        finally:
            session.lock.release()

    def _turn(self, session: Session, utterance: str, das) -> TurnRecord:
        state = session.state
        if state.phase is FlowPhase.DONE:
            raise SessionDoneError(session.id)
        started = self._clock()
        if das is not None:
            hypothesis = NluHypothesis(das, len(das), "scripted")
        else:
            try:
                hypothesis = self._understand(utterance, state)
            except Exception as exc:
                raise StageError("nlu", exc) from exc
        try:
            mid_state = self.assets.tracker.update(state, hypothesis.das, utterance)
        except Exception as exc:
            raise StageError("dst", exc) from exc
        try:
            decision = decide(mid_state, self.assets.db, session.config.policy)
        except Exception as exc:
            raise StageError("policy", exc) from exc
        try:
            text = realize(decision.das, self.assets.templates, session.config.language)
            cues = tuple(cues_for(decision.das, self.assets.cue_rules))
        except Exception as exc:
            raise StageError("nlg", exc) from exc
        final_state = self.assets.tracker.note_system_turn(mid_state, decision.das, text)
        final_state.phase = decision.next_phase
        record = TurnRecord(
            customer_utterance=utterance,
            nlu=hypothesis,
            system_das=decision.das,
            system_utterance=text,
            cues=cues,
            phase_before=state.phase,
            phase_after=final_state.phase,
            latency_ms=int((self._clock() - started) * 1000),
            ts=started,
        )
        session.state = final_state
        session.transcript.append(record)
        self._write_turn(session, record)
        return record

    def _understand(self, utterance: str, state: DialogueState) -> NluHypothesis:
        if self.assets.external_nlu is not None:
            history = [e.utterance for e in state.history if e.speaker == "customer"][-5:]
            return self.assets.external_nlu.understand(utterance, history)
        return self.assets.matcher.understand(utterance)

    # -- transcripts ---------------------------------------------------------

    def _transcript_path(self, session: Session) -> Path:
        if session.transcript_path is None:
            directory = Path(self.config.data_dir)
            directory.mkdir(parents=True, exist_ok=True)
            session.transcript_path = directory / f"{session.id}.jsonl"
        return session.transcript_path

    def _write_meta(self, session: Session) -> None:
        meta = {
            "type": "session",
            "id": session.id,
            "created_at": session.created_at,
            "language": session.config.language,
        }
        with open(self._transcript_path(session), "w", encoding="utf-8") as handle:
            handle.write(json.dumps(meta, sort_keys=True, ensure_ascii=False) + "\n")

    def _write_turn(self, session: Session, record: TurnRecord) -> None:
        with open(self._transcript_path(session), "a", encoding="utf-8") as handle:
            handle.write(json.dumps(record.to_dict(), sort_keys=True, ensure_ascii=False) + "\n")

    # -- simulation ------------------------------------------------------

    def simulate(self, script: SimScript) -> SimReport:
        policy = PolicyConfig(
            profile_order=script.profile_order or self.config.profile_order,
            turn_budget=script.turn_budget or self.config.turn_budget,
            restaurant_followup=(
                self.config.restaurant_followup
                if script.restaurant_followup is None
                else script.restaurant_followup
            ),
        )
        session = self.open_session(
            preset_profile=script.preset_profile,
            preset_belief=script.preset_belief,
            preset_phase=script.preset_phase,
            introduced=script.introduced,
            language=script.language,
            policy=policy,
        )
        steps: list[SimStepReport] = []
        record = self.run_turn(session, "")
        steps.append(
            SimStepReport(0, "bootstrap", "", record.system_intents(), record.system_utterance, None, True)
        )
        for number, step in enumerate(script.steps, start=1):
            if session.state.phase is FlowPhase.DONE:
                break
            if step.kind == "da":
                record = self.run_scripted_turn(session, step.das)
                given = serialize_da_list(step.das)
            elif step.kind == "silence":
                record = self.run_turn(session, "")
                given = "(silence)"
            else:
                record = self.run_turn(session, step.text)
                given = step.text
            ok = step.expect is None or record.system_intents() == step.expect
            steps.append(
                SimStepReport(
                    number, step.kind, given, record.system_intents(),
                    record.system_utterance, step.expect, ok,
                )
            )
        return SimReport(
            session_id=session.id,
            steps=steps,
            final_phase=session.state.phase,
            customer_turns=session.state.turn_count,
            records=list(session.transcript),
        )


def load_script(path, ontology) -> SimScript:
    """YAML: optional `session`/`engine` preset sections plus `steps`."""
    import yaml

    with open(path, "r", encoding="utf-8") as handle:
        doc = yaml.safe_load(handle) or {}
    session = doc.get("session", {})
    engine = doc.get("engine", {})
    script = SimScript(
        preset_profile={str(k): str(v) for k, v in (session.get("preset_profile") or {}).items()},
        preset_belief={str(k): str(v) for k, v in (session.get("preset_belief") or {}).items()},
        preset_phase=FlowPhase(session.get("preset_phase", "Greeting")),
        introduced=bool(session.get("introduced", False)),
        language=engine.get("language"),
        turn_budget=engine.get("turn_budget"),
        restaurant_followup=engine.get("restaurant_followup"),
        profile_order=tuple(engine["profile_order"]) if "profile_order" in engine else None,
    )
    for position, raw in enumerate(doc.get("steps", [])):
        expect = tuple(str(i) for i in raw["expect"]) if "expect" in raw else None
        if "da" in raw:
            das = tuple(parse_da_list(str(raw["da"])))
            for da in das:
                report = validate_da(da, ontology, speaker="customer")
                if not report.ok:
                    raise ExpectationFailure(f"step {position}: {'; '.join(report.violations)}")
            script.steps.append(SimStep("da", das=das, expect=expect))
        elif raw.get("silence"):
            script.steps.append(SimStep("silence", expect=expect))
        else:
            script.steps.append(SimStep("utterance", text=str(raw.get("utterance", "")), expect=expect))
    return script


def load_transcript(path, ontology=None) -> tuple[dict, list[TurnRecord]]:
    meta: dict = {}
    records: list[TurnRecord] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            doc = json.loads(line)
            if doc.get("type") == "session":
                meta = doc
            else:
                records.append(TurnRecord.from_dict(doc))
    return meta, records
