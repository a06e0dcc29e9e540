"""Rule-based dialogue state tracking.

The state is a value object: `update` (customer turn) and
`note_system_turn` return fresh copies and never touch their input, so a
session keeps one linear state lineage and replays are exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .da import DialogueAct, Ontology, SlotValue, serialize_da_list

# customer preference slots mirrored into the belief state
DEFAULT_BELIEF_SLOTS = frozenset(
    {"user_accompany", "user_food_type", "attraction_parking", "attraction_rain"}
)


class StateError(Exception):
    """A DA reached the tracker on the wrong side of the counter."""


class FlowPhase(enum.Enum):
    GREETING = "Greeting"
    PROFILE_GATHERING = "ProfileGathering"
    ATTRACTION_INTRODUCTION = "AttractionIntroduction"
    RECOMMENDATION = "Recommendation"
    QUESTION_ANSWERING = "QuestionAnswering"
    FAREWELL = "Farewell"
    DONE = "Done"

    @property
    def index(self) -> int:
        return _PHASE_ORDER[self]


_PHASE_ORDER = {phase: i for i, phase in enumerate(FlowPhase)}


@dataclass(frozen=True)
class HistoryEntry:
    speaker: str  # "customer" | "system"
    das: tuple[DialogueAct, ...]
    utterance: str


@dataclass
class DialogueState:
    profile: dict[str, str] = field(default_factory=dict)
    belief: dict[str, str] = field(default_factory=dict)
    focused_attraction: str | None = None
    pending_request: list[SlotValue] = field(default_factory=list)
    pending_confirmation: DialogueAct | None = None
    confirmation_result: bool | None = None
    history: list[HistoryEntry] = field(default_factory=list)
    phase: FlowPhase = FlowPhase.GREETING
    turn_count: int = 0
    silence_streak: int = 0
    farewell_requested: bool = False
    recommendation_rejected: bool = False
    introduced: bool = False
    requested_slots: list[str] = field(default_factory=list)
    recommended_attractions: list[str] = field(default_factory=list)
    last_system_intents: tuple[str, ...] = ()

    def clone(self) -> "DialogueState":
        return replace(
            self,
            profile=dict(self.profile),
            belief=dict(self.belief),
            pending_request=list(self.pending_request),
            history=list(self.history),
            requested_slots=list(self.requested_slots),
            recommended_attractions=list(self.recommended_attractions),
        )

    def last_customer_entry(self) -> HistoryEntry | None:
        for entry in reversed(self.history):
            if entry.speaker == "customer":
                return entry
        return None


class StateTracker:
    """Applies the per-intent update rules; pure over immutable inputs."""

    def __init__(
        self,
        ontology: Ontology,
        attraction_names: Iterable[str] = (),
        belief_slots: frozenset[str] = DEFAULT_BELIEF_SLOTS,
    ):
        self.ontology = ontology
        self.attraction_names = frozenset(attraction_names)
        self.belief_slots = belief_slots

    def new_state(
        self,
        preset_profile: dict[str, str] | None = None,
        preset_belief: dict[str, str] | None = None,
        phase: FlowPhase = FlowPhase.GREETING,
        introduced: bool = False,
    ) -> DialogueState:
        return DialogueState(
            profile=dict(preset_profile or {}),
            belief=dict(preset_belief or {}),
            phase=phase,
            introduced=introduced,
        )

    def _guard_speaker(self, das: Sequence[DialogueAct], speaker: str) -> None:
        for da in das:
            intent = self.ontology.intent(da.intent)
            if intent is None:
                raise StateError(f"unknown intent {da.intent!r}")
            if not intent.speakable_by(speaker):  # type: ignore[arg-type]
                raise StateError(f"intent {da.intent!r} cannot be spoken by {speaker}")

    def _track_focus(self, state: DialogueState, das: Sequence[DialogueAct]) -> None:
        for da in das:
            for pair in da.pairs:
                if pair.slot == "attraction_name" and not pair.is_requested:
                    if not self.attraction_names or pair.value in self.attraction_names:
                        state.focused_attraction = pair.value

    def update(self, state: DialogueState, das: Sequence[DialogueAct], utterance: str) -> DialogueState:
        """Fold one customer turn (empty `das` = silence) into a new state."""
        self._guard_speaker(das, "customer")
        new = state.clone()
        new.history.append(HistoryEntry("customer", tuple(das), utterance))
        new.turn_count += 1
        if not das:
            new.silence_streak += 1
            return new
        new.silence_streak = 0
        pending: list[SlotValue] = []
        for da in das:
            if da.intent == "inform":
                for pair in da.pairs:
                    if pair.slot.startswith("user_"):
                        new.profile[pair.slot] = pair.value
                    if pair.slot in self.belief_slots:
                        new.belief[pair.slot] = pair.value
            elif da.intent == "request":
                # only attraction attributes are answerable from the database
                pending.extend(
                    p for p in da.pairs if p.is_requested and p.slot.startswith("attraction_")
                )
            elif da.intent == "affirm":
                if new.pending_confirmation is not None:
                    new.confirmation_result = True
                    new.pending_confirmation = None
            elif da.intent == "negate":
                if new.pending_confirmation is not None:
                    new.confirmation_result = False
                    new.pending_confirmation = None
                elif new.recommended_attractions:
                    new.recommendation_rejected = True
            elif da.intent == "goodbye":
                new.farewell_requested = True
            # greet / thankyou: history only
        if pending:
            new.pending_request = pending
        self._track_focus(new, das)
        return new

    def note_system_turn(
        self, state: DialogueState, das: Sequence[DialogueAct], utterance: str
    ) -> DialogueState:
        """Record the system's own acts so later decisions can see them."""
        self._guard_speaker(das, "system")
        new = state.clone()
        new.history.append(HistoryEntry("system", tuple(das), utterance))
        new.last_system_intents = tuple(da.intent for da in das)
        answered: set[str] = set()
        for da in das:
            if da.intent == "confirm_attraction":
                new.pending_confirmation = da
                new.confirmation_result = None
            elif da.intent == "recommend_target":
                name = da.value_of("attraction_name")
                if name:
                    new.recommended_attractions.append(name)
                new.recommendation_rejected = False
            elif da.intent == "start_attraction_introduction":
                new.introduced = True
            elif da.intent == "request":
                for pair in da.pairs:
                    if pair.is_requested and pair.slot not in new.requested_slots:
                        new.requested_slots.append(pair.slot)
            elif da.intent == "inform":
                answered.update(p.slot for p in da.pairs if not p.is_requested)
        if new.pending_request and all(p.slot in answered for p in new.pending_request):
            new.pending_request = []
        self._track_focus(new, das)
        return new

    def snapshot(self, state: DialogueState) -> dict:
        """JSON-shaped view of the state for the service and UI."""
        return {
            "profile": dict(state.profile),
            "belief": dict(state.belief),
            "focused_attraction": state.focused_attraction,
            "pending_request": [str(p) for p in state.pending_request],
            "pending_confirmation": (
                serialize_da_list([state.pending_confirmation])
                if state.pending_confirmation
                else None
            ),
            "confirmation_result": state.confirmation_result,
            "history": [
                {
                    "speaker": entry.speaker,
                    "das": serialize_da_list(entry.das),
                    "utterance": entry.utterance,
                }
                for entry in state.history
            ],
            "phase": state.phase.value,
            "turn_count": state.turn_count,
            "silence_streak": state.silence_streak,
            "farewell_requested": state.farewell_requested,
            "recommendation_rejected": state.recommendation_rejected,
            "introduced": state.introduced,
            "requested_slots": list(state.requested_slots),
            "recommended_attractions": list(state.recommended_attractions),
        }
