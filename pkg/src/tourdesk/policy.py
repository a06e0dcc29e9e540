"""Flow-driven dialogue policy over the two-attraction database.

The flow: greet, gather the customer profile, introduce both
attractions, recommend one, invite and answer questions, say goodbye.
Silence counts as an uninformative answer and moves the flow forward.
A turn budget ends any session that drags on.

The recommendation is the argmax of a constraint-count score.  Whenever
the customer stated a food preference, the recommendation turn also
says whether a nearby restaurant matches it, or apologises that none
does; preferences are never silently ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .da import DialogueAct, SlotValue, make_da
from .dst import DialogueState, FlowPhase, HistoryEntry

_VALUE_FORBIDDEN = set(",()=")

# attraction slots the customer can ask about (request allowed_slots)
REQUESTABLE_SLOTS = ("attraction_open_time", "attraction_parking", "attraction_rain",
                     "attraction_genre")

# priority order for the recommendation's supporting feature
_SUPPORT_ORDER = ("user_accompany", "user_food_type", "attraction_rain", "attraction_parking")


class PolicyError(Exception):
    """decide() was called on a finished session."""


class DbError(Exception):
    pass


@dataclass(frozen=True)
class RestaurantRecord:
    name: str
    food_type: str
    distance_note: str = ""


@dataclass(frozen=True)
class AttractionRecord:
    name: str
    open_time: str
    parking: str = "unknown"
    rain: str = "unknown"
    genre: str = ""
    description: str = ""
    suitable_accompany: frozenset[str] = frozenset()
    nearby_restaurants: tuple[RestaurantRecord, ...] = ()

    def attribute(self, slot: str) -> str:
        return {
            "attraction_open_time": self.open_time,
            "attraction_parking": self.parking,
            "attraction_rain": self.rain,
            "attraction_genre": self.genre,
            "attraction_description": self.description,
        }.get(slot) or "unknown"


@dataclass(frozen=True)
class AttractionDb:
    attractions: tuple[AttractionRecord, ...]

    def __post_init__(self) -> None:
        names = [a.name for a in self.attractions]
        if len(set(names)) != len(names):
            raise DbError("attraction names must be unique")

    def names(self) -> list[str]:
        return [a.name for a in self.attractions]

    def by_name(self, name: str) -> AttractionRecord | None:
        for record in self.attractions:
            if record.name == name:
                return record
        return None


@dataclass(frozen=True)
class PolicyConfig:
    profile_order: tuple[str, ...] = ("user_name", "user_accompany", "user_food_type")
    turn_budget: int = 30
    restaurant_followup: bool = True


@dataclass(frozen=True)
class PolicyDecision:
    das: tuple[DialogueAct, ...]
    next_phase: FlowPhase
    rationale: str


def score_attractions(
    belief: Mapping[str, str], profile: Mapping[str, str], db: AttractionDb
) -> list[tuple[AttractionRecord, int, list[str]]]:
    """Count satisfied constraints per attraction; ties keep DB order."""
    constraints = _constraints(belief, profile)
    scored = []
    for record in db.attractions:
        matched = []
        if "user_accompany" in constraints and constraints["user_accompany"] in record.suitable_accompany:
            matched.append("user_accompany")
        if "user_food_type" in constraints and any(
            r.food_type == constraints["user_food_type"] for r in record.nearby_restaurants
        ):
            matched.append("user_food_type")
        if "attraction_rain" in constraints and record.rain == constraints["attraction_rain"]:
            matched.append("attraction_rain")
        if "attraction_parking" in constraints and record.parking == constraints["attraction_parking"]:
            matched.append("attraction_parking")
        scored.append((record, len(matched), matched))
    scored.sort(key=lambda item: -item[1])  # stable: DB order breaks ties
    return scored


def _constraints(belief: Mapping[str, str], profile: Mapping[str, str]) -> dict[str, str]:
    merged = {
        key: profile[key] for key in ("user_accompany", "user_food_type") if key in profile
    }
    merged.update(belief)
    return merged


def restaurant_fallback(
    constraints: Mapping[str, str], recommended: AttractionRecord
) -> list[DialogueAct]:
    """Never stay silent about a stated food preference."""
    food = constraints.get("user_food_type")
    if not food:
        return []
    for restaurant in recommended.nearby_restaurants:
        if restaurant.food_type == food:
            return [
                make_da("inform", ("restaurant_match", "yes"), ("restaurant_name", restaurant.name))
            ]
    return [DialogueAct("sorry"), make_da("inform", ("restaurant_match", "no"))]


def answer_request(
    pending: Sequence, state: DialogueState, db: AttractionDb
) -> list[DialogueAct]:
    """Answer for the focused attraction first, then proactively for the other."""
    ordered = list(db.attractions)
    focus = state.focused_attraction
    if focus:
        ordered.sort(key=lambda record: 0 if record.name == focus else 1)
    das = []
    for record in ordered:
        for slot_value in pending:
            das.append(
                make_da("inform", ("attraction_name", record.name), (slot_value.slot, record.attribute(slot_value.slot)))
            )
    return das


def decide(state: DialogueState, db: AttractionDb, config: PolicyConfig) -> PolicyDecision:
    """Next system act list for the current state; raises once the session is done."""
    if state.phase is FlowPhase.DONE:
        raise PolicyError("session is over")
    if state.turn_count >= config.turn_budget:
        return PolicyDecision(
            (DialogueAct("finish_for_time_limit"),) + _farewell_das(),
            FlowPhase.DONE,
            "budget.finish",
        )
    if state.farewell_requested:
        return PolicyDecision(_farewell_das(), FlowPhase.DONE, "farewell.goodbye")
    handler = {
        FlowPhase.GREETING: _greeting,
        FlowPhase.PROFILE_GATHERING: _profile_gathering,
        FlowPhase.ATTRACTION_INTRODUCTION: _introduction,
        FlowPhase.RECOMMENDATION: _recommendation,
        FlowPhase.QUESTION_ANSWERING: _question_answering,
        FlowPhase.FAREWELL: _farewell,
    }[state.phase]
    return handler(state, db, config)


def _farewell_das() -> tuple[DialogueAct, ...]:
    return (DialogueAct("thank-you_for_visiting"), DialogueAct("goodbye"))


def _farewell(state, db, config, rationale: str = "farewell.goodbye") -> PolicyDecision:
    return PolicyDecision(_farewell_das(), FlowPhase.DONE, rationale)


def _greeting(state, db, config) -> PolicyDecision:
    return PolicyDecision(
        (DialogueAct("welcome"), DialogueAct("self_introduction")),
        FlowPhase.PROFILE_GATHERING,
        "greet.welcome",
    )


def _post_profile_phase(state: DialogueState) -> FlowPhase:
    return FlowPhase.RECOMMENDATION if state.introduced else FlowPhase.ATTRACTION_INTRODUCTION


def _profile_gathering(state, db, config) -> PolicyDecision:
    unfilled = [s for s in config.profile_order if s not in state.profile]
    if not unfilled:
        just_filled = _profile_slots_in_last_turn(state, config)
        if just_filled:
            slot = just_filled[-1]
            return PolicyDecision(
                (make_da("good", (slot, state.profile[slot])),),
                _post_profile_phase(state),
                f"profile.ack.{slot}",
            )
        return _after_profile(state, db, config)
    unasked = [s for s in unfilled if s not in state.requested_slots]
    if unasked:
        slot = unasked[0]
        return PolicyDecision(
            (make_da("request", (slot, "?")),),
            FlowPhase.PROFILE_GATHERING,
            f"profile.ask.{slot}",
        )
    # every missing slot was already asked; move on without it
    return _after_profile(state, db, config)


def _profile_slots_in_last_turn(state: DialogueState, config: PolicyConfig) -> list[str]:
    entry = state.last_customer_entry()
    if entry is None:
        return []
    filled = []
    for da in entry.das:
        if da.intent != "inform":
            continue
        for pair in da.pairs:
            if pair.slot in config.profile_order:
                filled.append(pair.slot)
    return filled


def _after_profile(state, db, config) -> PolicyDecision:
    if state.introduced:
        return _recommendation(state, db, config)
    return _introduction(state, db, config)


def _introduction(state, db, config) -> PolicyDecision:
    das: list[DialogueAct] = [DialogueAct("start_attraction_introduction")]
    for record in db.attractions:
        das.append(
            make_da(
                "inform",
                ("attraction_name", record.name),
                ("attraction_genre", record.genre),
                ("attraction_description", record.description),
            )
        )
    return PolicyDecision(tuple(das), FlowPhase.RECOMMENDATION, "introduce.attractions")


def _support_pair(record: AttractionRecord, matched: Sequence[str], constraints: Mapping[str, str]) -> tuple[str, str]:
    for slot in _SUPPORT_ORDER:
        if slot in matched:
            if slot in ("user_accompany", "user_food_type"):
                return (slot, constraints[slot])
            return (slot, record.attribute(slot))
    if record.rain == "ok":
        return ("attraction_rain", "ok")
    return ("attraction_genre", record.genre)


def _recommendation(state, db, config) -> PolicyDecision:
    ranked = score_attractions(state.belief, state.profile, db)
    pool = [item for item in ranked if item[0].name not in state.recommended_attractions]
    if not pool:
        return _farewell(state, db, config, "farewell.exhausted")
    record, _, matched = pool[0]
    constraints = _constraints(state.belief, state.profile)
    support = _support_pair(record, matched, constraints)
    das: list[DialogueAct] = [make_da("recommend_target", ("attraction_name", record.name), support)]
    first_recommendation = not state.recommended_attractions
    if config.restaurant_followup and first_recommendation:
        das.extend(restaurant_fallback(constraints, record))
    rationale = "recommend.argmax" if first_recommendation else "recommend.retry"
    return PolicyDecision(tuple(das), FlowPhase.QUESTION_ANSWERING, rationale)


def _question_answering(state, db, config) -> PolicyDecision:
    if state.pending_request:
        das = answer_request(state.pending_request, state, db)
        return PolicyDecision(tuple(das), FlowPhase.QUESTION_ANSWERING, "answer.request")
    if state.recommendation_rejected:
        return _recommendation(state, db, config)
    invited_last_turn = "ask_question" in state.last_system_intents
    if invited_last_turn and state.silence_streak > 0:
        return _farewell(state, db, config, "farewell.no_questions")
    return PolicyDecision(
        (DialogueAct("ask_question"),), FlowPhase.QUESTION_ANSWERING, "invite.questions"
    )


def reachable_decisions(db: AttractionDb, config: PolicyConfig) -> list[PolicyDecision]:
    """Sweep decide() over a battery of states covering every branch.

    Used by the NLG coverage gate: the (intent, slot set) shapes of these
    decisions are the templates the shipped policy can ever need.
    """
    sample_values = {"user_name": "Alex", "user_accompany": "child", "user_food_type": "steak"}
    states: list[DialogueState] = [DialogueState()]

    # profile gathering: ask each slot, acknowledge each slot as the last answer
    for index, slot in enumerate(config.profile_order):
        profile = {s: sample_values.get(s, "x") for s in config.profile_order[:index]}
        states.append(
            DialogueState(
                phase=FlowPhase.PROFILE_GATHERING,
                profile=profile,
                requested_slots=list(config.profile_order[:index]),
            )
        )
    for slot in config.profile_order:
        profile = {s: sample_values.get(s, "x") for s in config.profile_order}
        states.append(
            DialogueState(
                phase=FlowPhase.PROFILE_GATHERING,
                profile=profile,
                history=[
                    HistoryEntry("customer", (make_da("inform", (slot, profile[slot])),), "")
                ],
            )
        )
    # profile given up after silence
    states.append(
        DialogueState(
            phase=FlowPhase.PROFILE_GATHERING,
            requested_slots=list(config.profile_order),
            silence_streak=1,
        )
    )
    states.append(DialogueState(phase=FlowPhase.ATTRACTION_INTRODUCTION))
    # recommendation support variants: one belief per scorable constraint, per value
    belief_variants: list[dict[str, str]] = [{}]
    accompany_values = sorted({v for a in db.attractions for v in a.suitable_accompany})
    food_values = sorted({r.food_type for a in db.attractions for r in a.nearby_restaurants})
    belief_variants += [{"user_accompany": v} for v in accompany_values]
    belief_variants += [{"user_food_type": v} for v in food_values + ["steak"]]
    belief_variants += [{"attraction_rain": a.rain} for a in db.attractions]
    belief_variants += [{"attraction_parking": a.parking} for a in db.attractions]
    for belief in belief_variants:
        states.append(DialogueState(phase=FlowPhase.RECOMMENDATION, belief=dict(belief), introduced=True))
        # runner-up re-recommendation with the same belief
        states.append(
            DialogueState(
                phase=FlowPhase.QUESTION_ANSWERING,
                belief=dict(belief),
                introduced=True,
                recommendation_rejected=True,
                recommended_attractions=[db.attractions[0].name],
            )
        )
    # question answering: each requestable slot, focused and unfocused
    for slot in REQUESTABLE_SLOTS:
        for focus in (db.attractions[0].name, None):
            states.append(
                DialogueState(
                    phase=FlowPhase.QUESTION_ANSWERING,
                    pending_request=[SlotValue(slot, "?")],
                    focused_attraction=focus,
                    introduced=True,
                )
            )
    # invitation, exhausted farewell, silent farewell, budget, explicit goodbye
    states.append(DialogueState(phase=FlowPhase.QUESTION_ANSWERING, introduced=True))
    states.append(
        DialogueState(
            phase=FlowPhase.QUESTION_ANSWERING,
            recommendation_rejected=True,
            recommended_attractions=[a.name for a in db.attractions],
        )
    )
    states.append(
        DialogueState(
            phase=FlowPhase.QUESTION_ANSWERING,
            last_system_intents=("ask_question",),
            silence_streak=1,
        )
    )
    states.append(DialogueState(phase=FlowPhase.FAREWELL))
    states.append(DialogueState(phase=FlowPhase.GREETING, turn_count=config.turn_budget))
    states.append(DialogueState(phase=FlowPhase.GREETING, farewell_requested=True))

    variants = [config]
    if config.restaurant_followup:
        variants.append(PolicyConfig(config.profile_order, config.turn_budget, False))
    decisions = []
    for state in states:
        for variant in variants:
            decisions.append(decide(state, db, variant))
    return decisions


def _coerce(value: object) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def _check_embeddable(name: str, value: str) -> str:
    if any(c in _VALUE_FORBIDDEN for c in value):
        raise DbError(f"{name} contains a reserved character ( , ( ) = ): {value!r}")
    return value


def load_attraction_db(path) -> AttractionDb:
    import yaml

    with open(path, "r", encoding="utf-8") as handle:
        doc = yaml.safe_load(handle)
    if not isinstance(doc, dict) or not isinstance(doc.get("attractions"), list):
        raise DbError(f"{path}: expected a mapping with an 'attractions' list")
    records = []
    for item in doc["attractions"]:
        open_time = _coerce(item.get("open_time", ""))
        if not _looks_like_hours(open_time):
            raise DbError(f"attraction {item.get('name')!r}: bad open_time {open_time!r}")
        restaurants = tuple(
            RestaurantRecord(
                name=_check_embeddable("restaurant name", _coerce(r["name"])),
                food_type=_coerce(r["food_type"]),
                distance_note=_coerce(r.get("distance_note", "")),
            )
            for r in item.get("nearby_restaurants", [])
        )
        records.append(
            AttractionRecord(
                name=_check_embeddable("attraction name", _coerce(item["name"])),
                open_time=open_time,
                parking=_coerce(item.get("parking", "unknown")),
                rain=_coerce(item.get("rain", "unknown")),
                genre=_check_embeddable("genre", _coerce(item.get("genre", ""))),
                description=_check_embeddable("description", _coerce(item.get("description", ""))),
                suitable_accompany=frozenset(_coerce(v) for v in item.get("suitable_accompany", [])),
                nearby_restaurants=restaurants,
            )
        )
    return AttractionDb(tuple(records))


def _looks_like_hours(value: str) -> bool:
    import re

    return re.fullmatch(r"\d{1,2}:\d{2}-\d{1,2}:\d{2}", value) is not None
