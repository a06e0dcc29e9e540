"""Cross-module flow properties over randomized sessions."""

import random

from tourdesk.config import build_engine
from tourdesk.da import enumerate_das, validate_da
from tourdesk.dst import FlowPhase
from tourdesk.engine import SimScript, SimStep

SEEDS = {
    "user_name": ["Alex"],
    "attraction_name": ["Tokyo Trick Art Museum", "Tokyo Water Science Museum"],
}


def random_script(seed, pool):
    rng = random.Random(seed)
    steps = []
    for _ in range(35):
        roll = rng.random()
        if roll < 0.3:
            steps.append(SimStep("silence"))
        else:
            steps.append(SimStep("da", das=(rng.choice(pool),)))
    return SimScript(steps=steps)


def test_random_runs_hold_flow_invariants(tmp_path, ontology):
    engine = build_engine(data_dir=tmp_path, fixed_clock=True)
    pool = enumerate_das(ontology, "customer", max_pairs=2, seed_values=SEEDS)
    for seed in range(30):
        report = engine.simulate(random_script(seed, pool))
        previous_after = None
        for record in report.records:
            # phases only move forward (QuestionAnswering may self-loop)
            assert record.phase_after.index >= record.phase_before.index
            if previous_after is not None:
                assert record.phase_before is previous_after
            previous_after = record.phase_after
            for da in record.system_das:
                assert validate_da(da, ontology, speaker="system").ok, str(da)
        session = engine.get_session(report.session_id)
        assert session.state.turn_count == len(report.records)
        assert len(session.state.history) == 2 * len(report.records)


def test_all_silence_session_closes_politely(tmp_path):
    engine = build_engine(data_dir=tmp_path, fixed_clock=True)
    report = engine.simulate(SimScript(steps=[SimStep("silence") for _ in range(12)]))
    assert report.final_phase is FlowPhase.DONE
    sequence = report.system_intent_sequence
    assert sequence[-2:] == ["thank-you_for_visiting", "goodbye"]
    # silence walks the whole flow: greeting, three profile questions,
    # introduction, recommendation, invitation, farewell
    assert "recommend_target" in sequence
    assert report.customer_turns <= 10
