import pytest

from conftest import scenario_nets
from parserepair.engine import (
    EVAL_HEADER,
    InteractiveAnswerer,
    OracleAnswerer,
    ScriptedAnswerer,
    accuracy,
    evaluate_corpus,
    format_eval_table,
    format_transcript,
    hypothesis_summary,
    oracle_answer,
    run_session,
    train_offline,
)
from parserepair.fstruct import EMPTY_FS, PathStep, Symbol, flatten, read_fs
from parserepair.hypgen import (
    CombineChunks,
    InsertChunk,
    RepairConfig,
    RepairNetworks,
    SentenceType,
    TopLevelFrame,
)
from parserepair.repairmem import (
    CorpusRecord,
    ParserOutput,
    demote_current_ilt,
    initialize,
)

WHEN = (PathStep("when"),)
WHO = (PathStep("who"),)

# flatten-F1 of the scenario's partial parse against its gold: the four
# when-subtree pairs match out of 5 candidate and 7 gold pairs
PARTIAL_VS_GOLD_F1 = 2 / 3


def switched_drm(record, spec):
    drm = initialize(record.output, spec)
    demote_current_ilt(drm)
    drm.current_ilt = spec.template_for("<free>")
    drm.top_level_confirmed = True
    return drm


# ---------------------------------------------------------------------------
# Accuracy


def test_accuracy_identity_and_disjoint(scenario_record):
    gold = scenario_record.gold
    assert accuracy(gold, gold) == 1.0
    other = read_fs("((frame *meeting) (topic ((frame *you))))")
    assert accuracy(other, gold) == 0.0


def test_accuracy_empty_rules():
    assert accuracy(EMPTY_FS, EMPTY_FS) == 1.0
    assert accuracy(EMPTY_FS, read_fs("((frame *i))")) == 0.0
    assert accuracy(read_fs("((frame *i))"), EMPTY_FS) == 0.0


def test_accuracy_of_partial_parse_against_gold(scenario_record, demo_spec):
    drm = initialize(scenario_record.output, demo_spec)
    value = accuracy(drm.current_ilt, scenario_record.gold)
    assert 0 < value < 1
    assert value == pytest.approx(PARTIAL_VS_GOLD_F1)


def test_accuracy_is_symmetric(scenario_record, demo_spec):
    drm = initialize(scenario_record.output, demo_spec)
    gold = scenario_record.gold
    assert accuracy(drm.current_ilt, gold) == accuracy(gold, drm.current_ilt)


# ---------------------------------------------------------------------------
# Oracle answers


def test_oracle_top_level_frame(scenario_record, demo_spec):
    drm = initialize(scenario_record.output, demo_spec)
    gold = scenario_record.gold
    assert oracle_answer(gold, TopLevelFrame("<free>"), drm, demo_spec)
    assert not oracle_answer(gold, TopLevelFrame("<busy>"), drm, demo_spec)


def test_oracle_sentence_type(scenario_record, demo_spec):
    drm = initialize(scenario_record.output, demo_spec)
    gold = scenario_record.gold
    assert oracle_answer(gold, SentenceType(Symbol("*state")), drm, demo_spec)
    assert not oracle_answer(gold, SentenceType(Symbol("*query-if")), drm, demo_spec)


def test_oracle_insert_checks_gold_at_target(scenario_record, demo_spec):
    drm = switched_drm(scenario_record, demo_spec)
    gold = scenario_record.gold
    yes = InsertChunk(4, (), WHEN, "<simple-time>")
    assert oracle_answer(gold, yes, drm, demo_spec)
    pronoun = InsertChunk(2, WHO, WHO, "<i>")
    assert oracle_answer(gold, pronoun, drm, demo_spec)
    wrong_filler = InsertChunk(3, (), WHO, "<that>")
    assert not oracle_answer(gold, wrong_filler, drm, demo_spec)
    wrong_slot = InsertChunk(4, (), (PathStep("why"),), "<simple-time>")
    assert not oracle_answer(gold, wrong_slot, drm, demo_spec)


def test_oracle_insert_coercion_uses_realized_value(demo_spec):
    po = ParserOutput(
        utterance=("nine", "free"),
        partial_fs=read_fs("((frame *free) (sentence-type *state))"),
        partial_symbols=("adj-free",),
        skipped=(),
        quality="good",
    )
    drm = initialize(po, demo_spec)
    drm.top_level_confirmed = True
    from parserepair.repairmem import Chunk

    drm.chunks.append(Chunk(1, read_fs("((value nine))"), ("num-nine",), None))
    gold = read_fs(
        "((frame *free) (sentence-type *state)"
        " (when ((frame *simple-time) (day 9))))"
    )
    # realized value ((frame *simple-time)) is a subset of gold's filler
    h = InsertChunk(1, (), WHEN, "<simple-time>")
    assert oracle_answer(gold, h, drm, demo_spec)
    h_bad = InsertChunk(1, (), WHEN, "<special-time>")
    assert not oracle_answer(gold, h_bad, drm, demo_spec)


def test_oracle_combine_needs_a_covering_gold_constituent(scenario_record, demo_spec):
    drm = initialize(scenario_record.output, demo_spec)
    gold = scenario_record.gold
    # none of the scenario chunks jointly describe one gold constituent
    assert not oracle_answer(gold, CombineChunks((1, 2), "<free>"), drm, demo_spec)
    assert not oracle_answer(gold, CombineChunks((1, 3), "<i>"), drm, demo_spec)
    from parserepair.repairmem import Chunk

    drm.chunks.append(Chunk(5, read_fs("((day 9))"), ("ordinal-p",), None))
    drm.chunks.append(
        Chunk(6, read_fs("((time-of-day afternoon))"), ("time-of-day-p",), None)
    )
    # both pieces live inside gold's when filler, which is a <simple-time>
    yes = CombineChunks((5, 6), "<simple-time>")
    assert oracle_answer(gold, yes, drm, demo_spec)
    assert not oracle_answer(gold, CombineChunks((5, 6), "<special-time>"), drm, demo_spec)


def test_oracle_answerer_satisfaction(scenario_record, demo_spec):
    answerer = OracleAnswerer(scenario_record.gold, demo_spec)
    drm = initialize(scenario_record.output, demo_spec)
    assert not answerer.satisfied(drm)
    drm.current_ilt = read_fs(
        "((frame *free) (sentence-type *state) (who ((frame *i)))"
        " (when ((frame *simple-time) (time-of-day afternoon)"
        " (day-of-week tuesday) (day 9))))"
    )
    assert answerer.satisfied(drm)


# ---------------------------------------------------------------------------
# Sessions


def test_session_replays_scenario_with_oracle(scenario_record, demo_spec, demo_glosses):
    nets = scenario_nets(demo_spec)
    result = run_session(
        scenario_record.output,
        demo_spec,
        nets,
        OracleAnswerer(scenario_record.gold, demo_spec),
        glosses=demo_glosses,
        gold=scenario_record.gold,
    )
    assert result.final_ilt == scenario_record.gold
    assert result.questions_used == 4
    assert result.accuracy_before == pytest.approx(PARTIAL_VS_GOLD_F1)
    assert result.accuracy_after == 1.0
    questions = [entry.question for entry in result.transcript]
    assert "Is your sentence mainly about someone being free?" in questions
    assert (
        "Is Tuesday afternoon the ninth the time of being free in your sentence?"
        in questions
    )
    assert 'Is it "I" who is being free in your sentence?' in questions


def test_session_with_complete_parse_asks_nothing(demo_spec):
    nets = RepairNetworks.fresh(demo_spec)
    gold = read_fs("((frame *busy) (sentence-type *state))")
    po = ParserOutput(
        utterance=("busy",),
        partial_fs=gold,
        partial_symbols=("adj-busy",),
        skipped=(),
        quality="good",
        parsed_completely=True,
    )
    result = run_session(
        po, demo_spec, nets, OracleAnswerer(gold, demo_spec), gold=gold
    )
    assert result.questions_used == 0
    assert result.final_ilt == gold
    assert result.accuracy_after == 1.0


def test_session_with_zero_budget_keeps_initial_ilt(scenario_record, demo_spec):
    nets = scenario_nets(demo_spec)
    result = run_session(
        scenario_record.output,
        demo_spec,
        nets,
        OracleAnswerer(scenario_record.gold, demo_spec),
        RepairConfig(max_questions=0),
        gold=scenario_record.gold,
    )
    assert result.questions_used == 0
    assert result.accuracy_after == result.accuracy_before


def test_session_budget_is_respected(scenario_record, demo_spec):
    nets = scenario_nets(demo_spec)
    for budget in (1, 2, 3):
        result = run_session(
            scenario_record.output,
            demo_spec,
            RepairNetworks.load(nets.save()),
            OracleAnswerer(scenario_record.gold, demo_spec),
            RepairConfig(max_questions=budget),
        )
        assert result.questions_used <= budget


def test_session_transcripts_share_prefix_across_budgets(scenario_record, demo_spec):
    nets = scenario_nets(demo_spec)
    base = nets.save()
    short = run_session(
        scenario_record.output,
        demo_spec,
        RepairNetworks.load(base),
        OracleAnswerer(scenario_record.gold, demo_spec),
        RepairConfig(max_questions=2),
    )
    long = run_session(
        scenario_record.output,
        demo_spec,
        RepairNetworks.load(base),
        OracleAnswerer(scenario_record.gold, demo_spec),
        RepairConfig(max_questions=10),
    )
    assert long.transcript[:2] == short.transcript


def test_scripted_answerer_gives_up_when_exhausted(scenario_record, demo_spec):
    nets = scenario_nets(demo_spec)
    result = run_session(
        scenario_record.output,
        demo_spec,
        nets,
        ScriptedAnswerer(["yes", "no"]),
    )
    assert result.questions_used == 2
    assert [e.answer for e in result.transcript] == ["yes", "no"]


def test_interactive_answerer_parses_console_input():
    lines = iter(["maybe", "y", "N", "done"])
    said = []
    answerer = InteractiveAnswerer(ask=lambda _: next(lines), say=said.append)
    assert answerer.answer("q?", None, None) == "yes"
    assert said == ["please answer y, n, or done"]
    assert answerer.answer("q?", None, None) == "no"
    assert not answerer.satisfied(None)
    assert answerer.answer("q?", None, None) == "no"
    assert answerer.satisfied(None)


def test_sessions_are_deterministic(scenario_record, demo_spec):
    nets = scenario_nets(demo_spec)
    base = nets.save()
    results = [
        run_session(
            scenario_record.output,
            demo_spec,
            RepairNetworks.load(base),
            OracleAnswerer(scenario_record.gold, demo_spec),
        )
        for _ in range(2)
    ]
    assert results[0].transcript == results[1].transcript
    assert results[0].final_ilt == results[1].final_ilt


def test_hypothesis_summaries():
    assert hypothesis_summary(TopLevelFrame("<free>")) == "top-level frame <free>"
    assert hypothesis_summary(SentenceType(Symbol("*state"))) == "sentence type *state"
    assert (
        hypothesis_summary(CombineChunks((1, 2), "<free>"))
        == "combine chunks 1, 2 as <free>"
    )
    assert (
        hypothesis_summary(InsertChunk(4, (), WHEN, "<simple-time>"))
        == "insert chunk 4 at when as <simple-time>"
    )


def test_format_transcript(scenario_record, demo_spec, demo_glosses):
    nets = scenario_nets(demo_spec)
    result = run_session(
        scenario_record.output,
        demo_spec,
        nets,
        ScriptedAnswerer(["yes"]),
        glosses=demo_glosses,
    )
    assert format_transcript(result.transcript) == (
        "Q1: Is your sentence mainly about someone being free?\nA1: yes"
    )


# ---------------------------------------------------------------------------
# Evaluation


def test_evaluate_corpus_shape_and_budget_zero(scenario_record, demo_spec):
    nets = scenario_nets(demo_spec)
    rows = evaluate_corpus([scenario_record], demo_spec, nets, budgets=(0, 10))
    assert len(rows) == 9 * 2
    assert [row.policy for row in rows[:2]] == ["td-td-td", "td-td-td"]
    for row in rows:
        if row.budget == 0:
            assert row.accuracy_after == row.accuracy_before
            assert row.mean_questions == 0


def test_evaluate_corpus_meta_solves_scenario(scenario_record, demo_spec):
    nets = scenario_nets(demo_spec)
    rows = evaluate_corpus(
        [scenario_record], demo_spec, nets, budgets=(10,), policies=("meta",)
    )
    assert rows[0].accuracy_after == 1.0
    assert rows[0].mean_questions == 4


def test_evaluate_corpus_is_deterministic(scenario_record, demo_spec):
    nets = scenario_nets(demo_spec)
    first = evaluate_corpus([scenario_record], demo_spec, nets, budgets=(5,))
    second = evaluate_corpus([scenario_record], demo_spec, nets, budgets=(5,))
    assert first == second


def test_evaluate_corpus_requires_gold(scenario_record, demo_spec):
    nets = scenario_nets(demo_spec)
    record = CorpusRecord(scenario_record.output, None)
    with pytest.raises(ValueError, match="record 1"):
        evaluate_corpus([record], demo_spec, nets)


def test_eval_table_format(scenario_record, demo_spec):
    nets = scenario_nets(demo_spec)
    rows = evaluate_corpus(
        [scenario_record], demo_spec, nets, budgets=(0,), policies=("meta",)
    )
    text = format_eval_table(rows)
    lines = text.splitlines()
    assert lines[0] == EVAL_HEADER
    assert len(lines) == 2
    assert lines[1].startswith("meta\t0\t")


# ---------------------------------------------------------------------------
# Offline training


def test_train_offline_teaches_all_networks(scenario_record, demo_spec):
    nets = RepairNetworks.fresh(demo_spec)
    train_offline([scenario_record], demo_spec, nets)
    symbols = set(scenario_record.output.all_symbols())
    assert nets.symbols_type.predict(symbols)[0].output == "<free>"
    assert nets.symbols_sentence_type.predict(symbols)[0].output == "*state"
    # the free-adjective segment was typed, so its symbols feed N1
    assert nets.symbol_type.predict({"adj-free"})[0].output == "<free>"
    assert nets.slot_filler.predict({"*free when"})[0].output == "<simple-time>"
    assert nets.slot_filler.predict({"*free who"})[0].output == "<i>"
    top_pairs = {p.output for p in nets.slot_prior.predict({"true"})[:2]}
    assert top_pairs == {"*free when", "*free who"}


def test_offline_trained_nets_replay_scenario(scenario_record, demo_spec):
    nets = RepairNetworks.fresh(demo_spec)
    train_offline([scenario_record], demo_spec, nets)
    result = run_session(
        scenario_record.output,
        demo_spec,
        nets,
        OracleAnswerer(scenario_record.gold, demo_spec),
        gold=scenario_record.gold,
    )
    assert result.final_ilt == scenario_record.gold
    assert result.questions_used == 4
    assert result.accuracy_after == 1.0


def test_train_offline_skips_records_without_gold(scenario_record, demo_spec):
    nets = RepairNetworks.fresh(demo_spec)
    record = CorpusRecord(scenario_record.output, None)
    before = nets.save()
    train_offline([record], demo_spec, nets)
    assert nets.save() == before
