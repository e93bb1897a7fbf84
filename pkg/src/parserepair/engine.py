"""Session orchestration, the accuracy metric, and corpus evaluation.

A session asks the answerer yes/no questions until the answerer is
satisfied, the question budget runs out, or no hypotheses remain.  The
oracle answerer stands in for a cooperative speaker: it answers from a
gold structure and stops once the current ILT matches it.

Accuracy is F1 over flatten() pair sets ("flatten-F1").  It is this
artifact's own metric; the numbers it produces are only comparable to
each other.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .dialogue import apply_hypothesis, insertion_value, render_question
from .fstruct import (
    FeatureStructure,
    Multiple,
    constituents_with_paths,
    flatten,
    get_path,
)
from .hypgen import (
    META,
    POLICY_NAMES,
    TRUE_UNIT,
    CombineChunks,
    InsertChunk,
    RepairConfig,
    RepairNetworks,
    SentenceType,
    TopLevelFrame,
    next_hypothesis,
    pair_unit,
)
from .ilspec import InterlinguaSpec, is_structural
from .repairmem import (
    DynamicRepairMemory,
    ParserOutput,
    TranscriptEntry,
    initialize,
)


def accuracy(candidate: FeatureStructure, gold: FeatureStructure) -> float:
    """Flatten-F1: F1 over exact (path, atomic value) pairs."""
    got, want = flatten(candidate), flatten(gold)
    if not got and not want:
        return 1.0
    if not got or not want:
        return 0.0
    hits = len(got & want)
    if hits == 0:
        return 0.0
    precision = hits / len(got)
    recall = hits / len(want)
    return 2 * precision * recall / (precision + recall)


# ---------------------------------------------------------------------------
# Answerers


def oracle_answer(
    gold: FeatureStructure,
    h,
    drm: DynamicRepairMemory,
    spec: InterlinguaSpec,
) -> bool:
    """Would a cooperative speaker meaning `gold` confirm this guess?"""
    if isinstance(h, TopLevelFrame):
        return spec.leaf_type_of(gold) == h.leaf
    if isinstance(h, SentenceType):
        return gold.get("sentence-type") == h.value
    if isinstance(h, InsertChunk):
        filler = get_path(gold, h.target)
        if not isinstance(filler, FeatureStructure):
            return False
        value = insertion_value(h, drm, spec)
        return flatten(filler) >= flatten(value)
    if isinstance(h, CombineChunks):
        # the members must jointly describe one gold constituent that
        # carries the combined frame, else the merge would strand content
        required = flatten(spec.template_for(h.result_leaf))
        for member_id in h.member_ids:
            required |= flatten(drm.chunk_by_id(member_id).fs)
        return any(
            flatten(node) >= required
            for _, node in constituents_with_paths(gold)
        )
    raise TypeError(f"unknown hypothesis {h!r}")


class OracleAnswerer:
    """Deterministic answerer backed by a gold structure."""

    def __init__(self, gold: FeatureStructure, spec: InterlinguaSpec):
        self.gold = gold
        self.spec = spec
        self._gold_pairs = flatten(gold)

    def answer(self, question: str, h, drm: DynamicRepairMemory) -> str:
        return "yes" if oracle_answer(self.gold, h, drm, self.spec) else "no"

    def satisfied(self, drm: DynamicRepairMemory) -> bool:
        return flatten(drm.current_ilt) == self._gold_pairs


class ScriptedAnswerer:
    """Replays a fixed answer sequence; gives up when it runs out."""

    def __init__(self, answers):
        self._answers = list(answers)
        self._next = 0

    def answer(self, question: str, h, drm) -> str:
        answer = self._answers[self._next]
        self._next += 1
        return answer

    def satisfied(self, drm) -> bool:
        return self._next >= len(self._answers)


class InteractiveAnswerer:
    """Console answerer: y / n / done."""

    def __init__(self, ask=None, say=print):
        self._ask = ask
        self._say = say
        self._done = False

    def answer(self, question: str, h, drm) -> str:
        ask = self._ask if self._ask is not None else input
        while True:
            try:
                raw = ask(f"{question} [y/n/done] ").strip().lower()
            except EOFError:
                self._done = True
                return "no"
            if raw in ("y", "yes"):
                return "yes"
            if raw in ("n", "no"):
                return "no"
            if raw in ("done", "d", "q", "quit"):
                self._done = True
                return "no"
            self._say("please answer y, n, or done")

    def satisfied(self, drm) -> bool:
        return self._done


# ---------------------------------------------------------------------------
# Running sessions


@dataclass(frozen=True)
class SessionResult:
    final_ilt: FeatureStructure
    questions_used: int
    transcript: tuple  # of TranscriptEntry
    accuracy_before: Optional[float] = None
    accuracy_after: Optional[float] = None


def run_session(
    po: ParserOutput,
    spec: InterlinguaSpec,
    nets: RepairNetworks,
    answerer,
    config: RepairConfig = RepairConfig(),
    policy=META,
    glosses=None,
    gold: Optional[FeatureStructure] = None,
) -> SessionResult:
    glosses = glosses if glosses is not None else {}
    drm = initialize(po, spec)
    before = accuracy(drm.current_ilt, gold) if gold is not None else None
    step_session(drm, spec, nets, answerer, config, policy, glosses)
    after = accuracy(drm.current_ilt, gold) if gold is not None else None
    return SessionResult(
        final_ilt=drm.current_ilt,
        questions_used=drm.questions_asked,
        transcript=tuple(drm.transcript),
        accuracy_before=before,
        accuracy_after=after,
    )


def step_session(drm, spec, nets, answerer, config, policy, glosses):
    """Drive an initialized memory to completion, mutating it in place."""
    while True:
        if answerer.satisfied(drm):
            return
        if drm.questions_asked >= config.max_questions:
            return
        h = next_hypothesis(drm, spec, nets, config, policy)
        if h is None:
            return
        question = render_question(h, drm, spec, glosses)
        drm.current_hypothesis = h
        drm.status = "test"
        answer = answerer.answer(question, h, drm)
        drm.transcript.append(TranscriptEntry(h, question, answer))
        if answer == "yes":
            drm.status = "pass"
            apply_hypothesis(h, drm, spec, nets)
        else:
            drm.status = "fail"


def hypothesis_summary(h) -> str:
    if isinstance(h, TopLevelFrame):
        return f"top-level frame {h.leaf}"
    if isinstance(h, SentenceType):
        return f"sentence type {h.value}"
    if isinstance(h, CombineChunks):
        ids = ", ".join(str(i) for i in h.member_ids)
        return f"combine chunks {ids} as {h.result_leaf}"
    if isinstance(h, InsertChunk):
        where = ".".join(step.name for step in h.target)
        return f"insert chunk {h.chunk_id} at {where} as {h.as_type}"
    return repr(h)


def format_transcript(transcript) -> str:
    lines = []
    for i, entry in enumerate(transcript, start=1):
        lines.append(f"Q{i}: {entry.question}")
        lines.append(f"A{i}: {entry.answer}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Corpus evaluation


@dataclass(frozen=True)
class EvalRow:
    policy: str
    budget: int
    accuracy_before: float
    accuracy_after: float
    mean_questions: float


def evaluate_corpus(
    records,
    spec: InterlinguaSpec,
    nets: RepairNetworks,
    budgets=(0, 5, 10, 25),
    policies=POLICY_NAMES,
    persistent: bool = False,
    config: RepairConfig = RepairConfig(),
) -> list:
    """Oracle-answered accuracy per policy and question budget.

    Each (policy, budget) cell starts from a fresh copy of the nets;
    `persistent` keeps pass-reinforcement across records within a cell.
    """
    from .hypgen import policy_by_name

    for i, record in enumerate(records, start=1):
        if record.gold is None:
            raise ValueError(f"record {i} has no gold structure")
    base = nets.save()
    rows = []
    for policy_name in policies:
        policy = policy_by_name(policy_name)
        for budget in budgets:
            working = RepairNetworks.load(base)
            befores, afters, counts = [], [], []
            for record in records:
                if not persistent:
                    working = RepairNetworks.load(base)
                result = run_session(
                    record.output,
                    spec,
                    working,
                    OracleAnswerer(record.gold, spec),
                    replace(config, max_questions=budget),
                    policy,
                    glosses={},
                    gold=record.gold,
                )
                befores.append(result.accuracy_before)
                afters.append(result.accuracy_after)
                counts.append(result.questions_used)
            n = len(records)
            rows.append(
                EvalRow(
                    policy_name,
                    budget,
                    sum(befores) / n,
                    sum(afters) / n,
                    sum(counts) / n,
                )
            )
    return rows


EVAL_HEADER = "policy\tbudget\taccuracy-before\taccuracy-after\tmean-questions"


def format_eval_table(rows) -> str:
    lines = [EVAL_HEADER]
    for row in rows:
        lines.append(
            f"{row.policy}\t{row.budget}\t{row.accuracy_before:.4f}"
            f"\t{row.accuracy_after:.4f}\t{row.mean_questions:.2f}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Offline training


def train_offline(records, spec: InterlinguaSpec, nets: RepairNetworks) -> int:
    """Count gold structures and typed skipped segments into the nets.

    Returns how many records carried a gold structure.
    """
    trained = 0
    for record in records:
        gold = record.gold
        if gold is None:
            continue
        trained += 1
        symbols = set(record.output.all_symbols())
        top_leaf = spec.leaf_type_of(gold)
        if top_leaf is not None:
            nets.symbols_type.train(symbols, top_leaf)
        sentence_type = gold.get("sentence-type")
        if sentence_type is not None and not isinstance(
            sentence_type, (FeatureStructure, Multiple)
        ):
            nets.symbols_sentence_type.train(symbols, str(sentence_type))
        for segment in record.output.skipped:
            leaf = spec.leaf_type_of(segment.fs)
            if leaf is not None:
                nets.symbol_type.train(set(segment.symbols), leaf)
        for _, node in constituents_with_paths(gold):
            leaf_name = spec.leaf_type_of(node)
            if leaf_name is None:
                continue
            rule = spec.rules[leaf_name]
            for slot, value in node.slots:
                declared = rule.slot_type(slot)
                if declared is None or not is_structural(declared):
                    continue
                unit = pair_unit(rule.frame, slot)
                items = value.items if isinstance(value, Multiple) else (value,)
                for item in items:
                    if not isinstance(item, FeatureStructure):
                        continue
                    item_leaf = spec.leaf_type_of(item)
                    if item_leaf is not None:
                        nets.slot_filler.train({unit}, item_leaf)
                        nets.slot_prior.train({TRUE_UNIT}, unit)
    return trained
