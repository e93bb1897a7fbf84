"""Hypothesis generation for interactive parse repair.

Four hypothesis types (top-level frame, sentence type, chunk
combination, chunk insertion) are produced by generators that combine
the interlingua specification's hard constraints with rankings from the
mutual-information networks.  A strategy answers three questions, each
top-down or bottom-up; the meta policy picks answers case by case.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fstruct import PathStep, Symbol, constituents_with_paths
from .ilspec import InterlinguaSpec, is_structural
from .minet import MINetwork
from . import minet
from .repairmem import DynamicRepairMemory, hypothesis_key

TRUE_UNIT = "true"

TOP_DOWN = "top-down"
BOTTOM_UP = "bottom-up"


def pair_unit(frame: Symbol, slot: str) -> str:
    """Network unit for a (frame, slot) pair."""
    return f"{frame.name} {slot}"


# ---------------------------------------------------------------------------
# Hypotheses


@dataclass(frozen=True)
class TopLevelFrame:
    leaf: str  # spec leaf type name


@dataclass(frozen=True)
class SentenceType:
    value: Symbol


@dataclass(frozen=True)
class CombineChunks:
    member_ids: tuple
    result_leaf: str


@dataclass(frozen=True)
class InsertChunk:
    chunk_id: int
    constituent_path: tuple  # path within the chunk's fs; () = whole chunk
    target: tuple  # path in the current ILT, ending at the slot
    as_type: str


@dataclass(frozen=True)
class Strategy:
    q1: str  # top-level structure:   keep parse (td) or guess frame (bu)
    q2: str  # constituent building:  use chunks as-is (td) or combine (bu)
    q3: str  # search driver:         open slots (td) or chunk types (bu)

    def __post_init__(self):
        for answer in (self.q1, self.q2, self.q3):
            if answer not in (TOP_DOWN, BOTTOM_UP):
                raise ValueError(f"bad strategy answer {answer!r}")

    @property
    def name(self) -> str:
        short = {TOP_DOWN: "td", BOTTOM_UP: "bu"}
        return "-".join(short[a] for a in (self.q1, self.q2, self.q3))


ALL_STRATEGIES = tuple(
    Strategy(q1, q2, q3)
    for q1 in (TOP_DOWN, BOTTOM_UP)
    for q2 in (TOP_DOWN, BOTTOM_UP)
    for q3 in (TOP_DOWN, BOTTOM_UP)
)

META = "meta"

POLICY_NAMES = tuple(s.name for s in ALL_STRATEGIES) + (META,)


def policy_by_name(name: str):
    if name == META:
        return META
    for strategy in ALL_STRATEGIES:
        if strategy.name == name:
            return strategy
    raise ValueError(f"unknown policy {name!r}")


@dataclass(frozen=True)
class RepairConfig:
    max_questions: int = 10
    enable_combine: bool = False
    top_frame_candidates: int = 5
    smoothing_lambda: float = 0.5


# ---------------------------------------------------------------------------
# The five networks


@dataclass
class RepairNetworks:
    symbol_type: MINetwork  # one symbol -> chunk leaf type
    slot_filler: MINetwork  # (frame, slot) -> filler leaf type
    symbols_type: MINetwork  # utterance symbol set -> top-level leaf type
    symbols_sentence_type: MINetwork  # utterance symbol set -> sentence type
    slot_prior: MINetwork  # TRUE -> (frame, slot) likely to be filled

    @classmethod
    def fresh(cls, spec: InterlinguaSpec, lam: float = 0.5) -> "RepairNetworks":
        leaves = list(spec.leaf_names())
        pairs = structural_pairs(spec)
        sentence_types = [
            s.name for s in spec.sentence_types if s.name != "*fragment"
        ]
        return cls(
            symbol_type=MINetwork("symbol-type", lam, (), leaves),
            slot_filler=MINetwork("slot-filler", lam, pairs, leaves),
            symbols_type=MINetwork("symbols-type", lam, (), leaves),
            symbols_sentence_type=MINetwork(
                "symbols-sentence-type", lam, (), sentence_types
            ),
            slot_prior=MINetwork("slot-prior", lam, (TRUE_UNIT,), pairs),
        )

    def as_dict(self) -> dict:
        return {
            net.name: net
            for net in (
                self.symbol_type,
                self.slot_filler,
                self.symbols_type,
                self.symbols_sentence_type,
                self.slot_prior,
            )
        }

    def save(self) -> bytes:
        return minet.save_bundle(self.as_dict())

    @classmethod
    def load(cls, data: bytes) -> "RepairNetworks":
        nets = minet.load_bundle(data)
        try:
            return cls(
                symbol_type=nets["symbol-type"],
                slot_filler=nets["slot-filler"],
                symbols_type=nets["symbols-type"],
                symbols_sentence_type=nets["symbols-sentence-type"],
                slot_prior=nets["slot-prior"],
            )
        except KeyError as err:
            raise minet.ModelFormatError(f"bundle is missing network {err}")


def structural_pairs(spec: InterlinguaSpec) -> list:
    """(frame, slot) units for every slot that can hold a structure."""
    pairs = []
    for leaf_name in spec.leaf_names():
        rule = spec.rules[leaf_name]
        for slot, declared in rule.slot_specs:
            if is_structural(declared) and spec.leaves_under(declared):
                pairs.append(pair_unit(rule.frame, slot))
    return pairs


# ---------------------------------------------------------------------------
# Generators


def gen_top_level(
    drm: DynamicRepairMemory,
    spec: InterlinguaSpec,
    nets: RepairNetworks,
    config: RepairConfig = RepairConfig(),
) -> list:
    """Ranked top-level frame guesses from the whole-utterance symbol set."""
    symbols = set(drm.all_symbols())
    mask = set(spec.leaves_under(spec.root_type))
    ranked = [
        TopLevelFrame(p.output)
        for p in nets.symbols_type.predict(symbols, mask)
    ]
    capped = ranked[: config.top_frame_candidates]
    parser_leaf = spec.leaf_type_of(drm.current_ilt)
    if parser_leaf in mask and TopLevelFrame(parser_leaf) not in capped:
        capped.append(TopLevelFrame(parser_leaf))
    return capped


def gen_sentence_type(drm: DynamicRepairMemory, nets: RepairNetworks) -> list:
    symbols = set(drm.all_symbols())
    return [
        SentenceType(Symbol(p.output))
        for p in nets.symbols_sentence_type.predict(symbols)
    ]


def gen_combine(
    drm: DynamicRepairMemory,
    spec: InterlinguaSpec,
    nets: RepairNetworks,
    config: RepairConfig = RepairConfig(),
) -> list:
    """Candidate chunk combinations: pairs then triples, newest first."""
    available = sorted(drm.unconsumed_chunks(), key=lambda c: -c.id)
    subsets = []
    for i in range(len(available)):
        for j in range(i + 1, len(available)):
            subsets.append((available[i], available[j]))
    for i in range(len(available)):
        for j in range(i + 1, len(available)):
            for k in range(j + 1, len(available)):
                subsets.append((available[i], available[j], available[k]))
    out = []
    mask = set(spec.leaf_names())
    for members in subsets:
        symbols = set()
        for chunk in members:
            symbols.update(chunk.symbols)
        predictions = nets.symbols_type.predict(symbols, mask)
        if predictions:
            ids = tuple(sorted(c.id for c in members))
            out.append(CombineChunks(ids, predictions[0].output))
    return out


def _slot_rank(nets: RepairNetworks, open_slots) -> list:
    """Open slots by slot-prior score, declaration order breaking ties."""
    scored = [
        (nets.slot_prior.score({TRUE_UNIT}, pair_unit(s.frame, s.slot)), s)
        for s in open_slots
    ]
    scored.sort(key=lambda pair: -pair[0])  # stable: keeps pre-order on ties
    return [s for _, s in scored]


def gen_insert_bottom_up(
    drm: DynamicRepairMemory,
    spec: InterlinguaSpec,
    nets: RepairNetworks,
) -> list:
    """Insertions driven by the chunks: where does each typed piece fit?"""
    open_slots = spec.open_slots(drm.current_ilt)
    candidates = []
    order = 0
    for chunk in drm.unconsumed_chunks():
        if chunk.leaf_type is None:
            continue
        for cpath, node in constituents_with_paths(chunk.fs):
            node_leaf = spec.leaf_type_of(node)
            if node_leaf is None:
                continue
            for slot in open_slots:
                if not spec.subsumes(slot.allowed, node_leaf):
                    continue
                unit = pair_unit(slot.frame, slot.slot)
                score = nets.slot_prior.score({TRUE_UNIT}, unit) + (
                    nets.slot_filler.score({unit}, node_leaf)
                )
                target = slot.path + (PathStep(slot.slot),)
                candidates.append(
                    (
                        -score,
                        order,
                        InsertChunk(chunk.id, cpath, target, node_leaf),
                    )
                )
                order += 1
    candidates.sort(key=lambda item: (item[0], item[1]))
    return [h for _, _, h in candidates]


def gen_insert_top_down(
    drm: DynamicRepairMemory,
    spec: InterlinguaSpec,
    nets: RepairNetworks,
) -> list:
    """Insertions driven by the ILT: which open slot wants to be filled?

    Per (slot, filler-type): constituents already carrying the type come
    first, then untyped chunks coerced to the type (confirmed coercions
    are how new words get learned).
    """
    open_slots = spec.open_slots(drm.current_ilt)
    if not open_slots:
        return []
    out = []
    for slot in _slot_rank(nets, open_slots):
        unit = pair_unit(slot.frame, slot.slot)
        type_candidates = [
            t for t in spec.leaves_under(slot.allowed) if is_structural(t)
        ]
        scored = [(nets.slot_filler.score({unit}, t), t) for t in type_candidates]
        scored.sort(key=lambda pair: -pair[0])  # stable on ties
        target = slot.path + (PathStep(slot.slot),)
        for _, type_name in scored:
            for chunk in drm.unconsumed_chunks():
                for cpath, node in constituents_with_paths(chunk.fs):
                    if spec.leaf_type_of(node) == type_name:
                        out.append(InsertChunk(chunk.id, cpath, target, type_name))
            for chunk in drm.unconsumed_chunks():
                if chunk.leaf_type is None:
                    out.append(InsertChunk(chunk.id, (), target, type_name))
    return out


# ---------------------------------------------------------------------------
# Policy: what to ask next


def next_hypothesis(
    drm: DynamicRepairMemory,
    spec: InterlinguaSpec,
    nets: RepairNetworks,
    config: RepairConfig = RepairConfig(),
    policy=META,
):
    """The next hypothesis to confirm, or None when the session is done."""
    if isinstance(policy, str) and policy != META:
        policy = policy_by_name(policy)
    if drm.questions_asked >= config.max_questions:
        return None
    if not drm.top_level_confirmed:
        h = _next_top_level(drm, spec, nets, config, policy)
        if h is not None:
            return h
    if drm.need_sentence_type:
        h = _next_sentence_type(drm, nets)
        if h is not None:
            return h
        drm.need_sentence_type = False
    combining = (
        config.enable_combine if policy == META else policy.q2 == BOTTOM_UP
    )
    if combining:
        h = _first_unasked(gen_combine(drm, spec, nets, config), drm)
        if h is not None:
            return h
    if policy == META:
        h = _first_unasked(gen_insert_bottom_up(drm, spec, nets), drm)
        if h is not None:
            return h
        return _first_unasked(gen_insert_top_down(drm, spec, nets), drm)
    if policy.q3 == BOTTOM_UP:
        return _first_unasked(gen_insert_bottom_up(drm, spec, nets), drm)
    return _first_unasked(gen_insert_top_down(drm, spec, nets), drm)


def _first_unasked(candidates, drm):
    asked = drm.asked_keys()
    for h in candidates:
        if hypothesis_key(h) not in asked:
            return h
    return None


def _next_top_level(drm, spec, nets, config, policy):
    """Q1.  Returns a hypothesis to ask, or None after silent confirmation."""
    po = drm.parser_output
    parser_leaf = spec.leaf_type_of(drm.current_ilt)

    if po.parsed_completely:
        drm.top_level_confirmed = True
        return None

    if policy == META:
        queue = None
        if po.quality == "good" and parser_leaf is not None:
            ranked = gen_top_level(drm, spec, nets, config)
            if ranked and ranked[0].leaf == parser_leaf:
                # statistics agree with the parser: keep silently
                drm.top_level_confirmed = True
                return None
            # check the parser's own analysis first, then the ranked list
            queue = [TopLevelFrame(parser_leaf)] + ranked
        if queue is None:
            queue = gen_top_level(drm, spec, nets, config)
    elif policy.q1 == TOP_DOWN:
        drm.top_level_confirmed = True
        return None
    else:
        queue = gen_top_level(drm, spec, nets, config)

    h = _first_unasked(queue, drm)
    if h is None:
        # candidates exhausted: keep the parser's analysis as-is
        drm.top_level_confirmed = True
    return h


def _next_sentence_type(drm, nets):
    current = drm.current_ilt.get("sentence-type")
    candidates = [
        h for h in gen_sentence_type(drm, nets) if h.value != current
    ]
    return _first_unasked(candidates, drm)
