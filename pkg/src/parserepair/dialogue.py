"""Rendering hypotheses as yes/no questions, and applying the answers.

Questions are built from a gloss table (symbol -> English phrase) plus a
small paraphraser for feature structures.  `apply_hypothesis` mutates
the repair memory on a "yes" and reinforces the networks that proposed
the confirmed guess.
"""

from __future__ import annotations

from .fstruct import FeatureStructure, Multiple, Symbol, get_path, set_path
from .hypgen import (
    TRUE_UNIT,
    CombineChunks,
    InsertChunk,
    RepairNetworks,
    SentenceType,
    TopLevelFrame,
    pair_unit,
)
from .ilspec import InterlinguaSpec
from .repairmem import Chunk, DynamicRepairMemory, demote_current_ilt

FRAGMENT = Symbol("*fragment")


# ---------------------------------------------------------------------------
# Glosses


def load_glosses(text: str) -> dict:
    """Parse a gloss table: one `symbol<TAB>gloss` per line."""
    table = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        if "\t" not in line:
            raise ValueError(f"gloss line {lineno} has no tab: {raw!r}")
        symbol, gloss_text = line.split("\t", 1)
        table[symbol.strip().lower()] = gloss_text.strip()
    return table


def format_glosses(table: dict) -> str:
    return "".join(f"{k}\t{v}\n" for k, v in sorted(table.items()))


def gloss(glosses: dict, name) -> str:
    """Gloss for a symbol; unknown symbols show up quoted and raw."""
    key = str(name).lower()
    if key in glosses:
        return glosses[key]
    return f'"{key}"'


_ONES = (
    "zeroth first second third fourth fifth sixth seventh eighth ninth "
    "tenth eleventh twelfth thirteenth fourteenth fifteenth sixteenth "
    "seventeenth eighteenth nineteenth"
).split()
_TENS = {20: "twentieth", 30: "thirtieth"}
_TENS_PREFIX = {20: "twenty", 30: "thirty"}


def ordinal(n: int) -> str:
    if 0 <= n < 20:
        return _ONES[n]
    if n in _TENS:
        return _TENS[n]
    tens, rest = (n // 10) * 10, n % 10
    if tens in _TENS_PREFIX and rest:
        return f"{_TENS_PREFIX[tens]}-{_ONES[rest]}"
    return f"{n}th"


# ---------------------------------------------------------------------------
# Paraphrase


def paraphrase(value, glosses: dict) -> str:
    """A short English rendering of a slot value."""
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Symbol):
        return gloss(glosses, value)
    if isinstance(value, str):
        return value
    if isinstance(value, Multiple):
        return " ".join(p for p in (paraphrase(v, glosses) for v in value.items) if p)
    frame = value.frame
    if frame is not None and frame.name == "*simple-time":
        return _simple_time_phrase(value, glosses)
    if frame is not None and frame.name == "*special-time":
        return _special_time_phrase(value, glosses)
    if frame is not None and frame.name == "*interval":
        start = paraphrase(value.get("start"), glosses)
        end = paraphrase(value.get("end"), glosses)
        return f"from {start} to {end}"
    parts = [gloss(glosses, frame)] if frame is not None else []
    for name, slot_value in value.slots:
        if name in ("frame", "sentence-type", "speech-act"):
            continue
        part = paraphrase(slot_value, glosses)
        if part:
            parts.append(part)
    return " ".join(parts)


def _simple_time_phrase(fs: FeatureStructure, glosses: dict) -> str:
    parts = []
    if fs.get("day-of-week") is not None:
        parts.append(paraphrase(fs.get("day-of-week"), glosses))
    if fs.get("time-of-day") is not None:
        parts.append(paraphrase(fs.get("time-of-day"), glosses))
    day = fs.get("day")
    if isinstance(day, int):
        parts.append(f"the {ordinal(day)}")
    if fs.get("month") is not None:
        parts.append(f"of {paraphrase(fs.get('month'), glosses)}")
    hour = fs.get("hour")
    if isinstance(hour, int):
        minute = fs.get("minute")
        clock = f"{hour}:{minute:02d}" if isinstance(minute, int) else str(hour)
        ampm = fs.get("ampm")
        suffix = f" {paraphrase(ampm, glosses)}" if ampm is not None else ""
        parts.append(f"at {clock}{suffix}")
    return " ".join(parts)


def _special_time_phrase(fs: FeatureStructure, glosses: dict) -> str:
    parts = []
    specifier = fs.get("specifier")
    if specifier is not None:
        items = specifier.items if isinstance(specifier, Multiple) else (specifier,)
        parts.extend(paraphrase(item, glosses) for item in items)
    for slot in ("next", "name"):
        if fs.get(slot) is not None:
            parts.append(paraphrase(fs.get(slot), glosses))
    return " ".join(p for p in parts if p)


def chunk_paraphrase(chunk: Chunk, glosses: dict) -> str:
    text = paraphrase(chunk.fs, glosses)
    return text if text else " ".join(chunk.symbols)


_PRONOUN_COPULA = {"I": "am", "we": "are", "you": "are"}


def sentence_paraphrase(fs: FeatureStructure, glosses: dict) -> str:
    """Whole-sentence rendering of a repaired top-level structure."""
    if fs.frame is None:
        body = paraphrase(fs, glosses)
        return _capitalize(body) + "." if body else ""
    subject = paraphrase(fs.get("who"), glosses) or "someone"
    copula = _PRONOUN_COPULA.get(subject, "is")
    predicate = gloss(glosses, fs.frame)
    if predicate.startswith("being "):
        predicate = predicate[len("being ") :]
    parts = [subject, copula, predicate]
    for name, value in fs.slots:
        if name in ("frame", "sentence-type", "speech-act", "who"):
            continue
        text = paraphrase(value, glosses)
        if text:
            parts.append(text)
    return _capitalize(" ".join(parts)) + "."


def _capitalize(text: str) -> str:
    return text[0].upper() + text[1:] if text else text


# ---------------------------------------------------------------------------
# Questions


def render_question(
    h,
    drm: DynamicRepairMemory,
    spec: InterlinguaSpec,
    glosses: dict,
) -> str:
    if isinstance(h, TopLevelFrame):
        frame = spec.rules[h.leaf].frame
        return f"Is your sentence mainly about someone {gloss(glosses, frame)}?"
    if isinstance(h, SentenceType):
        return f"Is your sentence {gloss(glosses, h.value)}?"
    if isinstance(h, CombineChunks):
        names = [
            chunk_paraphrase(drm.chunk_by_id(i), glosses) for i in h.member_ids
        ]
        frame = spec.rules[h.result_leaf].frame
        joined = " and ".join(names)
        return f"Do {joined} belong together as {gloss(glosses, frame)}?"
    if isinstance(h, InsertChunk):
        chunk = drm.chunk_by_id(h.chunk_id)
        node = get_path(chunk.fs, h.constituent_path)
        text = paraphrase(node, glosses) or " ".join(chunk.symbols)
        owner = get_path(drm.current_ilt, h.target[:-1])
        frame_gloss = gloss(glosses, owner.frame)
        slot = h.target[-1].name
        if slot == "who":
            return f'Is it "{text}" who is {frame_gloss} in your sentence?'
        return f"Is {text} {gloss(glosses, slot)} of {frame_gloss} in your sentence?"
    raise TypeError(f"unknown hypothesis {h!r}")


# ---------------------------------------------------------------------------
# Applying confirmed hypotheses


def insertion_value(h: InsertChunk, drm: DynamicRepairMemory, spec: InterlinguaSpec):
    """The structure an insertion actually writes into the target slot.

    A typed constituent goes in as-is.  An untyped chunk coerced to a
    type contributes the type's frame plus whatever of its content the
    type admits; the rest stays behind in the consumed chunk.
    """
    chunk = drm.chunk_by_id(h.chunk_id)
    node = get_path(chunk.fs, h.constituent_path)
    if not isinstance(node, FeatureStructure):
        raise ValueError(f"chunk {h.chunk_id} has no constituent at the path")
    if spec.leaf_type_of(node) == h.as_type:
        return node
    leaf = spec.rules[h.as_type]
    slots = [("frame", leaf.frame)]
    for name, value in node.slots:
        declared = leaf.slot_type(name)
        if declared is not None and spec.value_conforms(value, declared):
            slots.append((name, value))
    return FeatureStructure(tuple(slots))


def apply_hypothesis(
    h,
    drm: DynamicRepairMemory,
    spec: InterlinguaSpec,
    nets: RepairNetworks,
) -> DynamicRepairMemory:
    """Commit a confirmed hypothesis: update the memory, reinforce nets."""
    if isinstance(h, TopLevelFrame):
        _apply_top_level(h, drm, spec)
        nets.symbols_type.train(set(drm.all_symbols()), h.leaf)
    elif isinstance(h, SentenceType):
        drm.current_ilt = drm.current_ilt.set("sentence-type", h.value)
        drm.need_sentence_type = False
        nets.symbols_sentence_type.train(set(drm.all_symbols()), h.value.name)
    elif isinstance(h, CombineChunks):
        _apply_combine(h, drm, spec)
    elif isinstance(h, InsertChunk):
        _apply_insert(h, drm, spec, nets)
    else:
        raise TypeError(f"unknown hypothesis {h!r}")
    return drm


def _apply_top_level(h: TopLevelFrame, drm, spec):
    current_leaf = spec.leaf_type_of(drm.current_ilt)
    drm.top_level_confirmed = True
    if current_leaf == h.leaf:
        # the parser's own analysis was confirmed: keep it in place
        st = drm.current_ilt.get("sentence-type")
        drm.need_sentence_type = st is None or st == FRAGMENT
        return
    speech_act = drm.current_ilt.get("speech-act")
    demote_current_ilt(drm)
    template = spec.template_for(h.leaf)
    if speech_act is not None:
        template = template.set("speech-act", speech_act)
    drm.current_ilt = template
    drm.need_sentence_type = True


def _apply_combine(h: CombineChunks, drm, spec):
    members = [drm.chunk_by_id(i) for i in h.member_ids]
    symbols = []
    for member in members:
        symbols.extend(member.symbols)
        member.consumed = True
    new = Chunk(
        drm.next_chunk_id(),
        spec.template_for(h.result_leaf),
        tuple(symbols),
        h.result_leaf,
    )
    drm.chunks.append(new)
    drm.pending_members[new.id] = tuple(m.id for m in members)


def _apply_insert(h: InsertChunk, drm, spec, nets):
    if get_path(drm.current_ilt, h.target) is not None:
        raise ValueError("target slot is no longer open")
    owner = get_path(drm.current_ilt, h.target[:-1])
    if not isinstance(owner, FeatureStructure) or owner.frame is None:
        raise ValueError("target path does not reach a framed node")
    chunk = drm.chunk_by_id(h.chunk_id)
    was_unknown = chunk.leaf_type is None
    value = insertion_value(h, drm, spec)
    drm.current_ilt = set_path(drm.current_ilt, h.target, value)
    if h.constituent_path == ():
        chunk.consumed = True
        # members that built this chunk become available for insertion
        for member_id in drm.pending_members.pop(chunk.id, ()):
            drm.chunk_by_id(member_id).consumed = False
    unit = pair_unit(owner.frame, h.target[-1].name)
    nets.slot_filler.train({unit}, h.as_type)
    nets.slot_prior.train({TRUE_UNIT}, unit)
    if was_unknown:
        nets.symbol_type.train(set(chunk.symbols), h.as_type)
