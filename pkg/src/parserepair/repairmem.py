"""Chunk structure and the Dynamic Repair Memory blackboard.

The DRM is the session-local state shared by hypothesis generation,
question rendering, and interlingua update: the current interlingua
structure, the chunks extracted from skipped input segments, the
hypothesis under test, and the running transcript.  This module also
defines the corpus record wire format (one parser result per record,
optionally paired with a gold interlingua structure).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .fstruct import (
    EMPTY_FS,
    FeatureStructure,
    Symbol,
    flatten,
    fs_from_form,
    print_fs,
)
from .ilspec import DISTINGUISHED_SLOTS, InterlinguaSpec
from .sexpr import Node, ParseError, Token, read_forms

FRAGMENT_ILT = FeatureStructure((("sentence-type", Symbol("*fragment")),))


@dataclass(frozen=True)
class SkippedSegment:
    fs: FeatureStructure
    symbols: tuple  # parser non-terminal symbols, as strings
    words: tuple


@dataclass(frozen=True)
class ParserOutput:
    utterance: tuple  # words
    partial_fs: Optional[FeatureStructure]
    partial_symbols: tuple
    skipped: tuple  # of SkippedSegment
    quality: str = "good"  # "good" | "bad"
    parsed_completely: bool = False

    def __post_init__(self):
        if self.quality not in ("good", "bad"):
            raise ValueError(f"bad parse quality {self.quality!r}")
        if self.parsed_completely and self.skipped:
            raise ValueError("a complete parse cannot have skipped segments")

    def all_symbols(self) -> tuple:
        """Symbols from the partial analysis and every skipped segment."""
        out = list(self.partial_symbols)
        for segment in self.skipped:
            out.extend(segment.symbols)
        return tuple(out)


@dataclass
class Chunk:
    id: int
    fs: FeatureStructure
    symbols: tuple
    leaf_type: Optional[str]  # None = unknown
    consumed: bool = False


class TranscriptEntry(NamedTuple):
    hypothesis: object
    question: str
    answer: str  # "yes" | "no"


@dataclass
class DynamicRepairMemory:
    parser_output: ParserOutput
    spec: InterlinguaSpec
    current_ilt: FeatureStructure
    chunks: list
    current_hypothesis: object = None
    status: Optional[str] = None  # "test" | "pass" | "fail"
    top_level_confirmed: bool = False
    need_sentence_type: bool = False
    transcript: list = field(default_factory=list)
    # combine bookkeeping: built chunk id -> member chunk ids awaiting release
    pending_members: dict = field(default_factory=dict)
    baseline_content: frozenset = frozenset()

    @property
    def questions_asked(self) -> int:
        return len(self.transcript)

    def unconsumed_chunks(self) -> list:
        return [c for c in self.chunks if not c.consumed]

    def chunk_by_id(self, chunk_id: int) -> Chunk:
        for chunk in self.chunks:
            if chunk.id == chunk_id:
                return chunk
        raise KeyError(f"no chunk {chunk_id}")

    def next_chunk_id(self) -> int:
        return 1 + max((c.id for c in self.chunks), default=0)

    def all_symbols(self) -> tuple:
        out = list(self.parser_output.partial_symbols)
        for chunk in self.chunks:
            out.extend(chunk.symbols)
        return tuple(out)

    def failed_keys(self) -> set:
        return {
            hypothesis_key(entry.hypothesis)
            for entry in self.transcript
            if entry.answer == "no"
        }

    def asked_keys(self) -> set:
        return {hypothesis_key(entry.hypothesis) for entry in self.transcript}


def hypothesis_key(h) -> tuple:
    """Stable identity used to avoid re-offering a failed hypothesis."""
    return (type(h).__name__,) + tuple(sorted(repr(v) for v in vars(h).values()))


def content_atoms(fs: FeatureStructure) -> frozenset:
    """(slot, atom) pairs carried by fs, excluding the distinguished slots.

    Path prefixes shift when material moves between the ILT and chunks,
    so conservation is stated over these location-free pairs.
    """
    return frozenset(
        (path[-1].name, atom)
        for path, atom in flatten(fs)
        if path[-1].name not in DISTINGUISHED_SLOTS
    )


def drm_content(drm: DynamicRepairMemory) -> frozenset:
    atoms = set(content_atoms(drm.current_ilt))
    for chunk in drm.chunks:
        atoms |= content_atoms(chunk.fs)
    return frozenset(atoms)


def initialize(po: ParserOutput, spec: InterlinguaSpec) -> DynamicRepairMemory:
    current_ilt = po.partial_fs if po.partial_fs is not None else FRAGMENT_ILT
    chunks = []
    if po.skipped:
        for i, segment in enumerate(po.skipped, start=1):
            chunks.append(
                Chunk(i, segment.fs, segment.symbols, spec.leaf_type_of(segment.fs))
            )
    elif po.partial_fs is None and not po.parsed_completely:
        # nil parse: every input word becomes its own untyped chunk
        for i, word in enumerate(po.utterance, start=1):
            chunks.append(Chunk(i, EMPTY_FS, (word,), None))
    drm = DynamicRepairMemory(po, spec, current_ilt, chunks)
    drm.baseline_content = drm_content(drm)
    return drm


def demote_current_ilt(drm: DynamicRepairMemory) -> DynamicRepairMemory:
    """Turn the current ILT's content into chunks ahead of a frame switch.

    A framed ILT is kept whole as one chunk.  A frameless fragment
    wrapper contributes one chunk per content slot: structure fillers
    stand alone, atomic fillers keep their slot as a one-slot wrapper.
    """
    remainder = drm.current_ilt
    for slot in ("sentence-type", "speech-act"):
        remainder = remainder.without(slot)
    new_chunks = []
    if remainder.frame is not None:
        new_chunks.append(remainder)
    else:
        for name, value in remainder.slots:
            if isinstance(value, FeatureStructure):
                new_chunks.append(value)
            else:
                new_chunks.append(FeatureStructure(((name, value),)))
    for fs in new_chunks:
        drm.chunks.append(
            Chunk(
                drm.next_chunk_id(),
                fs,
                drm.parser_output.partial_symbols,
                drm.spec.leaf_type_of(fs),
            )
        )
    return drm


# ---------------------------------------------------------------------------
# Corpus records


@dataclass(frozen=True)
class CorpusRecord:
    output: ParserOutput
    gold: Optional[FeatureStructure]


def _word(form) -> str:
    if isinstance(form, Token):
        value = form.value
        if isinstance(value, Symbol):
            return value.name
        return str(value) if isinstance(value, int) else value
    raise ParseError("expected a word atom", form.offset)


def _symbols(forms) -> tuple:
    return tuple(_word(f) for f in forms)


def parse_record(form: Node) -> CorpusRecord:
    if not (form.items and _is_head(form, "record")):
        raise ParseError("expected a (record ...) form", form.offset)
    utterance: tuple = ()
    quality = "good"
    complete = False
    partial_fs = None
    partial_symbols: tuple = ()
    skipped = []
    gold = None
    for item in form.items[1:]:
        if not isinstance(item, Node) or not item.items:
            raise ParseError("expected a (field ...) list inside record", item.offset)
        head = item.items[0]
        name = head.value.name if isinstance(head, Token) else None
        if name == "utterance":
            utterance = _symbols(item.items[1:])
        elif name == "quality":
            quality = _word(item.items[1])
        elif name == "complete":
            complete = _word(item.items[1]) == "yes"
        elif name == "partial":
            partial_fs, partial_symbols, _ = _parse_segment(item, words_ok=False)
        elif name == "skipped":
            skipped.append(SkippedSegment(*_parse_segment(item, words_ok=True)))
        elif name == "gold":
            gold = fs_from_form(item.items[1])
        else:
            raise ParseError(f"unknown record field {name!r}", item.offset)
    po = ParserOutput(
        utterance, partial_fs, partial_symbols, tuple(skipped), quality, complete
    )
    return CorpusRecord(po, gold)


def _is_head(node: Node, name: str) -> bool:
    head = node.items[0]
    return (
        isinstance(head, Token)
        and isinstance(head.value, Symbol)
        and head.value.name == name
    )


def _parse_segment(node: Node, words_ok: bool):
    fs = EMPTY_FS
    symbols: tuple = ()
    words: tuple = ()
    for sub in node.items[1:]:
        if not isinstance(sub, Node) or not sub.items:
            raise ParseError("expected (fs ...) / (symbols ...) here", sub.offset)
        head = sub.items[0]
        name = head.value.name if isinstance(head, Token) else None
        if name == "fs":
            fs = fs_from_form(sub.items[1])
        elif name == "symbols":
            symbols = _symbols(sub.items[1:])
        elif name == "words" and words_ok:
            words = _symbols(sub.items[1:])
        else:
            raise ParseError(f"unknown segment field {name!r}", sub.offset)
    return fs, symbols, words


def read_records(text: str) -> list:
    return [parse_record(form) for form in read_forms(text)]


def format_record(record: CorpusRecord) -> str:
    po = record.output
    lines = ["(record"]
    lines.append("  (utterance " + " ".join(po.utterance) + ")")
    lines.append(f"  (quality {po.quality})")
    lines.append(f"  (complete {'yes' if po.parsed_completely else 'no'})")
    if po.partial_fs is not None:
        lines.append(
            "  (partial (fs %s)\n           (symbols %s))"
            % (print_fs(po.partial_fs), " ".join(po.partial_symbols))
        )
    for segment in po.skipped:
        lines.append(
            "  (skipped (fs %s)\n           (symbols %s)\n           (words %s))"
            % (print_fs(segment.fs), " ".join(segment.symbols), " ".join(segment.words))
        )
    if record.gold is not None:
        lines.append(f"  (gold {print_fs(record.gold)})")
    return "\n".join(lines) + ")"


def format_records(records) -> str:
    return "\n\n".join(format_record(r) for r in records) + "\n"
