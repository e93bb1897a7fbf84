#!/usr/bin/env python3
"""Generate the bundled synthetic corpus of fragmented parser records.

Each record starts from a sampled gold interlingua structure which is
then broken the way a robust parser breaks: some fillers stay in the
partial analysis, some end up in skipped segments, some parses come
back with the wrong top-level frame or as nothing but word chunks.
Four fragmentation shapes are mixed:

  keep    correct top-level frame, 1-3 fillers relocated to segments
  wrong   wrong top-level frame; every filler sits in a segment
  nil     no partial analysis at all; one untyped chunk per word
  shell   bare fragment wrapper; every filler sits in a segment

Fillers relocated into segments are always whole structural values, so
a repair session can in principle put every one of them back.
"""

from __future__ import annotations

import argparse
import random
from dataclasses import dataclass
from pathlib import Path

from parserepair.fstruct import read_fs
from parserepair.repairmem import (
    CorpusRecord,
    ParserOutput,
    SkippedSegment,
    format_records,
)


@dataclass(frozen=True)
class Filler:
    text: str  # feature-structure source
    words: tuple
    symbols: tuple


@dataclass(frozen=True)
class Frame:
    leaf: str
    frame: str
    word: str
    symbol: str
    slots: tuple  # structural slots this generator may fill


FRAMES = (
    Frame("<busy>", "*busy", "busy", "adj-busy", ("who", "when", "why", "how-long")),
    Frame("<free>", "*free", "free", "adj-free", ("who", "when", "why", "how-long")),
    Frame("<appointment>", "*appointment", "appointment", "n-appointment",
          ("who", "what", "when")),
    Frame("<meeting>", "*meeting", "meeting", "n-meeting",
          ("who", "topic", "when", "how-long")),
)

SENTENCE_TYPES = (
    ("*state", "so", "decl-p"),
    ("*query-if", "are", "aux-inv-p"),
    ("*query-ref", "what", "wh-p"),
    ("*suggest", "could", "modal-p"),
)

WHO = (
    Filler("((frame *i))", ("i",), ("pro-i",)),
    Filler("((frame *we))", ("we",), ("pro-we",)),
    Filler("((frame *you))", ("you",), ("pro-you",)),
)

_DAY_WORDS = {2: "second", 3: "third", 5: "fifth", 9: "ninth", 12: "twelfth", 21: "twenty-first"}

_SIMPLE_TIMES = (
    ("((frame *simple-time) (day-of-week monday))",
     ("monday",), ("time-phrase", "day-of-week-p")),
    ("((frame *simple-time) (day-of-week wednesday) (time-of-day morning))",
     ("wednesday", "morning"), ("time-phrase", "day-of-week-p", "time-of-day-p")),
    ("((frame *simple-time) (day-of-week friday) (time-of-day afternoon))",
     ("friday", "afternoon"), ("time-phrase", "day-of-week-p", "time-of-day-p")),
    ("((frame *simple-time) (month june) (day 12))",
     ("june", "the", "twelfth"), ("time-phrase", "month-p", "ordinal-p")),
    ("((frame *simple-time) (hour 10) (minute 30) (ampm am))",
     ("at", "ten", "thirty"), ("time-phrase", "clock-p")),
    ("((frame *simple-time) (day-of-week thursday) (day 21))",
     ("thursday", "the", "twenty-first"),
     ("time-phrase", "day-of-week-p", "ordinal-p")),
)

WHEN = tuple(
    [Filler(*parts) for parts in _SIMPLE_TIMES]
    + [
        Filler(
            "((frame *interval)"
            " (start ((frame *simple-time) (day-of-week monday)))"
            " (end ((frame *simple-time) (day-of-week friday))))",
            ("from", "monday", "to", "friday"),
            ("interval-p", "day-of-week-p", "day-of-week-p"),
        ),
        Filler(
            "((frame *special-time) (next week) (specifier all-range))",
            ("all", "next", "week"),
            ("special-time-p", "unit-p"),
        ),
        Filler(
            "((frame *special-time) (name month) (specifier this))",
            ("this", "month"),
            ("special-time-p", "unit-p"),
        ),
        Filler(
            "((frame *relative-time) (direction from-now)"
            " (distance ((frame *length) (quantity 2) (unit week))))",
            ("two", "weeks", "from", "now"),
            ("relative-time-p", "num-p", "unit-p"),
        ),
    ]
)

WHY = (
    Filler("((frame *meeting))", ("a", "meeting"), ("n-meeting",)),
    Filler("((frame *appointment))", ("an", "appointment"), ("n-appointment",)),
)

TOPIC = (
    Filler("((frame *that))", ("that",), ("pro-that",)),
    Filler("((frame *meeting))", ("the", "meeting"), ("n-meeting",)),
)

WHAT = (
    Filler("((frame *that))", ("that",), ("pro-that",)),
    Filler("((frame *meeting))", ("a", "meeting"), ("n-meeting",)),
)

HOW_LONG = (
    Filler("((frame *length) (quantity 2) (unit hour))",
           ("two", "hours"), ("length-p", "num-p", "unit-p")),
    Filler("((frame *length) (quantity 3) (unit day))",
           ("three", "days"), ("length-p", "num-p", "unit-p")),
    Filler("((frame *length) (quantity 30) (unit minute))",
           ("thirty", "minutes"), ("length-p", "num-p", "unit-p")),
)

SLOT_POOL = {
    "who": WHO,
    "when": WHEN,
    "why": WHY,
    "topic": TOPIC,
    "what": WHAT,
    "how-long": HOW_LONG,
}


def sample_gold(rng: random.Random):
    """Pick a frame, a sentence type, and fillers for 1-3 slots."""
    frame = rng.choice(FRAMES)
    st_name, st_word, st_symbol = rng.choice(SENTENCE_TYPES)
    filled = []
    if rng.random() < 0.85:
        filled.append(("who", rng.choice(WHO)))
    if rng.random() < 0.9:
        filled.append(("when", rng.choice(WHEN)))
    extras = [s for s in frame.slots if s not in ("who", "when")]
    if extras and rng.random() < 0.4:
        slot = rng.choice(extras)
        filled.append((slot, rng.choice(SLOT_POOL[slot])))
    if not filled:
        filled.append(("when", rng.choice(WHEN)))
    return frame, st_name, st_word, st_symbol, filled


def gold_text(frame: Frame, st_name: str, filled) -> str:
    parts = [f"(sentence-type {st_name})", f"(frame {frame.frame})"]
    parts.extend(f"({slot} {filler.text})" for slot, filler in filled)
    return "(" + " ".join(parts) + ")"


def filler_segment(filler: Filler) -> SkippedSegment:
    return SkippedSegment(read_fs(filler.text), filler.symbols, filler.words)


def word_segment(word: str, symbol: str) -> SkippedSegment:
    return SkippedSegment(read_fs(f"((value {word}))"), (symbol,), (word,))


def utterance_for(frame, st_word, filled) -> tuple:
    words = [st_word, frame.word]
    for _, filler in filled:
        words.extend(filler.words)
    return tuple(words)


def make_keep(rng, complete=False) -> CorpusRecord:
    """Correct-frame partial; some fillers relocated into segments."""
    frame, st_name, st_word, st_symbol, filled = sample_gold(rng)
    gold = read_fs(gold_text(frame, st_name, filled))
    if complete:
        po = ParserOutput(
            utterance=utterance_for(frame, st_word, filled),
            partial_fs=gold,
            partial_symbols=tuple(
                [frame.symbol, st_symbol]
                + [s for _, f in filled for s in f.symbols]
            ),
            skipped=(),
            quality="good",
            parsed_completely=True,
        )
        return CorpusRecord(po, gold)
    n_out = rng.randint(1, min(3, len(filled)))
    out = rng.sample(range(len(filled)), n_out)
    kept = [pair for i, pair in enumerate(filled) if i not in out]
    moved = [pair for i, pair in enumerate(filled) if i in out]
    partial = read_fs(gold_text(frame, st_name, kept))
    po = ParserOutput(
        utterance=utterance_for(frame, st_word, filled),
        partial_fs=partial,
        partial_symbols=tuple(
            [frame.symbol, st_symbol] + [s for _, f in kept for s in f.symbols]
        ),
        skipped=tuple(filler_segment(f) for _, f in moved),
        quality="good" if rng.random() < 0.75 else "bad",
    )
    return CorpusRecord(po, gold)


def make_wrong(rng) -> CorpusRecord:
    """Wrong top-level frame; the real content sits in segments."""
    frame, st_name, st_word, st_symbol, filled = sample_gold(rng)
    gold = read_fs(gold_text(frame, st_name, filled))
    wrong = rng.choice([f for f in FRAMES if f.leaf != frame.leaf])
    partial = read_fs(f"((sentence-type {st_name}) (frame {wrong.frame}))")
    segments = [word_segment(frame.word, frame.symbol)]
    segments.extend(filler_segment(f) for _, f in filled)
    po = ParserOutput(
        utterance=utterance_for(frame, st_word, filled),
        partial_fs=partial,
        partial_symbols=(),
        skipped=tuple(segments),
        quality="bad",
    )
    return CorpusRecord(po, gold)


def make_nil(rng) -> CorpusRecord:
    """No parse at all: the session starts from bare word chunks."""
    frame = rng.choice(FRAMES)
    st_name, st_word, st_symbol, = rng.choice(SENTENCE_TYPES)[:3]
    who = rng.choice(WHO)
    when = rng.choice(_SIMPLE_TIMES[:3])
    gold = read_fs(
        gold_text(frame, st_name, [("who", who), ("when", Filler(*when))])
    )
    words = (st_word, frame.word) + who.words + when[1]
    po = ParserOutput(
        utterance=words,
        partial_fs=None,
        partial_symbols=(),
        skipped=(),
        quality="bad",
    )
    return CorpusRecord(po, gold)


def make_shell(rng) -> CorpusRecord:
    """Bare fragment wrapper; every filler sits in a segment."""
    frame, st_name, st_word, st_symbol, filled = sample_gold(rng)
    gold = read_fs(gold_text(frame, st_name, filled))
    segments = [word_segment(frame.word, frame.symbol)]
    segments.extend(filler_segment(f) for _, f in filled)
    po = ParserOutput(
        utterance=utterance_for(frame, st_word, filled),
        partial_fs=read_fs("((sentence-type *fragment))"),
        partial_symbols=(st_symbol,),
        skipped=tuple(segments),
        quality="bad",
    )
    return CorpusRecord(po, gold)


def make_corpus(count: int, seed: int) -> list:
    rng = random.Random(seed)
    records = []
    shapes = (
        [make_keep] * 22
        + [lambda r: make_keep(r, complete=True)] * 2
        + [make_wrong] * 12
        + [make_nil] * 9
        + [make_shell] * 15
    )
    while len(records) < count:
        for shape in shapes:
            if len(records) >= count:
                break
            records.append(shape(rng))
    return records


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="src/parserepair/data/corpus.records")
    parser.add_argument("--count", type=int, default=60)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    records = make_corpus(args.count, args.seed)
    header = (
        "; Synthetic corpus: sampled gold structures fragmented four ways\n"
        f"; (generated by scripts/make_corpus.py --count {args.count} "
        f"--seed {args.seed}).\n\n"
    )
    Path(args.out).write_text(header + format_records(records), encoding="utf-8")
    print(f"wrote {len(records)} records -> {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
