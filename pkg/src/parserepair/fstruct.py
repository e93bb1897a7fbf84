"""Typed feature structures with a canonical textual form.

A structure is an ordered map from slot names to values; values are
atoms (symbols, integers, strings), nested structures, or ordered
`(*multiple* ...)` lists.  The distinguished slot `frame` names the
concept a structure instantiates and must hold a `*`-prefixed symbol.

Everything here is immutable; update operations return new structures.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Union

from .sexpr import Node, ParseError, Symbol, Token, atom_text, read_forms

MULTIPLE_MARKER = Symbol("*multiple*")


class PathError(Exception):
    pass


class PathStep(NamedTuple):
    name: str
    index: Optional[int] = None  # set iff the step descends into a Multiple


FeaturePath = tuple  # of PathStep


def path(*parts) -> FeaturePath:
    """Build a path from names and (name, index) pairs."""
    return as_path(parts)


def as_path(parts: Iterable) -> FeaturePath:
    steps = []
    for part in parts:
        if isinstance(part, PathStep):
            steps.append(PathStep(part.name.lower(), part.index))
        elif isinstance(part, (str, Symbol)):
            steps.append(PathStep(str(part).lower()))
        elif isinstance(part, tuple) and len(part) == 2:
            steps.append(PathStep(str(part[0]).lower(), part[1]))
        else:
            raise TypeError(f"bad path element {part!r}")
    return tuple(steps)


def format_path(p: FeaturePath) -> str:
    if not p:
        return "<root>"
    out = []
    for step in p:
        piece = step.name if step.index is None else f"{step.name}[{step.index}]"
        out.append(piece)
    return ".".join(out)


@dataclass(frozen=True)
class Multiple:
    """Ordered list value; never nests directly inside another Multiple."""

    items: tuple

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("*multiple* needs at least two items")
        for item in self.items:
            if isinstance(item, Multiple):
                raise ValueError("*multiple* may not nest directly")
            _check_value(item)

    def __len__(self):
        return len(self.items)


@dataclass(frozen=True, eq=False)
class FeatureStructure:
    slots: tuple = ()  # ordered (name, value) pairs

    def __post_init__(self):
        seen = set()
        norm = []
        for name, value in self.slots:
            name = str(name).lower()
            if name in seen:
                raise ValueError(f"duplicate slot name {name!r}")
            seen.add(name)
            _check_value(value)
            if name == "frame" and not (
                isinstance(value, Symbol) and value.name.startswith("*")
            ):
                raise ValueError("frame value must be a symbol beginning with *")
            norm.append((name, value))
        object.__setattr__(self, "slots", tuple(norm))

    # Equality ignores slot order; the figures treat order as presentational.
    def __eq__(self, other):
        if not isinstance(other, FeatureStructure):
            return NotImplemented
        return dict(self.slots) == dict(other.slots)

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(frozenset(self.slots))
            self.__dict__["_hash"] = h
        return h

    def __repr__(self):
        return f"FS<{print_fs(self)}>"

    def __bool__(self):
        return bool(self.slots)

    @property
    def names(self):
        return tuple(name for name, _ in self.slots)

    @property
    def frame(self) -> Optional[Symbol]:
        value = self.get("frame")
        return value if isinstance(value, Symbol) else None

    def get(self, name: str):
        name = name.lower()
        for slot, value in self.slots:
            if slot == name:
                return value
        return None

    def set(self, name: str, value) -> "FeatureStructure":
        """Replace `name` in place, or append it as the last slot."""
        name = name.lower()
        if self.get(name) is None:
            return FeatureStructure(self.slots + ((name, value),))
        return FeatureStructure(
            tuple((n, value if n == name else v) for n, v in self.slots)
        )

    def without(self, name: str) -> "FeatureStructure":
        name = name.lower()
        return FeatureStructure(tuple(p for p in self.slots if p[0] != name))

    @functools.cached_property
    def _flat(self) -> frozenset:
        pairs = []

        def walk(fs, prefix):
            for name, value in fs.slots:
                if isinstance(value, FeatureStructure):
                    walk(value, prefix + (PathStep(name),))
                elif isinstance(value, Multiple):
                    for i, item in enumerate(value.items):
                        step = PathStep(name, i)
                        if isinstance(item, FeatureStructure):
                            walk(item, prefix + (step,))
                        else:
                            pairs.append((prefix + (step,), item))
                else:
                    pairs.append((prefix + (PathStep(name),), value))

        walk(self, ())
        return frozenset(pairs)


SlotValue = Union[Symbol, int, str, Multiple, FeatureStructure]

EMPTY_FS = FeatureStructure()


def _check_value(value):
    if not isinstance(value, (Symbol, int, str, Multiple, FeatureStructure)):
        raise TypeError(f"bad slot value {value!r}")


def read_fs(text: str) -> FeatureStructure:
    forms = read_forms(text)
    if not forms:
        raise ParseError("no feature structure found", 0)
    if len(forms) > 1:
        raise ParseError("trailing content after feature structure", forms[1].offset)
    return fs_from_form(forms[0])


def fs_from_form(form) -> FeatureStructure:
    if not isinstance(form, Node):
        raise ParseError("expected a feature structure list", form.offset)
    pairs = []
    seen = set()
    for item in form.items:
        if not isinstance(item, Node):
            raise ParseError("expected a (slot value) list", item.offset)
        if not item.items:
            raise ParseError("empty slot entry", item.end)
        head = item.items[0]
        if not (isinstance(head, Token) and isinstance(head.value, Symbol)):
            raise ParseError("slot name must be a symbol", head.offset)
        name = head.value.name
        if name in seen:
            raise ParseError(f"duplicate slot name {name!r}", head.offset)
        seen.add(name)
        if len(item.items) == 1:
            raise ParseError(f"empty value for slot {name!r}", item.end)
        if len(item.items) > 2:
            raise ParseError(
                f"slot {name!r} has more than one value", item.items[2].offset
            )
        value = value_from_form(item.items[1])
        if name == "frame" and not (
            isinstance(value, Symbol) and value.name.startswith("*")
        ):
            raise ParseError("frame value must be a *-symbol", item.items[1].offset)
        pairs.append((name, value))
    return FeatureStructure(tuple(pairs))


def value_from_form(form) -> SlotValue:
    if isinstance(form, Token):
        return form.value
    if (
        form.items
        and isinstance(form.items[0], Token)
        and form.items[0].value == MULTIPLE_MARKER
    ):
        items = []
        for sub in form.items[1:]:
            value = value_from_form(sub)
            if isinstance(value, Multiple):  # splice instead of nesting
                items.extend(value.items)
            else:
                items.append(value)
        if not items:
            raise ParseError("empty *multiple* list", form.offset)
        if len(items) == 1:
            return items[0]
        return Multiple(tuple(items))
    return fs_from_form(form)


def print_value(value: SlotValue) -> str:
    if isinstance(value, FeatureStructure):
        return print_fs(value)
    if isinstance(value, Multiple):
        return "(*multiple* " + " ".join(print_value(v) for v in value.items) + ")"
    return atom_text(value)


def print_fs(fs: FeatureStructure) -> str:
    """Canonical single-line form; read_fs inverts it exactly."""
    return "(" + " ".join(f"({n} {print_value(v)})" for n, v in fs.slots) + ")"


def pretty_fs(fs: FeatureStructure, indent: int = 0) -> str:
    """Multi-line rendering for transcripts; not the canonical form."""
    return " " * indent + _pretty_value(fs, indent)


def _pretty_value(value, col) -> str:
    flat = print_value(value)
    if not isinstance(value, FeatureStructure) or col + len(flat) <= 76:
        return flat
    lines = []
    for name, v in value.slots:
        inner = _pretty_value(v, col + len(name) + 3)
        lines.append(f"({name} {inner})")
    sep = "\n" + " " * (col + 1)
    return "(" + sep.join(lines) + ")"


def get_path(fs: FeatureStructure, p) -> Optional[SlotValue]:
    current: SlotValue = fs
    for step in as_path(p):
        if not isinstance(current, FeatureStructure):
            return None
        value = current.get(step.name)
        if value is None:
            return None
        if step.index is not None:
            if not isinstance(value, Multiple) or not (
                0 <= step.index < len(value.items)
            ):
                return None
            current = value.items[step.index]
        else:
            current = value
    return current


def set_path(fs: FeatureStructure, p, value: SlotValue) -> FeatureStructure:
    """Replacement semantics; a missing terminal slot is appended."""
    steps = as_path(p)
    if not steps:
        raise PathError("cannot set the empty path")
    return _set_steps(fs, steps, 0, value, steps)


def _set_steps(current, steps, i, value, full):
    if not isinstance(current, FeatureStructure):
        raise PathError(
            f"path {format_path(full)} passes through a non-structure value"
        )
    step = steps[i]
    last = i == len(steps) - 1
    existing = current.get(step.name)
    if step.index is not None:
        if not isinstance(existing, Multiple) or not (
            0 <= step.index < len(existing.items)
        ):
            raise PathError(f"no multiple element at {format_path(full)}")
        items = list(existing.items)
        if last:
            items[step.index] = value
        else:
            items[step.index] = _set_steps(items[step.index], steps, i + 1, value, full)
        return current.set(step.name, Multiple(tuple(items)))
    if last:
        return current.set(step.name, value)
    if existing is None:
        raise PathError(f"missing structure along {format_path(full)}")
    return current.set(step.name, _set_steps(existing, steps, i + 1, value, full))


def flatten(fs: FeatureStructure) -> frozenset:
    """Set of (path, atom) pairs, one per atomic leaf."""
    return fs._flat


def constituents(fs: FeatureStructure) -> list:
    return [f for _, f in constituents_with_paths(fs)]


def constituents_with_paths(fs: FeatureStructure) -> list:
    """Pre-order (path, structure) pairs: fs itself, then nested structures."""
    out = []

    def walk(f, prefix):
        out.append((prefix, f))
        for name, value in f.slots:
            if isinstance(value, FeatureStructure):
                walk(value, prefix + (PathStep(name),))
            elif isinstance(value, Multiple):
                for i, item in enumerate(value.items):
                    if isinstance(item, FeatureStructure):
                        walk(item, prefix + (PathStep(name, i),))

    walk(fs, ())
    return out
