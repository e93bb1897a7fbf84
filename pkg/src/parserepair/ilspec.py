"""Interlingua specification: a subsumption hierarchy over types.

Rules come in two shapes: unions `(<NAME> = <A> <B> ...)` declaring that
a type subsumes more specific ones, and leaves
`(<NAME> = ((frame *f) (slot <TYPE>) ...))` giving the feature-structure
specification owned by one frame symbol.  Structural type names are
written `<NAME>`, atomic-value classes `[NAME]`.  Directives:
`(root <NAME>)`, `(sentence-types *state ...)`, `(atomic [NAME] a b c)`
(no members = any atom).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .fstruct import (
    FeatureStructure,
    Multiple,
    PathStep,
    Symbol,
    fs_from_form,
)
from .sexpr import Node, ParseError, Token, read_forms
from typing import NamedTuple

DISTINGUISHED_SLOTS = ("frame", "sentence-type", "speech-act")


class SpecError(Exception):
    pass


@dataclass(frozen=True)
class UnionRule:
    name: str
    members: tuple  # of type names


@dataclass(frozen=True)
class LeafRule:
    name: str
    frame: Symbol
    slot_specs: tuple  # ordered (slot-name, type-name) pairs

    def slot_type(self, slot: str) -> Optional[str]:
        for name, type_name in self.slot_specs:
            if name == slot:
                return type_name
        return None


@dataclass(frozen=True)
class AtomicClass:
    name: str
    allowed: Optional[frozenset]  # None = any atom

    def accepts(self, atom) -> bool:
        if isinstance(atom, (FeatureStructure, Multiple)):
            return False
        if self.allowed is None:
            return True
        return atom in self.allowed


class OpenSlot(NamedTuple):
    path: tuple  # FeaturePath of the structure node
    frame: Symbol
    slot: str
    allowed: str  # declared type name


def is_structural(name: str) -> bool:
    return name.startswith("<")


def is_atomic_class(name: str) -> bool:
    return name.startswith("[")


@dataclass(frozen=True, eq=False)
class InterlinguaSpec:
    rules: dict  # name -> UnionRule | LeafRule
    atomic_classes: dict  # name -> AtomicClass
    sentence_types: tuple  # of Symbol
    root_type: str
    # Derived, precomputed at load time:
    frame_leaf: dict = field(default_factory=dict)  # Symbol -> LeafRule
    descendants: dict = field(default_factory=dict)  # name -> frozenset of names
    leaf_order: tuple = ()  # leaf names in declaration order

    def leaf_names(self) -> tuple:
        return self.leaf_order

    def require(self, name: str):
        if name not in self.rules and name not in self.atomic_classes:
            raise SpecError(f"undefined type name {name}")

    def subsumes(self, general: str, specific: str) -> bool:
        general, specific = general.lower(), specific.lower()
        self.require(general)
        self.require(specific)
        return specific in self.descendants[general]

    def leaves_under(self, name: str) -> tuple:
        """Leaf type names reachable from `name`, in declaration order."""
        name = name.lower()
        self.require(name)
        reach = self.descendants[name]
        return tuple(leaf for leaf in self.leaf_order if leaf in reach)

    def leaf_type_of(self, fs: FeatureStructure) -> Optional[str]:
        """The unique leaf owning fs's frame symbol; None when unknown."""
        frame = fs.frame
        if frame is None:
            return None
        leaf = self.frame_leaf.get(frame)
        return leaf.name if leaf else None

    def conforms(self, fs: FeatureStructure, type_name: str) -> bool:
        type_name = type_name.lower()
        self.require(type_name)
        if not is_structural(type_name):
            return False
        for leaf in self.leaves_under(type_name):
            if self._conforms_leaf(fs, self.rules[leaf]):
                return True
        return False

    def _conforms_leaf(self, fs: FeatureStructure, leaf: LeafRule) -> bool:
        if fs.frame != leaf.frame:
            return False
        for name, value in fs.slots:
            if name == "frame" or name == "speech-act":
                continue
            if name == "sentence-type":
                if value not in self.sentence_types:
                    return False
                continue
            declared = leaf.slot_type(name)
            if declared is None or not self._conforms_value(value, declared):
                return False
        return True

    def value_conforms(self, value, type_name: str) -> bool:
        """Does a slot value (atom, structure, or multiple) fit a type?"""
        type_name = type_name.lower()
        self.require(type_name)
        return self._conforms_value(value, type_name)

    def _conforms_value(self, value, type_name: str) -> bool:
        if isinstance(value, Multiple):
            return all(self._conforms_value(v, type_name) for v in value.items)
        if isinstance(value, FeatureStructure):
            if not is_structural(type_name):
                return False
            return self.conforms(value, type_name)
        # atom: accepted when some atomic class under type_name allows it
        if is_atomic_class(type_name):
            return self.atomic_classes[type_name].accepts(value)
        return any(
            self.atomic_classes[name].accepts(value)
            for name in self.descendants[type_name]
            if is_atomic_class(name)
        )

    def open_slots(self, fs: FeatureStructure) -> list:
        """Unfilled declared slots of every typed node, in pre-order."""
        from .fstruct import constituents_with_paths

        out = []
        for path, node in constituents_with_paths(fs):
            leaf_name = self.leaf_type_of(node)
            if leaf_name is None:
                continue
            leaf = self.rules[leaf_name]
            for slot, allowed in leaf.slot_specs:
                if node.get(slot) is None:
                    out.append(OpenSlot(path, leaf.frame, slot, allowed))
        return out

    def template_for(self, type_name: str) -> FeatureStructure:
        leaves = self.leaves_under(type_name)
        if not leaves:
            raise SpecError(f"no leaf under {type_name}")
        if len(leaves) > 1:
            raise SpecError(
                f"ambiguous template: {type_name} covers {len(leaves)} leaves"
            )
        leaf = self.rules[leaves[0]]
        return FeatureStructure((("frame", leaf.frame),))


def load_spec(text: str) -> InterlinguaSpec:
    rules: dict = {}
    atomic_classes: dict = {}
    sentence_types: tuple = ()
    root_type: Optional[str] = None

    for form in read_forms(text):
        if not isinstance(form, Node) or not form.items:
            raise SpecError("every spec form must be a non-empty list")
        head = form.items[0]
        if len(form.items) >= 2 and _symbol_is(form.items[1], "="):
            name = _type_name(head)
            if name in rules or name in atomic_classes:
                raise SpecError(f"duplicate rule for {name}")
            rules[name] = _parse_rule(name, form)
        elif _symbol_is(head, "root"):
            if len(form.items) != 2:
                raise SpecError("(root <NAME>) takes one name")
            root_type = _type_name(form.items[1])
        elif _symbol_is(head, "sentence-types"):
            sentence_types = tuple(_atom(i) for i in form.items[1:])
        elif _symbol_is(head, "atomic"):
            if len(form.items) < 2:
                raise SpecError("(atomic [NAME] ...) needs a name")
            name = _type_name(form.items[1])
            if not is_atomic_class(name):
                raise SpecError(f"atomic class name must be [NAME]: {name}")
            if name in atomic_classes or name in rules:
                raise SpecError(f"duplicate rule for {name}")
            members = tuple(_atom(i) for i in form.items[2:])
            atomic_classes[name] = AtomicClass(
                name, frozenset(members) if members else None
            )
        else:
            raise SpecError(f"unrecognized spec form at offset {form.offset}")

    if root_type is None:
        raise SpecError("missing (root <NAME>) directive")

    spec = InterlinguaSpec(rules, atomic_classes, sentence_types, root_type)
    _validate(spec)
    return spec


def _symbol_is(form, name: str) -> bool:
    return (
        isinstance(form, Token)
        and isinstance(form.value, Symbol)
        and form.value.name == name
    )


def _atom(form):
    if isinstance(form, Token):
        return form.value
    raise SpecError(f"expected an atom at offset {form.offset}")


def _type_name(form) -> str:
    value = _atom(form)
    if isinstance(value, Symbol) and (
        is_structural(value.name) or is_atomic_class(value.name)
    ):
        return value.name
    raise SpecError(f"expected a <NAME> or [NAME] type, got {value}")


def _parse_rule(name: str, form: Node):
    if not is_structural(name):
        raise SpecError(f"rule name must be <NAME>: {name}")
    body = form.items[2:]
    if not body:
        raise SpecError(f"rule {name} has no right-hand side")
    if len(body) == 1 and isinstance(body[0], Node):
        inner = body[0]
        if inner.items and isinstance(inner.items[0], Node):
            return _parse_leaf(name, inner)
    return UnionRule(name, tuple(_type_name(i) for i in body))


def _parse_leaf(name: str, body: Node) -> LeafRule:
    try:
        template = fs_from_form(body)
    except ParseError as err:
        raise SpecError(f"bad feature-structure specification in {name}: {err}")
    frame = template.frame
    if frame is None:
        raise SpecError(f"leaf rule {name} lacks a frame slot")
    slot_specs = []
    for slot, value in template.slots:
        if slot == "frame":
            continue
        if not isinstance(value, Symbol) or not (
            is_structural(value.name) or is_atomic_class(value.name)
        ):
            raise SpecError(f"slot {slot} of {name} must name a type")
        slot_specs.append((slot, value.name))
    return LeafRule(name, frame, tuple(slot_specs))


def _validate(spec: InterlinguaSpec):
    rules, atomics = spec.rules, spec.atomic_classes

    def defined(name):
        return name in rules or name in atomics

    if not defined(spec.root_type):
        raise SpecError(f"root type {spec.root_type} is undefined")

    owners: dict = {}
    for rule in rules.values():
        if isinstance(rule, UnionRule):
            for member in rule.members:
                if not defined(member):
                    raise SpecError(f"rule {rule.name} references undefined {member}")
        else:
            if rule.frame in owners:
                raise SpecError(
                    f"frame {rule.frame} owned by both {owners[rule.frame].name}"
                    f" and {rule.name}"
                )
            owners[rule.frame] = rule
            for slot, type_name in rule.slot_specs:
                if not defined(type_name):
                    raise SpecError(
                        f"slot {slot} of {rule.name} references undefined {type_name}"
                    )

    # Cycle check + descendants closure over union membership.
    descendants: dict = {}
    state: dict = {}  # name -> "visiting" | "done"

    def close(name: str) -> frozenset:
        if name in descendants:
            return descendants[name]
        if state.get(name) == "visiting":
            raise SpecError(f"cyclic union involving {name}")
        state[name] = "visiting"
        reach = {name}
        rule = rules.get(name)
        if isinstance(rule, UnionRule):
            for member in rule.members:
                reach.update(close(member))
        state[name] = "done"
        descendants[name] = frozenset(reach)
        return descendants[name]

    for name in list(rules) + list(atomics):
        close(name)

    leaf_order = tuple(
        name for name, rule in rules.items() if isinstance(rule, LeafRule)
    )
    object.__setattr__(spec, "frame_leaf", owners)
    object.__setattr__(spec, "descendants", descendants)
    object.__setattr__(spec, "leaf_order", leaf_order)
