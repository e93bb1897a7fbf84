"""Mutual-information networks: count tables scored in the log domain.

A network maps a set of active input units onto a ranked list of output
units.  Evidence is additive: score(v) = log P(v) + sum over active
inputs c of log[P(v|c)/P(v)], with add-lambda smoothed estimates.  An
input unit with no training counts contributes exactly zero, so novel
symbols fall back to the prior frequency ranking.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional


class ModelFormatError(Exception):
    pass


@dataclass(frozen=True)
class Prediction:
    output: str
    score: float
    rank: int  # 1-based


class MINetwork:
    """Mutable count store; training requires exclusive access."""

    def __init__(
        self,
        name: str,
        lam: float = 0.5,
        input_vocab: Iterable[str] = (),
        output_vocab: Iterable[str] = (),
    ):
        if lam <= 0:
            raise ValueError("lambda must be positive")
        self.name = name
        self.lam = lam
        self.inputs = set(input_vocab)
        self.outputs = set(output_vocab)
        self.joint = Counter()
        self.in_marginal = Counter()
        self.out_marginal = Counter()
        self.total = 0

    def __eq__(self, other):
        if not isinstance(other, MINetwork):
            return NotImplemented
        return (
            self.name == other.name
            and self.lam == other.lam
            and self.inputs == other.inputs
            and self.outputs == other.outputs
            and self.total == other.total
            and +self.joint == +other.joint
            and +self.in_marginal == +other.in_marginal
            and +self.out_marginal == +other.out_marginal
        )

    def mi(self, c: str, v: str) -> float:
        """log[P(v|c)/P(v)]; exactly 0 for inputs never seen in training."""
        n_in = self.in_marginal.get(c, 0)
        if n_in == 0:
            return 0.0
        size = len(self.outputs)
        p_cond = (self.joint.get((c, v), 0) + self.lam) / (n_in + self.lam * size)
        return math.log(p_cond) - math.log(self._prior(v))

    def _prior(self, v: str) -> float:
        size = len(self.outputs)
        return (self.out_marginal.get(v, 0) + self.lam) / (
            self.total + self.lam * size
        )

    def score(self, active: Iterable[str], v: str) -> float:
        total = math.log(self._prior(v))
        for c in sorted(set(active)):
            total += self.mi(c, v)
        return total

    def predict(self, active: Iterable[str], mask: Optional[Iterable[str]] = None):
        """Ranked predictions over mask (default: whole output vocabulary)."""
        if mask is None:
            candidates = sorted(self.outputs)
        else:
            candidates = sorted(v for v in set(mask) if v in self.outputs)
        if not candidates:
            return []
        active = set(active)
        scored = [(v, self.score(active, v)) for v in candidates]
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        return [Prediction(v, s, i + 1) for i, (v, s) in enumerate(scored)]

    def train(self, active: Iterable[str], correct: str) -> "MINetwork":
        self.outputs.add(correct)
        self.out_marginal[correct] += 1
        self.total += 1
        for c in set(active):
            self.inputs.add(c)
            self.in_marginal[c] += 1
            self.joint[(c, correct)] += 1
        return self

    def lines(self) -> list:
        """Serialized form; fields are tab-separated so units may hold spaces."""
        out = ["minet\t1", f"name\t{self.name}", f"lambda\t{self.lam!r}"]
        for unit in sorted(self.inputs):
            out.append(f"in\t{unit}\t{self.in_marginal.get(unit, 0)}")
        for unit in sorted(self.outputs):
            out.append(f"out\t{unit}\t{self.out_marginal.get(unit, 0)}")
        for (c, v), count in sorted(self.joint.items()):
            if count:
                out.append(f"joint\t{c}\t{v}\t{count}")
        out.append(f"total\t{self.total}")
        return out


def save(net: MINetwork) -> bytes:
    return ("\n".join(net.lines()) + "\n").encode("utf-8")


def load(data: bytes) -> MINetwork:
    nets = _parse_networks(data.decode("utf-8"))
    if len(nets) != 1:
        raise ModelFormatError(f"expected one network, found {len(nets)}")
    return nets[0]


def save_bundle(nets: dict) -> bytes:
    """Several networks in one file, concatenated in key order."""
    lines = ["minet-bundle\t1"]
    for key in nets:
        lines.extend(nets[key].lines())
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_bundle(data: bytes) -> dict:
    text = data.decode("utf-8")
    first, _, rest = text.partition("\n")
    if first.split("\t") != ["minet-bundle", "1"]:
        raise ModelFormatError(f"not a network bundle: {first!r}")
    return {net.name: net for net in _parse_networks(rest)}


def _parse_networks(text: str) -> list:
    nets = []
    current: Optional[MINetwork] = None
    closed = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        fields = line.split("\t")
        key = fields[0]
        try:
            if key == "minet":
                if fields[1] != "1":
                    raise ModelFormatError(f"unsupported version {fields[1]!r}")
                if current is not None and not closed:
                    raise ModelFormatError(f"line {lineno}: previous network unclosed")
                current = MINetwork("unnamed")
                closed = False
                nets.append(current)
            elif current is None:
                raise ModelFormatError(f"line {lineno}: data before minet header")
            elif key == "name":
                current.name = fields[1]
            elif key == "lambda":
                current.lam = float(fields[1])
            elif key == "in":
                current.inputs.add(fields[1])
                count = int(fields[2])
                if count:
                    current.in_marginal[fields[1]] = count
            elif key == "out":
                current.outputs.add(fields[1])
                count = int(fields[2])
                if count:
                    current.out_marginal[fields[1]] = count
            elif key == "joint":
                current.joint[(fields[1], fields[2])] = int(fields[3])
            elif key == "total":
                current.total = int(fields[1])
                closed = True
            else:
                raise ModelFormatError(f"line {lineno}: unknown field {key!r}")
        except (IndexError, ValueError) as err:
            raise ModelFormatError(f"line {lineno}: corrupt table ({err})")
    if current is not None and not closed:
        raise ModelFormatError("truncated network table")
    for net in nets:
        counts = [net.total, *net.joint.values()]
        counts += [*net.in_marginal.values(), *net.out_marginal.values()]
        if any(c < 0 for c in counts):
            raise ModelFormatError(f"negative count in network {net.name!r}")
    return nets
