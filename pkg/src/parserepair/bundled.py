"""Accessors for the data files shipped inside the package."""

from __future__ import annotations

from importlib.resources import files
from pathlib import Path

from .dialogue import load_glosses
from .ilspec import InterlinguaSpec, load_spec


def bundled_path(name: str) -> Path:
    return Path(str(files("parserepair").joinpath("data", name)))


def bundled_text(name: str) -> str:
    return bundled_path(name).read_text(encoding="utf-8")


def load_demo_spec() -> InterlinguaSpec:
    return load_spec(bundled_text("demo.spec"))


def load_demo_glosses() -> dict:
    return load_glosses(bundled_text("demo.glosses"))


def load_demo_records() -> list:
    from .repairmem import read_records

    return read_records(bundled_text("demo.records"))


def load_corpus_records() -> list:
    from .repairmem import read_records

    return read_records(bundled_text("corpus.records"))
