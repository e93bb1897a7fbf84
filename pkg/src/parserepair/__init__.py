"""Interactive repair of fragmented semantic parser output."""

from .fstruct import (
    EMPTY_FS,
    FeatureStructure,
    Multiple,
    PathError,
    PathStep,
    Symbol,
    constituents,
    flatten,
    get_path,
    path,
    print_fs,
    read_fs,
    set_path,
)
from .sexpr import ParseError

__all__ = [
    "EMPTY_FS",
    "FeatureStructure",
    "Multiple",
    "ParseError",
    "PathError",
    "PathStep",
    "Symbol",
    "constituents",
    "flatten",
    "get_path",
    "path",
    "print_fs",
    "read_fs",
    "set_path",
]
