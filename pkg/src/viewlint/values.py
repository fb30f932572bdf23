"""Symbols and symbolic values.

A Symbol stands for an unknown-but-fixed runtime integer, pointer or
view snapshot.  SVals are the values stored in the program state:
concrete integers, symbols, symbol+constant expressions, comparisons
awaiting a branch decision, region references, and the uninitialized /
unknown markers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union


class SymbolOrigin(Enum):
    CONJURED = "conjured"  # unknown call result / opaque arithmetic
    BUFFER_OF = "buffer"  # inner buffer of a string region
    CAST_OF = "cast"  # string-to-view conversion result
    PARAM_INIT = "param"  # pristine value of a top-level parameter


@dataclass(frozen=True)
class Symbol:
    id: int
    origin: SymbolOrigin
    # Display name: parameter name for PARAM_INIT, empty otherwise.
    name: str = ""

    def __str__(self) -> str:
        if self.origin is SymbolOrigin.PARAM_INIT and self.name:
            return f"${self.name}"
        prefix = {
            SymbolOrigin.CONJURED: "c",
            SymbolOrigin.BUFFER_OF: "buf",
            SymbolOrigin.CAST_OF: "cast",
            SymbolOrigin.PARAM_INIT: "p",
        }[self.origin]
        return f"${prefix}{self.id}"


class _Marker(Enum):
    UNKNOWN = "unknown"
    UNINIT = "uninit"

    def __str__(self) -> str:
        return self.value


UNKNOWN = _Marker.UNKNOWN
UNINIT = _Marker.UNINIT


@dataclass(frozen=True)
class Concrete:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class SymExpr:
    """symbol op constant, e.g. $b+1.  Only + and - are kept symbolic."""

    sym: Symbol
    op: str  # "+" or "-"
    const: int

    def offset(self) -> int:
        return self.const if self.op == "+" else -self.const

    def __str__(self) -> str:
        return f"{self.sym}{self.op}{self.const}"


@dataclass(frozen=True)
class SymCmp:
    """A comparison value (symbol-with-offset against a constant).

    Branch conditions hold these until assume() turns them into range
    refinements.
    """

    sym: Symbol
    offset: int  # compare (sym + offset) against const
    op: str  # "==", "!=", "<", ">"
    const: int

    def __str__(self) -> str:
        lhs = str(self.sym) if self.offset == 0 else f"{self.sym}+{self.offset}"
        return f"({lhs} {self.op} {self.const})"


@dataclass(frozen=True)
class RegionVal:
    """Reference to a memory region (strings and other lvalues)."""

    region: "Region"  # noqa: F821 - engine-side type, structural use only

    def __str__(self) -> str:
        return f"&{self.region.name}"


SVal = Union[Concrete, Symbol, SymExpr, SymCmp, RegionVal, _Marker]


def referenced_symbols(value: SVal) -> frozenset[Symbol]:
    if isinstance(value, Symbol):
        return frozenset((value,))
    if isinstance(value, (SymExpr, SymCmp)):
        return frozenset((value.sym,))
    return frozenset()
