"""Immutable program state: store, environment, constraints, checker maps.

Every simulation step produces a new state; unchanged parts are shared.
States hash and compare by value so the exploded graph can merge nodes
that re-reach an identical (program point, state) pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator, Optional

from .ast import CvlType, ParamDecl, RefKind, VarDecl
from .constraints import ConstraintMap
from .values import SVal, Symbol, referenced_symbols


def _sort_key(key: Any) -> Any:
    if isinstance(key, (Region, Symbol)):
        return (0, key.id)
    if isinstance(key, tuple):
        return (1, key)
    return (2, str(key))


class ImmutableMap:
    """Small persistent map with value equality and a cached hash."""

    __slots__ = ("_items", "_hash")

    def __init__(self, items: Optional[dict] = None):
        self._items: dict = dict(items) if items else {}
        self._hash: Optional[int] = None

    @staticmethod
    def empty() -> "ImmutableMap":
        return _EMPTY_MAP

    def get(self, key, default=None):
        return self._items.get(key, default)

    def set(self, key, value) -> "ImmutableMap":
        if self._items.get(key, _MISSING) is value:
            return self
        items = dict(self._items)
        items[key] = value
        return ImmutableMap(items)

    def remove(self, key) -> "ImmutableMap":
        if key not in self._items:
            return self
        items = dict(self._items)
        del items[key]
        return ImmutableMap(items)

    def remove_all(self, keys) -> "ImmutableMap":
        keys = [k for k in keys if k in self._items]
        if not keys:
            return self
        items = dict(self._items)
        for k in keys:
            del items[k]
        return ImmutableMap(items)

    def __contains__(self, key) -> bool:
        return key in self._items

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator:
        return iter(sorted(self._items, key=_sort_key))

    def items(self) -> list[tuple]:
        return sorted(self._items.items(), key=lambda kv: _sort_key(kv[0]))

    def values(self) -> list:
        return [v for _, v in self.items()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ImmutableMap):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._items.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v}" for k, v in self.items())
        return "{" + inner + "}"


_EMPTY_MAP = ImmutableMap()
_MISSING = object()


class RegionKind(Enum):
    LOCAL = "local"
    PARAM = "param"
    TEMP = "temp"


@dataclass(frozen=True, eq=False)
class Region:
    """Abstract memory location of a variable, parameter or temporary.

    Regions are per-frame: inlining the same function twice creates
    fresh regions per activation.  Identity is the numeric id.
    """

    id: int
    kind: RegionKind
    decl: "VarDecl | ParamDecl | None"
    frame_id: int
    name: str
    type: CvlType

    def __eq__(self, other) -> bool:
        return isinstance(other, Region) and other.id == self.id

    def __hash__(self) -> int:
        return hash(("region", self.id))

    @property
    def frame_owned(self) -> bool:
        """True when the frame's teardown destroys this region
        (locals, temporaries, by-value parameters)."""
        if self.kind in (RegionKind.LOCAL, RegionKind.TEMP):
            return True
        return self.kind is RegionKind.PARAM and self.type.ref is RefKind.NONE

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ProgramState:
    store: ImmutableMap = field(default_factory=ImmutableMap.empty)
    env: ImmutableMap = field(default_factory=ImmutableMap.empty)
    constraints: ConstraintMap = field(default_factory=ConstraintMap.empty)
    checker_data: ImmutableMap = field(default_factory=ImmutableMap.empty)

    # -- store ------------------------------------------------------------

    def bind(self, region: Region, value: SVal) -> "ProgramState":
        return ProgramState(self.store.set(region, value), self.env, self.constraints, self.checker_data)

    def unbind(self, region: Region) -> "ProgramState":
        return ProgramState(self.store.remove(region), self.env, self.constraints, self.checker_data)

    def read(self, region: Region) -> Optional[SVal]:
        return self.store.get(region)

    # -- environment --------------------------------------------------------

    def env_set(self, key: tuple[int, int], value: SVal) -> "ProgramState":
        return ProgramState(self.store, self.env.set(key, value), self.constraints, self.checker_data)

    def env_get(self, key: tuple[int, int]) -> Optional[SVal]:
        return self.env.get(key)

    def clear_env(self) -> "ProgramState":
        if len(self.env) == 0:
            return self
        return ProgramState(self.store, ImmutableMap.empty(), self.constraints, self.checker_data)

    # -- constraints ---------------------------------------------------------

    def with_constraints(self, cmap: ConstraintMap) -> "ProgramState":
        return ProgramState(self.store, self.env, cmap, self.checker_data)

    # -- checker maps ----------------------------------------------------------

    def checker_map(self, name: str) -> ImmutableMap:
        return self.checker_data.get(name) or ImmutableMap.empty()

    def with_checker_map(self, name: str, m: ImmutableMap) -> "ProgramState":
        return ProgramState(self.store, self.env, self.constraints, self.checker_data.set(name, m))

    # -- symbol liveness ----------------------------------------------------------

    def live_symbols(self, extra_roots: tuple[SVal, ...] = ()) -> frozenset[Symbol]:
        """Symbols reachable from the store, the environment, pending
        values held by the engine, and live buffer-symbol entries."""
        live: set[Symbol] = set()
        for value in self.store.values():
            live |= referenced_symbols(value)
        for value in self.env.values():
            live |= referenced_symbols(value)
        for value in extra_roots:
            live |= referenced_symbols(value)
        buffers = self.checker_data.get("BufferSymbols")
        if buffers is not None:
            for _, sym in buffers.items():
                live.add(sym)
        return frozenset(live)
