"""String and view modeling.

StringModeling gives each string one stable inner-buffer symbol per
"buffer generation": repeated c_str/data calls on an unmodified string
return the same symbol, and the entry is dropped when the buffer is
invalidated so the next call mints a fresh one.

StringViewModeling maintains the view bookkeeping: the ViewRegions map
(string region -> set of view regions), the short-lived CastSymbols map
that bridges the gap between a string-to-view conversion and the bind
of its result, and the propagation of associations through copies,
substr and swap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ast import SourceLocation, StrLit, TypeKind, VarRef
from .checkers import BindEvent, CallEvent, Checker, ConvertEvent, DispatchContext
from .diag import NoteTag
from .state import ImmutableMap, ProgramState, Region
from .values import RegionVal, SVal, Symbol, SymbolOrigin

OBTAINED_NOTE = "Pointer to inner buffer of 'std::string' obtained here"


@dataclass(frozen=True)
class ReleaseInfo:
    """Why and where a view or buffer pointer became dangling."""

    kind: str  # "mutated" | "passed" | "scope" | "function" | "temp"
    detail: str  # method or callee name for mutated/passed
    loc: SourceLocation

    def message(self) -> str:
        if self.kind in ("mutated", "passed"):
            return f"Inner buffer of 'std::string' deallocated by call to '{self.detail}'"
        if self.kind == "scope":
            return "Inner buffer of 'std::string' deallocated at end of scope"
        if self.kind == "temp":
            return "Inner buffer of 'std::string' deallocated at end of full expression"
        return "Inner buffer of 'std::string' deallocated at end of function"


# --------------------------------------------------------------------------
# Map helpers (shared with the lifetime checkers)


def views_of(state: ProgramState, string_region: Region) -> frozenset[Region]:
    return state.checker_map("ViewRegions").get(string_region) or frozenset()


def string_of(state: ProgramState, view_region: Region) -> Optional[Region]:
    for string_region, views in state.checker_map("ViewRegions").items():
        if view_region in views:
            return string_region
    return None


def associate(state: ProgramState, string_region: Region, view_region: Region) -> ProgramState:
    """Record (string, view); a view belongs to at most one string."""
    state = disassociate(state, view_region)
    views = state.checker_map("ViewRegions")
    current = views.get(string_region) or frozenset()
    state = state.with_checker_map("ViewRegions", views.set(string_region, current | {view_region}))
    released = state.checker_map("ReleasedViews")
    if view_region in released:
        state = state.with_checker_map("ReleasedViews", released.remove(view_region))
    return state


def disassociate(state: ProgramState, view_region: Region) -> ProgramState:
    views = state.checker_map("ViewRegions")
    for string_region, members in views.items():
        if view_region in members:
            remaining = members - {view_region}
            if remaining:
                views = views.set(string_region, remaining)
            else:
                views = views.remove(string_region)
            return state.with_checker_map("ViewRegions", views)
    return state


def released_info(state: ProgramState, view_region: Region) -> Optional[ReleaseInfo]:
    return state.checker_map("ReleasedViews").get(view_region)


def mark_released(state: ProgramState, view_region: Region, info: ReleaseInfo) -> ProgramState:
    state = disassociate(state, view_region)
    released = state.checker_map("ReleasedViews")
    return state.with_checker_map("ReleasedViews", released.set(view_region, info))


def clear_view(state: ProgramState, view_region: Region) -> ProgramState:
    """Forget everything about a view (overwrite or region death)."""
    state = disassociate(state, view_region)
    released = state.checker_map("ReleasedViews")
    if view_region in released:
        state = state.with_checker_map("ReleasedViews", released.remove(view_region))
    return state


def cast_target(state: ProgramState, value: SVal) -> Optional[Region]:
    """String region behind a conversion-result symbol, if still known."""
    if isinstance(value, Symbol) and value.origin is SymbolOrigin.CAST_OF:
        return state.checker_map("CastSymbols").get(value)
    return None


def resolve_view_value(state: ProgramState, value: SVal, region: Optional[Region]) -> Optional[Region]:
    """Associated string of a view given its region and/or snapshot value."""
    if region is not None:
        found = string_of(state, region)
        if found is not None:
            return found
    return cast_target(state, value)


def buffer_symbol_for(
    state: ProgramState, string_region: Region, ctx: DispatchContext
) -> tuple[ProgramState, Symbol]:
    """The string's current buffer symbol, minting one if needed."""
    buffers = state.checker_map("BufferSymbols")
    existing = buffers.get(string_region)
    if existing is not None:
        return state, existing
    sym = ctx.symbols.fresh(SymbolOrigin.BUFFER_OF)
    state = state.with_checker_map("BufferSymbols", buffers.set(string_region, sym))
    return state, sym


# --------------------------------------------------------------------------
# Checkers


class StringModeling(Checker):
    """Unique buffer symbols for c_str/data calls on strings."""

    id = "cplusplus.StringModeling"

    def post_call(self, state: ProgramState, event: CallEvent, ctx: DispatchContext) -> ProgramState:
        if event.method not in ("c_str", "data"):
            return state
        if event.receiver_type is None or event.receiver_type.kind is not TypeKind.STRING:
            return state
        if event.receiver_region is None:
            return state
        state, sym = buffer_symbol_for(state, event.receiver_region, ctx)
        ctx.note(NoteTag("assoc", OBTAINED_NOTE, event.loc, symbols=frozenset((sym,))))
        frame_id = event.frame_id
        return state.env_set((event.expr.nid, frame_id), sym)


class StringViewModeling(Checker):
    """ViewRegions/CastSymbols bookkeeping for view creation and change."""

    id = "cplusplus.StringViewModeling"

    def post_convert(self, state: ProgramState, event: ConvertEvent, ctx: DispatchContext) -> ProgramState:
        sym = ctx.symbols.fresh(SymbolOrigin.CAST_OF)
        casts = state.checker_map("CastSymbols")
        state = state.with_checker_map("CastSymbols", casts.set(sym, event.string_region))
        return state.env_set((event.expr.nid, event.frame_id), sym)

    def bind(self, state: ProgramState, event: BindEvent, ctx: DispatchContext) -> ProgramState:
        target = event.target
        if target.type.kind is not TypeKind.STRING_VIEW:
            return state

        # Overwriting re-arms the view: old association and released
        # status are gone no matter what is assigned.
        state = clear_view(state, target)

        string_region = cast_target(state, event.value)
        if string_region is not None:
            state = associate(state, string_region, target)
            ctx.note(NoteTag("assoc", OBTAINED_NOTE, event.loc, regions=frozenset((target,))))
            return state

        source = event.source
        if isinstance(source, VarRef) and source.type.kind is TypeKind.STRING_VIEW:
            src_region = event.source_region
            if src_region is not None:
                src_string = string_of(state, src_region)
                if src_string is not None:
                    state = associate(state, src_string, target)
                    ctx.note(NoteTag("assoc", OBTAINED_NOTE, event.loc, regions=frozenset((target,))))
                    return state
                info = released_info(state, src_region)
                if info is not None:
                    # Copying a dangling view yields a dangling view.
                    state = mark_released(state, target, info)
                    ctx.note(NoteTag("assoc", OBTAINED_NOTE, event.loc, regions=frozenset((target,))))
                    return state
        return state

    def post_call(self, state: ProgramState, event: CallEvent, ctx: DispatchContext) -> ProgramState:
        if event.receiver_type is None or event.receiver_type.kind is not TypeKind.STRING_VIEW:
            return state
        if event.method == "substr":
            return self._model_substr(state, event, ctx)
        if event.method == "swap":
            return self._model_swap(state, event)
        return state

    def _model_substr(self, state: ProgramState, event: CallEvent, ctx: DispatchContext) -> ProgramState:
        string_region = resolve_view_value(state, event.receiver_value, event.receiver_region)
        if string_region is None:
            return state
        sym = ctx.symbols.fresh(SymbolOrigin.CAST_OF)
        casts = state.checker_map("CastSymbols")
        state = state.with_checker_map("CastSymbols", casts.set(sym, string_region))
        return state.env_set((event.expr.nid, event.frame_id), sym)

    def _model_swap(self, state: ProgramState, event: CallEvent) -> ProgramState:
        a = event.receiver_region
        b = event.args[0].region if event.args else None
        if a is None or b is None or a == b:
            return state
        a_string = string_of(state, a)
        b_string = string_of(state, b)
        a_released = released_info(state, a)
        b_released = released_info(state, b)
        state = clear_view(state, a)
        state = clear_view(state, b)
        if b_string is not None:
            state = associate(state, b_string, a)
        elif b_released is not None:
            state = mark_released(state, a, b_released)
        if a_string is not None:
            state = associate(state, a_string, b)
        elif a_released is not None:
            state = mark_released(state, b, a_released)
        return state

    def dead_symbols(self, state: ProgramState, dead: frozenset, ctx: DispatchContext) -> ProgramState:
        casts = state.checker_map("CastSymbols")
        stale = [sym for sym, _ in casts.items() if sym in dead]
        if stale:
            state = state.with_checker_map("CastSymbols", casts.remove_all(stale))
        return state
