"""Checker plug-in surface.

Checkers observe the simulation through event callbacks, thread the
immutable program state, record bug-path note tags, and emit findings.
Every finding is a sink: the path that produced it is abandoned.

Registration order is fixed (modeling before checking) so that state
maps are populated before they are consulted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .ast import Call, CvlType, Expr, FunctionDecl, MethodCall, SourceLocation, Stmt
from .constraints import SymbolFactory
from .diag import Finding, NoteTag
from .state import ImmutableMap, ProgramState, Region
from .values import SVal


@dataclass(frozen=True)
class ArgInfo:
    param_type: CvlType  # declared parameter type, carries by-ref/const-ref
    expr: Expr
    value: SVal
    region: Optional[Region] = None  # for lvalue arguments


@dataclass(frozen=True)
class CallEvent:
    expr: "Call | MethodCall"
    callee: str
    decl: Optional[FunctionDecl]
    external: bool
    method: Optional[str]  # set for method calls
    receiver_type: Optional[CvlType]
    receiver_region: Optional[Region]
    receiver_value: Optional[SVal]
    args: tuple[ArgInfo, ...]
    frame_id: int
    loc: SourceLocation
    result: Optional[SVal] = None  # post-call only


@dataclass(frozen=True)
class BindEvent:
    target: Region
    value: SVal
    source: Optional[Expr]  # initializer / RHS / argument expression
    source_region: Optional[Region]  # region of the source, when an lvalue
    stmt: Optional[Stmt]
    is_init: bool
    loc: SourceLocation


@dataclass(frozen=True)
class DestroyEvent:
    region: Region
    cause: str  # "scope" | "function" | "temp"
    loc: SourceLocation


@dataclass(frozen=True)
class ReturnEvent:
    value: Optional[SVal]
    expr: Optional[Expr]
    ret_type: CvlType
    frame_id: int
    loc: SourceLocation


@dataclass(frozen=True)
class ConvertEvent:
    string_region: Region
    expr: Expr
    frame_id: int
    loc: SourceLocation


@dataclass(frozen=True)
class UseEvent:
    """A read-style use outside a call: indexing or a binary operand."""

    kind: str  # "index" | "operand"
    value: SVal
    region: Optional[Region]
    type: CvlType
    loc: SourceLocation


@dataclass
class DispatchContext:
    """Per-dispatch scratch: fresh symbols out, findings and notes in."""

    symbols: SymbolFactory
    findings: list[Finding] = field(default_factory=list)
    tags: list[NoteTag] = field(default_factory=list)

    def report(self, finding: Finding) -> None:
        self.findings.append(finding)

    def note(self, tag: NoteTag) -> None:
        self.tags.append(tag)


class Checker:
    """Base checker; override the events you care about.

    Handlers are pure: they return the successor state and push any
    findings/notes onto the dispatch context.
    """

    id: str = "checker"

    def pre_call(self, state: ProgramState, event: CallEvent, ctx: DispatchContext) -> ProgramState:
        return state

    def post_call(self, state: ProgramState, event: CallEvent, ctx: DispatchContext) -> ProgramState:
        return state

    def bind(self, state: ProgramState, event: BindEvent, ctx: DispatchContext) -> ProgramState:
        return state

    def destroy_region(self, state: ProgramState, event: DestroyEvent, ctx: DispatchContext) -> ProgramState:
        return state

    def pre_return(self, state: ProgramState, event: ReturnEvent, ctx: DispatchContext) -> ProgramState:
        return state

    def post_convert(self, state: ProgramState, event: ConvertEvent, ctx: DispatchContext) -> ProgramState:
        return state

    def use(self, state: ProgramState, event: UseEvent, ctx: DispatchContext) -> ProgramState:
        return state

    def dead_symbols(self, state: ProgramState, dead: frozenset, ctx: DispatchContext) -> ProgramState:
        return state


_EVENT_HANDLERS = {
    "pre_call": Checker.pre_call,
    "post_call": Checker.post_call,
    "bind": Checker.bind,
    "destroy_region": Checker.destroy_region,
    "pre_return": Checker.pre_return,
    "post_convert": Checker.post_convert,
    "use": Checker.use,
    "dead_symbols": Checker.dead_symbols,
}


class CheckerRegistry:
    """Ordered checker set with named per-checker state maps."""

    def __init__(self) -> None:
        self.checkers: list[Checker] = []
        self.enabled: set[str] = set()
        self.state_names: set[str] = set()

    def register(self, checker: Checker) -> None:
        if any(c.id == checker.id for c in self.checkers):
            raise ValueError(f"duplicate checker id {checker.id!r}")
        self.checkers.append(checker)
        self.enabled.add(checker.id)

    def register_state(self, name: str) -> str:
        """Reserve a named immutable map inside the program state; the
        returned handle is the key for ProgramState.checker_map()."""
        if name in self.state_names:
            raise ValueError(f"duplicate checker state {name!r}")
        self.state_names.add(name)
        return name

    def configure(self, disable: set[str] = frozenset(), enable_only: Optional[set[str]] = None) -> None:
        known = {c.id for c in self.checkers}
        for cid in disable | (enable_only or set()):
            if cid not in known:
                raise ValueError(f"unknown checker {cid!r}")
        if enable_only is not None:
            self.enabled = set(enable_only)
        self.enabled -= set(disable)

    def dispatch(
        self, event: str, state: ProgramState, payload, ctx: DispatchContext
    ) -> tuple[ProgramState, bool]:
        """Run every enabled checker's handler in registration order.

        Returns (state, sunk); a finding marks the path dead and stops
        the chain.
        """
        for checker in self.checkers:
            if checker.id not in self.enabled:
                continue
            handler = getattr(checker, event)
            state = handler(state, payload, ctx)
            if ctx.findings:
                return state, True
        return state, False


def default_registry() -> CheckerRegistry:
    """The four standard checkers in their fixed order."""
    from .lifetime import InnerPointer, StringViewChecker
    from .modeling import StringModeling, StringViewModeling

    registry = CheckerRegistry()
    registry.register(StringModeling())
    registry.register(StringViewModeling())
    registry.register(InnerPointer())
    registry.register(StringViewChecker())
    for name in ("BufferSymbols", "ViewRegions", "CastSymbols", "ReleasedViews", "ReleasedBuffers"):
        registry.register_state(name)
    return registry
