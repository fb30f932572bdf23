"""AST for CVL, the analyzed language.

CVL is a small C++17-like subset: free functions over six types
(void, bool, int, std::string, std::string_view, const char *),
blocks, if/while/return, assignments, calls, method calls and
indexing.  Nodes carry begin/end source locations; expression nodes
additionally get a numeric id during parsing so later passes can key
per-expression data without relying on object identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


@dataclass(frozen=True, order=True)
class SourceLocation:
    """1-based position in a source file."""

    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class TypeKind(Enum):
    VOID = "void"
    BOOL = "bool"
    INT = "int"
    STRING = "std::string"
    STRING_VIEW = "std::string_view"
    CHAR_PTR = "const char *"


class RefKind(Enum):
    NONE = "none"
    CONST_REF = "const_ref"
    MUT_REF = "mut_ref"


@dataclass(frozen=True)
class CvlType:
    kind: TypeKind
    ref: RefKind = RefKind.NONE

    def with_ref(self, ref: RefKind) -> CvlType:
        return CvlType(self.kind, ref)

    @property
    def is_tracked(self) -> bool:
        """Types whose destruction matters to the lifetime checkers."""
        return self.kind in (TypeKind.STRING, TypeKind.STRING_VIEW, TypeKind.CHAR_PTR)

    def __str__(self) -> str:
        s = self.kind.value
        if self.ref is RefKind.MUT_REF:
            s += " &"
        elif self.ref is RefKind.CONST_REF:
            s = "const " + s + " &"
        return s


VOID = CvlType(TypeKind.VOID)
BOOL = CvlType(TypeKind.BOOL)
INT = CvlType(TypeKind.INT)
STRING = CvlType(TypeKind.STRING)
STRING_VIEW = CvlType(TypeKind.STRING_VIEW)
CHAR_PTR = CvlType(TypeKind.CHAR_PTR)


class Node:
    """Base class; every node carries a begin and end location."""

    begin: SourceLocation
    end: SourceLocation


# --------------------------------------------------------------------------
# Expressions


@dataclass(eq=False)
class Expr(Node):
    begin: SourceLocation
    end: SourceLocation
    nid: int = field(default=-1, compare=False)
    # Static type, filled by the resolver.
    type: CvlType = field(default=VOID, compare=False)
    # Synthetic temporary owning this expression's result, when the result
    # is a string rvalue (filled by the resolver).
    temp_decl: Optional["VarDecl"] = field(default=None, compare=False)


@dataclass(eq=False)
class IntLit(Expr):
    value: int = 0


@dataclass(eq=False)
class BoolLit(Expr):
    value: bool = False


@dataclass(eq=False)
class StrLit(Expr):
    value: str = ""


@dataclass(eq=False)
class VarRef(Expr):
    name: str = ""
    decl: Optional["VarDecl | ParamDecl"] = field(default=None, compare=False)


@dataclass(eq=False)
class Call(Expr):
    name: str = ""
    args: list[Expr] = field(default_factory=list)
    decl: Optional["FunctionDecl"] = field(default=None, compare=False)


@dataclass(eq=False)
class MethodCall(Expr):
    receiver: Expr = None  # type: ignore[assignment]
    method: str = ""
    args: list[Expr] = field(default_factory=list)


@dataclass(eq=False)
class Convert(Expr):
    """Implicit std::string -> std::string_view conversion.

    Inserted by the resolver wherever a string value flows into a view
    context; has no surface syntax of its own.
    """

    operand: Expr = None  # type: ignore[assignment]


@dataclass(eq=False)
class BinaryOp(Expr):
    op: str = ""
    lhs: Expr = None  # type: ignore[assignment]
    rhs: Expr = None  # type: ignore[assignment]


@dataclass(eq=False)
class Index(Expr):
    base: Expr = None  # type: ignore[assignment]
    index: Expr = None  # type: ignore[assignment]


# --------------------------------------------------------------------------
# Statements and declarations


@dataclass(eq=False)
class Stmt(Node):
    begin: SourceLocation
    end: SourceLocation
    # String rvalue temporaries created during this full expression,
    # destroyed (in reverse order) when the statement completes.
    temps: list["VarDecl"] = field(default_factory=list)


@dataclass(eq=False)
class VarDecl(Stmt):
    type: CvlType = VOID
    name: str = ""
    init: Optional[Expr] = None
    paren_init: bool = False
    temporary: bool = False  # synthetic, owns a string rvalue


@dataclass(eq=False)
class Assign(Stmt):
    target: VarRef = None  # type: ignore[assignment]
    value: Expr = None  # type: ignore[assignment]


@dataclass(eq=False)
class ExprStmt(Stmt):
    expr: Expr = None  # type: ignore[assignment]


@dataclass(eq=False)
class Block(Stmt):
    stmts: list[Stmt] = field(default_factory=list)


@dataclass(eq=False)
class If(Stmt):
    cond: Expr = None  # type: ignore[assignment]
    then: Stmt = None  # type: ignore[assignment]
    els: Optional[Stmt] = None


@dataclass(eq=False)
class While(Stmt):
    cond: Expr = None  # type: ignore[assignment]
    body: Stmt = None  # type: ignore[assignment]


@dataclass(eq=False)
class Return(Stmt):
    value: Optional[Expr] = None


@dataclass(eq=False)
class ParamDecl(Node):
    begin: SourceLocation
    end: SourceLocation
    type: CvlType = VOID
    name: str = ""


@dataclass(eq=False)
class FunctionDecl(Node):
    begin: SourceLocation
    end: SourceLocation
    ret_type: CvlType = VOID
    name: str = ""
    params: list[ParamDecl] = field(default_factory=list)
    body: Optional[Block] = None

    @property
    def is_external(self) -> bool:
        return self.body is None


@dataclass(eq=False)
class Program(Node):
    begin: SourceLocation
    end: SourceLocation
    functions: list[FunctionDecl] = field(default_factory=list)


# --------------------------------------------------------------------------
# Pretty printer and structural comparison


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def format_expr(e: Expr) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, StrLit):
        return f'"{_escape(e.value)}"'
    if isinstance(e, VarRef):
        return e.name
    if isinstance(e, Call):
        return f"{e.name}({', '.join(format_expr(a) for a in e.args)})"
    if isinstance(e, MethodCall):
        args = ", ".join(format_expr(a) for a in e.args)
        return f"{format_expr(e.receiver)}.{e.method}({args})"
    if isinstance(e, Convert):
        return format_expr(e.operand)
    if isinstance(e, BinaryOp):
        return f"{format_expr(e.lhs)} {e.op} {format_expr(e.rhs)}"
    if isinstance(e, Index):
        return f"{format_expr(e.base)}[{format_expr(e.index)}]"
    raise TypeError(f"unknown expression {e!r}")


class _Printer:
    def __init__(self) -> None:
        self.lines: list[str] = []
        self.depth = 0

    def emit(self, text: str) -> None:
        self.lines.append("  " * self.depth + text)

    def stmt(self, s: Stmt) -> None:
        if isinstance(s, VarDecl):
            if s.init is None:
                self.emit(f"{s.type} {s.name};")
            elif s.paren_init:
                self.emit(f"{s.type} {s.name}({format_expr(s.init)});")
            else:
                self.emit(f"{s.type} {s.name} = {format_expr(s.init)};")
        elif isinstance(s, Assign):
            self.emit(f"{s.target.name} = {format_expr(s.value)};")
        elif isinstance(s, ExprStmt):
            self.emit(f"{format_expr(s.expr)};")
        elif isinstance(s, Block):
            self.emit("{")
            self.depth += 1
            for inner in s.stmts:
                self.stmt(inner)
            self.depth -= 1
            self.emit("}")
        elif isinstance(s, If):
            self.emit(f"if ({format_expr(s.cond)})")
            self.nested(s.then)
            if s.els is not None:
                self.emit("else")
                self.nested(s.els)
        elif isinstance(s, While):
            self.emit(f"while ({format_expr(s.cond)})")
            self.nested(s.body)
        elif isinstance(s, Return):
            if s.value is None:
                self.emit("return;")
            else:
                self.emit(f"return {format_expr(s.value)};")
        else:
            raise TypeError(f"unknown statement {s!r}")

    def nested(self, s: Stmt) -> None:
        if isinstance(s, Block):
            self.stmt(s)
        else:
            self.depth += 1
            self.stmt(s)
            self.depth -= 1

    def function(self, f: FunctionDecl) -> None:
        params = ", ".join(f"{p.type} {p.name}" for p in f.params)
        head = f"{f.ret_type} {f.name}({params})"
        if f.body is None:
            self.emit(head + ";")
        else:
            self.emit(head)
            self.stmt(f.body)


def pretty_print(program: Program) -> str:
    pr = _Printer()
    for f in program.functions:
        pr.function(f)
    return "\n".join(pr.lines) + "\n"


def signature(node: object) -> object:
    """Nested-tuple structural form of a node, ignoring locations and ids.

    Two parses of the same source yield equal signatures; used by the
    print/re-parse round-trip test.
    """
    if isinstance(node, Program):
        return ("program", tuple(signature(f) for f in node.functions))
    if isinstance(node, FunctionDecl):
        return (
            "fn",
            str(node.ret_type),
            node.name,
            tuple((str(p.type), p.name) for p in node.params),
            signature(node.body) if node.body is not None else None,
        )
    if isinstance(node, VarDecl):
        return ("var", str(node.type), node.name, signature(node.init))
    if isinstance(node, Assign):
        return ("assign", node.target.name, signature(node.value))
    if isinstance(node, ExprStmt):
        return ("expr", signature(node.expr))
    if isinstance(node, Block):
        return ("block", tuple(signature(s) for s in node.stmts))
    if isinstance(node, If):
        return ("if", signature(node.cond), signature(node.then), signature(node.els))
    if isinstance(node, While):
        return ("while", signature(node.cond), signature(node.body))
    if isinstance(node, Return):
        return ("return", signature(node.value))
    if isinstance(node, IntLit):
        return ("int", node.value)
    if isinstance(node, BoolLit):
        return ("bool", node.value)
    if isinstance(node, StrLit):
        return ("str", node.value)
    if isinstance(node, VarRef):
        return ("ref", node.name)
    if isinstance(node, Call):
        return ("call", node.name, tuple(signature(a) for a in node.args))
    if isinstance(node, MethodCall):
        return (
            "method",
            signature(node.receiver),
            node.method,
            tuple(signature(a) for a in node.args),
        )
    if isinstance(node, Convert):
        return ("convert", signature(node.operand))
    if isinstance(node, BinaryOp):
        return ("binop", node.op, signature(node.lhs), signature(node.rhs))
    if isinstance(node, Index):
        return ("index", signature(node.base), signature(node.index))
    if node is None:
        return None
    raise TypeError(f"unknown node {node!r}")
