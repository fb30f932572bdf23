"""Recursive-descent parser for CVL.

Grammar (statements end in ';', blocks in braces):

    program      := functionDecl*
    functionDecl := type ident "(" paramList? ")" (block | ";")
    type         := "void" | "bool" | "int" | "std::string"
                  | "std::string_view" | "const" "char" "*"
    param        := type ("&")? ident | "const" type "&" ident
    stmt         := varDecl | assign | exprStmt | ifStmt | whileStmt
                  | returnStmt | block
    varDecl      := type ident ( "(" argList ")" | "=" expr )? ";"
    expr         := level-ordered binops over postfix/primary
    binop        := "==" | "!=" | "<" | ">" | "+" | "-" | "+="

Parse errors recover to the next ';' or '}' so a file can report more
than one error per run.
"""

from __future__ import annotations

from . import ast
from .ast import CvlType, RefKind, SourceLocation, TypeKind
from .errors import ParseError
from .lexer import Token, lex

_TYPE_START = {"void", "bool", "int", "std", "const"}
_COMPARISON_OPS = {"==", "!=", "<", ">"}
_ADDITIVE_OPS = {"+", "-"}


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.errors: list[ParseError] = []
        self.next_id = 0

    # -- token helpers ----------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind in ("punct", "keyword") and tok.text == text

    def eat(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            tok = self.peek()
            found = tok.text if tok.kind != "eof" else "end of input"
            raise ParseError(f"expected '{text}', found '{found}'", tok.loc)
        return self.eat()

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError(f"expected identifier, found '{tok.text}'", tok.loc)
        return self.eat()

    def fresh_id(self) -> int:
        self.next_id += 1
        return self.next_id

    def prev_loc(self) -> SourceLocation:
        return self.tokens[max(self.pos - 1, 0)].loc

    # -- types -------------------------------------------------------------

    def at_type(self) -> bool:
        tok = self.peek()
        return tok.kind == "keyword" and tok.text in _TYPE_START

    def parse_type(self) -> CvlType:
        tok = self.peek()
        if tok.text == "void":
            self.eat()
            return ast.VOID
        if tok.text == "bool":
            self.eat()
            return ast.BOOL
        if tok.text == "int":
            self.eat()
            return ast.INT
        if tok.text == "std":
            self.eat()
            self.expect("::")
            name = self.peek()
            if name.text == "string":
                self.eat()
                return ast.STRING
            if name.text == "string_view":
                self.eat()
                return ast.STRING_VIEW
            raise ParseError(f"unknown std type 'std::{name.text}'", name.loc)
        if tok.text == "const":
            self.eat()
            self.expect("char")
            self.expect("*")
            return ast.CHAR_PTR
        raise ParseError(f"expected a type, found '{tok.text}'", tok.loc)

    # -- program and functions ----------------------------------------------

    def parse_program(self, filename: str) -> ast.Program:
        begin = self.peek().loc
        functions: list[ast.FunctionDecl] = []
        while self.peek().kind != "eof":
            try:
                functions.append(self.parse_function())
            except ParseError as err:
                self.errors.append(err)
                self.recover_to_function()
        end = self.peek().loc
        return ast.Program(begin=begin, end=end, functions=functions)

    def parse_function(self) -> ast.FunctionDecl:
        begin = self.peek().loc
        ret_type = self.parse_type()
        name = self.expect_ident()
        self.expect("(")
        params: list[ast.ParamDecl] = []
        if not self.at(")"):
            params.append(self.parse_param())
            while self.at(","):
                self.eat()
                params.append(self.parse_param())
        self.expect(")")
        if self.at(";"):
            end = self.eat().loc
            return ast.FunctionDecl(begin, end, ret_type, name.text, params, None)
        body = self.parse_block()
        return ast.FunctionDecl(begin, body.end, ret_type, name.text, params, body)

    def parse_param(self) -> ast.ParamDecl:
        begin = self.peek().loc
        # "const T &" is a const reference unless T is the char pointer
        # type, which already consumes the "const".
        if self.at("const") and self.peek(1).text != "char":
            self.eat()
            base = self.parse_type()
            self.expect("&")
            name = self.expect_ident()
            return ast.ParamDecl(begin, name.loc, base.with_ref(RefKind.CONST_REF), name.text)
        base = self.parse_type()
        ref = RefKind.NONE
        if self.at("&"):
            self.eat()
            ref = RefKind.MUT_REF
        name = self.expect_ident()
        return ast.ParamDecl(begin, name.loc, base.with_ref(ref), name.text)

    # -- statements ----------------------------------------------------------

    def parse_block(self) -> ast.Block:
        begin = self.expect("{").loc
        stmts: list[ast.Stmt] = []
        while not self.at("}") and self.peek().kind != "eof":
            try:
                stmts.append(self.parse_stmt())
            except ParseError as err:
                self.errors.append(err)
                self.recover_to_stmt()
        end = self.expect("}").loc
        return ast.Block(begin, end, stmts=stmts)

    def parse_stmt(self) -> ast.Stmt:
        tok = self.peek()
        if self.at("{"):
            return self.parse_block()
        if self.at("if"):
            return self.parse_if()
        if self.at("while"):
            return self.parse_while()
        if self.at("return"):
            return self.parse_return()
        if self.at_type():
            return self.parse_var_decl()
        if tok.kind == "ident" and self.peek(1).text == "=" and self.peek(1).kind == "punct":
            return self.parse_assign()
        expr = self.parse_expr()
        end = self.expect(";").loc
        return ast.ExprStmt(tok.loc, end, expr=expr)

    def parse_var_decl(self) -> ast.VarDecl:
        begin = self.peek().loc
        decl_type = self.parse_type()
        name = self.expect_ident()
        init: ast.Expr | None = None
        paren = False
        if self.at("("):
            self.eat()
            args = [self.parse_expr()]
            while self.at(","):
                self.eat()
                args.append(self.parse_expr())
            self.expect(")")
            if len(args) != 1:
                raise ParseError("constructor call takes exactly one argument", begin)
            init = args[0]
            paren = True
        elif self.at("="):
            self.eat()
            init = self.parse_expr()
        end = self.expect(";").loc
        return ast.VarDecl(begin, end, type=decl_type, name=name.text, init=init, paren_init=paren)

    def parse_assign(self) -> ast.Assign:
        name = self.expect_ident()
        target = ast.VarRef(name.loc, name.loc, nid=self.fresh_id(), name=name.text)
        self.expect("=")
        value = self.parse_expr()
        end = self.expect(";").loc
        return ast.Assign(name.loc, end, target=target, value=value)

    def parse_if(self) -> ast.If:
        begin = self.expect("if").loc
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        then = self.parse_stmt()
        els: ast.Stmt | None = None
        if self.at("else"):
            self.eat()
            els = self.parse_stmt()
        end = els.end if els is not None else then.end
        return ast.If(begin, end, cond=cond, then=then, els=els)

    def parse_while(self) -> ast.While:
        begin = self.expect("while").loc
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        body = self.parse_stmt()
        return ast.While(begin, body.end, cond=cond, body=body)

    def parse_return(self) -> ast.Return:
        begin = self.expect("return").loc
        value: ast.Expr | None = None
        if not self.at(";"):
            value = self.parse_expr()
        end = self.expect(";").loc
        return ast.Return(begin, end, value=value)

    # -- expressions -----------------------------------------------------------

    def parse_expr(self) -> ast.Expr:
        lhs = self.parse_comparison()
        if self.at("+="):
            op = self.eat()
            rhs = self.parse_comparison()
            return ast.BinaryOp(lhs.begin, rhs.end, nid=self.fresh_id(), op=op.text, lhs=lhs, rhs=rhs)
        return lhs

    def parse_comparison(self) -> ast.Expr:
        lhs = self.parse_additive()
        while self.peek().kind == "punct" and self.peek().text in _COMPARISON_OPS:
            op = self.eat()
            rhs = self.parse_additive()
            lhs = ast.BinaryOp(lhs.begin, rhs.end, nid=self.fresh_id(), op=op.text, lhs=lhs, rhs=rhs)
        return lhs

    def parse_additive(self) -> ast.Expr:
        lhs = self.parse_postfix()
        while self.peek().kind == "punct" and self.peek().text in _ADDITIVE_OPS:
            op = self.eat()
            rhs = self.parse_postfix()
            lhs = ast.BinaryOp(lhs.begin, rhs.end, nid=self.fresh_id(), op=op.text, lhs=lhs, rhs=rhs)
        return lhs

    def parse_postfix(self) -> ast.Expr:
        expr = self.parse_primary()
        while True:
            if self.at("."):
                self.eat()
                method = self.expect_ident()
                self.expect("(")
                args = self.parse_args()
                end = self.expect(")").loc
                expr = ast.MethodCall(
                    expr.begin, end, nid=self.fresh_id(), receiver=expr, method=method.text, args=args
                )
            elif self.at("["):
                self.eat()
                index = self.parse_expr()
                end = self.expect("]").loc
                expr = ast.Index(expr.begin, end, nid=self.fresh_id(), base=expr, index=index)
            else:
                return expr

    def parse_args(self) -> list[ast.Expr]:
        args: list[ast.Expr] = []
        if not self.at(")"):
            args.append(self.parse_expr())
            while self.at(","):
                self.eat()
                args.append(self.parse_expr())
        return args

    def parse_primary(self) -> ast.Expr:
        tok = self.peek()
        if tok.kind == "punct" and tok.text == "-" and self.peek(1).kind == "int":
            self.eat()
            lit = self.eat()
            return ast.IntLit(tok.loc, lit.loc, nid=self.fresh_id(), value=-int(lit.text))
        if tok.kind == "int":
            self.eat()
            return ast.IntLit(tok.loc, tok.loc, nid=self.fresh_id(), value=int(tok.text))
        if tok.kind == "string":
            self.eat()
            return ast.StrLit(tok.loc, tok.loc, nid=self.fresh_id(), value=tok.text)
        if tok.text in ("true", "false") and tok.kind == "keyword":
            self.eat()
            return ast.BoolLit(tok.loc, tok.loc, nid=self.fresh_id(), value=tok.text == "true")
        if tok.kind == "ident":
            self.eat()
            if self.at("("):
                self.eat()
                args = self.parse_args()
                end = self.expect(")").loc
                return ast.Call(tok.loc, end, nid=self.fresh_id(), name=tok.text, args=args)
            return ast.VarRef(tok.loc, tok.loc, nid=self.fresh_id(), name=tok.text)
        found = tok.text if tok.kind != "eof" else "end of input"
        raise ParseError(f"expected an expression, found '{found}'", tok.loc)

    # -- error recovery -----------------------------------------------------

    def recover_to_stmt(self) -> None:
        while self.peek().kind != "eof":
            if self.at(";"):
                self.eat()
                return
            if self.at("}"):
                return
            self.eat()

    def recover_to_function(self) -> None:
        depth = 0
        while self.peek().kind != "eof":
            if self.at("{"):
                depth += 1
            elif self.at("}"):
                depth -= 1
                if depth <= 0:
                    self.eat()
                    return
            elif self.at(";") and depth == 0:
                self.eat()
                return
            self.eat()


def parse(tokens: list[Token], filename: str = "<input>") -> tuple[ast.Program, list[ParseError]]:
    parser = Parser(tokens)
    program = parser.parse_program(filename)
    return program, parser.errors


def parse_source(source: str, filename: str = "<input>") -> tuple[ast.Program, list[ParseError]]:
    tokens, _ = lex(source, filename)
    return parse(tokens, filename)
