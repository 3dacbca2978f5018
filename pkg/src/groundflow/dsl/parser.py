"""Recursive-descent parser producing the workflow AST.

Newlines are not significant: statement boundaries fall out of the
grammar (an identifier followed by ``=`` opens an assignment; ``for`` and
``if`` open blocks; anything else is an expression statement). Nesting is
capped so that hostile input cannot exhaust the host stack.
"""

from __future__ import annotations

from ..errors import DslSyntaxError
from . import ast
from .lexer import Token, tokenize

MAX_NESTING = 200

_COMPARISON = {"EQ": "==", "NE": "!=", "LT": "<", "GT": ">", "LE": "<=", "GE": ">="}
_ADDITIVE = {"PLUS": "+", "MINUS": "-"}
_MULTIPLICATIVE = {"STAR": "*", "SLASH": "/"}


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.pos = 0
        self.depth = 0

    # -- token helpers -----------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def take(self) -> Token:
        tok = self.current
        self.pos += 1
        return tok

    def expect(self, kind: str, expected: str) -> Token:
        tok = self.current
        if tok.kind != kind:
            raise DslSyntaxError(
                f"unexpected {tok.text!r}" if tok.kind != "EOF" else "unexpected end of input",
                tok.line,
                tok.col,
                expected=frozenset({expected}),
            )
        return self.take()

    def _enter(self, tok: Token) -> None:
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise DslSyntaxError("nesting too deep", tok.line, tok.col)

    def _exit(self) -> None:
        self.depth -= 1

    # -- grammar ------------------------------------------------------------

    def parse_program(self) -> ast.Program:
        statements = []
        while self.current.kind != "EOF":
            statements.append(self.parse_statement())
        return ast.Program(statements=tuple(statements), source=self.source)

    def parse_statement(self) -> ast.Statement:
        tok = self.current
        if tok.kind == "KEYWORD" and tok.text == "for":
            return self.parse_for()
        if tok.kind == "KEYWORD" and tok.text == "if":
            return self.parse_if()
        if tok.kind == "IDENT" and self.peek().kind == "ASSIGN":
            name = self.take()
            self.take()  # '='
            expr = self.parse_expr()
            return ast.Assign(name=name.text, expr=expr, line=name.line, col=name.col)
        if tok.kind == "KEYWORD":
            raise DslSyntaxError(
                f"unexpected keyword {tok.text!r}",
                tok.line,
                tok.col,
                expected=frozenset({"statement"}),
            )
        expr = self.parse_expr()
        return ast.ExprStmt(expr=expr, line=expr.line, col=expr.col)

    def parse_for(self) -> ast.For:
        tok = self.take()
        self._enter(tok)
        var = self.expect("IDENT", "loop variable")
        kw = self.current
        if not (kw.kind == "KEYWORD" and kw.text == "in"):
            raise DslSyntaxError(
                f"unexpected {kw.text!r}", kw.line, kw.col, expected=frozenset({"'in'"})
            )
        self.take()
        iterable = self.parse_expr()
        body = self.parse_block()
        self._exit()
        return ast.For(var=var.text, iterable=iterable, body=body, line=tok.line, col=tok.col)

    def parse_if(self) -> ast.If:
        tok = self.take()
        self._enter(tok)
        cond = self.parse_expr()
        then_body = self.parse_block()
        else_body: tuple[ast.Statement, ...] = ()
        nxt = self.current
        if nxt.kind == "KEYWORD" and nxt.text == "else":
            self.take()
            else_body = self.parse_block()
        self._exit()
        return ast.If(cond=cond, then_body=then_body, else_body=else_body, line=tok.line, col=tok.col)

    def parse_block(self) -> tuple[ast.Statement, ...]:
        self.expect("LBRACE", "'{'")
        statements = []
        while self.current.kind != "RBRACE":
            if self.current.kind == "EOF":
                tok = self.current
                raise DslSyntaxError(
                    "unexpected end of input", tok.line, tok.col, expected=frozenset({"'}'"})
                )
            statements.append(self.parse_statement())
        self.take()
        return tuple(statements)

    def parse_expr(self) -> ast.Expr:
        tok = self.current
        self._enter(tok)
        try:
            lhs = self.parse_additive()
            if self.current.kind in _COMPARISON:
                op_tok = self.take()
                rhs = self.parse_additive()
                return ast.Binary(
                    op=_COMPARISON[op_tok.kind], lhs=lhs, rhs=rhs, line=lhs.line, col=lhs.col
                )
            return lhs
        finally:
            self._exit()

    def parse_additive(self) -> ast.Expr:
        expr = self.parse_multiplicative()
        while self.current.kind in _ADDITIVE:
            op_tok = self.take()
            rhs = self.parse_multiplicative()
            expr = ast.Binary(
                op=_ADDITIVE[op_tok.kind], lhs=expr, rhs=rhs, line=expr.line, col=expr.col
            )
        return expr

    def parse_multiplicative(self) -> ast.Expr:
        expr = self.parse_unary()
        while self.current.kind in _MULTIPLICATIVE:
            op_tok = self.take()
            rhs = self.parse_unary()
            expr = ast.Binary(
                op=_MULTIPLICATIVE[op_tok.kind], lhs=expr, rhs=rhs, line=expr.line, col=expr.col
            )
        return expr

    def parse_unary(self) -> ast.Expr:
        tok = self.current
        if tok.kind == "MINUS" and self.peek().kind == "NUMBER":
            self.take()
            num = self.take()
            return ast.NumberLit(value=-float(num.value), line=tok.line, col=tok.col)
        return self.parse_postfix()

    def parse_postfix(self) -> ast.Expr:
        expr = self.parse_primary()
        while self.current.kind == "LBRACKET":
            self._enter(self.current)
            self.take()
            index = self.parse_expr()
            self.expect("RBRACKET", "']'")
            expr = ast.Index(target=expr, index=index, line=expr.line, col=expr.col)
            self._exit()
        return expr

    def parse_primary(self) -> ast.Expr:
        tok = self.current
        if tok.kind == "NUMBER":
            self.take()
            return ast.NumberLit(value=float(tok.value), line=tok.line, col=tok.col)
        if tok.kind == "STRING":
            self.take()
            return ast.StringLit(value=str(tok.value), line=tok.line, col=tok.col)
        if tok.kind == "LBRACKET":
            self._enter(tok)
            self.take()
            items = []
            if self.current.kind != "RBRACKET":
                items.append(self.parse_expr())
                while self.current.kind == "COMMA":
                    self.take()
                    items.append(self.parse_expr())
            self.expect("RBRACKET", "']'")
            self._exit()
            return ast.ListLit(items=tuple(items), line=tok.line, col=tok.col)
        if tok.kind == "LPAREN":
            self._enter(tok)
            self.take()
            expr = self.parse_expr()
            self.expect("RPAREN", "')'")
            self._exit()
            return expr
        if tok.kind == "IDENT":
            self.take()
            if self.current.kind == "LPAREN":
                self._enter(tok)
                self.take()
                args = []
                if self.current.kind != "RPAREN":
                    args.append(self.parse_expr())
                    while self.current.kind == "COMMA":
                        self.take()
                        args.append(self.parse_expr())
                self.expect("RPAREN", "')'")
                self._exit()
                return ast.Call(name=tok.text, args=tuple(args), line=tok.line, col=tok.col)
            return ast.Var(name=tok.text, line=tok.line, col=tok.col)
        raise DslSyntaxError(
            f"unexpected {tok.text!r}" if tok.kind != "EOF" else "unexpected end of input",
            tok.line,
            tok.col,
            expected=frozenset({"number", "string", "identifier", "'('", "'['"}),
        )


def parse(source: str) -> ast.Program:
    return _Parser(source).parse_program()
