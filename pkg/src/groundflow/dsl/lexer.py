"""Tokenizer for the workflow language."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DslSyntaxError

KEYWORDS = frozenset({"for", "in", "if", "else"})

_PUNCT = {
    "==": "EQ", "!=": "NE", "<=": "LE", ">=": "GE",
    "=": "ASSIGN", "<": "LT", ">": "GT",
    "+": "PLUS", "-": "MINUS", "*": "STAR", "/": "SLASH",
    "(": "LPAREN", ")": "RPAREN", "[": "LBRACKET", "]": "RBRACKET",
    "{": "LBRACE", "}": "RBRACE", ",": "COMMA",
}

_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int
    value: float | str | None = None


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line, col = 1, 1
    n = len(source)

    def advance(count: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(count):
            if i < n and source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance()
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                advance()
            continue
        start_line, start_col = line, col
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            kind = "KEYWORD" if text in KEYWORDS else "IDENT"
            tokens.append(Token(kind, text, start_line, start_col))
            advance(j - i)
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (source[j].isdigit() or (source[j] == "." and not seen_dot)):
                if source[j] == ".":
                    # a trailing dot is not part of the number
                    if j + 1 >= n or not source[j + 1].isdigit():
                        break
                    seen_dot = True
                j += 1
            text = source[i:j]
            tokens.append(Token("NUMBER", text, start_line, start_col, value=float(text)))
            advance(j - i)
            continue
        if ch == '"':
            j = i + 1
            out: list[str] = []
            while j < n and source[j] != '"':
                c = source[j]
                if c == "\n":
                    raise DslSyntaxError("unterminated string literal", start_line, start_col)
                if c == "\\":
                    if j + 1 >= n or source[j + 1] not in _ESCAPES:
                        raise DslSyntaxError(
                            f"bad escape sequence in string", start_line, start_col
                        )
                    out.append(_ESCAPES[source[j + 1]])
                    j += 2
                    continue
                out.append(c)
                j += 1
            if j >= n:
                raise DslSyntaxError("unterminated string literal", start_line, start_col)
            tokens.append(Token("STRING", source[i : j + 1], start_line, start_col, value="".join(out)))
            advance(j + 1 - i)
            continue
        two = source[i : i + 2]
        if two in _PUNCT:
            tokens.append(Token(_PUNCT[two], two, start_line, start_col))
            advance(2)
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, start_line, start_col))
            advance()
            continue
        raise DslSyntaxError(f"unexpected character {ch!r}", start_line, start_col)

    tokens.append(Token("EOF", "", line, col))
    return tokens
