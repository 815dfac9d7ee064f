from __future__ import annotations

import re
from dataclasses import dataclass

KEYWORDS = frozenset(
    {
        "type", "const", "def", "check", "eq", "iso",
        "let", "be", "in", "case", "of", "inl", "inr", "abort", "fst", "snd",
        "refl", "idelim", "with", "if", "then", "else", "tt", "ff",
        "Sg", "Pi", "Id", "Top", "I",
    }
)  # fmt: skip

DECL_KEYWORDS = frozenset({"type", "const", "def", "check", "eq", "iso"})

# Longest first so that `(x)` wins over `(` and `<~>` over `<`.
SYMBOLS = (
    "<~>", "(x)", "(+)", ":=", "==", "-o", "->", "<>",
    "(", ")", "[", "]", "{", "}", "<", ">", ",", ";", ":", ".", "|", "!", "*", "&", "\\", "/", "=",
)  # fmt: skip

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
NUMBER_RE = re.compile(r"[0-9]+")


@dataclass(frozen=True, slots=True)
class Token:
    """`kind` is `name`, `number`, `eof`, `error`, or the literal text of a keyword or symbol."""

    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    """Split source text into tokens; never raises, bad characters become `error` tokens."""
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        ch = text[pos]
        column = pos - line_start + 1
        if ch == "\n":
            line, line_start, pos = line + 1, pos + 1, pos + 1
            continue
        if ch.isspace():
            pos += 1
            continue
        if text.startswith("--", pos):
            end = text.find("\n", pos)
            pos = len(text) if end < 0 else end
            continue
        if match := NAME_RE.match(text, pos):
            word = match.group()
            tokens.append(Token(word if word in KEYWORDS else "name", word, line, column))
            pos = match.end()
            continue
        if match := NUMBER_RE.match(text, pos):
            tokens.append(Token("number", match.group(), line, column))
            pos = match.end()
            continue
        for symbol in SYMBOLS:
            if text.startswith(symbol, pos):
                tokens.append(Token(symbol, symbol, line, column))
                pos += len(symbol)
                break
        else:
            tokens.append(Token("error", ch, line, column))
            pos += 1
    column = pos - line_start + 1
    tokens.append(Token("eof", "", line, column))
    return tokens
