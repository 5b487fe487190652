"""Tokenizer for the SMIv2 subset."""

import re
from dataclasses import dataclass

from marfsnmp.smi.errors import SmiSyntaxError

NAME = "name"
NUMBER = "number"
STRING = "string"
PUNCT = "punct"

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>--[^\n]*)
      | (?P<string>"[^"]*")
      | (?P<punct>::=|\.\.|[{}(),;|])
      | (?P<number>\d+)
      | (?P<name>[A-Za-z][A-Za-z0-9-]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    line: int


def tokenize(source):
    tokens = []
    pos = 0
    line = 1
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise SmiSyntaxError(line, f"a token, got {source[pos]!r}")
        group = m.lastgroup
        text = m.group()
        if group == "string":
            tokens.append(Token(STRING, text[1:-1], line))
        elif group == "number":
            tokens.append(Token(NUMBER, text, line))
        elif group == "name":
            tokens.append(Token(NAME, text, line))
        elif group == "punct":
            tokens.append(Token(PUNCT, text, line))
        line += text.count("\n")
        pos = m.end()
    return tokens
