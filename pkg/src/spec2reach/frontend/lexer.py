from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .errors import CSyntaxError, Span, UnsupportedFeature

KEYWORDS = {
    "int", "unsigned", "void", "extern", "if", "else", "while", "goto",
    "return", "break", "continue", "signed", "long",
}
# recognised only to reject them with a precise diagnostic
UNSUPPORTED_KEYWORDS = {
    "struct": "struct", "union": "union", "enum": "enum", "float": "float",
    "double": "double", "char": "char", "short": "short", "for": "for loop",
    "do": "do-while loop", "switch": "switch", "case": "switch",
    "typedef": "typedef", "static": "static storage", "const": "const qualifier",
    "volatile": "volatile qualifier", "sizeof": "sizeof", "_Bool": "_Bool",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<linecomment>//[^\n]*)
  | (?P<blockcomment>/\*.*?\*/)
  | (?P<pp>\#[^\n]*)
  | (?P<num>0[xX][0-9a-fA-F]+[A-Za-z]*|[0-9]+[A-Za-z]*)
  | (?P<id>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\+\+|--|\+=|-=|\*=|/=|%=|<<=|>>=|&=|\|=|\^=|->|&&|\|\||<<|>>|<=|>=|==|!=
           |[-+*/%<>=!(){};,\[\]&|^~?:.])
  | (?P<str>["'])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str  # id | kw | num | op | eof
    text: str
    span: Span
    value: Optional[int] = None
    unsigned: bool = False


class Lexer:
    def __init__(self, text: str, path: str = "<input>"):
        self.text = text
        self.path = path
        self._line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def position(self, offset: int) -> tuple[int, int]:
        lo, hi = 0, len(self._line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._line_starts[mid] <= offset:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1, offset - self._line_starts[lo] + 1

    def span(self, start: int, end: int) -> Span:
        line, col = self.position(start)
        return Span(start, end, line, col)

    def tokens(self) -> list[Token]:
        out: list[Token] = []
        pos = 0
        text = self.text
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise CSyntaxError(self.span(pos, pos + 1),
                                   f"unexpected character {text[pos]!r}", self.path)
            kind = m.lastgroup
            lexeme = m.group()
            sp = self.span(m.start(), m.end())
            pos = m.end()
            if kind in ("ws", "linecomment", "blockcomment"):
                continue
            if kind == "pp":
                # line markers left behind by the preprocessor are harmless
                if re.match(r"#\s*(\d|line\b|pragma\b)", lexeme):
                    continue
                raise UnsupportedFeature(sp, "preprocessor directive", self.path)
            if kind == "str":
                raise UnsupportedFeature(sp, "string or character literal", self.path)
            if kind == "num":
                out.append(self._number(lexeme, sp))
            elif kind == "id":
                if lexeme in UNSUPPORTED_KEYWORDS:
                    raise UnsupportedFeature(sp, UNSUPPORTED_KEYWORDS[lexeme], self.path)
                out.append(Token("kw" if lexeme in KEYWORDS else "id", lexeme, sp))
            else:
                out.append(Token("op", lexeme, sp))
        out.append(Token("eof", "", self.span(len(text), len(text))))
        return out

    def _number(self, lexeme: str, sp: Span) -> Token:
        m = re.fullmatch(r"(0[xX][0-9a-fA-F]+|[0-9]+)([A-Za-z]*)", lexeme)
        digits, suffix = m.group(1), m.group(2)
        if suffix and suffix not in ("u", "U"):
            if any(c in "lL" for c in suffix):
                raise UnsupportedFeature(sp, "long integer literal", self.path)
            raise CSyntaxError(sp, f"invalid integer literal {lexeme!r}", self.path)
        if digits.startswith(("0x", "0X")):
            value = int(digits, 16)
        elif len(digits) > 1 and digits.startswith("0"):
            value = int(digits, 8)
        else:
            value = int(digits)
        return Token("num", lexeme, sp, value=value, unsigned=bool(suffix))
