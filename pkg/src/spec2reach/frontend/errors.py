from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """Half-open character range ``[start, end)`` into the source text."""

    start: int
    end: int
    line: int = 1
    col: int = 1

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end

    def cover(self, other: "Span") -> "Span":
        if other.start < self.start:
            return Span(other.start, max(self.end, other.end), other.line, other.col)
        return Span(self.start, max(self.end, other.end), self.line, self.col)


class FrontendError(Exception):
    """Base class for diagnostics raised while reading a C program."""

    severity = "error"

    def __init__(self, span: Span | None, message: str, path: str = "<input>"):
        super().__init__(message)
        self.span = span
        self.message = message
        self.path = path

    def format(self) -> str:
        line, col = (self.span.line, self.span.col) if self.span else (0, 0)
        return f"{self.path}:{line}:{col}: {self.severity}: {self.message}"

    def __str__(self) -> str:
        return self.format()


class CSyntaxError(FrontendError):
    pass


class UnsupportedFeature(FrontendError):
    def __init__(self, span: Span | None, feature: str, path: str = "<input>"):
        super().__init__(span, f"unsupported feature: {feature}", path)
        self.feature = feature
