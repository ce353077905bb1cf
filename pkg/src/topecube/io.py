"""Reading and writing ``.topes`` files and covector lists."""
from __future__ import annotations

from pathlib import Path

from .pcube import ToGraph, str_to_word


class TopesParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def parse_topes(text: str) -> ToGraph:
    """Parse ``n=<int>`` followed by one ``+-`` string per line; ``#`` starts a comment."""
    n = None
    words = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            if not line.startswith("n="):
                raise TopesParseError(lineno, "expected header n=<int>")
            try:
                n = int(line[2:])
            except ValueError:
                raise TopesParseError(lineno, f"bad width {line[2:]!r}") from None
            if not 0 <= n <= 32:
                raise TopesParseError(lineno, f"width {n} out of range")
            continue
        if len(line) != n or any(c not in "+-" for c in line):
            raise TopesParseError(lineno, f"expected {n} characters from '+-', got {line!r}")
        words.append(str_to_word(line))
    if n is None:
        raise TopesParseError(1, "missing header n=<int>")
    return ToGraph(words, n)


def format_topes(g: ToGraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"n={g.n}")
    lines.extend(g.to_strings())
    return "\n".join(lines) + "\n"


def read_topes(path) -> ToGraph:
    return parse_topes(Path(path).read_text())


def write_topes(path, g: ToGraph, comment: str | None = None) -> None:
    Path(path).write_text(format_topes(g, comment))


def format_covectors(faces) -> str:
    return "".join(s + "\n" for s in sorted(str(f.covector) for f in faces))
