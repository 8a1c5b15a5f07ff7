"""Text syntax for correlators.

    correlator := term (WS term)*
    term       := "tau" "[" fields "]" ("^" INT)?
    fields     := field ("," field)*
    field      := ("u" | "m" | "c") "=" INT

``tau[m=1,c=2]`` is tau_0^1(2); omitted fields are 0 and ``^k`` repeats a
term k times.  r and d are not part of the text.
"""
from __future__ import annotations

from .core import Correlator, Insertion

__all__ = ["ParseError", "parse_correlator", "format_correlator"]


class ParseError(ValueError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset


class _Scanner:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, literal: str) -> None:
        if not self.text.startswith(literal, self.pos):
            found = self.peek() or "end of input"
            raise ParseError(f"expected {literal!r}, found {found!r}", self.pos)
        self.pos += len(literal)

    def integer(self) -> int:
        start = self.pos
        if self.peek() == "-":
            raise ParseError("negative integers are not allowed", start)
        while self.peek().isdigit() and self.peek().isascii():
            self.pos += 1
        if self.pos == start:
            raise ParseError(f"expected an integer, found {self.peek() or 'end of input'!r}", start)
        return int(self.text[start:self.pos])

    def skip_ws(self) -> bool:
        start = self.pos
        while self.peek().isspace():
            self.pos += 1
        return self.pos > start


def _term(sc: _Scanner) -> list[Insertion]:
    sc.expect("tau")
    sc.expect("[")
    values: dict[str, int] = {}
    while True:
        name_at = sc.pos
        name = sc.peek()
        if name not in ("u", "m", "c") or not name:
            raise ParseError(f"expected field u, m or c, found {name or 'end of input'!r}", name_at)
        if name in values:
            raise ParseError(f"field {name!r} given twice", name_at)
        sc.pos += 1
        sc.expect("=")
        values[name] = sc.integer()
        if sc.peek() == ",":
            sc.pos += 1
            continue
        sc.expect("]")
        break
    repeat = 1
    if sc.peek() == "^":
        sc.pos += 1
        at = sc.pos
        repeat = sc.integer()
        if repeat == 0:
            raise ParseError("repetition count must be positive", at)
    return [Insertion(values.get("u", 0), values.get("m", 0), values.get("c", 0))] * repeat


def parse_correlator(text: str, r: int, d: int) -> Correlator:
    """Parse ``text`` into a correlator on ``M_{0,n}(P^r, d)``.

    Only syntax is checked here; whether the space exists is the
    evaluator's business.
    """
    sc = _Scanner(text)
    sc.skip_ws()
    insertions = _term(sc)
    while sc.pos < len(text):
        had_ws = sc.skip_ws()
        if sc.pos == len(text):
            break
        if not had_ws:
            raise ParseError(f"expected whitespace between terms, found {sc.peek()!r}", sc.pos)
        insertions.extend(_term(sc))
    return Correlator(r, d, tuple(insertions))


def format_correlator(corr: Correlator) -> str:
    """Inverse of :func:`parse_correlator` up to grouping of equal neighbours."""
    out: list[str] = []
    ins = corr.insertions
    i = 0
    while i < len(ins):
        j = i
        while j < len(ins) and ins[j] == ins[i]:
            j += 1
        t = ins[i]
        fields = ",".join(f"{k}={v}" for k, v in zip("umc", t) if v) or "c=0"
        out.append(f"tau[{fields}]" + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return " ".join(out)
