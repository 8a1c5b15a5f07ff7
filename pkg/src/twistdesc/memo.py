"""Shared memo table for correlator values, and its on-disk text format.

File layout (UTF-8)::

    # twistdesc-cache v1
    r;d;u:m:c,u:m:c,...;num/den

Records are sorted by key so a stored cache diffs cleanly and two runs that
computed the same values write byte-identical files.
"""
from __future__ import annotations

import os
import random
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional

from .core import Canon, CanonicalKey

HEADER = "# twistdesc-cache v1"
ENV_VAR = "TWISTDESC_CACHE"

__all__ = ["MemoCache", "EvalContext", "CacheFormatError", "HEADER", "ENV_VAR"]


class CacheFormatError(ValueError):
    pass


class MemoCache:
    """Canonical key -> exact value, safe to share between threads.

    Entries are write-once in spirit: storing a different value under an
    existing key means two evaluation paths disagreed, which is a bug, so it
    raises.
    """

    def __init__(self) -> None:
        self._data: dict[CanonicalKey, Fraction] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, key: CanonicalKey) -> bool:
        return key in self._data

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MemoCache):
            return NotImplemented
        return self._data == other._data

    def items(self) -> Iterator[tuple[CanonicalKey, Fraction]]:
        return iter(sorted(self._data.items()))

    def get(self, key: CanonicalKey) -> Optional[Fraction]:
        with self._lock:
            value = self._data.get(key)
            if value is None:
                self.misses += 1
            else:
                self.hits += 1
            return value

    def put(self, key: CanonicalKey, value: Fraction) -> None:
        with self._lock:
            old = self._data.setdefault(key, value)
        if old != value:
            raise RuntimeError(f"memo conflict at {key}: {old} vs {value}")

    # -- persistence ------------------------------------------------------

    def dumps(self) -> str:
        lines = [HEADER]
        for key, value in self.items():
            lines.append(
                f"{key.encode().decode()};{value.numerator}/{value.denominator}"
            )
        return "\n".join(lines) + "\n"

    def store(self, path: str | os.PathLike) -> None:
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(self.dumps(), encoding="utf-8")
        os.replace(tmp, path)

    @classmethod
    def loads(cls, text: str) -> "MemoCache":
        lines = text.splitlines()
        if not lines or lines[0].strip() != HEADER:
            raise CacheFormatError(f"missing or incompatible header (want {HEADER!r})")
        cache = cls()
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            try:
                r, d, triples, value = line.split(";")
                ins: Canon = ()
                if triples:
                    if triples.count(":") != 2 * (triples.count(",") + 1):
                        raise ValueError("triple needs three fields")
                    it = map(int, triples.replace(":", ",").split(","))
                    ins = tuple(zip(it, it, it))
                num, den = value.split("/")
                frac = Fraction(int(num), int(den))
            except ValueError as exc:
                raise CacheFormatError(f"line {lineno}: {exc}") from None
            if list(ins) != sorted(ins):
                raise CacheFormatError(f"line {lineno}: insertions not sorted")
            cache._data[CanonicalKey(int(r), int(d), ins)] = frac
        return cache

    @classmethod
    def load(cls, path: str | os.PathLike) -> "MemoCache":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


@dataclass
class EvalContext:
    """What an evaluation shares across its recursion.

    With ``rng`` set, every free choice (pivot, spectators, the mark to
    split, the order in which marks are stripped) is drawn at random.  Only
    the tests use that; values must not depend on it.
    """

    cache: MemoCache = field(default_factory=MemoCache)
    rng: Optional[random.Random] = None

    def pick(self, options: list):
        if self.rng is None or len(options) == 1:
            return options[0]
        return self.rng.choice(options)


_default_cache = MemoCache()


def default_context(cache: Optional[MemoCache] = None) -> EvalContext:
    return EvalContext(cache if cache is not None else _default_cache)
