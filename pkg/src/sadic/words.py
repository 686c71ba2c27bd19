"""Finite words over small integer alphabets.

A word is a ``bytes`` object whose byte values are the letters, numbered
from 1.  Letter 0 is reserved (never valid), so the empty word is ``b""``
and words render naturally as digit strings for alphabets of size <= 9.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Word = bytes


def word(letters) -> Word:
    """Build a word from an iterable of integer letters."""
    w = bytes(letters)
    if 0 in w:
        raise ValueError("letter 0 is not a valid letter")
    return w


def parse_word(text: str) -> Word:
    """Parse a digit string such as '1213113' into a word."""
    if not text.isdigit() and text != "":
        raise ValueError(f"not a digit string: {text!r}")
    return word(int(c) for c in text)


def format_word(w: Word) -> str:
    """Render a word as a digit string (alphabet size <= 9)."""
    if any(a > 9 for a in w):
        raise ValueError("letters above 9 have no digit rendering")
    return "".join(str(a) for a in w)


def count_occurrences(u: Word, v: Word) -> int:
    """Number of (possibly overlapping) occurrences of u in v.

    The empty word occurs |v| + 1 times, once per position between
    letters and at both ends.
    """
    if not u:
        return len(v) + 1
    n = 0
    start = 0
    while True:
        i = v.find(u, start)
        if i < 0:
            return n
        n += 1
        start = i + 1


@dataclass(frozen=True)
class FactorSet:
    """Distinct factors of one text, grouped by length."""

    by_length: dict
    source_length: int

    def lengths(self):
        return sorted(self.by_length)


def factors(v: Word, max_length: int) -> FactorSet:
    """All distinct factors of v of each length 1..min(max_length, |v|).

    Scans by refining position classes one letter at a time, so the cost
    per length is proportional to |v| but with a small constant: good for
    long words of low complexity, where the number of classes stays tiny.
    """
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    m = len(v)
    by_length: dict[int, frozenset] = {}
    if m == 0:
        return FactorSet(by_length, 0)
    arr = np.frombuffer(v, dtype=np.uint8)
    groups: dict[bytes, np.ndarray] = {}
    for a in np.unique(arr):
        groups[bytes([a])] = np.flatnonzero(arr == a)
    by_length[1] = frozenset(groups)
    for n in range(2, min(max_length, m) + 1):
        refined: dict[bytes, np.ndarray] = {}
        for fac, pos in groups.items():
            pos = pos[pos <= m - n]
            if pos.size == 0:
                continue
            nxt = arr[pos + (n - 1)]
            for a in np.unique(nxt):
                refined[fac + bytes([a])] = pos[nxt == a]
        groups = refined
        by_length[n] = frozenset(groups)
    return FactorSet(by_length, m)


def complexity(fs: FactorSet, n: int) -> int:
    """Factor complexity p(n): the number of distinct length-n factors."""
    if n not in fs.by_length:
        raise ValueError(
            f"length {n} not computed (have 1..{max(fs.by_length, default=0)})"
        )
    return len(fs.by_length[n])
