"""Level words of a directive sequence and sampled potentials.

The level-n word of a letter is the image of that letter under the
composed prefix of the directive sequence, built bottom up one term at a
time: if the term at index n sends a to b1...br, the level-n word of a is
the concatenation of the level-(n-1) words of b1...br.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .substitution import DirectiveSequence, Matrix, mat_mul
from .words import FactorSet, Word, factors, format_word

DEFAULT_WORD_CAP = 10**7


class LevelCapError(RuntimeError):
    """A level word outgrew the materialization cap."""


class IncompleteSamplingError(ValueError):
    """A sampling function has no value for a word found in the text."""

    def __init__(self, missing: Word):
        self.missing = missing
        super().__init__(f"no sampled value for factor {format_word(missing)!r}")


@dataclass(frozen=True)
class LevelWords:
    """Words of every letter at one level, plus the exact prefix matrix.

    Entries of ``word_list`` are None for letters whose word outgrew the
    cap; lengths stay available as column sums of ``matrix``.
    """

    level: int
    word_list: tuple
    matrix: Matrix

    def word(self, a: int) -> Word:
        w = self.word_list[a - 1]
        if w is None:
            raise LevelCapError(
                f"level {self.level} word of letter {a} exceeds the cap"
            )
        return w

    def length(self, a: int) -> int:
        return sum(row[a - 1] for row in self.matrix)

    def min_length(self) -> int:
        d = len(self.word_list)
        return min(self.length(a) for a in range(1, d + 1))


def level_words(dv: DirectiveSequence, n: int, max_len: int = DEFAULT_WORD_CAP) -> LevelWords:
    """Materialize the level-n words of all letters."""
    if n < 0:
        raise ValueError("level must be >= 0")
    d = dv.alphabet_size
    first = dv.term(0)
    wordlist = list(first.images)
    matrix = first.matrix()
    for k in range(1, n + 1):
        term = dv.term(k)
        matrix = mat_mul(matrix, term.matrix())
        lengths = [sum(row[a] for row in matrix) for a in range(d)]
        nxt = []
        for a in range(1, d + 1):
            if lengths[a - 1] > max_len:
                nxt.append(None)
                continue
            parts = [wordlist[b - 1] for b in term.image(a)]
            nxt.append(None if any(p is None for p in parts) else b"".join(parts))
        wordlist = nxt
    return LevelWords(n, tuple(wordlist), matrix)


def language(dv: DirectiveSequence, n: int, max_length: int,
             max_len: int = DEFAULT_WORD_CAP) -> FactorSet:
    """Factors up to max_length across the level-n words of all letters."""
    lw = level_words(dv, n, max_len)
    merged: dict[int, set] = {}
    total = 0
    for a in range(1, dv.alphabet_size + 1):
        fs = factors(lw.word(a), max_length)
        total += fs.source_length
        for length, facs in fs.by_length.items():
            merged.setdefault(length, set()).update(facs)
    return FactorSet({k: frozenset(v) for k, v in merged.items()}, total)


def letter_frequencies(w: Word, d: int | None = None) -> tuple:
    """Exact frequency vector of the letters 1..d in w."""
    if not w:
        raise ValueError("empty word has no frequencies")
    if d is None:
        d = max(w)
    return tuple(Fraction(w.count(a), len(w)) for a in range(1, d + 1))


@dataclass(frozen=True)
class SamplingFunction:
    """Locally constant function: value of a text position is looked up
    from the length-``window`` factor starting there, then scaled by
    ``coupling``.  ``default`` fills unlisted factors; None means strict.
    """

    window: int
    values: dict
    coupling: float = 1.0
    default: float | None = None

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")
        for w in self.values:
            if len(w) != self.window:
                raise ValueError(
                    f"value key {format_word(w)!r} does not have length {self.window}"
                )

    def value_at(self, fac: Word) -> float:
        if fac in self.values:
            return self.coupling * float(self.values[fac])
        if self.default is None:
            raise IncompleteSamplingError(fac)
        return self.coupling * self.default


def letter_sampling(values: dict, coupling: float = 1.0) -> SamplingFunction:
    """Sampling by single letters, e.g. {1: 0.0, 2: 1.0, 3: -1.0}."""
    return SamplingFunction(1, {bytes([a]): float(v) for a, v in values.items()}, coupling)


def cylinder_indicator(w: Word, coupling: float = 1.0) -> SamplingFunction:
    """Indicator of the cylinder of w: coupling on w, zero elsewhere."""
    if not w:
        raise ValueError("empty cylinder word")
    return SamplingFunction(len(w), {bytes(w): 1.0}, coupling, default=0.0)


@dataclass(frozen=True)
class Potential:
    """Finite sample of a potential along a word."""

    samples: tuple
    source: tuple | None = None

    def __len__(self):
        return len(self.samples)


def sample_potential(w: Word, f: SamplingFunction, source=None) -> Potential:
    """Evaluate f at every window position of w: |w| - window + 1 samples."""
    k = f.window
    if len(w) < k:
        raise ValueError(f"word of length {len(w)} shorter than window {k}")
    samples = tuple(f.value_at(w[m : m + k]) for m in range(len(w) - k + 1))
    return Potential(samples, source)
