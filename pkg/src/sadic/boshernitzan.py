"""Certification of Boshernitzan's criterion from a directive prefix.

The certificate is a window n0 < n1 < n2 < n3 into the directive sequence
such that

  (a) the matrix products over [n0+1, n1] and [n2+1, n3] are positive,
  (b) the composed substitution over [n1+1, n2] realizes, inside a single
      letter image, every letter pair that can ever become adjacent at
      level n1 (it is a "word builder" there), and
  (c) all three composed blocks have column-sum norm at most N.

Together these force every admissible word of length up to
r = min_a |level-n1 word of a| to occur in every level-n3 word, with
uniform cylinder frequency at least C = 1 / (N^3 r): positivity of the
first block caps the spread of level-n1 word lengths at N, the word
builder plus the second positive block make every such word appear in
every level-n3 word, and level-n3 words are at most N^3 r long.

Adjacency at level n1 is never known exactly from a finite prefix, so it
is replaced by a provable superset: pairs realized inside images of the
partial products up to depth j, plus every pair occurring in the depth-j
image of any two-letter word.  Deeper occurrences factor through those
images, so the superset is sound no matter how the sequence continues.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product

from .coding import level_words
from .substitution import (
    DirectiveSequence,
    Substitution,
    is_positive,
    matrix_norm,
)
from .words import Word, count_occurrences, factors


def realized_pairs(sub: Substitution) -> frozenset:
    """Letter pairs occurring inside a single image of the substitution."""
    pairs = set()
    for img in sub.images:
        for i in range(len(img) - 1):
            pairs.add(bytes(img[i : i + 2]))
    return frozenset(pairs)


@dataclass(frozen=True)
class PrecedesSet:
    """A provable superset of the level-n adjacency (precedes) relation."""

    level: int
    depth: int
    pairs: frozenset


def precedes_overapprox(dv: DirectiveSequence, n: int, depth: int) -> PrecedesSet:
    """Sound superset of the pairs adjacent at level n, to search depth.

    Union of (i) pairs realized inside images of the partial products
    over [n+1, n+m] for m = 1..depth and (ii) pairs occurring in the
    depth-j product applied to any two-letter word.  Part (ii) dominates
    every occurrence deeper than the prefix knowledge, so the result
    contains the true relation regardless of the unseen tail.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    d = dv.alphabet_size
    pairs = set()
    seg = None
    for m in range(1, depth + 1):
        term = dv.term(n + m)
        seg = term if seg is None else seg * term
        pairs.update(realized_pairs(seg))
    for a, b in iter_product(range(1, d + 1), repeat=2):
        img = seg.apply(bytes([a, b]))
        for i in range(len(img) - 1):
            pairs.add(bytes(img[i : i + 2]))
    return PrecedesSet(n, depth, frozenset(pairs))


def is_word_builder(sub: Substitution, precedes: PrecedesSet) -> bool:
    """Does the substitution realize every pair of the precedes set?"""
    return precedes.pairs <= realized_pairs(sub)


@dataclass(frozen=True)
class BoshernitzanCertificate:
    n0: int
    n1: int
    n2: int
    n3: int
    norm_bound: int
    word_length: int  # r, the shortest level-n1 word

    @property
    def constant(self) -> Fraction:
        return boshernitzan_constant(self.norm_bound, self.word_length)


def boshernitzan_constant(norm_bound: int, word_length: int) -> Fraction:
    """The certified frequency constant C = 1 / (N^3 r)."""
    if norm_bound < 1 or word_length < 1:
        raise ValueError("norm bound and word length must be >= 1")
    return Fraction(1, norm_bound**3 * word_length)


def _min_column_sum(matrix) -> int:
    d = len(matrix[0])
    return min(sum(row[j] for row in matrix) for j in range(d))


def scan_certificate(
    dv: DirectiveSequence,
    horizon: int,
    norm_bound: int | None = None,
    positivity_cap: int = 8,
    builder_cap: int = 8,
):
    """Search the prefix for a certificate window, or return None.

    Indices range over 0 <= n0 < n1 < n2 < n3 < horizon with the
    positivity blocks at most positivity_cap terms long; the adjacency
    superset at n1 is computed to depth min(builder_cap, n2 - n1).  The
    first window in lexicographic (n3, n0, n1, n2) order wins.  When
    norm_bound is None, no norm filter is applied during the search and
    the bound is read off the winning window afterwards.
    """
    if horizon < 4:
        raise ValueError("horizon must allow four indices")
    dv.prefix(horizon)

    seg_matrix_cache: dict[tuple, tuple] = {}

    def seg_matrix(lo, hi):
        key = (lo, hi)
        if key not in seg_matrix_cache:
            seg_matrix_cache[key] = dv.segment_matrix(lo, hi)
        return seg_matrix_cache[key]

    def norm_ok(m):
        return norm_bound is None or matrix_norm(m) <= norm_bound

    positive_ends: dict[int, list] = {}  # n1 -> [(n0, matrix)]
    for n1 in range(1, horizon):
        rows = []
        for n0 in range(max(0, n1 - positivity_cap), n1):
            m = seg_matrix(n0 + 1, n1)
            if is_positive(m) and norm_ok(m):
                rows.append((n0, m))
        positive_ends[n1] = rows

    builder_cache: dict[tuple, bool] = {}

    def builder_ok(n1, n2):
        key = (n1, n2)
        if key not in builder_cache:
            depth = min(builder_cap, n2 - n1)
            pre = precedes_overapprox(dv, n1, depth)
            seg = dv.segment(n1 + 1, n2)
            builder_cache[key] = is_word_builder(seg, pre) and norm_ok(seg.matrix())
        return builder_cache[key]

    for n3 in range(3, horizon):
        tail_starts = []
        for n2 in range(max(1, n3 - positivity_cap), n3):
            m = seg_matrix(n2 + 1, n3)
            if is_positive(m) and norm_ok(m):
                tail_starts.append(n2)
        if not tail_starts:
            continue
        for n0 in range(0, n3 - 2):
            for n1 in range(n0 + 1, min(n0 + positivity_cap, n3 - 1) + 1):
                if not any(p0 == n0 for p0, _ in positive_ends.get(n1, [])):
                    continue
                for n2 in tail_starts:
                    if n2 <= n1:
                        continue
                    if builder_ok(n1, n2):
                        m01 = seg_matrix(n0 + 1, n1)
                        m12 = seg_matrix(n1 + 1, n2)
                        m23 = seg_matrix(n2 + 1, n3)
                        bound = (
                            norm_bound
                            if norm_bound is not None
                            else max(matrix_norm(m01), matrix_norm(m12), matrix_norm(m23))
                        )
                        lw = level_words(dv, n1)
                        return BoshernitzanCertificate(
                            n0, n1, n2, n3, bound, lw.min_length()
                        )
    return None


def verify_cover(dv: DirectiveSequence, cert: BoshernitzanCertificate) -> bool:
    """Exact combinatorial check of what the certificate promises.

    Enumerates the admissible words of each length up to r as the factors
    of the level-n2 words (where the word-builder argument places them
    all) and tests that each occurs in every level-n3 word.
    """
    if not 0 <= cert.n0 < cert.n1 < cert.n2 < cert.n3:
        raise ValueError("certificate indices out of order")
    lw1 = level_words(dv, cert.n1)
    r = lw1.min_length()
    if r != cert.word_length:
        raise ValueError(f"certificate word length {cert.word_length}, recomputed {r}")
    d = dv.alphabet_size
    lw2 = level_words(dv, cert.n2)
    lw3 = level_words(dv, cert.n3)
    admissible: dict[int, set] = {}
    for a in range(1, d + 1):
        fs = factors(lw2.word(a), r)
        for length, facs in fs.by_length.items():
            admissible.setdefault(length, set()).update(facs)
    targets = [lw3.word(a) for a in range(1, d + 1)]
    for length in range(1, r + 1):
        for w in admissible.get(length, ()):
            if any(count_occurrences(w, t) == 0 for t in targets):
                return False
    return True


def find_block(branches, block) -> tuple:
    """Start indices of (possibly overlapping) occurrences of a branch block."""
    branches = tuple(branches)
    block = tuple(block)
    if not block:
        raise ValueError("empty block")
    hits = []
    for i in range(len(branches) - len(block) + 1):
        if branches[i : i + len(block)] == block:
            hits.append(i)
    return tuple(hits)


def cylinder_frequency(w: Word, text: Word) -> Fraction:
    """Occurrence count of w over the number of windows of its length."""
    if not w:
        raise ValueError("empty word")
    if len(text) < len(w):
        raise ValueError("text shorter than the word")
    windows = len(text) - len(w) + 1
    return Fraction(count_occurrences(w, text), windows)
