"""Substitutions on {1..d}, their abelianizations, and directive sequences.

Composition is written left to right in application order: in a product
``compose(s, t)`` the right factor acts first on letters, the left factor
acts last, matching the usual convention for directive sequences where
the earliest term is the outermost map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .words import Word, format_word, parse_word, word

Matrix = tuple  # tuple of row tuples, exact integers


@dataclass(frozen=True)
class Substitution:
    """A morphism a -> images[a-1] with nonempty images over {1..d}."""

    images: tuple

    def __post_init__(self):
        d = len(self.images)
        if d < 1:
            raise ValueError("empty alphabet")
        for img in self.images:
            if len(img) == 0:
                raise ValueError("images must be nonempty")
            if any(a < 1 or a > d for a in img):
                raise ValueError("image letter outside alphabet")

    @property
    def alphabet_size(self) -> int:
        return len(self.images)

    def image(self, a: int) -> Word:
        if not 1 <= a <= len(self.images):
            raise ValueError(f"letter {a} outside alphabet")
        return self.images[a - 1]

    def apply(self, w: Word) -> Word:
        imgs = self.images
        if any(a > len(imgs) for a in w):
            raise ValueError("word letter outside alphabet")
        return b"".join(imgs[a - 1] for a in w)

    def matrix(self) -> Matrix:
        """Abelianization: entry [a][b] counts letter a in the image of b."""
        d = len(self.images)
        return tuple(
            tuple(self.images[b].count(a + 1) for b in range(d)) for a in range(d)
        )

    def __mul__(self, other: "Substitution") -> "Substitution":
        return compose(self, other)

    def __pow__(self, k: int) -> "Substitution":
        if k < 1:
            raise ValueError("power must be >= 1")
        out = self
        for _ in range(k - 1):
            out = compose(out, self)
        return out

    def to_lines(self) -> str:
        return "\n".join(
            f"{a + 1}:{format_word(img)}" for a, img in enumerate(self.images)
        )

    @classmethod
    def from_lines(cls, text: str) -> "Substitution":
        images = {}
        for line in text.strip().splitlines():
            left, _, right = line.partition(":")
            images[int(left)] = parse_word(right)
        d = len(images)
        if sorted(images) != list(range(1, d + 1)):
            raise ValueError("lines must cover letters 1..d exactly once")
        return cls(tuple(images[a] for a in range(1, d + 1)))


def compose(outer: Substitution, inner: Substitution) -> Substitution:
    """outer after inner: (outer*inner)(a) = outer(inner(a))."""
    if outer.alphabet_size != inner.alphabet_size:
        raise ValueError("alphabet sizes differ")
    return Substitution(tuple(outer.apply(img) for img in inner.images))


def compose_all(seq) -> Substitution:
    """Product of a nonempty sequence, first element outermost."""
    seq = list(seq)
    if not seq:
        raise ValueError("empty product")
    out = seq[-1]
    for s in reversed(seq[:-1]):
        out = compose(s, out)
    return out


def identity(d: int) -> Substitution:
    return Substitution(tuple(word([a]) for a in range(1, d + 1)))


# exact integer matrix helpers

def mat_identity(d: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    if len(a[0]) != k:
        raise ValueError("shape mismatch")
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m))
        for i in range(n)
    )


def mat_pow(a: Matrix, k: int) -> Matrix:
    if k < 0:
        raise ValueError("negative power")
    out = mat_identity(len(a))
    for _ in range(k):
        out = mat_mul(out, a)
    return out


def mat_vec(a: Matrix, v) -> tuple:
    return tuple(sum(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a)))


def mat_det(a: Matrix):
    """Exact determinant by fraction-free expansion (small d)."""
    d = len(a)
    if d == 1:
        return a[0][0]
    total = 0
    for j in range(d):
        minor = tuple(row[:j] + row[j + 1 :] for row in a[1:])
        sign = -1 if j % 2 else 1
        total += sign * a[0][j] * mat_det(minor)
    return total


def is_positive(a: Matrix) -> bool:
    return all(x > 0 for row in a for x in row)


def matrix_norm(a: Matrix) -> int:
    """Maximum column sum.  For an abelianization this is the longest image."""
    d = len(a[0])
    return max(sum(row[j] for row in a) for j in range(d))


def length_ratio_bound(a: Matrix) -> Fraction:
    """max M[i][j] / M[i][j'] over rows i; requires a positive matrix.

    Bounds the spread of image lengths after applying a positive block.
    """
    if not is_positive(a):
        raise ValueError("length ratio bound needs a positive matrix")
    return max(Fraction(max(row), min(row)) for row in a)


def is_primitive(sub: Substitution, k_max: int):
    """Smallest k <= k_max with a positive k-th matrix power, else None."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    m = sub.matrix()
    p = m
    for k in range(1, k_max + 1):
        if is_positive(p):
            return k
        p = mat_mul(p, m)
    return None


# named generators

def gamma1() -> Substitution:
    """Cassaigne-Selmer generator for the first branch: 1->1, 2->13, 3->2."""
    return Substitution((word([1]), word([1, 3]), word([2])))


def gamma2() -> Substitution:
    """Cassaigne-Selmer generator for the second branch: 1->2, 2->13, 3->3."""
    return Substitution((word([2]), word([1, 3]), word([3])))


def brun_beta(i: int, j: int, d: int = 4) -> Substitution:
    """Brun generator: j -> ij, every other letter fixed."""
    if i == j or not (1 <= i <= d and 1 <= j <= d):
        raise ValueError(f"bad Brun index pair ({i},{j})")
    images = [word([a]) for a in range(1, d + 1)]
    images[j - 1] = word([i, j])
    return Substitution(tuple(images))


def cs_generators() -> dict:
    return {1: gamma1(), 2: gamma2()}


def brun_generators(d: int = 4) -> dict:
    return {
        (i, j): brun_beta(i, j, d)
        for i in range(1, d + 1)
        for j in range(1, d + 1)
        if i != j
    }


class DirectiveSequence:
    """A lazily extensible sequence of substitutions over one alphabet.

    Backed by an explicit finite list, a periodic block, or any callable
    index -> Substitution.  Terms are cached as they are materialized.
    """

    def __init__(self, prefix, extend=None):
        self._terms = list(prefix)
        self._extend = extend
        if not self._terms and extend is None:
            raise ValueError("empty directive sequence")
        sizes = {s.alphabet_size for s in self._terms}
        if len(sizes) > 1:
            raise ValueError("mixed alphabet sizes")

    @classmethod
    def from_list(cls, subs) -> "DirectiveSequence":
        return cls(list(subs))

    @classmethod
    def from_block(cls, block, repeat=None) -> "DirectiveSequence":
        """Periodic sequence block,block,...; finite if repeat is given."""
        block = list(block)
        if not block:
            raise ValueError("empty block")
        if repeat is not None:
            return cls(block * repeat)
        return cls([], extend=lambda k: block[k % len(block)])

    def term(self, k: int) -> Substitution:
        if k < 0:
            raise ValueError("negative index")
        while k >= len(self._terms):
            if self._extend is None:
                raise IndexError(
                    f"directive prefix has {len(self._terms)} terms, need {k + 1}"
                )
            self._terms.append(self._extend(len(self._terms)))
        return self._terms[k]

    def prefix(self, n: int) -> tuple:
        """The first n terms as a tuple."""
        if n > 0:
            self.term(n - 1)
        return tuple(self._terms[:n])

    def known_length(self) -> int:
        return len(self._terms)

    @property
    def is_finite(self) -> bool:
        return self._extend is None

    @property
    def alphabet_size(self) -> int:
        return self.term(0).alphabet_size

    def segment(self, lo: int, hi: int) -> Substitution:
        """Composed product of terms lo..hi inclusive, term lo outermost."""
        if lo > hi:
            raise ValueError("empty segment")
        return compose_all(self.term(k) for k in range(lo, hi + 1))

    def segment_matrix(self, lo: int, hi: int) -> Matrix:
        out = mat_identity(self.alphabet_size)
        for k in range(lo, hi + 1):
            out = mat_mul(out, self.term(k).matrix())
        return out
