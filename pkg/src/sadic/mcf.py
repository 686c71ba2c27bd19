"""Multidimensional continued fraction maps on probability simplices.

Two algorithms are built in, both with exact rational and float modes:

Cassaigne-Selmer on the 2-simplex (x1, x2, x3):
    branch 1 when x1 >= x3:  ((x1 - x3)/(x1 + x2), x3/(x1 + x2), x2/(x1 + x2))
    branch 2 when x3 >  x1:  (x2/(x2 + x3), x1/(x2 + x3), (x3 - x1)/(x2 + x3))

Brun on the 3-simplex: pick the pair (i, j), i != j, with
x_i >= x_j >= x_k for every other k (ties broken by the lexicographically
smallest pair), then divide out the second-largest entry:
    x'_k = x_k / (1 - x_j)  for k != i,   x'_i = (x_i - x_j) / (1 - x_j).

Each branch carries a substitution whose abelianization A satisfies the
exact conjugacy  T(x) = A(x)^{-1} x / |A(x)^{-1} x|_1  away from the
simplex boundary, which is what ties itineraries to cylinder cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .substitution import (
    DirectiveSequence,
    Matrix,
    Substitution,
    brun_generators,
    cs_generators,
    mat_identity,
    mat_mul,
)

_FLOAT_SUM_TOL = 1e-12
_NEAR_BOUNDARY = 1e-9


class BoundaryOrbitError(RuntimeError):
    """A step could not proceed (zero denominator for the selected branch)."""


@dataclass(frozen=True)
class SimplexPoint:
    """A point of the probability simplex, exact (Fraction) or float."""

    coords: tuple
    exact: bool

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def on_boundary(self) -> bool:
        return any(c == 0 for c in self.coords)

    def as_floats(self) -> tuple:
        return tuple(float(c) for c in self.coords)


def simplex_point(values, exact=None) -> SimplexPoint:
    """Validate and normalize coordinates into a SimplexPoint.

    Exact coordinates must sum to 1 on the nose; float coordinates may be
    off by at most 1e-12 and are renormalized.
    """
    values = list(values)
    if len(values) < 2:
        raise ValueError("need at least 2 coordinates")
    if exact is None:
        exact = not any(isinstance(v, float) for v in values)
    if exact:
        coords = tuple(Fraction(v) for v in values)
        if any(c < 0 for c in coords):
            raise ValueError("negative coordinate")
        if sum(coords) != 1:
            raise ValueError(f"coordinates sum to {sum(coords)}, not 1")
        return SimplexPoint(coords, True)
    coords = [float(v) for v in values]
    if any(c < 0 for c in coords):
        raise ValueError("negative coordinate")
    s = sum(coords)
    if abs(s - 1.0) > _FLOAT_SUM_TOL:
        raise ValueError(f"coordinates sum to {s}, not 1 within 1e-12")
    return SimplexPoint(tuple(c / s for c in coords), False)


def parse_point(text: str, exact: bool = True) -> SimplexPoint:
    """Parse '1/2,1/4,1/4' or '0.5,0.25,0.25' as a simplex point."""
    parts = [p.strip() for p in text.split(",")]
    if exact:
        return simplex_point([Fraction(p) for p in parts], exact=True)
    return simplex_point([float(Fraction(p)) for p in parts], exact=False)


def _renorm(coords, exact):
    if exact:
        return tuple(coords)
    fixed = []
    for c in coords:
        if c < 0:
            if c < -_FLOAT_SUM_TOL:
                raise ValueError(f"negative coordinate {c} after step")
            c = 0.0
        fixed.append(c)
    s = sum(fixed)
    return tuple(c / s for c in fixed)


def cs_step(x: SimplexPoint):
    """One Cassaigne-Selmer step: (image point, branch, substitution)."""
    if x.dimension != 3:
        raise ValueError("Cassaigne-Selmer acts on 3 coordinates")
    x1, x2, x3 = x.coords
    gens = cs_generators()
    if x1 >= x3:
        den = x1 + x2
        if den == 0:
            raise BoundaryOrbitError("zero denominator on branch 1")
        new = ((x1 - x3) / den, x3 / den, x2 / den)
        branch = 1
    else:
        den = x2 + x3
        if den == 0:
            raise BoundaryOrbitError("zero denominator on branch 2")
        new = (x2 / den, x1 / den, (x3 - x1) / den)
        branch = 2
    return SimplexPoint(_renorm(new, x.exact), x.exact), branch, gens[branch]


def _brun_pair(coords):
    d = len(coords)
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            if i == j:
                continue
            xi, xj = coords[i - 1], coords[j - 1]
            if xi >= xj and all(
                xj >= coords[k - 1] for k in range(1, d + 1) if k not in (i, j)
            ):
                return i, j
    raise AssertionError("no sorting pair found")  # unreachable on the simplex


def brun_step(x: SimplexPoint):
    """One Brun step: (image point, pair (i, j), substitution)."""
    if x.dimension != 4:
        raise ValueError("Brun acts on 4 coordinates")
    i, j = _brun_pair(x.coords)
    den = 1 - x.coords[j - 1]
    if den == 0:
        raise BoundaryOrbitError(f"zero denominator for pair ({i},{j})")
    new = []
    for k in range(1, 5):
        if k == i:
            new.append((x.coords[i - 1] - x.coords[j - 1]) / den)
        else:
            new.append(x.coords[k - 1] / den)
    return SimplexPoint(_renorm(new, x.exact), x.exact), (i, j), brun_generators()[(i, j)]


@dataclass(frozen=True)
class Algorithm:
    """A piecewise-projective map given by a stepper and branch matrices."""

    name: str
    dimension: int
    step: callable
    branch_substitution: callable


def _cs_branch_sub(branch):
    return cs_generators()[branch]


def _brun_branch_sub(branch):
    return brun_generators()[tuple(branch)]


CS = Algorithm("cs", 3, cs_step, _cs_branch_sub)
BRUN = Algorithm("brun", 4, brun_step, _brun_branch_sub)

_ALGORITHMS = {"cs": CS, "brun": BRUN}


def get_algorithm(algorithm) -> Algorithm:
    if isinstance(algorithm, Algorithm):
        return algorithm
    try:
        return _ALGORITHMS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}") from None


@dataclass(frozen=True)
class Itinerary:
    """Branches and substitutions read off an orbit.

    The built-in maps are total on the closed simplex, so all requested
    steps are taken; ``boundary_step`` records the first time the orbit
    touched the simplex boundary (a zero coordinate), after which the
    symbolic coding is degenerate.  ``branches`` can be shorter than
    requested only if a step raised, e.g. for a custom algorithm whose
    cells do not cover the boundary; then ``terminated_early`` is True.
    """

    algorithm: str
    start: SimplexPoint
    branches: tuple
    substitutions: tuple
    points: tuple
    boundary_step: int | None
    terminated_early: bool
    min_branch_margin: float | None = None

    @property
    def degenerate(self) -> bool:
        return self.boundary_step is not None

    def directive(self) -> DirectiveSequence:
        return DirectiveSequence.from_list(self.substitutions)


def _branch_margin(algo, coords):
    vals = [float(c) for c in coords]
    if algo.name == "cs":
        return abs(vals[0] - vals[2])
    srt = sorted(vals, reverse=True)
    return min(srt[0] - srt[1], srt[1] - srt[2])


def itinerary(x: SimplexPoint, steps: int, algorithm="cs") -> Itinerary:
    """Iterate the map, recording branch, substitution and point per step."""
    algo = get_algorithm(algorithm)
    if x.dimension != algo.dimension:
        raise ValueError(
            f"{algo.name} needs {algo.dimension} coordinates, got {x.dimension}"
        )
    if steps < 0:
        raise ValueError("steps must be >= 0")
    branches = []
    subs = []
    points = []
    boundary = None
    early = False
    margin = None
    cur = x
    for n in range(steps):
        if boundary is None and cur.on_boundary():
            boundary = n
        if not cur.exact:
            m = _branch_margin(algo, cur.coords)
            margin = m if margin is None else min(margin, m)
        try:
            cur, branch, sub = algo.step(cur)
        except BoundaryOrbitError:
            early = True
            break
        branches.append(branch)
        subs.append(sub)
        points.append(cur)
    if boundary is None and points and points[-1].on_boundary():
        boundary = steps
    return Itinerary(
        algo.name,
        x,
        tuple(branches),
        tuple(subs),
        tuple(points),
        boundary,
        early,
        margin,
    )


def orbit_directive(x: SimplexPoint, algorithm="cs") -> DirectiveSequence:
    """Lazy directive sequence read off the orbit of x."""
    algo = get_algorithm(algorithm)
    state = {"point": x}

    def extend(_k):
        nxt, _branch, sub = algo.step(state["point"])
        state["point"] = nxt
        return sub

    return DirectiveSequence([], extend=extend)


# torus fundamental domain

def project(x: SimplexPoint) -> tuple:
    """Drop the last coordinate: the simplex maps onto {sum <= 1}."""
    return x.coords[:-1]


def lift(alpha, exact=None) -> SimplexPoint:
    """Inverse of project: append 1 - sum.  Requires sum(alpha) <= 1."""
    alpha = list(alpha)
    if exact is None:
        exact = not any(isinstance(v, float) for v in alpha)
    vals = [Fraction(v) if exact else float(v) for v in alpha]
    s = sum(vals)
    if s > 1:
        raise ValueError(f"coordinates sum to {s} > 1, outside the domain")
    if any(v < 0 for v in vals):
        raise ValueError("negative coordinate")
    vals.append(1 - s)
    return simplex_point(vals, exact=exact)


def normalize_to_fundamental(alpha):
    """Map a torus point into the fundamental domain {sum <= 1}.

    Returns (representative, matrix, on_boundary) where matrix is I when
    the reduced representative already lies in the domain and -I when the
    point had to be negated.  Points whose representative sums to exactly
    1 sit on the folding line; they are returned unchanged and flagged.
    """
    vals = [v % 1 for v in alpha]
    exact = not any(isinstance(v, float) for v in vals)
    s = sum(vals)
    d = len(vals)
    ident = mat_identity(d)
    if (s == 1) if exact else abs(s - 1) <= _FLOAT_SUM_TOL:
        return tuple(vals), ident, True
    if s < 1:
        return tuple(vals), ident, False
    neg = tuple((-v) % 1 for v in vals)
    minus = tuple(tuple(-e for e in row) for row in ident)
    return neg, minus, False


# cylinder cells

@dataclass(frozen=True)
class ProjectiveCell:
    """Image of the simplex under a product of branch matrices."""

    matrix: Matrix

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    def vertices(self) -> tuple:
        """Columns of the matrix, normalized to the simplex (exact)."""
        d = self.dimension
        verts = []
        for j in range(d):
            col = [Fraction(self.matrix[i][j]) for i in range(d)]
            s = sum(col)
            if s == 0:
                raise ValueError("zero column, cell is degenerate")
            verts.append(simplex_point([c / s for c in col], exact=True))
        return tuple(verts)


def cylinder_cell(branches, algorithm="cs") -> ProjectiveCell:
    """Cell of points whose itinerary starts with the given branches."""
    algo = get_algorithm(algorithm)
    out = mat_identity(algo.dimension)
    for b in branches:
        out = mat_mul(out, algo.branch_substitution(b).matrix())
    return ProjectiveCell(out)


def _solve_exact(m: Matrix, rhs):
    """Solve m y = rhs over the rationals by Gaussian elimination."""
    d = len(m)
    aug = [[Fraction(m[i][j]) for j in range(d)] + [Fraction(rhs[i])] for i in range(d)]
    for col in range(d):
        pivot = next((r for r in range(col, d) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular cell matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(d):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return tuple(aug[i][d] for i in range(d))


def _raw_preimage(cell: ProjectiveCell, x: SimplexPoint) -> tuple:
    if x.dimension != cell.dimension:
        raise ValueError("dimension mismatch")
    rhs = [Fraction(c) for c in x.coords]
    return _solve_exact(cell.matrix, rhs)


def cell_coordinates(cell: ProjectiveCell, x: SimplexPoint) -> tuple:
    """Exact preimage y with cell.matrix y proportional to x, normalized.

    Float coordinates are promoted to exact rationals first, so membership
    decisions are never rounded.
    """
    y = _raw_preimage(cell, x)
    s = sum(y)
    if s == 0:
        raise ValueError("preimage sums to zero, x is outside the cell")
    return tuple(v / s for v in y)


def cell_contains(cell: ProjectiveCell, x: SimplexPoint) -> bool:
    """Membership with weak inequalities: cell boundaries count as inside.

    The preimage of a contained point is never all-negative (the matrix is
    nonnegative and x sums to 1), so the sign check on the raw solution
    decides membership up to positive scale.
    """
    return all(v >= 0 for v in _raw_preimage(cell, x))
