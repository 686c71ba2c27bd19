"""Step formulas, itineraries, torus projections, and cylinder cells."""

import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import CS_STAR_BRANCHES, cs_star_sequence, random_float_point, random_rational_point
from sadic import (
    BRUN,
    CS,
    ProjectiveCell,
    brun_step,
    cell_contains,
    cell_coordinates,
    cs_step,
    cylinder_cell,
    gamma1,
    gamma2,
    itinerary,
    lift,
    normalize_to_fundamental,
    orbit_directive,
    parse_point,
    project,
    simplex_point,
)

F = Fraction


def fpoint(*texts):
    return simplex_point([F(t) for t in texts], exact=True)


def test_cs_step_branch_one():
    y, branch, sub = cs_step(fpoint("1/2", "1/4", "1/4"))
    assert y.coords == (F(1, 3), F(1, 3), F(1, 3))
    assert branch == 1
    assert sub.images == gamma1().images


def test_cs_step_branch_two():
    y, branch, sub = cs_step(fpoint("1/5", "1/5", "3/5"))
    assert y.coords == (F(1, 4), F(1, 4), F(1, 2))
    assert branch == 2
    assert sub.images == gamma2().images


def test_cs_boundary_fixed_point():
    x = fpoint("0", "0", "1")
    y, branch, _ = cs_step(x)
    assert branch == 2 and y.coords == x.coords
    it = itinerary(x, 4, CS)
    assert it.degenerate and it.boundary_step == 0
    assert it.branches == (2, 2, 2, 2)


def test_brun_step_examples():
    y, pair, _ = brun_step(fpoint("2/5", "3/10", "1/5", "1/10"))
    assert pair == (1, 2)
    assert y.coords == (F(1, 7), F(3, 7), F(2, 7), F(1, 7))

    y, pair, _ = brun_step(fpoint("1/4", "1/4", "1/4", "1/4"))
    assert pair == (1, 2)  # full tie broken lexicographically
    assert y.coords == (F(0), F(1, 3), F(1, 3), F(1, 3))

    y, pair, _ = brun_step(fpoint("1/10", "1/10", "1/5", "3/5"))
    assert pair == (4, 3)
    assert y.coords == (F(1, 8), F(1, 8), F(1, 4), F(1, 2))


def test_itinerary_prefix_and_determinism():
    x = fpoint("1/2", "1/4", "1/4")
    assert itinerary(x, 1, CS).branches == (1,)
    a = itinerary(fpoint("355/1000", "113/1000", "532/1000"), 30, CS)
    b = itinerary(fpoint("355/1000", "113/1000", "532/1000"), 30, CS)
    assert a.branches == b.branches
    assert all(p.coords == q.coords for p, q in zip(a.points, b.points))


def test_perron_vector_follows_the_periodic_block():
    # the fixed direction of the block matrix codes to the block itself
    m = np.array(cs_star_sequence().segment_matrix(0, 19), dtype=float)
    vals, vecs = np.linalg.eig(m)
    v = np.abs(vecs[:, np.argmax(vals.real)].real)
    x = simplex_point(list(v / v.sum()), exact=False)
    it = itinerary(x, 40, CS)
    assert not it.degenerate
    assert it.branches == CS_STAR_BRANCHES * 2


def test_step_is_matrix_inverse_action():
    # y = step(x) iff A y is proportional to x, checked exactly per branch
    rng = random.Random(91)
    for algo in (CS, BRUN):
        for _ in range(15):
            x = random_rational_point(rng, algo.dimension)
            y, _branch, sub = algo.step(x)
            cell = ProjectiveCell(sub.matrix())
            assert cell_coordinates(cell, x) == y.coords


def test_float_orbits_stay_on_the_simplex():
    rng = random.Random(92)
    for algo in (CS, BRUN):
        for _ in range(10):
            it = itinerary(random_float_point(rng, algo.dimension), 50, algo)
            for p in it.points:
                assert all(c >= 0 for c in p.coords)
                assert abs(sum(p.coords) - 1.0) <= 1e-12


def test_float_matches_exact_branches():
    rng = random.Random(93)
    for algo in (CS, BRUN):
        for _ in range(25):
            x = random_rational_point(rng, algo.dimension)
            ex = itinerary(x, 25, algo)
            fl = itinerary(simplex_point(x.as_floats(), exact=False), 25, algo)
            if fl.min_branch_margin is not None and fl.min_branch_margin < 1e-9:
                continue  # a near-tie may legitimately flip in float mode
            assert ex.branches == fl.branches


def test_orbit_directive_matches_itinerary():
    x = fpoint("355/1000", "113/1000", "532/1000")
    dv = orbit_directive(x, CS)
    it = itinerary(x, 12, CS)
    assert tuple(s.images for s in dv.prefix(12)) == tuple(
        s.images for s in it.substitutions
    )


def test_project_lift_round_trip():
    assert project(fpoint("1/3", "1/3", "1/3")) == (F(1, 3), F(1, 3))
    assert project(fpoint("1/2", "1/4", "1/4")) == (F(1, 2), F(1, 4))
    rng = random.Random(94)
    for _ in range(100):
        x = random_rational_point(rng, 3)
        assert lift(project(x)).coords == x.coords
    with pytest.raises(ValueError):
        lift((F(3, 4), F(1, 2)))


def test_normalize_to_fundamental():
    ident = ((1, 0), (0, 1))
    rep, m, boundary = normalize_to_fundamental((F(1, 5), F(3, 10)))
    assert rep == (F(1, 5), F(3, 10)) and m == ident and not boundary
    rep, m, boundary = normalize_to_fundamental((F(7, 10), F(4, 5)))
    assert rep == (F(3, 10), F(1, 5)) and m == ((-1, 0), (0, -1)) and not boundary
    rep, m, boundary = normalize_to_fundamental((F(1, 2), F(1, 2)))
    assert rep == (F(1, 2), F(1, 2)) and m == ident and boundary
    # representatives are reduced mod 1 first
    rep, _, _ = normalize_to_fundamental((F(6, 5), F(1, 10)))
    assert rep == (F(1, 5), F(1, 10))


def test_cylinder_cell_vertices():
    cell = cylinder_cell([1], CS)
    assert cell.matrix == gamma1().matrix()
    verts = tuple(v.coords for v in cell.vertices())
    assert verts == (
        (F(1), F(0), F(0)),
        (F(1, 2), F(0), F(1, 2)),
        (F(0), F(1), F(0)),
    )


def test_cell_membership_boundary_conventions():
    p = fpoint("0", "0", "1")
    assert cell_contains(cylinder_cell([2], CS), p)  # weakly, on the cell boundary
    assert not cell_contains(cylinder_cell([1], CS), p)
    assert cell_coordinates(cylinder_cell([2], CS), p) == (F(0), F(0), F(1))
    with pytest.raises(ValueError):
        cell_coordinates(cylinder_cell([1], CS), p)
    assert cell_contains(cylinder_cell([1], CS), fpoint("1/2", "1/4", "1/4"))


def test_cells_nest_along_the_itinerary():
    rng = random.Random(95)
    for _ in range(10):
        x = random_rational_point(rng, 3)
        it = itinerary(x, 12, CS)
        if it.degenerate:
            continue
        for k in range(1, 13):
            assert cell_contains(cylinder_cell(it.branches[:k], CS), x)


def test_simplex_point_validation():
    with pytest.raises(ValueError):
        simplex_point([F(1, 2), F(1, 2), F(1, 4)], exact=True)
    with pytest.raises(ValueError):
        simplex_point([0.5, 0.6, 0.2], exact=False)
    with pytest.raises(ValueError):
        simplex_point([F(-1, 4), F(1, 2), F(3, 4)], exact=True)
    assert parse_point("1/2,1/4,1/4").exact
    assert not parse_point("0.5,0.25,0.25", exact=False).exact
