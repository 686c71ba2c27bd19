import math
import random

import numpy as np
import pytest

from conftest import cs_star_sequence
from sadic import (
    letter_sampling,
    periodic_spectrum,
    total_bandwidth,
    transfer_matrix,
    zero_measure_trend,
)
from sadic.spectrum import _wrapped_hamiltonian


def test_transfer_matrix_examples():
    assert np.allclose(transfer_matrix(0.0, [0.0]), [[0.0, -1.0], [1.0, 0.0]])
    for e, v in ((2.5, 0.3), (-1.0, 0.7)):
        assert np.isclose(np.trace(transfer_matrix(e, [v])), e - v)
    rng = random.Random(71)
    for _ in range(20):
        e, a, b = (rng.uniform(-5, 5) for _ in range(3))
        t = np.trace(transfer_matrix(e, [a, b]))
        assert np.isclose(t, (e - a) * (e - b) - 2)


def test_transfer_matrix_determinant_one():
    # det of a 2x2 with entries of size s carries roundoff ~ s^2 * eps,
    # so the tolerance has to scale accordingly for long products
    rng = random.Random(72)
    for _ in range(30):
        n = rng.randint(1, 50)
        v = [rng.uniform(-3, 3) for _ in range(n)]
        e = rng.uniform(-10, 10)
        m = transfer_matrix(e, v)
        scale = max(1.0, float(np.abs(m).max()) ** 2)
        assert abs(np.linalg.det(m) - 1.0) < 1e-12 * scale


def test_transfer_trace_is_monic_of_degree_p():
    # trace ~ prod(E - v_m) for large E; subleading terms fall off like E^-2
    rng = random.Random(73)
    e = 1e4
    for p in range(1, 21):
        v = [rng.uniform(-3, 3) for _ in range(p)]
        lead = math.prod(e - x for x in v)
        assert abs(np.trace(transfer_matrix(e, v)) / lead - 1.0) < 1e-6


def test_free_spectrum():
    bl = periodic_spectrum([0.0])
    assert len(bl) == 1 and bl.period == 1
    lo, hi = bl.bands[0]
    assert abs(lo + 2.0) < 1e-8 and abs(hi - 2.0) < 1e-8
    assert abs(total_bandwidth(bl) - 4.0) < 1e-8


def test_period_two_spectrum():
    # |E^2 - 3| <= 2 solves to two symmetric bands
    bl = periodic_spectrum([1.0, -1.0])
    assert len(bl) == 2
    r5 = math.sqrt(5.0)
    (a, b), (c, d) = bl.bands
    assert abs(a + r5) < 1e-8 and abs(b + 1.0) < 1e-8
    assert abs(c - 1.0) < 1e-8 and abs(d - r5) < 1e-8
    assert abs(total_bandwidth(bl) - 2 * (r5 - 1)) < 1e-8


def test_band_edges_are_wrapped_eigenvalues():
    rng = random.Random(74)
    for _ in range(10):
        p = rng.randint(2, 12)
        v = [rng.uniform(-2, 2) for _ in range(p)]
        bl = periodic_spectrum(v, merge_tol=-1.0)  # keep all p bands separate
        assert len(bl) == p
        edges = sorted(
            np.concatenate(
                [
                    np.linalg.eigvalsh(_wrapped_hamiltonian(tuple(v), 1.0)),
                    np.linalg.eigvalsh(_wrapped_hamiltonian(tuple(v), -1.0)),
                ]
            )
        )
        flat = [x for band in bl.bands for x in band]
        assert np.allclose(flat, edges, atol=1e-10)


def test_bands_ordered_and_disjoint():
    rng = random.Random(75)
    for _ in range(10):
        p = rng.randint(1, 30)
        v = [rng.choice([0.0, 1.0, -1.0]) for _ in range(p)]
        bl = periodic_spectrum(v)
        assert len(bl) <= p
        for lo, hi in bl.bands:
            assert lo <= hi
        for (_, hi), (lo, _) in zip(bl.bands, bl.bands[1:]):
            assert hi < lo


def test_bands_match_trace_condition():
    rng = random.Random(76)
    for _ in range(5):
        p = rng.randint(2, 6)
        v = [rng.uniform(-1.5, 1.5) for _ in range(p)]
        bl = periodic_spectrum(v)
        grid = np.linspace(-5, 5, 2001)
        for e in grid:
            inside = any(lo - 1e-7 <= e <= hi + 1e-7 for lo, hi in bl.bands)
            tr = abs(np.trace(transfer_matrix(float(e), v)))
            if tr <= 2.0 - 1e-7:
                assert inside
            if not inside:
                assert tr >= 2.0 - 1e-6


def test_spectrum_shift_covariance():
    rng = random.Random(77)
    v = [rng.uniform(-1, 1) for _ in range(6)]
    base = periodic_spectrum(v)
    for c in (0.5, -2.0):
        shifted = periodic_spectrum([x + c for x in v])
        assert len(shifted) == len(base)
        for (a, b), (a2, b2) in zip(base.bands, shifted.bands):
            assert abs(a2 - a - c) < 1e-9 and abs(b2 - b - c) < 1e-9


def test_trend_constant_potential_is_flat():
    dv = cs_star_sequence()
    f = letter_sampling({1: 0.7, 2: 0.7, 3: 0.7})
    rep = zero_measure_trend(dv, f, [3, 5, 8, 10])
    for row in rep.rows:
        assert row.band_count == 1
        assert abs(row.bandwidth - 4.0) < 1e-8


def test_trend_periods_and_cap():
    dv = cs_star_sequence()
    f = letter_sampling({1: 0.0, 2: 1.0, 3: -1.0})
    rep = zero_measure_trend(dv, f, [3, 5, 8, 10, 11], period_cap=25)
    periods = [row.period for row in rep.rows]
    assert periods == [3, 5, 12, 21]
    assert rep.skipped == ((11, 26),)


def test_trend_bandwidth_never_grows_on_certified_block():
    dv = cs_star_sequence()
    f = letter_sampling({1: 0.0, 2: 1.0, 3: -1.0})
    rep = zero_measure_trend(dv, f, list(range(3, 16)), keep_bands=True)
    bw = rep.bandwidths()
    for a, b in zip(bw, bw[1:]):
        assert b <= a + 1e-6  # equal-period neighbours repeat the same word
    assert all(row.bands is not None for row in rep.rows)


def test_empty_inputs_rejected():
    with pytest.raises(ValueError):
        periodic_spectrum([])
    with pytest.raises(ValueError):
        transfer_matrix(0.0, [])
    with pytest.raises(ValueError):
        zero_measure_trend(cs_star_sequence(), letter_sampling({1: 0.0}), [])
