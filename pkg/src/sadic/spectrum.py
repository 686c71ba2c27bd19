"""Band spectra of periodic discrete Schrodinger operators.

The operator acts on two-sided sequences by

    (H psi)(n) = psi(n+1) + psi(n-1) + V(n) psi(n)

with V periodic of period p.  Its spectrum is the set of energies E
where the trace of the transfer matrix product over one period lies in
[-2, 2]; it is a union of at most p closed bands.  Band edges are the
eigenvalues of the two symmetric p x p matrices obtained by restricting
H to one period with periodic (+1) and antiperiodic (-1) wraparound
coupling: the discriminant equals +2 exactly at the periodic spectrum
and -2 at the antiperiodic one, so sorting the 2p eigenvalues and
pairing them consecutively gives the bands, closed gaps included.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coding import Potential, SamplingFunction, level_words, sample_potential
from .substitution import DirectiveSequence

MERGE_TOL = 1e-9


def transfer_matrix(energy: float, potential) -> np.ndarray:
    """Product of one-step transfer matrices over the potential, last first.

    The one-step matrix at site n is [[E - V(n), -1], [1, 0]]; the product
    propagates a solution across the whole sample.
    """
    samples = potential.samples if isinstance(potential, Potential) else tuple(potential)
    if not samples:
        raise ValueError("empty potential")
    out = np.eye(2)
    for v in samples:
        step = np.array([[energy - v, -1.0], [1.0, 0.0]])
        out = step @ out
    return out


@dataclass(frozen=True)
class BandList:
    """Disjoint closed intervals [lower, upper], sorted."""

    bands: tuple
    period: int

    def __len__(self):
        return len(self.bands)


def total_bandwidth(bands: BandList) -> float:
    return float(sum(u - l for l, u in bands.bands))


def _wrapped_hamiltonian(samples, corner: float) -> np.ndarray:
    p = len(samples)
    h = np.zeros((p, p))
    h[np.arange(p), np.arange(p)] = samples
    for i in range(p):
        j = (i + 1) % p
        w = corner if i == p - 1 else 1.0
        h[i, j] += w
        h[j, i] += w
    return h


def periodic_spectrum(potential, merge_tol: float = MERGE_TOL) -> BandList:
    """Bands of the period-p operator with the given sampled potential."""
    samples = potential.samples if isinstance(potential, Potential) else tuple(potential)
    p = len(samples)
    if p < 1:
        raise ValueError("empty potential")
    edges = np.concatenate(
        [
            np.linalg.eigvalsh(_wrapped_hamiltonian(samples, 1.0)),
            np.linalg.eigvalsh(_wrapped_hamiltonian(samples, -1.0)),
        ]
    )
    edges.sort()
    raw = [(edges[2 * k], edges[2 * k + 1]) for k in range(p)]
    merged = [list(raw[0])]
    for lo, hi in raw[1:]:
        if lo - merged[-1][1] <= merge_tol:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return BandList(tuple((float(l), float(u)) for l, u in merged), p)


@dataclass(frozen=True)
class SpectrumRow:
    level: int
    letter: int
    period: int
    band_count: int
    bandwidth: float
    bands: tuple | None = None


@dataclass(frozen=True)
class SpectrumReport:
    rows: tuple
    skipped: tuple  # (level, period) pairs beyond the period cap

    def bandwidths(self) -> tuple:
        return tuple(row.bandwidth for row in self.rows)


def zero_measure_trend(
    dv: DirectiveSequence,
    f: SamplingFunction,
    levels,
    letter: int = 1,
    period_cap: int = 4000,
    keep_bands: bool = False,
) -> SpectrumReport:
    """Period, band count and total bandwidth across approximant levels.

    For each level the potential is the sampling of the level word of the
    chosen letter, extended periodically.  Levels whose period exceeds
    the cap are reported in ``skipped`` instead of computed.
    """
    levels = sorted(set(levels))
    if not levels:
        raise ValueError("no levels requested")
    rows = []
    skipped = []
    for n in levels:
        lw_n = level_words(dv, n)
        period = lw_n.length(letter) - f.window + 1
        if period > period_cap:
            skipped.append((n, period))
            continue
        pot = sample_potential(lw_n.word(letter), f, source=("level-word", n, letter))
        bl = periodic_spectrum(pot)
        rows.append(
            SpectrumRow(
                n,
                letter,
                bl.period,
                len(bl),
                total_bandwidth(bl),
                bl.bands if keep_bands else None,
            )
        )
    return SpectrumReport(tuple(rows), tuple(skipped))
