"""Lyapunov exponents of the substitution-matrix cocycle.

Along an orbit of a continued fraction map, each step selects a branch
whose substitution matrix feeds a matrix product.  The default product
follows the directive order, earliest matrix leftmost:

    M_n = A(x) A(Tx) ... A(T^{n-1} x)

whose singular value growth is estimated by the Benettin procedure
applied to the transposed matrices in orbit order (the singular values
of a product and of its transpose coincide).  With transpose=True the
cocycle A(T^{n-1} x) ... A(x) is used instead; both conventions carry
the same exponent spectrum almost surely.

Trial starting points are Dirichlet(1,..,1) distributed, drawn from a
counter-based generator keyed by (seed, trial), so results are
independent of how trials are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@dataclass(frozen=True)
class CocycleRun:
    """Parameters of one exponent estimation."""

    algorithm: str = "cs"
    steps: int = 10**6
    burn_in: int = 1000
    reorth_every: int = 1
    seed: int = 0
    transpose: bool = False

    def __post_init__(self):
        if self.algorithm not in ("cs", "brun", "identity"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.steps <= self.burn_in:
            raise ValueError("steps must exceed burn_in")
        if self.reorth_every < 1:
            raise ValueError("reorth_every must be >= 1")


@dataclass(frozen=True)
class ExponentEstimate:
    theta: tuple
    stderr: tuple
    trials: int
    total_steps: int


def _cs_matrices(transpose: bool) -> np.ndarray:
    c1 = np.array([[1, 1, 0], [0, 0, 1], [0, 1, 0]], dtype=np.float64)
    c2 = np.array([[0, 1, 0], [1, 0, 0], [0, 1, 1]], dtype=np.float64)
    mats = np.stack([c1, c2])
    # default estimates the directive-order product via its transpose
    return mats if transpose else mats.transpose(0, 2, 1).copy()


def _brun_matrices(transpose: bool) -> np.ndarray:
    mats = np.zeros((4, 4, 4, 4))
    for i in range(4):
        for j in range(4):
            m = np.eye(4)
            if i != j:
                m[i, j] = 1.0
            mats[i, j] = m
    flat = mats.reshape(16, 4, 4)
    return flat.copy() if transpose else flat.transpose(0, 2, 1).copy()


@njit(cache=True, nogil=True)
def _benettin(x, mats, pick_cs, identity_cocycle, steps, burn_in, reorth_every):
    """Shared kernel: map the point, stack matrices, reorthonormalize.

    pick_cs selects the Cassaigne-Selmer map; otherwise Brun.  Returns
    (per-exponent log sums, ok) with ok False if the orbit degenerated.
    """
    d = x.shape[0]
    q = np.eye(d)
    logs = np.zeros(d)
    pending = 0
    for step in range(steps):
        # branch selection on the current point
        if pick_cs:
            if x[0] >= x[2]:
                k = 0
            else:
                k = 1
        else:
            k = -1
            for i in range(4):
                for j in range(4):
                    if i == j:
                        continue
                    ok_pair = x[i] >= x[j]
                    if ok_pair:
                        for t in range(4):
                            if t != i and t != j and x[j] < x[t]:
                                ok_pair = False
                                break
                    if ok_pair:
                        k = 4 * i + j
                        break
                if k >= 0:
                    break
        if step >= burn_in and not identity_cocycle:
            q = mats[k] @ q
            pending += 1
            if pending == reorth_every:
                for i in range(d):
                    for j in range(i):
                        c = 0.0
                        for t in range(d):
                            c += q[t, i] * q[t, j]
                        for t in range(d):
                            q[t, i] -= c * q[t, j]
                    nrm = 0.0
                    for t in range(d):
                        nrm += q[t, i] * q[t, i]
                    nrm = math.sqrt(nrm)
                    if nrm == 0.0:
                        return logs, False
                    logs[i] += math.log(nrm)
                    for t in range(d):
                        q[t, i] /= nrm
                pending = 0
        # map the point
        if pick_cs:
            if k == 0:
                den = x[0] + x[1]
                if den == 0.0:
                    return logs, False
                y0 = (x[0] - x[2]) / den
                y1 = x[2] / den
                y2 = x[1] / den
            else:
                den = x[1] + x[2]
                if den == 0.0:
                    return logs, False
                y0 = x[1] / den
                y1 = x[0] / den
                y2 = (x[2] - x[0]) / den
            s = y0 + y1 + y2
            x[0] = y0 / s
            x[1] = y1 / s
            x[2] = y2 / s
        else:
            i = k // 4
            j = k % 4
            xi = x[i]
            xj = x[j]
            den = 1.0 - xj
            if den == 0.0:
                return logs, False
            for t in range(4):
                if t == i:
                    x[t] = (xi - xj) / den
                else:
                    x[t] = x[t] / den
            s = x[0] + x[1] + x[2] + x[3]
            for t in range(4):
                x[t] /= s
    if pending > 0:
        for i in range(d):
            for j in range(i):
                c = 0.0
                for t in range(d):
                    c += q[t, i] * q[t, j]
                for t in range(d):
                    q[t, i] -= c * q[t, j]
            nrm = 0.0
            for t in range(d):
                nrm += q[t, i] * q[t, i]
            nrm = math.sqrt(nrm)
            if nrm == 0.0:
                return logs, False
            logs[i] += math.log(nrm)
            for t in range(d):
                q[t, i] /= nrm
    return logs, True


def _draw_start(seed: int, trial: int, d: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=np.uint64([seed, trial])))
    e = rng.exponential(1.0, d)
    return e / e.sum()


def _run_trial(run: CocycleRun, trial: int, mats: np.ndarray, d: int) -> np.ndarray:
    pick_cs = run.algorithm in ("cs", "identity")
    ident = run.algorithm == "identity"
    attempt = 0
    while True:
        x = _draw_start(run.seed, trial + 10**9 * attempt, d)
        logs, ok = _benettin(
            x, mats, pick_cs, ident, run.steps, run.burn_in, run.reorth_every
        )
        if ok:
            return logs / (run.steps - run.burn_in)
        attempt += 1
        if attempt > 10:
            raise RuntimeError("orbit degenerated repeatedly; bad seed?")


def estimate_exponents(run: CocycleRun, trials: int, workers: int = 1) -> ExponentEstimate:
    """Average Benettin exponents over independent trials.

    The per-trial results depend only on (seed, trial), so the estimate
    is identical for any worker count.
    """
    if trials < 2:
        raise ValueError("need at least 2 trials for a standard error")
    d = 3 if run.algorithm in ("cs", "identity") else 4
    mats = _cs_matrices(run.transpose) if d == 3 else _brun_matrices(run.transpose)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda t: _run_trial(run, t, mats, d), range(trials)))
    else:
        rows = [_run_trial(run, t, mats, d) for t in range(trials)]
    table = np.vstack(rows)
    theta = table.mean(axis=0)
    stderr = table.std(axis=0, ddof=1) / math.sqrt(trials)
    order = np.argsort(-theta, kind="stable")
    return ExponentEstimate(
        tuple(float(v) for v in theta[order]),
        tuple(float(v) for v in stderr[order]),
        trials,
        run.steps - run.burn_in,
    )


def check_pisot(est: ExponentEstimate, margin: float = 3.0) -> bool:
    """Pisot-like signature: top exponent positive, second negative,
    both by at least margin standard errors."""
    return (
        est.theta[0] > margin * est.stderr[0]
        and est.theta[1] < -margin * est.stderr[1]
    )


def orbit_branches(x0, steps: int, algorithm: str = "cs") -> tuple:
    """Float-mode branch sequence used by the kernels, for cross-checks."""
    x = np.array([float(v) for v in x0])
    x = x / x.sum()
    out = []
    for _ in range(steps):
        if algorithm == "cs":
            k = 0 if x[0] >= x[2] else 1
            out.append(k + 1)
            if k == 0:
                den = x[0] + x[1]
                y = np.array([(x[0] - x[2]) / den, x[2] / den, x[1] / den])
            else:
                den = x[1] + x[2]
                y = np.array([x[1] / den, x[0] / den, (x[2] - x[0]) / den])
        else:
            pair = None
            for i in range(4):
                for j in range(4):
                    if i != j and x[i] >= x[j] and all(
                        x[j] >= x[t] for t in range(4) if t not in (i, j)
                    ):
                        pair = (i, j)
                        break
                if pair:
                    break
            i, j = pair
            out.append((i + 1, j + 1))
            den = 1.0 - x[j]
            y = x / den
            y[i] = (x[i] - x[j]) / den
        x = y / y.sum()
    return tuple(out)
