"""Shared test data: stock directive blocks, seeded points, brute oracles."""

from fractions import Fraction

from sadic import DirectiveSequence, brun_generators, cs_generators, simplex_point

# (g1 g2)^3, then the word-builder chunk g1 g1 g2 g1 g2 g2 g2 g1, then (g1 g2)^3:
# the stock certified branch block used throughout the suite.
CS_STAR_BRANCHES = (1, 2, 1, 2, 1, 2, 1, 1, 2, 1, 2, 2, 2, 1, 1, 2, 1, 2, 1, 2)
CS_STAR_TEXT = "".join(str(b) for b in CS_STAR_BRANCHES)

# two primitive frames around the pair-collapsing prefix (1,4),(1,3),(1,2)
BRUN_CYCLE = ((1, 2), (2, 3), (3, 4), (4, 1))
BRUN_CERT_BRANCHES = BRUN_CYCLE * 2 + ((1, 4), (1, 3), (1, 2)) + BRUN_CYCLE * 2


def cs_star_sequence(repeat=None):
    gens = cs_generators()
    return DirectiveSequence.from_block(
        [gens[b] for b in CS_STAR_BRANCHES], repeat=repeat
    )


def brun_cert_sequence(repeat=None):
    gens = brun_generators()
    return DirectiveSequence.from_block(
        [gens[p] for p in BRUN_CERT_BRANCHES], repeat=repeat
    )


def random_rational_point(rng, d):
    # large numerators keep exact orbits off the boundary for dozens of steps
    nums = [rng.randint(10**5, 10**6) for _ in range(d)]
    s = sum(nums)
    return simplex_point([Fraction(a, s) for a in nums], exact=True)


def random_float_point(rng, d):
    vals = [rng.random() + 1e-6 for _ in range(d)]
    s = sum(vals)
    return simplex_point([v / s for v in vals], exact=False)


def brute_factors(w, max_length):
    """Quadratic reference enumeration of distinct factors by length."""
    out = {}
    for n in range(1, min(max_length, len(w)) + 1):
        out[n] = {bytes(w[i : i + n]) for i in range(len(w) - n + 1)}
    return out


# one fixed invocation per subcommand, pinned by the golden files
GOLDEN_RUNS = [
    ("orbit.csv", ["orbit", "--point", "1/2,1/4,1/4", "--steps", "6", "--mode", "exact"]),
    ("certify.json", ["certify", "--blocks", CS_STAR_TEXT, "--repeat", "3", "--horizon", "60"]),
    ("words.json", ["words", "--blocks", CS_STAR_TEXT, "--level", "8", "--letter", "1"]),
    ("potential.csv", ["potential", "--blocks", CS_STAR_TEXT, "--level", "6",
                       "--values", "1=0,2=1,3=-1"]),
    ("spectrum.csv", ["spectrum", "--blocks", CS_STAR_TEXT, "--repeat", "2",
                      "--levels", "3,5,8,10", "--values", "1=0,2=1,3=-1"]),
    ("lyapunov.json", ["lyapunov", "--algorithm", "cs", "--steps", "20000",
                       "--trials", "4", "--seed", "7", "--burn-in", "500"]),
    ("complexity.csv", ["complexity", "--blocks", CS_STAR_TEXT, "--repeat", "2",
                        "--level", "10", "--max-n", "12"]),
]
