"""S-adic subshifts from multidimensional continued fraction algorithms.

Builds symbolic codings of the Cassaigne-Selmer and Brun algorithms,
certifies Boshernitzan's uniform cylinder-frequency criterion from
directive prefixes, and computes band spectra of periodic Schrodinger
approximants together with Lyapunov exponents of the matrix cocycle.
"""

__version__ = "0.1.0"

from .words import (  # noqa: F401
    FactorSet,
    Word,
    complexity,
    count_occurrences,
    factors,
    format_word,
    parse_word,
    word,
)
from .substitution import (  # noqa: F401
    DirectiveSequence,
    Substitution,
    brun_beta,
    brun_generators,
    compose,
    compose_all,
    cs_generators,
    gamma1,
    gamma2,
    identity,
    is_positive,
    is_primitive,
    length_ratio_bound,
    matrix_norm,
)
from .mcf import (  # noqa: F401
    BRUN,
    CS,
    BoundaryOrbitError,
    Itinerary,
    ProjectiveCell,
    SimplexPoint,
    brun_step,
    cell_contains,
    cell_coordinates,
    cs_step,
    cylinder_cell,
    itinerary,
    lift,
    normalize_to_fundamental,
    orbit_directive,
    parse_point,
    project,
    simplex_point,
)
from .boshernitzan import (  # noqa: F401
    BoshernitzanCertificate,
    PrecedesSet,
    boshernitzan_constant,
    cylinder_frequency,
    find_block,
    is_word_builder,
    precedes_overapprox,
    realized_pairs,
    scan_certificate,
    verify_cover,
)
from .coding import (  # noqa: F401
    IncompleteSamplingError,
    LevelWords,
    Potential,
    SamplingFunction,
    cylinder_indicator,
    language,
    letter_frequencies,
    letter_sampling,
    level_words,
    sample_potential,
)
from .spectrum import (  # noqa: F401
    BandList,
    SpectrumReport,
    SpectrumRow,
    periodic_spectrum,
    total_bandwidth,
    transfer_matrix,
    zero_measure_trend,
)
from .lyapunov import (  # noqa: F401
    CocycleRun,
    ExponentEstimate,
    check_pisot,
    estimate_exponents,
)
