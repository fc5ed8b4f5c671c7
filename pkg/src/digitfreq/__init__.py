"""digitfreq: exact digit frequencies of greedy beta-expansions.

The package computes, with certified exact arithmetic, the set of digit
frequencies realised by expansions in a non-integer base, via the itinerary
of an associated simplex map, and cross-checks the results against loop
frequencies of Markov partitions when the orbit data is finite.
"""

from .cfk import (
    INF,
    FiniteItinerary,
    PeriodicItinerary,
    RationalItinerary,
    TruncatedItinerary,
    cf_inverse,
    cf_inverse_chain,
    cf_step,
    compare_itineraries,
    format_itinerary,
    hilbert_diameter,
    infimax,
    itinerary_from_kneading,
    itinerary_metric,
    itinerary_of,
    parse_itinerary,
    simplex_images,
    substitute,
    unsubstitute,
)
from .dfset import (
    AngleCertificate,
    DFSandwich,
    Forcing,
    LockInterval,
    Polytope,
    compare_angles,
    df_of_beta,
    df_polytope,
    df_sandwich,
    forcing_compare,
    lock_interval,
    membership,
    theta_sequence,
)
from .errors import (
    DigitFreqError,
    FaceError,
    InsufficientDigits,
    NotMarkovError,
    NotMaximalInput,
    PrecisionExhausted,
    RootIsolationError,
)
from .exact_arith import (
    AlgebraicNumber,
    IntegerPolynomial,
    compare_values,
    format_rational,
    isolate_root,
    parse_rational,
    poly_from_kneading,
)
from .markov_oracle import (
    MarkovPartition,
    TransitionGraph,
    build_partition,
    loop_frequency,
    loops_report,
    minimal_loops,
    oracle_hull,
)
from .symbolic import (
    EventuallyPeriodic,
    Order,
    Stream,
    Undecided,
    Word,
    base_alphabet_size,
    compare_seqs,
    compare_words,
    digit_freq,
    format_freq,
    format_seq,
    greedy_digits,
    is_maximal,
    kneading_digits,
    parse_freq,
    parse_seq,
    prefix_freq_trajectory,
    w_beta,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraicNumber",
    "AngleCertificate",
    "DFSandwich",
    "DigitFreqError",
    "EventuallyPeriodic",
    "FaceError",
    "FiniteItinerary",
    "Forcing",
    "INF",
    "InsufficientDigits",
    "IntegerPolynomial",
    "LockInterval",
    "MarkovPartition",
    "NotMarkovError",
    "NotMaximalInput",
    "Order",
    "PeriodicItinerary",
    "Polytope",
    "PrecisionExhausted",
    "RationalItinerary",
    "RootIsolationError",
    "Stream",
    "TransitionGraph",
    "TruncatedItinerary",
    "Undecided",
    "Word",
    "base_alphabet_size",
    "build_partition",
    "cf_inverse",
    "cf_inverse_chain",
    "cf_step",
    "compare_angles",
    "compare_itineraries",
    "compare_seqs",
    "compare_values",
    "compare_words",
    "df_of_beta",
    "df_polytope",
    "df_sandwich",
    "digit_freq",
    "forcing_compare",
    "format_freq",
    "format_itinerary",
    "format_rational",
    "format_seq",
    "greedy_digits",
    "hilbert_diameter",
    "infimax",
    "is_maximal",
    "isolate_root",
    "itinerary_from_kneading",
    "itinerary_metric",
    "itinerary_of",
    "kneading_digits",
    "lock_interval",
    "loop_frequency",
    "loops_report",
    "membership",
    "minimal_loops",
    "oracle_hull",
    "parse_freq",
    "parse_itinerary",
    "parse_rational",
    "parse_seq",
    "poly_from_kneading",
    "prefix_freq_trajectory",
    "simplex_images",
    "substitute",
    "theta_sequence",
    "unsubstitute",
    "w_beta",
]
