"""Exact-arithmetic toolkit for binary voting games.

Represents weighted, complete simple, explicit, and Boolean-combined
games; computes Shapley-Shubik and Penrose-Banzhaf power distributions
as exact rationals; enumerates all weighted and complete simple games
for small voter counts with certified counts; measures how far complete
simple games sit from their best weighted approximations; and solves
inverse problems (find a weighted game matching a target distribution).
"""

from .certified import CountMismatchError
from .council import council_game, parse_populations
from .enumeration import (
    CatalogFormatError,
    GameCatalog,
    check_certified_count,
    enumerate_complete,
    enumerate_simple4,
    enumerate_weighted,
    iter_complete_chunks,
    read_catalog,
    weighted_certificate,
    write_catalog,
)
from .games import (
    BoolCombo,
    CompleteGame,
    DesirabilityOutcome,
    ExplicitGame,
    Game,
    GameParseError,
    WeightedGame,
    add_null_voters,
    canonical_table,
    coalition_mask,
    coalition_members,
    desirability,
    dominates,
    evaluate,
    game_to_text,
    is_complete,
    is_weighted,
    parse_game,
    shift_maximal_losing,
    shift_minimal_winning,
    sort_by_desirability,
    to_explicit,
)
from .geometry import (
    GapReport,
    GapTracker,
    Metric,
    VectorFormatError,
    VectorStore,
    build_store,
    count_distinct,
    distance,
    omega,
    read_vectors,
    store_from_rows,
    write_vectors,
)
from .indices import (
    KINDS,
    PowerVector,
    SwingCounts,
    decimal_str,
    pbi,
    pbi_dp,
    power_vector,
    ssi,
    ssi_dp,
    swing_counts,
    swing_counts_dp,
)
from .inverse import (
    InverseMode,
    InverseResult,
    PaddedSearchReport,
    Target,
    beta_target,
    inverse_exact,
    inverse_heuristic,
    padded_target_search,
    parse_target_file,
)
from .pipeline import (
    big_files_present,
    build_big_tables,
    default_cache_dir,
    ensure_catalog,
    ensure_store,
    ensure_vectors,
    omega_big,
)

__version__ = "0.1.0"

__all__ = [
    "BoolCombo",
    "CatalogFormatError",
    "CompleteGame",
    "CountMismatchError",
    "DesirabilityOutcome",
    "ExplicitGame",
    "Game",
    "GameCatalog",
    "GameParseError",
    "GapReport",
    "GapTracker",
    "InverseMode",
    "InverseResult",
    "KINDS",
    "Metric",
    "PaddedSearchReport",
    "PowerVector",
    "SwingCounts",
    "Target",
    "VectorFormatError",
    "VectorStore",
    "WeightedGame",
    "add_null_voters",
    "beta_target",
    "big_files_present",
    "build_big_tables",
    "build_store",
    "canonical_table",
    "check_certified_count",
    "coalition_mask",
    "coalition_members",
    "council_game",
    "count_distinct",
    "decimal_str",
    "default_cache_dir",
    "desirability",
    "distance",
    "dominates",
    "ensure_catalog",
    "ensure_store",
    "ensure_vectors",
    "enumerate_complete",
    "enumerate_simple4",
    "enumerate_weighted",
    "evaluate",
    "game_to_text",
    "inverse_exact",
    "inverse_heuristic",
    "is_complete",
    "is_weighted",
    "iter_complete_chunks",
    "omega",
    "omega_big",
    "padded_target_search",
    "parse_game",
    "parse_populations",
    "parse_target_file",
    "pbi",
    "pbi_dp",
    "power_vector",
    "read_catalog",
    "read_vectors",
    "shift_maximal_losing",
    "shift_minimal_winning",
    "sort_by_desirability",
    "ssi",
    "ssi_dp",
    "store_from_rows",
    "swing_counts",
    "swing_counts_dp",
    "to_explicit",
    "weighted_certificate",
    "write_catalog",
    "write_vectors",
]
