"""Exact simulator, verifier, and bounded optimality search for two-party
correlation reductions (oblivious transfer, oblivious keys, and the
perfectly correlated nonlocal pair box).

Everything verification-related is computed in exact rational arithmetic in
the C++ core; this package is a thin JSON-round-trip surface over it.
"""

from ._core import (
    __version__,
    catalog_names,
    chsh,
    cli,
    is_non_signaling,
    mutants,
    preset_names,
    primitive,
    run,
    search,
    search_preset,
    singlet_stats,
    verify,
    verify_all,
)

__all__ = [
    "__version__",
    "catalog_names",
    "chsh",
    "cli",
    "is_non_signaling",
    "mutants",
    "preset_names",
    "primitive",
    "run",
    "search",
    "search_preset",
    "singlet_stats",
    "verify",
    "verify_all",
]
