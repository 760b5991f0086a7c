"""Cayley-graph expansion experiments for arithmetic groups."""

from ._core import (
    ExpanderlabError,
    __version__,
    ball_size,
    builtin_names,
    certify_free,
    factorize,
    is_prime,
    kesten_return,
    quotient_order,
    run,
    spectrum,
    strong_approximation_scan,
    structural_suite,
    walk,
)

__all__ = [
    "ExpanderlabError",
    "__version__",
    "ball_size",
    "builtin_names",
    "certify_free",
    "factorize",
    "is_prime",
    "kesten_return",
    "quotient_order",
    "run",
    "spectrum",
    "strong_approximation_scan",
    "structural_suite",
    "walk",
]
