"""Kernel backend selection.

Imports the compiled extension when present, otherwise the numpy fallback.
Setting AVCSYM_PURE=1 forces the fallback regardless.  Both backends expose
the same three functions with identical semantics; BACKEND names the one in
use ("native" or "pure").
"""

import os

from .slow import (
    STATUS_BREAKDOWN,
    STATUS_ITERATION_LIMIT,
    STATUS_OPTIMAL,
    STATUS_UNBOUNDED,
)

if os.environ.get("AVCSYM_PURE") == "1":
    from . import slow as _impl

    BACKEND = "pure"
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]

        BACKEND = "native"
    except ImportError:
        from . import slow as _impl

        BACKEND = "pure"

simplex_run = _impl.simplex_run
gk_panel_sums = _impl.gk_panel_sums
pairwise_l1_min = _impl.pairwise_l1_min

__all__ = [
    "BACKEND",
    "STATUS_BREAKDOWN",
    "STATUS_ITERATION_LIMIT",
    "STATUS_OPTIMAL",
    "STATUS_UNBOUNDED",
    "gk_panel_sums",
    "pairwise_l1_min",
    "simplex_run",
]
