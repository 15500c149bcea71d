"""Kernel dispatch: compiled extension when built, pure-Python twin otherwise.

Set ``WIKIFORENSICS_PURE=1`` to force the fallback (used by the parity tests
and the benchmark).
"""

import os

from . import _pure

if os.environ.get("WIKIFORENSICS_PURE"):
    impl = _pure
    HAVE_EXT = False
else:
    try:
        from . import _ext as impl  # type: ignore[no-redef]

        HAVE_EXT = True
    except ImportError:
        impl = _pure
        HAVE_EXT = False

ID_DTYPE = _pure.ID_DTYPE
mtld_factor_count = impl.mtld_factor_count
count_ngram_keys = impl.count_ngram_keys
best_split_gini = impl.best_split_gini
best_split_gain = impl.best_split_gain
cluster_distance_sums = impl.cluster_distance_sums

__all__ = [
    "HAVE_EXT",
    "ID_DTYPE",
    "mtld_factor_count",
    "count_ngram_keys",
    "best_split_gini",
    "best_split_gain",
    "cluster_distance_sums",
]
