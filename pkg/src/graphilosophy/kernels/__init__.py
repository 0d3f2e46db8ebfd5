"""Hot numeric kernels with a compiled core and a numpy fallback.

The Cython extension (`_ckern`) is preferred where it measures faster:
the sequential, branchy kernels (coherence_series, leader_cluster,
bm25_scores). The dense all-pairs similarity in topk_neighbors is
BLAS-bound, so the numpy implementation stays the default even when the
extension is present (see benchmarks/bench_kernels.py). Set
GRAPHILOSOPHY_PURE_PYTHON=1 to force the fallback everywhere.

All kernels operate on C-contiguous float64 arrays whose rows are
unit-norm embedding vectors, so cosine similarity is a plain dot product.
"""

import os

from . import pykernels

IMPL = "python"

if not os.environ.get("GRAPHILOSOPHY_PURE_PYTHON"):
    try:
        from . import _ckern as _compiled

        IMPL = "cython"
    except ImportError:
        _compiled = None
else:
    _compiled = None

if _compiled is not None:
    coherence_series = _compiled.coherence_series
    leader_cluster = _compiled.leader_cluster
    bm25_scores = _compiled.bm25_scores
else:
    coherence_series = pykernels.coherence_series
    leader_cluster = pykernels.leader_cluster
    bm25_scores = pykernels.bm25_scores

topk_neighbors = pykernels.topk_neighbors


def implementations():
    """Return {name: module} for every available kernel implementation."""
    impls = {"python": pykernels}
    if _compiled is not None:
        impls["cython"] = _compiled
    return impls
