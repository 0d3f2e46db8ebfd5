"""Numpy reference implementations of the hot kernels.

These define the semantics; the compiled versions in `_ckern.pyx` must
match them (see tests/test_kernels.py for the cross-checks).
"""

import numpy as np


def coherence_series(embs: np.ndarray, window: int) -> np.ndarray:
    """Windowed mean cosine of each row against its predecessors.

    out[i] = mean(embs[i] . embs[j]) over j in [max(0, i-window), i-1].
    out[0] is set to 1.0 as a sentinel; position 0 has no predecessors and
    callers must never treat it as a boundary.
    """
    n = embs.shape[0]
    out = np.ones(n, dtype=np.float64)
    for i in range(1, n):
        lo = max(0, i - window)
        out[i] = float(np.sum(embs[lo:i] @ embs[i])) / (i - lo)
    return out


def topk_neighbors(mat: np.ndarray, k: int, min_sim: float):
    """Exact top-k neighbor search over unit-norm rows.

    Returns (src, dst, sim) arrays: for every row i, up to k other rows j
    with mat[i].mat[j] >= min_sim, ordered by (similarity desc, j asc).
    """
    n = mat.shape[0]
    srcs, dsts, sims = [], [], []
    if n == 0 or k <= 0:
        return (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0))
    full = mat @ mat.T
    for i in range(n):
        row = full[i].copy()
        row[i] = -np.inf
        cand = np.nonzero(row >= min_sim)[0]
        if cand.size == 0:
            continue
        # stable sort on ascending index, then stable sort on descending sim
        order = cand[np.argsort(-row[cand], kind="stable")][:k]
        for j in order:
            srcs.append(i)
            dsts.append(int(j))
            sims.append(float(row[j]))
    return (
        np.asarray(srcs, dtype=np.int64),
        np.asarray(dsts, dtype=np.int64),
        np.asarray(sims, dtype=np.float64),
    )


def leader_cluster(mat: np.ndarray, threshold: float) -> np.ndarray:
    """Greedy leader clustering over rows in order.

    Row i joins the first existing cluster whose leader row has cosine
    >= threshold with it, else founds a new cluster with itself as leader.
    Returns int64 labels in founding order.
    """
    n = mat.shape[0]
    labels = np.empty(n, dtype=np.int64)
    leaders: list[int] = []
    for i in range(n):
        assigned = -1
        for c, lead in enumerate(leaders):
            if float(mat[lead] @ mat[i]) >= threshold:
                assigned = c
                break
        if assigned < 0:
            leaders.append(i)
            assigned = len(leaders) - 1
        labels[i] = assigned
    return labels


def bm25_scores(
    doc_count: int,
    doc_idx: np.ndarray,
    tfs: np.ndarray,
    offsets: np.ndarray,
    idfs: np.ndarray,
    norms: np.ndarray,
    k1: float,
) -> np.ndarray:
    """Accumulate BM25 scores over per-term posting slices.

    Term t's postings live in doc_idx[offsets[t]:offsets[t+1]] with term
    frequencies in the matching slice of tfs; norms[d] is the precomputed
    k1*(1 - b + b*len_d/avgdl) length normalizer.
    """
    scores = np.zeros(doc_count, dtype=np.float64)
    for t in range(len(idfs)):
        lo, hi = offsets[t], offsets[t + 1]
        ds = doc_idx[lo:hi]
        tf = tfs[lo:hi].astype(np.float64)
        scores[ds] += idfs[t] * tf * (k1 + 1.0) / (tf + norms[ds])
    return scores
