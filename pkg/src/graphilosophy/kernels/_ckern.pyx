# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels. Semantics match pykernels."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def coherence_series(cnp.float64_t[:, ::1] embs, int window):
    cdef Py_ssize_t n = embs.shape[0]
    cdef Py_ssize_t d = embs.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.ones(n, dtype=np.float64)
    cdef cnp.float64_t[::1] o = out
    cdef Py_ssize_t i, j, c, lo
    cdef double acc, dot
    for i in range(1, n):
        lo = i - window
        if lo < 0:
            lo = 0
        acc = 0.0
        for j in range(lo, i):
            dot = 0.0
            for c in range(d):
                dot += embs[i, c] * embs[j, c]
            acc += dot
        o[i] = acc / (i - lo)
    return out


def topk_neighbors(cnp.float64_t[:, ::1] mat, int k, double min_sim):
    cdef Py_ssize_t n = mat.shape[0]
    cdef Py_ssize_t d = mat.shape[1]
    if n == 0 or k <= 0:
        return (
            np.zeros(0, dtype=np.int64),
            np.zeros(0, dtype=np.int64),
            np.zeros(0, dtype=np.float64),
        )
    cdef cnp.ndarray[cnp.float64_t, ndim=1] best_sim = np.empty(k, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] best_idx = np.empty(k, dtype=np.int64)
    cdef cnp.float64_t[::1] bs = best_sim
    cdef cnp.int64_t[::1] bi = best_idx
    srcs, dsts, sims = [], [], []
    cdef Py_ssize_t i, j, c, m, pos, cnt
    cdef double dot
    for i in range(n):
        cnt = 0
        for j in range(n):
            if j == i:
                continue
            dot = 0.0
            for c in range(d):
                dot += mat[i, c] * mat[j, c]
            if dot < min_sim:
                continue
            # insertion position: keep (sim desc, index asc) order
            pos = cnt
            while pos > 0 and (bs[pos - 1] < dot):
                pos -= 1
            if pos >= k:
                continue
            m = cnt if cnt < k else k - 1
            while m > pos:
                bs[m] = bs[m - 1]
                bi[m] = bi[m - 1]
                m -= 1
            bs[pos] = dot
            bi[pos] = j
            if cnt < k:
                cnt += 1
        for m in range(cnt):
            srcs.append(i)
            dsts.append(bi[m])
            sims.append(bs[m])
    return (
        np.asarray(srcs, dtype=np.int64),
        np.asarray(dsts, dtype=np.int64),
        np.asarray(sims, dtype=np.float64),
    )


def leader_cluster(cnp.float64_t[:, ::1] mat, double threshold):
    cdef Py_ssize_t n = mat.shape[0]
    cdef Py_ssize_t d = mat.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] labels = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] lab = labels
    cdef cnp.ndarray[cnp.int64_t, ndim=1] leaders = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] led = leaders
    cdef Py_ssize_t i, c, q, n_lead = 0
    cdef Py_ssize_t assigned
    cdef double dot
    for i in range(n):
        assigned = -1
        for c in range(n_lead):
            dot = 0.0
            for q in range(d):
                dot += mat[led[c], q] * mat[i, q]
            if dot >= threshold:
                assigned = c
                break
        if assigned < 0:
            led[n_lead] = i
            assigned = n_lead
            n_lead += 1
        lab[i] = assigned
    return labels


def bm25_scores(
    Py_ssize_t doc_count,
    cnp.int64_t[::1] doc_idx,
    cnp.int64_t[::1] tfs,
    cnp.int64_t[::1] offsets,
    cnp.float64_t[::1] idfs,
    cnp.float64_t[::1] norms,
    double k1,
):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] scores = np.zeros(doc_count, dtype=np.float64)
    cdef cnp.float64_t[::1] s = scores
    cdef Py_ssize_t t, p, dref
    cdef double tf
    for t in range(idfs.shape[0]):
        for p in range(offsets[t], offsets[t + 1]):
            dref = doc_idx[p]
            tf = tfs[p]
            s[dref] += idfs[t] * tf * (k1 + 1.0) / (tf + norms[dref])
    return scores
