"""Table-driven linear algebra over small F_q.

Elements are represented by their integer index (base-p digit encoding);
add/mul tables are built once per field by enumeration, and Gaussian
elimination runs on numpy index arrays via fancy indexing.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..arith import FieldSpec


@lru_cache(maxsize=None)
def _tables(field: FieldSpec):
    q = field.q
    els = [field.from_index(i) for i in range(q)]
    add = np.zeros((q, q), dtype=np.int32)
    mul = np.zeros((q, q), dtype=np.int32)
    inv = np.zeros(q, dtype=np.int32)
    for i in range(q):
        for j in range(q):
            add[i, j] = (els[i] + els[j]).index()
            mul[i, j] = (els[i] * els[j]).index()
        if i:
            inv[i] = els[i].inverse().index()
    neg = np.array([(-els[i]).index() for i in range(q)], dtype=np.int32)
    return add, mul, neg, inv


def rank_nullity(M: np.ndarray, field: FieldSpec):
    """(rank, nullity) of an index-encoded matrix over F_q."""
    if M.size == 0:
        return 0, M.shape[1] if M.ndim == 2 else 0
    add, mul, neg, inv = _tables(field)
    A = M.astype(np.int32).copy()
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        piv = None
        for r in range(rank, rows):
            if A[r, c]:
                piv = r
                break
        if piv is None:
            continue
        A[[rank, piv]] = A[[piv, rank]]
        scale = inv[A[rank, c]]
        A[rank] = mul[scale, A[rank]]
        for r in range(rows):
            if r != rank and A[r, c]:
                factor = neg[A[r, c]]
                A[r] = add[A[r], mul[factor, A[rank]]]
        rank += 1
        if rank == rows:
            break
    return rank, cols - rank
