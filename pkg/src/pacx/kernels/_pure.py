"""Pure-Python kernel fallbacks.

Same contracts as the compiled extension in ``_fastcore.pyx``; selected at
import time by :mod:`pacx.kernels` when the extension is unavailable or
explicitly disabled.
"""

from __future__ import annotations

import numpy as np

from ..errors import BudgetError

BACKEND = "pure-python"


def enumerate_cliques(indptr, indices, n_vertices, max_size, budget):
    """All cliques of the graph with 1..max_size vertices, by ordered extension.

    The graph is given as a CSR over *higher-numbered* neighbors (0-based,
    each adjacency list sorted ascending).  Returns one int32 array of shape
    (count_k, k) per size k = 1..max_size, rows in lexicographic order.
    Raises BudgetError when the total clique count would exceed ``budget``.
    """
    nbr = [indices[indptr[v]:indptr[v + 1]] for v in range(n_vertices)]
    nbr_sets = [set(a.tolist()) for a in nbr]
    out: list[list[int]] = [[] for _ in range(max_size)]
    total = 0

    def extend(clique, ext, k):
        nonlocal total
        for i, w in enumerate(ext):
            row = clique + [w]
            out[k - 1].extend(row)
            total += 1
            if total > budget:
                raise BudgetError(f"clique count exceeds budget of {budget}")
            if k < max_size:
                wset = nbr_sets[w]
                nxt = [z for z in ext[i + 1:] if z in wset]
                if nxt:
                    extend(row, nxt, k + 1)

    for v in range(n_vertices):
        total += 1
        if total > budget:
            raise BudgetError(f"clique count exceeds budget of {budget}")
        out[0].append(v)
        ext = nbr[v].tolist()
        if ext and max_size > 1:
            extend([v], ext, 2)

    return [np.asarray(out[k], dtype=np.int32).reshape(-1, k + 1)
            for k in range(max_size)]


def boundary_csc(simp_q, simp_qm1, p):
    """Signed boundary matrix of the q-simplices over GF(p), as CSC arrays.

    ``simp_q``: (n_q, q+1) int32, rows sorted ascending and lexicographically
    ordered; ``simp_qm1``: the (q-1)-simplices likewise.  Returns (indptr,
    rows, vals) with rows sorted ascending within each column and vals in
    [1, p).  Raises ValueError if some face is missing (closure violation).
    """
    simp_q = np.asarray(simp_q)
    n_q, k = simp_q.shape
    face_index = {tuple(int(x) for x in row): i for i, row in enumerate(simp_qm1)}
    indptr = np.zeros(n_q + 1, dtype=np.int64)
    rows = np.empty(n_q * k, dtype=np.int64)
    vals = np.empty(n_q * k, dtype=np.int64)
    pos = 0
    for j in range(n_q):
        s = tuple(int(x) for x in simp_q[j])
        entries = []
        for i in range(k):
            face = s[:i] + s[i + 1:]
            try:
                r = face_index[face]
            except KeyError:
                raise ValueError(f"missing face {face} of simplex {s}: "
                                 "complex is not downward closed") from None
            entries.append((r, ((-1) ** i) % p))
        entries.sort()
        for r, c in entries:
            rows[pos] = r
            vals[pos] = c
            pos += 1
        indptr[j + 1] = pos
    return indptr, rows, vals


def rank_csc(indptr, rows, vals, n_rows, p):
    """GF(p) rank of a sparse CSC matrix by column elimination.

    Columns are reduced against stored pivot columns keyed by their largest
    remaining row index; entries must be sorted ascending per column.
    """
    if p == 2:
        return _rank_gf2(indptr, rows)
    inv = [0] * p
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    pivot_of_low: dict[int, tuple[list[int], list[int]]] = {}
    rank = 0
    n_cols = len(indptr) - 1
    for j in range(n_cols):
        col = {int(r): int(v) % p for r, v in
               zip(rows[indptr[j]:indptr[j + 1]], vals[indptr[j]:indptr[j + 1]])}
        col = {r: v for r, v in col.items() if v}
        while col:
            low = max(col)
            piv = pivot_of_low.get(low)
            if piv is None:
                pr = sorted(col)
                pivot_of_low[low] = (pr, [col[r] for r in pr])
                rank += 1
                break
            prows, pvals = piv
            mult = (col[low] * inv[pvals[-1]]) % p
            for r, v in zip(prows, pvals):
                nv = (col.get(r, 0) - mult * v) % p
                if nv:
                    col[r] = nv
                else:
                    col.pop(r, None)
        # empty column: no rank contribution
    return rank


def _rank_gf2(indptr, rows):
    pivot_of_low: dict[int, frozenset] = {}
    rank = 0
    n_cols = len(indptr) - 1
    for j in range(n_cols):
        col = set(int(r) for r in rows[indptr[j]:indptr[j + 1]])
        while col:
            low = max(col)
            piv = pivot_of_low.get(low)
            if piv is None:
                pivot_of_low[low] = frozenset(col)
                rank += 1
                break
            col ^= piv
    return rank
