# distutils: language = c++
# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: ordered-extension clique enumeration, boundary matrix
assembly, and sparse GF(p) column elimination.  Mirrors ``_pure`` exactly."""

from libc.string cimport memcpy
from libcpp.vector cimport vector

import numpy as np

cimport numpy as cnp

from ..errors import BudgetError

cnp.import_array()

ctypedef long long i64

BACKEND = "compiled"


cdef int _clique_dfs(vector[vector[int]]& buffers, vector[int]& clique,
                     vector[int]& ext, int k, int max_size,
                     const long long[:] indptr, const long long[:] indices,
                     long long budget, long long* total) except -1:
    cdef size_t i, j
    cdef int w
    cdef vector[int] nxt
    cdef long long a, b, bstop
    cdef size_t astop
    for i in range(ext.size()):
        w = ext[i]
        for j in range(clique.size()):
            buffers[k - 1].push_back(clique[j])
        buffers[k - 1].push_back(w)
        total[0] += 1
        if total[0] > budget:
            raise BudgetError(f"clique count exceeds budget of {budget}")
        if k < max_size:
            nxt.clear()
            a = <long long> i + 1
            astop = ext.size()
            b = indptr[w]
            bstop = indptr[w + 1]
            while a < <long long> astop and b < bstop:
                if ext[<size_t> a] < indices[b]:
                    a += 1
                elif ext[<size_t> a] > indices[b]:
                    b += 1
                else:
                    nxt.push_back(ext[<size_t> a])
                    a += 1
                    b += 1
            if nxt.size() > 0:
                clique.push_back(w)
                _clique_dfs(buffers, clique, nxt, k + 1, max_size,
                            indptr, indices, budget, total)
                clique.pop_back()
    return 0


def enumerate_cliques(indptr, indices, n_vertices, max_size, budget):
    """See ``pacx.kernels._pure.enumerate_cliques``."""
    cdef const long long[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const long long[:] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef int n = n_vertices
    cdef int cap = max_size
    cdef long long bud = budget
    cdef vector[vector[int]] buffers = vector[vector[int]](cap)
    cdef vector[int] clique
    cdef vector[int] ext
    cdef long long total = 0
    cdef long long b
    cdef int v
    for v in range(n):
        buffers[0].push_back(v)
        total += 1
        if total > bud:
            raise BudgetError(f"clique count exceeds budget of {budget}")
        if cap > 1 and ip[v + 1] > ip[v]:
            ext.clear()
            for b in range(ip[v], ip[v + 1]):
                ext.push_back(<int> ix[b])
            clique.clear()
            clique.push_back(v)
            _clique_dfs(buffers, clique, ext, 2, cap, ip, ix, bud, &total)
    result = []
    cdef cnp.ndarray[cnp.int32_t, ndim=1] flat
    cdef int k
    for k in range(1, cap + 1):
        flat = np.empty(buffers[k - 1].size(), dtype=np.int32)
        if buffers[k - 1].size() > 0:
            memcpy(cnp.PyArray_DATA(flat), buffers[k - 1].data(),
                   buffers[k - 1].size() * sizeof(int))
        result.append(np.asarray(flat).reshape(-1, k))
    return result


cdef inline int _cmp_row(const int* a, const int* b, int width) noexcept nogil:
    cdef int i
    for i in range(width):
        if a[i] < b[i]:
            return -1
        if a[i] > b[i]:
            return 1
    return 0


cdef long long _find_row(const int[:, ::1] rows, const int* key,
                         int width) noexcept nogil:
    cdef long long lo = 0, hi = rows.shape[0], mid
    cdef int c
    while lo < hi:
        mid = (lo + hi) // 2
        c = _cmp_row(&rows[mid, 0], key, width)
        if c < 0:
            lo = mid + 1
        else:
            hi = mid
    if lo < rows.shape[0] and _cmp_row(&rows[lo, 0], key, width) == 0:
        return lo
    return -1


def boundary_csc(simp_q, simp_qm1, p):
    """See ``pacx.kernels._pure.boundary_csc``."""
    cdef const int[:, ::1] sq = np.ascontiguousarray(simp_q, dtype=np.int32)
    cdef const int[:, ::1] sf = np.ascontiguousarray(
        np.asarray(simp_qm1, dtype=np.int32).reshape(-1, sq.shape[1] - 1))
    cdef int n_q = sq.shape[0]
    cdef int k = sq.shape[1]
    cdef int pp = p
    cdef cnp.ndarray[cnp.int64_t, ndim=1] indptr = np.zeros(n_q + 1,
                                                            dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] rows = np.empty(n_q * k,
                                                          dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] vals = np.empty(n_q * k,
                                                          dtype=np.int64)
    cdef long long[:] ip = indptr
    cdef long long[:] rr = rows
    cdef long long[:] vv = vals
    cdef int face[16]
    cdef long long fidx[16]
    cdef long long fsgn[16]
    cdef long long tmp_i, tmp_s
    cdef int i, j2, w, pos
    cdef long long j, r, written = 0
    if k > 16:
        raise ValueError("simplex dimension too large for the kernel")
    for j in range(n_q):
        for i in range(k):
            pos = 0
            for w in range(k):
                if w != i:
                    face[pos] = sq[j, w]
                    pos += 1
            r = _find_row(sf, face, k - 1)
            if r < 0:
                raise ValueError(
                    "missing face of simplex "
                    f"{tuple(int(x) for x in np.asarray(sq[j]))}: "
                    "complex is not downward closed")
            fidx[i] = r
            fsgn[i] = 1 if i % 2 == 0 else (pp - 1) % pp
        # insertion sort by face index (k is tiny)
        for i in range(1, k):
            tmp_i = fidx[i]
            tmp_s = fsgn[i]
            j2 = i - 1
            while j2 >= 0 and fidx[j2] > tmp_i:
                fidx[j2 + 1] = fidx[j2]
                fsgn[j2 + 1] = fsgn[j2]
                j2 -= 1
            fidx[j2 + 1] = tmp_i
            fsgn[j2 + 1] = tmp_s
        for i in range(k):
            rr[written] = fidx[i]
            vv[written] = fsgn[i]
            written += 1
        ip[j + 1] = written
    return indptr, rows, vals


def rank_csc(indptr, rows, vals, n_rows, p):
    """See ``pacx.kernels._pure.rank_csc``."""
    cdef const long long[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const long long[:] rr = np.ascontiguousarray(rows, dtype=np.int64)
    cdef const long long[:] vv = np.ascontiguousarray(vals, dtype=np.int64)
    cdef int pp = p
    cdef long long nr = n_rows
    if pp < 2 or pp >= 32768:
        raise ValueError("field characteristic out of kernel range")
    cdef vector[int] inv = vector[int](pp)
    cdef int a, acc, e, base
    for a in range(1, pp):
        # inverse by Fermat: a^(p-2) mod p
        acc = 1
        e = pp - 2
        base = a
        while e:
            if e & 1:
                acc = (acc * base) % pp
            base = (base * base) % pp
            e >>= 1
        inv[a] = acc
    cdef vector[i64] pivot_of_low = vector[i64](nr, -1)
    cdef vector[vector[i64]] piv_rows
    cdef vector[vector[int]] piv_vals
    cdef vector[i64] wr, tr
    cdef vector[int] wv, tv
    cdef long long n_cols = len(indptr) - 1
    cdef long long j, q, low, slot
    cdef size_t ai, bi
    cdef int mult, nv, rank = 0
    for j in range(n_cols):
        wr.clear()
        wv.clear()
        for q in range(ip[j], ip[j + 1]):
            nv = <int> (vv[q] % pp)
            if nv < 0:
                nv += pp
            if nv:
                wr.push_back(rr[q])
                wv.push_back(nv)
        while wr.size() > 0:
            low = wr.back()
            slot = pivot_of_low[low]
            if slot < 0:
                pivot_of_low[low] = <long long> piv_rows.size()
                piv_rows.push_back(wr)
                piv_vals.push_back(wv)
                rank += 1
                break
            mult = <int> ((<long long> wv.back() *
                           inv[piv_vals[slot].back()]) % pp)
            tr.clear()
            tv.clear()
            ai = 0
            bi = 0
            while ai < wr.size() and bi < piv_rows[slot].size():
                if wr[ai] < piv_rows[slot][bi]:
                    tr.push_back(wr[ai])
                    tv.push_back(wv[ai])
                    ai += 1
                elif wr[ai] > piv_rows[slot][bi]:
                    nv = (pp - <int> ((<long long> mult *
                                       piv_vals[slot][bi]) % pp)) % pp
                    if nv:
                        tr.push_back(piv_rows[slot][bi])
                        tv.push_back(nv)
                    bi += 1
                else:
                    nv = <int> ((wv[ai] - <long long> mult *
                                 piv_vals[slot][bi]) % pp)
                    if nv < 0:
                        nv += pp
                    if nv:
                        tr.push_back(wr[ai])
                        tv.push_back(nv)
                    ai += 1
                    bi += 1
            while ai < wr.size():
                tr.push_back(wr[ai])
                tv.push_back(wv[ai])
                ai += 1
            while bi < piv_rows[slot].size():
                nv = (pp - <int> ((<long long> mult *
                                   piv_vals[slot][bi]) % pp)) % pp
                if nv:
                    tr.push_back(piv_rows[slot][bi])
                    tv.push_back(nv)
                bi += 1
            wr.swap(tr)
            wv.swap(tv)
    return rank
