# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""int64 versions of the kernels in ``_pykernels``.

Callers must check ``fits_int64`` on the plans first.  Every product is
formed from operands already reduced mod k, so nothing overflows.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long long i64


cdef inline i64 pmod(i64 a, i64 m) nogil:
    cdef i64 r = a % m
    return r + m if r < 0 else r


cdef struct Row:
    i64 n, P, rho, w, R, Q, nl, k, tot, L
    int l
    int overlap
    const i64 *seq
    const i64 *part


cdef class _RowData:
    cdef Row row
    cdef object seq_arr, part_arr

    def __init__(self, bp):
        self.seq_arr = np.ascontiguousarray([c % bp.k for c in bp.seq], dtype=np.int64)
        self.part_arr = np.ascontiguousarray(bp.part, dtype=np.int64)
        cdef const i64[::1] s = self.seq_arr
        cdef const i64[::1] p = self.part_arr
        self.row.n = bp.n
        self.row.P = bp.P
        self.row.rho = bp.rho
        self.row.w = bp.w
        self.row.R = bp.R
        self.row.Q = bp.Q
        self.row.nl = bp.nl
        self.row.k = bp.k
        self.row.tot = bp.tot
        self.row.L = len(bp.seq)
        self.row.l = bp.l
        self.row.overlap = 1 if bp.overlap else 0
        self.row.seq = &s[0]
        self.row.part = &p[0]


cdef inline i64 csum(i64 s, const Row *b) nogil:
    return ((s // b.L) % b.k * b.tot + b.part[s % b.L]) % b.k


cdef i64 prefix_b(i64 q, const Row *b) nogil:
    cdef i64 s0, rem, total, smax, g, r, cnt
    cdef i64 k = b.k
    if b.l == 1:
        if q <= b.rho - 2:
            s0 = q // b.P
            return ((q - s0 * b.P) % b.n) % k * b.seq[s0 % b.L] % k
        return pmod((b.P - 2) % b.n - (b.n - 2), k) * b.seq[(b.n - 1) % b.L] % k
    s0 = q // b.P
    rem = q - s0 * b.P
    cnt = (rem + b.w - 1) // b.w
    if cnt > b.R:
        cnt = b.R
    total = (b.R % k) * csum(s0, b) + (cnt % k) * b.seq[s0 % b.L]
    smax = q // b.nl
    if smax > b.R - 1:
        smax = b.R - 1
    g = smax // b.Q
    r = smax - g * b.Q
    total -= (b.n % k) * (((b.Q % k) * csum(g, b) + (r % k) * b.seq[g % b.L]) % k)
    if q == b.rho - 1 and not b.overlap:
        total -= (b.n % k) * b.seq[(b.n - 1) % b.L]
    return pmod(total, k)


cdef inline i64 boundaries_below(i64 x, const Row *b) nogil:
    cdef i64 extra = 1 if b.rho - 2 < x else 0
    cdef i64 c
    if b.l == 1:
        c = x if x < b.rho - 1 else b.rho - 1
        return c // b.n + extra
    if b.overlap:
        extra = 0
    c = x // b.nl
    if c > b.R - 1:
        c = b.R - 1
    return c + extra


def prefix_b_many(qs, bp):
    cdef _RowData rd = _RowData(bp)
    cdef const i64[::1] q = np.ascontiguousarray(qs, dtype=np.int64)
    out = np.empty(q.shape[0], dtype=np.int64)
    cdef i64[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(q.shape[0]):
            o[i] = prefix_b(q[i], &rd.row)
    return out


def window_sums(starts, i64 width, bp):
    cdef _RowData rd = _RowData(bp)
    cdef const i64[::1] u = np.ascontiguousarray(starts, dtype=np.int64)
    out = np.empty(u.shape[0], dtype=np.int64)
    cdef i64[::1] o = out
    cdef Py_ssize_t i
    cdef i64 top = rd.row.rho - 1
    with nogil:
        for i in range(u.shape[0]):
            if u[i] + width > top:
                o[i] = -1
            else:
                o[i] = pmod(prefix_b(u[i] + width, &rd.row) - prefix_b(u[i], &rd.row), rd.row.k)
    return out


def boundary_counts(starts, i64 width, bp):
    cdef _RowData rd = _RowData(bp)
    cdef const i64[::1] u = np.ascontiguousarray(starts, dtype=np.int64)
    out = np.empty(u.shape[0], dtype=np.int64)
    cdef i64[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(u.shape[0]):
            o[i] = boundaries_below(u[i] + width, &rd.row) - boundaries_below(u[i], &rd.row)
    return out


cdef class _LevelData:
    cdef list rows
    cdef object heights_arr, sigmas_arr
    cdef Row *ptr[64]
    cdef const i64 *heights
    cdef const i64 *sigmas
    cdef int nstages
    cdef i64 k

    def __init__(self, lp):
        if len(lp.stages) > 64:
            raise ValueError("too many stages for the compiled kernel")
        self.rows = [_RowData(bp) for bp in lp.stages]
        self.nstages = len(self.rows)
        self.heights_arr = np.ascontiguousarray(lp.heights, dtype=np.int64)
        self.sigmas_arr = np.ascontiguousarray(lp.sigmas, dtype=np.int64)
        cdef const i64[::1] h = self.heights_arr
        cdef const i64[::1] s = self.sigmas_arr
        self.heights = &h[0]
        self.sigmas = &s[0]
        self.k = lp.k
        cdef int i
        cdef _RowData rd
        for i in range(self.nstages):
            rd = self.rows[i]
            self.ptr[i] = &rd.row


cdef i64 level_prefix(i64 L, _LevelData ld) nogil:
    cdef i64 total = 0, q
    cdef int idx
    for idx in range(ld.nstages - 1, -1, -1):
        q = L // ld.heights[idx]
        L = L - q * ld.heights[idx]
        total = (total + (q % ld.k) * ld.sigmas[idx] + prefix_b(q, ld.ptr[idx])) % ld.k
    return total


def level_prefix_many(levels, lp):
    cdef _LevelData ld = _LevelData(lp)
    cdef const i64[::1] v = np.ascontiguousarray(levels, dtype=np.int64)
    out = np.empty(v.shape[0], dtype=np.int64)
    cdef i64[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(v.shape[0]):
            o[i] = level_prefix(v[i], ld)
    return out


def birkhoff_many(levels, i64 m, lp):
    cdef _LevelData ld = _LevelData(lp)
    cdef const i64[::1] v = np.ascontiguousarray(levels, dtype=np.int64)
    out = np.empty(v.shape[0], dtype=np.int64)
    cdef i64[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(v.shape[0]):
            o[i] = pmod(level_prefix(v[i] + m, ld) - level_prefix(v[i], ld), ld.k)
    return out
