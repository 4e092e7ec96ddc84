# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled orbit kernels; same contract as ``symstab._kernels_py``."""
from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


cdef int64_t* _flatten(object rows, Py_ssize_t n, Py_ssize_t* count) except NULL:
    cdef Py_ssize_t k = len(rows)
    cdef int64_t* buf = <int64_t*> malloc((k * n + 1) * sizeof(int64_t))
    cdef Py_ssize_t i, j
    if buf == NULL:
        raise MemoryError()
    for i in range(k):
        row = rows[i]
        if len(row) != n:
            free(buf)
            raise ValueError("row length mismatch")
        for j in range(n):
            buf[i * n + j] = row[j]
    count[0] = k
    return buf


cdef void _orbit_min_c(const int64_t* vec, const int64_t* shifts, Py_ssize_t k,
                       Py_ssize_t n, int64_t modulus, int64_t* best, int64_t* cand) noexcept:
    cdef Py_ssize_t i, j
    cdef int have = 0
    cdef int cmp
    cdef int64_t x
    if k == 0:
        for j in range(n):
            x = vec[j] % modulus
            best[j] = x + modulus if x < 0 else x
        return
    for i in range(k):
        cmp = 0
        for j in range(n):
            x = (vec[j] + shifts[i * n + j]) % modulus
            if x < 0:
                x += modulus
            cand[j] = x
            if have and cmp == 0:
                if x < best[j]:
                    cmp = -1
                elif x > best[j]:
                    cmp = 1
        if not have or cmp < 0:
            for j in range(n):
                best[j] = cand[j]
            have = 1


def _check_modulus(modulus):
    if modulus <= 0 or modulus >= (1 << 61):
        raise OverflowError("modulus out of range for the compiled kernel")


def orbit_min(vec, shifts, modulus):
    _check_modulus(modulus)
    cdef Py_ssize_t n = len(vec)
    cdef Py_ssize_t k, one
    cdef int64_t* s = _flatten(shifts, n, &k)
    cdef int64_t* v = _flatten((vec,), n, &one)
    cdef int64_t* best = <int64_t*> malloc((n + 1) * sizeof(int64_t))
    cdef int64_t* cand = <int64_t*> malloc((n + 1) * sizeof(int64_t))
    try:
        _orbit_min_c(v, s, k, n, modulus, best, cand)
        return tuple([best[j] for j in range(n)])
    finally:
        free(s); free(v); free(best); free(cand)


def batch_orbit_min(vecs, shifts, modulus):
    _check_modulus(modulus)
    vecs = list(vecs)
    if not vecs:
        return []
    cdef Py_ssize_t n = len(vecs[0])
    cdef Py_ssize_t k, m, i, j
    cdef int64_t* s = _flatten(shifts, n, &k)
    cdef int64_t* v = _flatten(vecs, n, &m)
    cdef int64_t* best = <int64_t*> malloc((n + 1) * sizeof(int64_t))
    cdef int64_t* cand = <int64_t*> malloc((n + 1) * sizeof(int64_t))
    out = []
    try:
        for i in range(m):
            _orbit_min_c(v + i * n, s, k, n, modulus, best, cand)
            out.append(tuple([best[j] for j in range(n)]))
        return out
    finally:
        free(s); free(v); free(best); free(cand)


def count_distinct_orbits(vecs, shifts, modulus):
    return len(set(batch_orbit_min(vecs, shifts, modulus)))
