# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Native DBM kernel.

Same encoded-bound contract as lzg._pykernel (the fallback); see that
module's docstring for the encoding.  Matrices are C-contiguous int64
arrays, mutated in place; functions return the shared status codes.
"""

from libc.stdint cimport int64_t

INF = int(<int64_t> 1 << 60)
INF_BAR = int(<int64_t> 1 << 59)
LIMIT = int(<int64_t> 1 << 48)
LE_ZERO = 1

OK = 0
EMPTY = 1
OVERFLOW = 2

cdef int64_t C_INF = <int64_t> 1 << 60
cdef int64_t C_INF_BAR = <int64_t> 1 << 59
cdef int64_t C_LIMIT = <int64_t> 1 << 48
cdef int64_t C_LE_ZERO = 1


cdef inline int64_t badd(int64_t a, int64_t b) nogil:
    if a >= C_INF_BAR or b >= C_INF_BAR:
        return C_INF
    return a + b - ((a | b) & 1)


cdef inline bint _overflowed(int64_t[:, ::1] m) nogil:
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t i, j
    cdef int64_t v
    for i in range(n):
        for j in range(n):
            v = m[i, j]
            if v < C_INF_BAR and (v > C_LIMIT or v < -C_LIMIT):
                return True
    return False


def close(int64_t[:, ::1] m):
    """Floyd-Warshall closure in place; detects emptiness and overflow."""
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t i, j, k
    cdef int64_t mik, s
    cdef int status = 0
    with nogil:
        for k in range(n):
            for i in range(n):
                mik = m[i, k]
                if mik >= C_INF_BAR:
                    continue
                for j in range(n):
                    s = badd(mik, m[k, j])
                    if s < m[i, j]:
                        m[i, j] = s
        for i in range(n):
            if m[i, i] < C_LE_ZERO:
                status = 1
                break
            m[i, i] = C_LE_ZERO
        if status == 0 and _overflowed(m):
            status = 2
    return status


def close_after(int64_t[:, ::1] m, Py_ssize_t i, Py_ssize_t j):
    """Re-close in place after entry ``(i, j)`` of a canonical matrix was tightened."""
    cdef int64_t w = m[i, j]
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t a, b
    cdef int64_t left, s
    cdef int status = 0
    if badd(w, m[j, i]) < C_LE_ZERO:
        return EMPTY
    if w >= C_INF_BAR:
        return OK
    with nogil:
        for a in range(n):
            left = badd(m[a, i], w)
            if left >= C_INF_BAR:
                continue
            for b in range(n):
                s = badd(left, m[j, b])
                if s < m[a, b]:
                    m[a, b] = s
        if _overflowed(m):
            status = 2
    return status


def includes(const int64_t[:, ::1] outer, const int64_t[:, ::1] inner):
    """True iff every bound of ``inner`` is at least as tight as ``outer``'s."""
    cdef Py_ssize_t n = outer.shape[0]
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            if inner[i, j] > outer[i, j]:
                return False
    return True
