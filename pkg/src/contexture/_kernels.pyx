# cython: language_level=3
"""Compiled consistent-assignment search (see ``_kernels_py.search``)."""
import numpy as np

cimport cython
from libc.stdint cimport int8_t, int32_t, int64_t, uint8_t


@cython.boundscheck(False)
@cython.wraparound(False)
cdef bint _search(
    const int32_t[:, ::1] ctx_vars,
    const uint8_t[:, ::1] possible,
    const int32_t[::1] check_ptr,
    const int32_t[::1] check_ctx,
    const int8_t[::1] fixed,
    uint8_t[::1] bits,
    int32_t[::1] tried,
    int64_t* nodes,
) noexcept nogil:
    cdef Py_ssize_t n_vars = fixed.shape[0]
    cdef Py_ssize_t n_sites = ctx_vars.shape[1]
    cdef Py_ssize_t d = 0, p, s, c
    cdef int f, limit, idx
    cdef bint ok
    cdef int64_t count = 0
    while d >= 0 and d < n_vars:
        f = fixed[d]
        limit = 1 if f >= 0 else 2
        if tried[d] >= limit:
            tried[d] = 0
            d -= 1
            continue
        bits[d] = <uint8_t>(f if f >= 0 else tried[d])
        tried[d] += 1
        count += 1
        ok = True
        for p in range(check_ptr[d], check_ptr[d + 1]):
            c = check_ctx[p]
            idx = 0
            for s in range(n_sites):
                idx = (idx << 1) | bits[ctx_vars[c, s]]
            if not possible[c, idx]:
                ok = False
                break
        if ok:
            d += 1
            tried[d] = 0
    nodes[0] = count
    return d == n_vars


def search(ctx_vars, possible, check_ptr, check_ctx, fixed):
    cdef const int32_t[:, ::1] cv = np.ascontiguousarray(ctx_vars, dtype=np.int32)
    cdef const uint8_t[:, ::1] pv = np.ascontiguousarray(possible, dtype=np.uint8)
    cdef const int32_t[::1] cp = np.ascontiguousarray(check_ptr, dtype=np.int32)
    cdef const int32_t[::1] cc = np.ascontiguousarray(check_ctx, dtype=np.int32)
    cdef const int8_t[::1] fx = np.ascontiguousarray(fixed, dtype=np.int8)
    out = np.zeros(fx.shape[0], dtype=np.uint8)
    tried_arr = np.zeros(fx.shape[0] + 1, dtype=np.int32)
    cdef uint8_t[::1] bv = out
    cdef int32_t[::1] tv = tried_arr
    cdef int64_t nodes = 0
    cdef bint found
    with nogil:
        found = _search(cv, pv, cp, cc, fx, bv, tv, &nodes)
    return bool(found), out, int(nodes)
