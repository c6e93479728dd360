# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte-Carlo kernels; same draw convention as _kernels_py.

One Philox4x64-10 block per event at counter (event_index, 0, replication, 0)
under key (seed, tag): word 0 picks the event category, word 1 the
exponential holding time.  Built with -ffp-contract=off so the accumulation
arithmetic matches the numpy fallback bit for bit where no libm call is
involved.
"""

import numpy as np

from libc.math cimport log1p
from libc.stdint cimport int64_t, uint64_t

BACKEND_NAME = "cython"

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t hc_mulhi64(uint64_t a, uint64_t b) {
        unsigned __int128 p = (unsigned __int128)a * (unsigned __int128)b;
        return (uint64_t)(p >> 64);
    }
    """
    uint64_t hc_mulhi64(uint64_t a, uint64_t b) nogil

cdef uint64_t M0 = 0xD2E7470EE14C6C93ULL
cdef uint64_t M1 = 0xCA5A826395121157ULL
cdef uint64_t W0 = 0x9E3779B97F4A7C15ULL
cdef uint64_t W1 = 0xBB67AE8584CAA73BULL

cdef double INV53 = 1.0 / 9007199254740992.0

TAGGED_EVENT_CAP = 10_000_000
cdef int64_t _EVENT_CAP = TAGGED_EVENT_CAP


cdef inline void philox_block(uint64_t c0, uint64_t c1, uint64_t c2,
                              uint64_t c3, uint64_t k0, uint64_t k1,
                              uint64_t* out) nogil:
    cdef int rnd
    cdef uint64_t hi0, lo0, hi1, lo1
    for rnd in range(10):
        hi0 = hc_mulhi64(M0, c0)
        lo0 = M0 * c0
        hi1 = hc_mulhi64(M1, c2)
        lo1 = M1 * c2
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        if rnd < 9:
            k0 = k0 + W0
            k1 = k1 + W1
    out[0] = c0
    out[1] = c1
    out[2] = c2
    out[3] = c3


def philox4x64_10(c0, c1, c2, c3, k0, k1):
    """Scalar/array Philox block, mirroring the fallback's signature."""
    c0a = np.atleast_1d(np.asarray(c0, dtype=np.uint64))
    shape = c0a.shape
    c1a = np.broadcast_to(np.asarray(c1, dtype=np.uint64), shape)
    c2a = np.broadcast_to(np.asarray(c2, dtype=np.uint64), shape)
    c3a = np.broadcast_to(np.asarray(c3, dtype=np.uint64), shape)
    k0a = np.broadcast_to(np.asarray(k0, dtype=np.uint64), shape)
    k1a = np.broadcast_to(np.asarray(k1, dtype=np.uint64), shape)
    outs = [np.empty(shape, dtype=np.uint64) for _ in range(4)]
    cdef uint64_t[::1] v0 = c0a.ravel()
    cdef uint64_t[::1] v1 = np.ascontiguousarray(c1a).ravel()
    cdef uint64_t[::1] v2 = np.ascontiguousarray(c2a).ravel()
    cdef uint64_t[::1] v3 = np.ascontiguousarray(c3a).ravel()
    cdef uint64_t[::1] key0 = np.ascontiguousarray(k0a).ravel()
    cdef uint64_t[::1] key1 = np.ascontiguousarray(k1a).ravel()
    cdef uint64_t[::1] o0 = outs[0].ravel()
    cdef uint64_t[::1] o1 = outs[1].ravel()
    cdef uint64_t[::1] o2 = outs[2].ravel()
    cdef uint64_t[::1] o3 = outs[3].ravel()
    cdef Py_ssize_t i
    cdef uint64_t block[4]
    for i in range(v0.shape[0]):
        philox_block(v0[i], v1[i], v2[i], v3[i], key0[i], key1[i], block)
        o0[i] = block[0]
        o1[i] = block[1]
        o2[i] = block[2]
        o3[i] = block[3]
    return outs[0], outs[1], outs[2], outs[3]


def run_discounted(seed, tag, Py_ssize_t reps, Py_ssize_t horizon,
                   int64_t start1, int64_t start2, double gamma, double lam,
                   double c1, double c2, double c3,
                   double[::1] mu1, double[::1] mu2,
                   double[:, :, ::1] reward,
                   int64_t[:, :, ::1] nxt1, int64_t[:, :, ::1] nxt2,
                   int64_t[::1] dep1, int64_t[::1] dep2):
    """Per-replication discounted reward over `horizon` uniformized stages."""
    totals = np.zeros(reps)
    cdef double[::1] out = totals
    cdef uint64_t k0 = seed, k1 = tag
    cdef uint64_t block[4]
    cdef Py_ssize_t r, stage
    cdef int64_t s1, s2
    cdef int stream
    cdef double disc, tot, u, x, t4, t5
    with nogil:
        for r in range(reps):
            s1 = start1
            s2 = start2
            disc = 1.0
            tot = 0.0
            for stage in range(horizon):
                philox_block(<uint64_t> stage, 0, <uint64_t> r, 0, k0, k1, block)
                u = <double> (block[0] >> 11) * INV53
                x = u * lam
                if x < c3:
                    if x < c1:
                        stream = 0
                    elif x < c2:
                        stream = 1
                    else:
                        stream = 2
                    tot = tot + disc * reward[s1, s2, stream]
                    s1, s2 = nxt1[s1, s2, stream], nxt2[s1, s2, stream]
                else:
                    t4 = c3 + mu1[s1]
                    if x < t4:
                        s1 = dep1[s1]
                    else:
                        t5 = t4 + mu2[s2]
                        if x < t5:
                            s2 = dep2[s2]
                disc = disc * gamma
            out[r] = tot
    return totals


def run_tagged(seed, tag, Py_ssize_t reps, int64_t start_m,
               double[:, ::1] thr, double[::1] tot):
    """Tagged-mobile sojourn times until departure: (times, event counts)."""
    times = np.zeros(reps)
    counts = np.zeros(reps, dtype=np.int64)
    cdef double[::1] tv = times
    cdef int64_t[::1] cv = counts
    cdef uint64_t k0 = seed, k1 = tag
    cdef uint64_t block[4]
    cdef Py_ssize_t r
    cdef int64_t m, n_events
    cdef double t, u1, u2, total, x
    cdef bint overflow = False
    with nogil:
        for r in range(reps):
            m = start_m
            t = 0.0
            n_events = 0
            while True:
                if n_events >= _EVENT_CAP:
                    overflow = True
                    break
                philox_block(<uint64_t> n_events, 0, <uint64_t> r, 0, k0, k1, block)
                u1 = <double> (block[0] >> 11) * INV53
                u2 = <double> (block[1] >> 11) * INV53
                total = tot[m]
                t = t + (-log1p(-u2)) / total
                n_events = n_events + 1
                x = u1 * total
                if x < thr[m, 0]:
                    m = m + 1
                elif x < thr[m, 1]:
                    pass
                elif x < thr[m, 2]:
                    m = m - 1
                else:
                    break
            tv[r] = t
            cv[r] = n_events
            if overflow:
                break
    if overflow:
        raise RuntimeError(
            f"tagged simulation exceeded {TAGGED_EVENT_CAP} events; "
            "the chain looks non-absorbing")
    return times, counts
