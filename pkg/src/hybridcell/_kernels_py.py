"""Vectorized numpy implementation of the Monte-Carlo kernels.

Fallback used when the compiled extension is unavailable.  Randomness is
counter-based Philox4x64-10, one block per event: replication r draws its
i-th block at counter (i, 0, r, 0) under key (seed, tag), so replications
are independent streams and every backend consumes bits identically.  Block
word 0 drives the event category, word 1 the exponential holding time.

The discounted-reward kernel is transcendental-free and matches the
compiled backend bit for bit; the tagged-time kernel matches it to libm
rounding (numpy's log1p and C's may differ in the last ulp).
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)
_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)
_SHIFT11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0

_TAGGED_EVENT_CAP = 10_000_000


def _mulhilo(a: np.uint64, b):
    """Split 64x64 -> 128-bit product into (hi, lo) via 32-bit limbs."""
    al = a & _MASK32
    ah = a >> _SHIFT32
    bl = b & _MASK32
    bh = b >> _SHIFT32
    ll = al * bl
    lh = al * bh
    hl = ah * bl
    mid = (ll >> _SHIFT32) + (lh & _MASK32) + (hl & _MASK32)
    hi = ah * bh + (lh >> _SHIFT32) + (hl >> _SHIFT32) + (mid >> _SHIFT32)
    return hi, a * b


def philox4x64_10(c0, c1, c2, c3, k0, k1):
    """One Philox4x64-10 block per counter element; all args uint64 arrays
    or scalars (broadcast), returns the four output words."""
    c0 = np.atleast_1d(np.asarray(c0, dtype=np.uint64))
    c1 = np.broadcast_to(np.asarray(c1, dtype=np.uint64), c0.shape).copy()
    c2 = np.broadcast_to(np.asarray(c2, dtype=np.uint64), c0.shape).copy()
    c3 = np.broadcast_to(np.asarray(c3, dtype=np.uint64), c0.shape).copy()
    k0 = np.broadcast_to(np.asarray(k0, dtype=np.uint64), c0.shape).copy()
    k1 = np.broadcast_to(np.asarray(k1, dtype=np.uint64), c0.shape).copy()
    for rnd in range(10):
        hi0, lo0 = _mulhilo(_M0, c0)
        hi1, lo1 = _mulhilo(_M1, c2)
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        if rnd < 9:
            k0 = k0 + _W0
            k1 = k1 + _W1
    return c0, c1, c2, c3


def _to_uniform(w):
    """Map uint64 words to doubles in [0, 1), exactly as the compiled kernel."""
    return (w >> _SHIFT11).astype(np.float64) * _INV53


def run_discounted(seed, tag, reps, horizon, start1, start2, gamma, lam,
                   c1, c2, c3, mu1, mu2, reward, nxt1, nxt2, dep1, dep2):
    """Per-replication discounted reward over `horizon` uniformized stages.

    reward/nxt* are (n1, n2, 3) policy tables; dep* the departure maps.
    Returns a float64 array of length `reps`.
    """
    seed = np.uint64(seed)
    tag = np.uint64(tag)
    rep_ids = np.arange(reps, dtype=np.uint64)
    s1 = np.full(reps, start1, dtype=np.int64)
    s2 = np.full(reps, start2, dtype=np.int64)
    totals = np.zeros(reps)
    disc = 1.0
    for stage in range(horizon):
        w0, _, _, _ = philox4x64_10(
            np.full(reps, stage, dtype=np.uint64), np.uint64(0), rep_ids, np.uint64(0),
            seed, tag)
        x = _to_uniform(w0) * lam
        is0 = x < c1
        is1 = ~is0 & (x < c2)
        is2 = ~is0 & ~is1 & (x < c3)
        arrival = is0 | is1 | is2
        stream = np.select([is0, is1], [0, 1], default=2)
        t4 = c3 + mu1[s1]
        dep_first = ~arrival & (x < t4)
        dep_second = ~arrival & ~dep_first & (x < t4 + mu2[s2])
        totals = np.where(arrival, totals + disc * reward[s1, s2, stream], totals)
        ns1 = np.where(arrival, nxt1[s1, s2, stream],
                       np.where(dep_first, dep1[s1], s1))
        ns2 = np.where(arrival, nxt2[s1, s2, stream],
                       np.where(dep_second, dep2[s2], s2))
        s1, s2 = ns1, ns2
        disc *= gamma
    return totals


def run_tagged(seed, tag, reps, start_m, thr, tot):
    """Tagged-mobile sojourn times until departure.

    thr is (M, 3) cumulative event-rate thresholds (join, self-loop,
    other-departure) and tot the total rate per state; the remainder is the
    tagged departure.  Returns (times, event counts), both length `reps`.
    """
    seed = np.uint64(seed)
    tag = np.uint64(tag)
    m = np.full(reps, start_m, dtype=np.int64)
    times = np.zeros(reps)
    counts = np.zeros(reps, dtype=np.int64)
    active = np.arange(reps)
    draws = np.zeros(reps, dtype=np.uint64)
    while active.size:
        if counts[active[0]] >= _TAGGED_EVENT_CAP:
            raise RuntimeError(
                f"tagged simulation exceeded {_TAGGED_EVENT_CAP} events; "
                "the chain looks non-absorbing")
        w0, w1, _, _ = philox4x64_10(
            draws[active], np.uint64(0), active.astype(np.uint64), np.uint64(0),
            seed, tag)
        ms = m[active]
        total = tot[ms]
        times[active] += -np.log1p(-_to_uniform(w1)) / total
        x = _to_uniform(w0) * total
        join = x < thr[ms, 0]
        selfloop = ~join & (x < thr[ms, 1])
        other = ~join & ~selfloop & (x < thr[ms, 2])
        absorbed = ~join & ~selfloop & ~other
        m[active] += join.astype(np.int64) - other.astype(np.int64)
        counts[active] += 1
        draws[active] += np.uint64(1)
        active = active[~absorbed]
    return times, counts
