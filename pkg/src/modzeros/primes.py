"""Prime enumeration with a segmented sieve of Eratosthenes."""

import math

import numpy as np

_SEGMENT = 1 << 20


def primes_up_to(limit: int) -> list[int]:
    """All primes p <= limit, ascending."""
    if limit < 2:
        return []
    base_limit = math.isqrt(limit)
    base = _simple_sieve(base_limit)
    out = list(base)
    low = base_limit + 1
    while low <= limit:
        high = min(low + _SEGMENT, limit + 1)
        seg = np.ones(high - low, dtype=bool)
        for p in base:
            start = ((low + p - 1) // p) * p
            if start < p * p:
                start = p * p
            if start < high:
                seg[start - low :: p] = False
        out.extend(int(i) for i in np.flatnonzero(seg) + low)
        low = high
    return out


def _simple_sieve(limit: int) -> list[int]:
    if limit < 2:
        return []
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return [int(p) for p in np.flatnonzero(is_prime)]


def smallest_prime_factors(limit: int) -> np.ndarray:
    """Table spf[n] = least prime factor of n, for 0 <= n <= limit.

    spf[0] = spf[1] = 0.  Used to walk factorizations in O(log n) per n.
    """
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
            if p * p > limit:
                # remaining zeros are primes
                rest = np.flatnonzero(spf[2:] == 0) + 2
                spf[rest] = rest
                break
    return spf
