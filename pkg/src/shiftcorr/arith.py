"""Small integer-arithmetic helpers shared by the coefficient and Dirichlet code."""

from __future__ import annotations

import math

import numpy as np
from numba import njit


def smallest_prime_factor(n_max: int) -> np.ndarray:
    """Sieve of smallest prime factors; ``spf[n]`` for ``0 <= n <= n_max``.

    ``spf[0]`` and ``spf[1]`` are 0.
    """
    spf = np.zeros(n_max + 1, dtype=np.int64)
    if n_max < 2:
        return spf
    _spf_fill(spf)
    return spf


@njit(cache=True)
def _spf_fill(spf):
    n_max = spf.shape[0] - 1
    for i in range(2, n_max + 1):
        if spf[i] == 0:
            spf[i] = i
            if i * i <= n_max:
                for j in range(i * i, n_max + 1, i):
                    if spf[j] == 0:
                        spf[j] = i


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def sigma0(n: int) -> int:
    """Number of positive divisors of ``n``."""
    if n < 1:
        raise ValueError(f"sigma0 needs n >= 1, got {n}")
    count = 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        count *= e + 1
        p += 1 if p == 2 else 2
    if m > 1:
        count *= 2
    return count


def sigma0_array(n_max: int) -> np.ndarray:
    """``sigma0(n)`` for every ``n <= n_max`` (index 0 holds 0)."""
    d = np.zeros(n_max + 1, dtype=np.int64)
    for k in range(1, n_max + 1):
        d[k::k] += 1
    return d


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def prime_power_decomposition(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """For each ``n <= n_max`` return ``(p, r)`` with ``n = p**r`` or ``(0, 0)``."""
    spf = smallest_prime_factor(n_max)
    base = np.zeros(n_max + 1, dtype=np.int64)
    expo = np.zeros(n_max + 1, dtype=np.int64)
    _prime_power_fill(spf, base, expo)
    return base, expo


@njit(cache=True)
def _prime_power_fill(spf, base, expo):
    for n in range(2, spf.shape[0]):
        p = spf[n]
        m = n
        r = 0
        while m % p == 0:
            m //= p
            r += 1
        if m == 1:
            base[n] = p
            expo[n] = r
