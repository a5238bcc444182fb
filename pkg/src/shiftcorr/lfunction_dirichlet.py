"""Von Mangoldt coefficients of ``-L'/L`` and the shifted prime-power sum.

For a newform ``f`` with Satake parameters ``alpha_p, beta_p`` at a good
prime, ``Lambda_L(p^r) = (alpha_p^r + beta_p^r) log p``; at a bad prime of
square-free level ``Lambda_L(p^r) = a_p^r log p``.  The shifted product
``L(s + i lam/2) L(s - i lam/2)`` has coefficients
``2 Lambda_L(n) cos((lam/2) log n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .arith import prime_power_decomposition, primes_up_to
from .errors import OutOfRange
from .newform_coeffs import CoeffTable, NewformSpec


@dataclass(frozen=True, eq=False)
class VonMangoldtTable:
    """``values[n] = Lambda_L(n)`` for ``n <= max_index``; zero off prime powers."""

    spec: NewformSpec
    max_index: int
    values: np.ndarray = field(repr=False)
    prime_base: np.ndarray = field(repr=False)
    prime_exp: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.values, self.prime_base, self.prime_exp):
            arr.setflags(write=False)

    def __getitem__(self, n):
        return self.values[n]


@dataclass(frozen=True)
class PsiValue:
    """Exact ``Psi_{L_lam}(x)`` with its prime / prime-power split.

    ``value == psi1 + psi2 + remainder`` up to rounding, where ``psi1`` and
    ``psi2`` are the constant and ``cos(lam log p)`` parts of the prime terms
    and ``remainder`` collects the higher prime powers.
    """

    x: float
    lam: float
    value: float
    psi1: float
    psi2: float
    remainder: float


def build_von_mangoldt(table: CoeffTable) -> VonMangoldtTable:
    n_max = table.max_index
    base, expo = prime_power_decomposition(n_max)
    values = np.zeros(n_max + 1)
    a = table.values
    for p in primes_up_to(n_max).tolist():
        logp = math.log(p)
        ap = float(a[p])
        bad = table.spec.level % p == 0
        c_prev, c = 2.0, ap
        q = p
        while q <= n_max:
            values[q] = c * logp
            if bad:
                c = c * ap
            else:
                c_prev, c = c, ap * c - c_prev
            q *= p
    return VonMangoldtTable(
        spec=table.spec, max_index=n_max, values=values, prime_base=base, prime_exp=expo
    )


def lambda_L_shifted(vm: VonMangoldtTable, n, lam: float):
    """``Lambda_{L_lam}(n) = 2 Lambda_L(n) cos((lam / 2) log n)``.

    Accepts a scalar or an integer array.
    """
    n_arr = np.asarray(n)
    if np.any(n_arr < 1) or np.any(n_arr > vm.max_index):
        raise OutOfRange(f"n must lie in [1, {vm.max_index}]")
    out = 2.0 * vm.values[n_arr] * np.cos(0.5 * lam * np.log(n_arr.astype(float)))
    return float(out) if np.ndim(out) == 0 else out


def shifted_squares(vm: VonMangoldtTable, lam: float) -> np.ndarray:
    """``Lambda_{L_lam}(n)^2`` for ``0 <= n <= max_index`` (index 0 is 0)."""
    n = np.arange(vm.max_index + 1, dtype=float)
    n[0] = 1.0
    sq = (2.0 * vm.values * np.cos(0.5 * lam * np.log(n))) ** 2
    sq[0] = 0.0
    return sq


def psi_L_lambda(vm: VonMangoldtTable, x: float, lam: float) -> PsiValue:
    """``sum_{n <= x} Lambda_{L_lam}(n)^2``, summed in ascending ``n``."""
    if x > vm.max_index:
        raise OutOfRange(f"x = {x} exceeds table size {vm.max_index}")
    top = int(math.floor(x))
    if top < 2:
        return PsiValue(x=float(x), lam=float(lam), value=0.0, psi1=0.0, psi2=0.0, remainder=0.0)
    sq = shifted_squares(vm, lam)[: top + 1]
    total = float(_running_neumaier(sq)[-1])

    expo = vm.prime_exp[: top + 1]
    primes = np.flatnonzero(expo == 1)
    lam_p2 = vm.values[primes] ** 2
    psi1 = 2.0 * float(_running_neumaier(lam_p2)[-1]) if primes.size else 0.0
    psi2 = (
        2.0 * float(_running_neumaier(lam_p2 * np.cos(lam * np.log(primes)))[-1])
        if primes.size
        else 0.0
    )
    higher = np.flatnonzero(expo >= 2)
    rem = float(_running_neumaier(sq[higher])[-1]) if higher.size else 0.0
    return PsiValue(x=float(x), lam=float(lam), value=total, psi1=psi1, psi2=psi2, remainder=rem)


def psi_cumulative(vm: VonMangoldtTable, lam: float) -> np.ndarray:
    """``Psi_{L_lam}(n)`` for every integer ``n <= max_index``.

    Uses the same running compensated sum as :func:`psi_L_lambda`, so
    ``psi_cumulative(vm, lam)[floor(x)] == psi_L_lambda(vm, x, lam).value``.
    """
    return _running_neumaier(shifted_squares(vm, lam))


@njit(cache=True)
def _running_neumaier(values):
    out = np.empty(values.shape[0])
    s = 0.0
    c = 0.0
    for i in range(values.shape[0]):
        v = values[i]
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[i] = s + c
    return out
