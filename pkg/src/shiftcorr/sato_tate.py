"""Sato-Tate statistics of the prime coefficients.

Angles are defined by ``a_p = 2 cos(theta_p)`` at good primes; bad primes
are left out of every statistic here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import psi_main_term
from .errors import BadInterval, MainTermZero, TooFewPrimes
from .lfunction_dirichlet import VonMangoldtTable, psi_cumulative, psi_L_lambda
from .newform_coeffs import CoeffTable, theta_angles
from .summation import compensated_sum

MIN_PRIMES = 100


def st_cdf(theta):
    """Sato-Tate distribution function ``(theta - sin(theta) cos(theta)) / pi``."""
    t = np.asarray(theta, dtype=float)
    out = (t - np.sin(t) * np.cos(t)) / math.pi
    return float(out) if out.ndim == 0 else out


def st_measure(a: float, b: float) -> float:
    """Mass of ``[a, b]`` under ``(2/pi) sin^2(theta) d theta``."""
    if not (0.0 <= a <= b <= math.pi):
        raise BadInterval(f"need 0 <= a <= b <= pi, got [{a}, {b}]")
    return (2.0 / math.pi) * ((b - a) / 2.0 - (math.sin(2.0 * b) - math.sin(2.0 * a)) / 4.0)


def sample_st_angles(n: int, rng=None) -> np.ndarray:
    """Draw ``n`` angles from the Sato-Tate law by inverting :func:`st_cdf`.

    The inversion is a vectorised bisection run to full double precision.
    """
    rng = np.random.default_rng(rng)
    u = rng.random(n)
    lo = np.zeros(n)
    hi = np.full(n, math.pi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        below = st_cdf(mid) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class DistributionReport:
    x_cut: float
    n_primes: int
    edges: np.ndarray = field(repr=False)
    empirical_mass: np.ndarray = field(repr=False)
    st_mass: np.ndarray = field(repr=False)
    sup_discrepancy: float
    second_moment_ratio: float
    error_band: float


def grid_discrepancy(empirical_mass, st_mass) -> float:
    """``max |E[a,b] - S[a,b]|`` over intervals with endpoints on the bin grid."""
    d = np.concatenate([[0.0], np.cumsum(np.asarray(empirical_mass) - np.asarray(st_mass))])
    return float(d.max() - d.min())


def angle_report(theta, a_p, x_cut: float, error_band: float, n_bins: int = 512) -> DistributionReport:
    theta = np.asarray(theta, dtype=float)
    if theta.size < MIN_PRIMES:
        raise TooFewPrimes(f"{theta.size} good primes below {x_cut}; need {MIN_PRIMES}")
    edges = np.linspace(0.0, math.pi, n_bins + 1)
    counts, _ = np.histogram(theta, bins=edges)
    emp = counts / theta.size
    cdf = st_cdf(edges)
    st = np.diff(cdf)
    st = st / (cdf[-1] - cdf[0])
    second = compensated_sum(np.sort(np.asarray(a_p, dtype=float) ** 2)) / theta.size
    return DistributionReport(
        x_cut=float(x_cut),
        n_primes=int(theta.size),
        edges=edges,
        empirical_mass=emp,
        st_mass=st,
        sup_discrepancy=grid_discrepancy(emp, st),
        second_moment_ratio=second,
        error_band=error_band,
    )


def relative_error_scale(weight: int, level: int, x: float) -> float:
    """``log(k N log x) / sqrt(log x)``."""
    lx = math.log(x)
    return math.log(weight * level * lx) / math.sqrt(lx)


def distribution_report(table: CoeffTable, x_cut: float, n_bins: int = 512) -> DistributionReport:
    """Angle histogram against the Sato-Tate law for good primes ``p <= x_cut``.

    ``second_moment_ratio`` is the mean of ``a_p^2`` over those primes.
    """
    if x_cut > table.max_index:
        raise ValueError(f"x_cut = {x_cut} exceeds table size {table.max_index}")
    ps, theta = theta_angles(table)
    keep = ps <= x_cut
    band = relative_error_scale(table.spec.weight, table.spec.level, x_cut)
    return angle_report(theta[keep], table.values[ps[keep]], x_cut, band, n_bins)


@dataclass(frozen=True)
class PsiRatio:
    x: float
    lam: float
    ratio: float
    error_scale: float


def psi_prediction_ratio(vm: VonMangoldtTable, table: CoeffTable, x: float, lam: float) -> PsiRatio:
    """Exact ``Psi_{L_lam}(x)`` over its leading-order prediction."""
    main = psi_main_term(x, lam)
    if abs(main) < 1e-300:
        raise MainTermZero(f"main term vanishes at x = {x}, lam = {lam}")
    value = psi_L_lambda(vm, x, lam).value
    scale = relative_error_scale(table.spec.weight, table.spec.level, x)
    return PsiRatio(x=float(x), lam=float(lam), ratio=value / main, error_scale=scale)


def dyadic_mean_deviation(vm: VonMangoldtTable, X: float, lam: float) -> float:
    """Mean of ``|ratio - 1|`` over every integer ``x`` in ``(X/2, X]``."""
    cum = psi_cumulative(vm, lam)
    xs = np.arange(math.floor(X / 2.0) + 1, math.floor(X) + 1)
    dev = np.abs(cum[xs] / psi_main_term(xs.astype(float), lam) - 1.0)
    return float(dev.mean())
