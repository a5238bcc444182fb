import math

import numpy as np
import pytest
from scipy.integrate import quad

from shiftcorr.errors import BadInterval, MainTermZero, TooFewPrimes
from shiftcorr.lfunction_dirichlet import build_von_mangoldt, psi_cumulative
from shiftcorr.newform_coeffs import build_coeff_table
from shiftcorr.sato_tate import (
    angle_report,
    distribution_report,
    dyadic_mean_deviation,
    grid_discrepancy,
    psi_prediction_ratio,
    relative_error_scale,
    sample_st_angles,
    st_cdf,
    st_measure,
)


def test_cdf_and_measure():
    assert st_cdf(0.0) == 0.0 and st_cdf(math.pi) == pytest.approx(1.0)
    assert st_cdf(math.pi / 2) == pytest.approx(0.5)
    ref = quad(lambda t: 2 / math.pi * math.sin(t) ** 2, 0.3, 2.1)[0]
    assert st_measure(0.3, 2.1) == pytest.approx(ref, rel=1e-12)
    with pytest.raises(BadInterval):
        st_measure(2.0, 1.0)
    with pytest.raises(BadInterval):
        st_measure(-0.1, 1.0)


def test_sampler_follows_law(rng):
    th = sample_st_angles(40000, rng)
    rep = angle_report(th, 2 * np.cos(th), 0.0, 0.0, n_bins=128)
    assert rep.sup_discrepancy < 4 / math.sqrt(th.size)
    assert rep.second_moment_ratio == pytest.approx(1.0, abs=0.03)
    np.testing.assert_array_equal(sample_st_angles(10, 7), sample_st_angles(10, 7))


def test_grid_discrepancy():
    assert grid_discrepancy([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert grid_discrepancy([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]) == pytest.approx(1.0)


def test_too_few():
    with pytest.raises(TooFewPrimes):
        angle_report(np.ones(5), np.ones(5), 10.0, 0.0)


def test_distribution_report(ec11):
    table = build_coeff_table(ec11, 20000)
    rep = distribution_report(table, 20000)
    assert rep.n_primes == 2262 - 1  # pi(20000) minus the bad prime
    assert 0.8 < rep.second_moment_ratio < 1.2
    assert rep.error_band == pytest.approx(relative_error_scale(2, 11, 20000))
    assert rep.empirical_mass.sum() == pytest.approx(1.0) and rep.st_mass.sum() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        distribution_report(table, 30000)


def test_psi_ratio(delta):
    table = build_coeff_table(delta, 50000)
    vm = build_von_mangoldt(table)
    r = psi_prediction_ratio(vm, table, 50000, 1.0)
    assert 0.6 < r.ratio < 1.4
    with pytest.raises(MainTermZero):
        psi_prediction_ratio(vm, table, 1.0, 1.0)


def test_dyadic_mean(ec11):
    from shiftcorr.asymptotics import psi_main_term

    vm = build_von_mangoldt(build_coeff_table(ec11, 4000))
    cum = psi_cumulative(vm, 1.0)
    xs = np.arange(1001, 2001)
    ref = np.mean([abs(cum[x] / psi_main_term(float(x), 1.0) - 1) for x in xs])
    assert dyadic_mean_deviation(vm, 2000, 1.0) == pytest.approx(ref, rel=1e-12)
