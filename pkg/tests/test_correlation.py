import math

import numpy as np
import pytest
from conftest import symmetric
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftcorr.correlation import (
    binned_pair_transform,
    double_zero_sum,
    evaluate,
    f_lambda,
    kernel_identity_sides,
    landau_gonek_compare,
    lg_main_term,
    local_maxima,
    nearest_integer,
    single_zero_sum,
    weighted_double_sum,
)
from shiftcorr.errors import EmptyZeroSet, IntegerX, OutOfRange, PairBudgetExceeded
from shiftcorr.lfunction_dirichlet import build_von_mangoldt
from shiftcorr.newform_coeffs import build_coeff_table
from shiftcorr.zero_data import build_lambda_zeros


def naive_pairs(g, x, kind):
    s = g[:, None] + g[None, :]
    if kind == "cauchy":
        return np.sum(x ** (1 + 1j * s) / (1 + 1j * s))
    return np.sum(np.exp(1j * s * math.log(x)) * 4 / (4 + s**2))


@pytest.fixture
def small(rng):
    return symmetric(np.sort(rng.uniform(1, 60, 40)))


def test_single_sum(small):
    x = np.array([1.7, 3.2, 9.9])
    ref = [np.sqrt(v) * np.sum(np.exp(1j * small * np.log(v))) for v in x]
    np.testing.assert_allclose(single_zero_sum(small, x), ref, rtol=1e-12)
    assert isinstance(single_zero_sum(small, 2.5), complex)
    with pytest.raises(OutOfRange):
        single_zero_sum(small, 1.0)


def test_double_sum_direct(small):
    for x in (1.5, 7.0, 40.0):
        assert double_zero_sum(small, x) == pytest.approx(naive_pairs(small, x, "cauchy"), rel=1e-11)


def test_diagonal_flag(small):
    x = 5.0
    diag = np.sum(x ** (1 + 2j * small) / (1 + 2j * small))
    full = double_zero_sum(small, x)
    off = double_zero_sum(small, x, include_diagonal=False)
    assert full - off == pytest.approx(diag, rel=1e-9, abs=1e-9)


def test_integral_oracle(small):
    for x in (2.0, 12.0):
        d = double_zero_sum(small, x)
        o = double_zero_sum(small, x, method="integral_oracle")
        assert abs(d - o) <= 1e-8 * abs(d)
    with pytest.raises(ValueError):
        double_zero_sum(small, 2.0, method="integral_oracle", include_diagonal=False)
    with pytest.raises(ValueError):
        double_zero_sum(small, 2.0, method="bogus")


def test_weighted_sum(small):
    for x in (3.0, 30.0):
        assert weighted_double_sum(small, x) == pytest.approx(naive_pairs(small, x, "weight"), rel=1e-11)


def test_kernel_identity(small):
    a, b = kernel_identity_sides(small[-20:], 6.0)
    assert abs(a - b) <= 1e-8 * abs(b)


@pytest.mark.parametrize("workers", [2, 8])
def test_worker_determinism(rng, workers):
    g = symmetric(rng.uniform(1, 500, 700))
    x = np.array([3.0, 17.0, 120.0])
    serial = double_zero_sum(g, x, workers=1)
    np.testing.assert_array_equal(double_zero_sum(g, x, workers=workers), serial)
    a = np.array([0.05, 0.3])
    np.testing.assert_array_equal(f_lambda(g, a, T=500.0, workers=workers), f_lambda(g, a, T=500.0))
    np.testing.assert_array_equal(
        f_lambda(g, a, T=500.0, method="binned", workers=workers), f_lambda(g, a, T=500.0, method="binned")
    )


def test_f_lambda(small):
    a = np.array([0.0, 0.1, 0.45])
    T = 60.0
    ref = [naive_pairs(small, T ** (4 * v), "weight").real / small.size for v in a]
    np.testing.assert_allclose(f_lambda(small, a, T=T), ref, rtol=1e-11, atol=1e-13)
    binned = f_lambda(small, a, T=T, method="binned")
    np.testing.assert_allclose(binned, ref, atol=1e-3)


def test_f_lambda_budget_switch(small):
    vals, info = f_lambda(small, [0.2, 0.3], T=60.0, pair_budget=100, return_info=True)
    assert info["method"] == "binned" and info["pair_count"] == small.size**2


def test_f_lambda_errors(small):
    with pytest.raises(EmptyZeroSet):
        f_lambda(np.zeros(0), [0.1])
    with pytest.raises(ValueError):
        f_lambda(np.array([1.0, 2.5, 7.0]), [0.3], T=10.0)


def test_binned_transform_symmetric(rng):
    g = symmetric(rng.uniform(1, 100, 300))
    out = binned_pair_transform(g, np.array([0.0, 1.3]), 1e-3)
    assert out[0].real == pytest.approx(np.sum(4 / (4 + (g[:, None] + g[None, :]) ** 2)), rel=1e-3)
    assert np.max(np.abs(out.imag)) < 1e-8


def test_budget(small):
    with pytest.raises(PairBudgetExceeded):
        double_zero_sum(small, [2.0, 3.0], pair_budget=100)
    with pytest.raises(PairBudgetExceeded):
        weighted_double_sum(small, 2.0, pair_budget=100)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0.5, 80.0), min_size=1, max_size=25, unique=True), st.floats(1.1, 50.0))
def test_double_sum_property(pos, x):
    g = symmetric(pos)
    ref = naive_pairs(g, x, "cauchy")
    assert abs(double_zero_sum(g, x) - ref) <= 1e-9 * max(1.0, abs(ref))


def test_nearest_integer():
    assert [nearest_integer(v) for v in (2.5, 3.5, 3.49, 4.51)] == [2, 4, 3, 5]


def test_landau_gonek(zeros_ec, ec11):
    vm = build_von_mangoldt(build_coeff_table(ec11, 50))
    zs = build_lambda_zeros(zeros_ec, 1.0, 300.0)
    with pytest.raises(IntegerX):
        landau_gonek_compare(zs, vm, 3.0)
    # limit at an integer
    lam3 = 2 * vm[3] * math.cos(0.5 * math.log(3))
    assert lg_main_term(vm, 3.0, 1.0, 300.0) == pytest.approx(-lam3 * 300 / math.pi)
    cmp = landau_gonek_compare(zs, vm, 3.001)
    assert cmp.n_x == 3
    assert cmp.lhs == pytest.approx(single_zero_sum(zs, 3.001))


def test_local_maxima():
    assert local_maxima([0, 2, 1, 3, 3, 0, 5]).tolist() == [1, 3]
    assert local_maxima([1, 2]).size == 0


def test_evaluate(small):
    r = evaluate("double_sum", small, [2.0, 3.0])
    assert r.kind == "double_sum" and r.values.shape == (2,) and r.pair_count == small.size**2
    r = evaluate("f_lambda", small, [0.1], T=60.0)
    assert r.method == "direct"
    with pytest.raises(ValueError):
        evaluate("nope", small, [1.0])
