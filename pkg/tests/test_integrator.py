import math

import numpy as np
import pytest

from gaugequad import (
    Gauge,
    GaugeFamily,
    Interval,
    InvalidTolerance,
    NonFiniteValue,
    TaggedPartition,
    WitnessNotFound,
    gauge_integrate,
    riemann_sum,
    riemann_unboundedness_witness,
    smooth_gauge_family,
    stieltjes_sum,
    sum_defect,
)
from gaugequad import oscillator as osc

from conftest import const_gauge

HALVES = TaggedPartition(Interval(0.0, 1.0), [0.25, 0.75], [0.0, 0.5], [0.5, 1.0])


# ------------------------------------------------------------ riemann_sum

def test_riemann_sum_identity_function():
    assert riemann_sum(lambda x: x, HALVES) == pytest.approx(0.5, abs=0.0)


def test_riemann_sum_constant_telescopes():
    p = TaggedPartition(
        Interval(0.2, 1.7), [0.3, 0.9, 1.5], [0.2, 0.8, 1.2], [0.8, 1.2, 1.7]
    )
    assert riemann_sum(lambda x: 3.0 + 0.0 * np.asarray(x), p) == pytest.approx(
        3.0 * 1.5, rel=1e-15
    )


def test_riemann_sum_rejects_nonfinite_integrand():
    with np.errstate(divide="ignore"):
        with pytest.raises(NonFiniteValue):
            riemann_sum(lambda x: 1.0 / (np.asarray(x, dtype=float) - 0.25), HALVES)


def test_riemann_sum_scalar_only_callable_fallback():
    def f(x):
        if hasattr(x, "__len__"):
            raise TypeError("scalar only")
        return math.sin(x)

    expected = math.sin(0.25) * 0.5 + math.sin(0.75) * 0.5
    assert riemann_sum(f, HALVES) == pytest.approx(expected, rel=1e-15)


def test_riemann_sum_linearity_within_ulp_budget():
    rng = np.random.default_rng(7)
    f = lambda x: np.sin(3.0 * np.asarray(x, dtype=float))  # noqa: E731
    g = lambda x: np.exp(np.asarray(x, dtype=float))  # noqa: E731
    a, b = 2.5, -1.25
    from gaugequad import random_delta_fine_partition

    for seed in range(10):
        p = random_delta_fine_partition(
            Interval(0.0, 1.0), Gauge(lambda x: 0.05 + x / 10.0), seed=seed
        )
        lhs = riemann_sum(
            lambda x: a * f(x) + b * g(x), p
        )
        rhs = a * riemann_sum(f, p) + b * riemann_sum(g, p)
        scale = riemann_sum(lambda x: np.abs(a * f(x)) + np.abs(b * g(x)), p)
        assert abs(lhs - rhs) <= 4 * np.finfo(float).eps * max(scale, 1.0)


def test_compensated_flag_close_to_plain():
    p = HALVES
    f = lambda x: np.asarray(x, dtype=float) ** 2  # noqa: E731
    assert riemann_sum(f, p, compensated=True) == pytest.approx(
        riemann_sum(f, p), rel=1e-15
    )


# ----------------------------------------------------------- stieltjes_sum

def test_stieltjes_identity_integrator_bitwise_equals_riemann():
    f = lambda x: np.sin(np.asarray(x, dtype=float))  # noqa: E731
    ident = lambda x: np.asarray(x, dtype=float)  # noqa: E731
    from gaugequad import random_delta_fine_partition

    for seed in range(5):
        p = random_delta_fine_partition(
            Interval(0.0, 1.0), Gauge(lambda x: 0.05 + x / 5.0), seed=seed
        )
        assert stieltjes_sum(f, ident, p) == riemann_sum(f, p)


def test_stieltjes_constant_integrand_telescopes():
    g = lambda x: np.asarray(x, dtype=float) ** 3  # noqa: E731
    one = lambda x: np.ones_like(np.asarray(x, dtype=float))  # noqa: E731
    assert stieltjes_sum(one, g, HALVES) == pytest.approx(1.0, rel=1e-15)


def test_stieltjes_hand_value():
    # f(x) = x against g(x) = x^2 on halves with midpoint tags:
    # 0.25*(0.25-0) + 0.75*(1-0.25) = 0.625
    f = lambda x: np.asarray(x, dtype=float)  # noqa: E731
    g = lambda x: np.asarray(x, dtype=float) ** 2  # noqa: E731
    assert stieltjes_sum(f, g, HALVES) == pytest.approx(0.625, abs=1e-15)


# ------------------------------------------------------------- sum_defect

def test_sum_defect_midpoint_exact_for_linear():
    assert sum_defect(lambda x: x * x / 2.0, lambda x: np.asarray(x, float), HALVES) == 0.0


def test_sum_defect_zero_functions():
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))  # noqa: E731
    assert sum_defect(zero, zero, HALVES) == 0.0


# --------------------------------------------------------- gauge_integrate

def test_gauge_integrate_x_squared():
    est = gauge_integrate(
        lambda x: np.asarray(x, dtype=float) ** 2,
        smooth_gauge_family(),
        Interval(0.0, 1.0),
        tol=1e-9,
        trials=3,
        seed=1,
    )
    assert est.converged
    assert est.spread <= 1e-9
    assert est.value == pytest.approx(1.0 / 3.0, abs=1e-8)


def test_gauge_integrate_polynomials_match_closed_forms():
    # light sweep; the full degree <= 5 run at tol 1e-9 is acceptance A10
    for k in (0, 1, 3):
        est = gauge_integrate(
            lambda x, _k=k: np.asarray(x, dtype=float) ** _k,
            smooth_gauge_family(),
            Interval(0.0, 1.0),
            tol=1e-7,
            trials=2,
            seed=k,
        )
        assert est.converged
        assert est.value == pytest.approx(1.0 / (k + 1), abs=1e-6)


def test_gauge_integrate_truncated_family_j2():
    est = gauge_integrate(
        lambda x: osc.f_j(2, x),
        osc.truncated_gauge_family(2),
        Interval(0.0, 1.0),
        tol=1e-4,
        trials=3,
        seed=0,
    )
    assert est.converged
    assert est.value == pytest.approx(osc.exact_integral_fj(2), abs=1e-4)
    # frozen closed form: sin 1 - sin(4)/4
    assert osc.exact_integral_fj(2) == pytest.approx(1.0306716086348786, abs=1e-15)


def test_gauge_integrate_is_deterministic():
    kwargs = dict(tol=1e-6, trials=3, seed=123)
    f = lambda x: np.asarray(x, dtype=float) ** 3  # noqa: E731
    e1 = gauge_integrate(f, smooth_gauge_family(), Interval(0.0, 1.0), **kwargs)
    e2 = gauge_integrate(f, smooth_gauge_family(), Interval(0.0, 1.0), **kwargs)
    assert e1 == e2


def test_gauge_integrate_validates_arguments():
    f = lambda x: np.asarray(x, dtype=float)  # noqa: E731
    with pytest.raises(InvalidTolerance):
        gauge_integrate(f, smooth_gauge_family(), Interval(0.0, 1.0), tol=0.0)
    with pytest.raises(InvalidTolerance):
        gauge_integrate(f, smooth_gauge_family(), Interval(0.0, 1.0), tol=-1e-3)
    with pytest.raises(ValueError):
        gauge_integrate(f, smooth_gauge_family(), Interval(0.0, 1.0), tol=1e-3, trials=1)


def test_gauge_integrate_depth_exceeded_first_level_raises():
    from gaugequad import DepthExceeded

    family = GaugeFamily(lambda eps: const_gauge(1e-30))
    with pytest.raises(DepthExceeded):
        gauge_integrate(
            lambda x: np.asarray(x, dtype=float),
            family,
            Interval(0.0, 1.0),
            tol=1e-3,
            trials=2,
            max_depth=16,
        )


def test_gauge_integrate_unconverged_returns_last_estimate():
    # coarse gauge keeps sampled sums wider than tol for a few levels, then
    # the family collapses below float representability
    def at(eps):
        if eps < 1e-13:
            return const_gauge(1e-300)
        return const_gauge(0.3)

    rng_f = lambda x: np.cos(37.0 * np.asarray(x, dtype=float))  # noqa: E731
    est = gauge_integrate(
        rng_f, GaugeFamily(at), Interval(0.0, 1.0), tol=1e-12, trials=2, max_depth=24
    )
    assert not est.converged
    assert est.cells_used >= 1
    assert est.spread > 1e-12


# ----------------------------------------- riemann_unboundedness_witness

def test_witness_found_for_unbounded_oscillator():
    p = riemann_unboundedness_witness(osc.f, Interval(0.0, 1.0), 0.1, 1e3)
    assert np.all(p.lengths < 0.1)
    assert abs(riemann_sum(osc.f, p)) > 1e3


def test_witness_larger_bound_still_found():
    p = riemann_unboundedness_witness(osc.f, Interval(0.0, 1.0), 0.1, 1e6)
    assert abs(riemann_sum(osc.f, p)) > 1e6


def test_witness_not_found_for_bounded_function():
    with pytest.raises(WitnessNotFound):
        riemann_unboundedness_witness(
            lambda x: np.asarray(x, dtype=float), Interval(0.0, 1.0), 0.1, 1e3
        )
