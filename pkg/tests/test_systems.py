import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from eg2order.core import ContractError, DomainError, EG2Params, cdf, pdf, reversed_hazard, survival
from eg2order.systems import (
    ComponentSet,
    SystemKind,
    evaluate,
    homogeneous_series_log_ratio,
    parallel_cdf,
    parallel_reversed_hazard,
    series_pdf_homogeneous,
    series_survival,
    system_pdf,
)

# 50-digit mpmath products of the component closed forms at x = 1, phi = 2
EX3_3_SERIES_SF_AT_1 = 0.74392439179128479
EX3_4_PARALLEL_CDF_AT_1 = 0.24831634259268673
# kernel-sum oracle: (z/x) e^-z sum varphi(alpha_i, 1 - e^-z), z = 1/2, x = 2
PRH_311_AT_2 = 0.57499485344738658
PDF_1_7_2_1_2_AT_1_5 = 0.50020609950784716

EX3_11_A = ComponentSet.from_arrays(5, [0.1, 1.14, 0.3], 2)

params = st.tuples(st.floats(0.2, 4), st.floats(0.3, 3), st.floats(0.2, 5))
component_sets = st.lists(params, min_size=1, max_size=6).map(ComponentSet)


def test_component_set_validation():
    with pytest.raises(DomainError):
        ComponentSet(())
    with pytest.raises(DomainError):
        ComponentSet(((1, 1, -1),))
    cs = ComponentSet.from_arrays([1, 2], 3, [4, 5])
    assert cs.phis.tolist() == [3, 3] and len(cs) == 2


def test_kind_parse():
    assert SystemKind.parse("Series") is SystemKind.SERIES
    with pytest.raises(ValueError):
        SystemKind.parse("k-of-n")


class TestSingleComponent:
    p = EG2Params(1.7, 2, 0.54)
    cs = ComponentSet((p,))

    @pytest.mark.parametrize("x", [0.3, 1.0, 4.0])
    def test_degenerate(self, x, backend):
        assert series_survival(self.cs, x) == pytest.approx(survival(self.p, x), rel=1e-14)
        assert parallel_cdf(self.cs, x) == pytest.approx(cdf(self.p, x), rel=1e-14)
        for kind in SystemKind:
            assert system_pdf(self.cs, kind, x) == pytest.approx(pdf(self.p, x), rel=1e-12)
        assert series_pdf_homogeneous(self.cs, x) == pytest.approx(pdf(self.p, x), rel=1e-12)
        assert parallel_reversed_hazard(self.cs, x) == pytest.approx(reversed_hazard(self.p, x), rel=1e-12)


class TestFrozen:
    def test_series_example(self, backend):
        cs = ComponentSet.from_arrays([1.7, 1.4], 2, [0.54, 0.66])
        assert series_survival(cs, 1.0) == pytest.approx(EX3_3_SERIES_SF_AT_1, rel=1e-14)
        assert round(series_survival(cs, 1.0), 4) == 0.7439

    def test_parallel_example(self, backend):
        cs = ComponentSet.from_arrays([1.32, 1.38], 2, [2.34, 2.26])
        assert parallel_cdf(cs, 1.0) == pytest.approx(EX3_4_PARALLEL_CDF_AT_1, rel=1e-14)

    def test_parallel_reversed_hazard_kernel_sum(self):
        cs = ComponentSet.from_arrays(1, 1, [3, 1, 1])
        assert parallel_reversed_hazard(cs, 2.0) == pytest.approx(PRH_311_AT_2, rel=1e-14)

    def test_alpha_total_collapse(self):
        cs = ComponentSet.from_arrays(1.7, 2, [0.54, 0.66])
        assert series_pdf_homogeneous(cs, 1.5) == pytest.approx(PDF_1_7_2_1_2_AT_1_5, rel=1e-12)
        assert series_pdf_homogeneous(cs, 1.5) == pytest.approx(pdf(EG2Params(1.7, 2, 1.2), 1.5), rel=1e-12)


def test_identical_parallel_is_square():
    p = EG2Params(0.8, 1.3, 2.2)
    cs = ComponentSet((p, p))
    x = np.geomspace(0.1, 10, 7)
    np.testing.assert_allclose(parallel_cdf(cs, x), cdf(p, x) ** 2, rtol=1e-13)


def test_series_closed_form_alpha_1_2():
    theta, phi = 1.3, 0.9
    cs = ComponentSet.from_arrays(theta, phi, [1, 2])
    x = np.geomspace(0.2, 20, 9)
    z = theta * x ** -phi
    closed = theta * phi * x ** (-phi - 1) * np.exp(-z) * 3 * (1 - np.exp(-z)) ** 2
    np.testing.assert_allclose(system_pdf(cs, "series", x), closed, rtol=1e-12)


def test_common_parameter_contract():
    cs = ComponentSet.from_arrays([1, 2], 1, [1, 1])
    with pytest.raises(ContractError):
        parallel_reversed_hazard(cs, 1.0)
    with pytest.raises(ContractError):
        series_pdf_homogeneous(ComponentSet.from_arrays(1, [1, 2], [1, 1]), 1.0)
    with pytest.raises(ContractError):
        homogeneous_series_log_ratio(ComponentSet.from_arrays(1, 1, [1]),
                                     ComponentSet.from_arrays(2, 1, [1]), 1.0)


@pytest.mark.parametrize("fn", [series_survival, parallel_cdf])
def test_domain(fn):
    with pytest.raises(DomainError):
        fn(EX3_11_A, 0.0)


def test_parallel_finite_difference_example():
    x, h = 1.0, 1e-6
    fd = (parallel_cdf(EX3_11_A, x + h) - parallel_cdf(EX3_11_A, x - h)) / (2 * h)
    assert system_pdf(EX3_11_A, "parallel", x) == pytest.approx(fd, rel=1e-6)


class TestProperties:
    @given(component_sets, st.floats(0.05, 50))
    def test_products_bounded_by_minimum(self, cs, x):
        assert series_survival(cs, x) <= min(survival(p, x) for p in cs) + 1e-15
        assert parallel_cdf(cs, x) <= min(cdf(p, x) for p in cs) + 1e-15

    @given(component_sets, st.floats(0.05, 50))
    def test_product_matches_components(self, cs, x):
        assert series_survival(cs, x) == pytest.approx(math.prod(survival(p, x) for p in cs), rel=1e-12, abs=1e-300)

    @given(component_sets, st.randoms(use_true_random=False), st.floats(0.05, 50))
    def test_permutation_invariance(self, cs, rnd, x):
        order = list(range(len(cs)))
        rnd.shuffle(order)
        other = cs.permuted(order)
        assert series_survival(other, x) == pytest.approx(series_survival(cs, x), rel=1e-13, abs=1e-300)
        assert parallel_cdf(other, x) == pytest.approx(parallel_cdf(cs, x), rel=1e-13, abs=1e-300)

    @given(component_sets, st.floats(0.05, 50), st.floats(0.05, 50))
    def test_monotone_in_x(self, cs, x1, x2):
        lo, hi = sorted((x1, x2))
        assert series_survival(cs, lo) >= series_survival(cs, hi)
        assert parallel_cdf(cs, lo) <= parallel_cdf(cs, hi)

    @settings(max_examples=150)
    @given(component_sets, st.sampled_from(list(SystemKind)), st.floats(0.1, 20))
    def test_pdf_matches_finite_difference(self, cs, kind, x):
        f = system_pdf(cs, kind, x)
        if f < 1e-200:
            return
        h = 1e-6 * x
        g = evaluate(cs, np.array([x - h, x + h]))
        # differentiate whichever of cdf / survival is the smaller (less cancellation)
        if g.cdf(kind)[1] < 0.5:
            fd = (g.cdf(kind)[1] - g.cdf(kind)[0]) / (2 * h)
        else:
            fd = (g.sf(kind)[0] - g.sf(kind)[1]) / (2 * h)
        assert fd == pytest.approx(f, rel=1e-6, abs=1e-9)

    @settings(max_examples=100)
    @given(st.floats(0.2, 4), st.floats(0.3, 3), st.lists(st.floats(0.2, 5), min_size=1, max_size=6),
           st.floats(0.05, 50))
    def test_parallel_rhazard_is_component_sum(self, theta, phi, alphas, x):
        cs = ComponentSet.from_arrays(theta, phi, alphas)
        try:
            parts = sum(reversed_hazard(p, x) for p in cs)
        except OverflowError:
            return
        assert parallel_reversed_hazard(cs, x) == pytest.approx(parts, rel=1e-12)

    @settings(max_examples=100)
    @given(st.floats(0.2, 4), st.floats(0.3, 3), st.lists(st.floats(0.2, 5), min_size=1, max_size=6),
           st.floats(0.05, 50))
    def test_homogeneous_series_pdf(self, theta, phi, alphas, x):
        cs = ComponentSet.from_arrays(theta, phi, alphas)
        assert series_pdf_homogeneous(cs, x) == pytest.approx(system_pdf(cs, "series", x), rel=1e-10, abs=1e-300)


@pytest.mark.parametrize("kind", list(SystemKind))
@pytest.mark.parametrize("cs", [
    ComponentSet.from_arrays([1.7, 1.4], 2, [0.54, 0.66]),
    ComponentSet.from_arrays([1.32, 1.38], 2, [2.34, 2.26]),
    EX3_11_A,
    ComponentSet.from_arrays([0.5, 2, 4], [0.7, 1.5, 2.5], [0.3, 1, 6]),
])
def test_system_pdf_normalized(cs, kind):
    def integrand(t):
        x = (1 - t) / t
        return system_pdf(cs, kind, x) / t ** 2 if x > 0 else 0.0
    breaks = [1 / (1 + x) for x in (1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0, 1e3)]
    total, _ = quad(integrand, 0, 1, limit=1000, points=breaks, epsabs=1e-10, epsrel=1e-10)
    assert total == pytest.approx(1.0, abs=1e-5)
