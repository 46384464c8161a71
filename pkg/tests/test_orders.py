import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eg2order.majorization import ParamMatrix
from eg2order.orders import (
    DEFAULT_GRID,
    DominanceVerdict,
    GridSpec,
    Relation,
    SchurClass,
    Spacing,
    chain_pair_condition,
    compare_fr,
    compare_lr,
    compare_rf,
    compare_st,
    find_crossings,
    implication_audit,
    log_density_ratio,
    schur_pair_condition,
)
from eg2order.systems import (
    ComponentSet,
    SystemKind,
    evaluate,
    parallel_reversed_hazard,
    series_survival,
)

# bisection on a 50-digit mpmath difference of the two parallel cdfs
CROSSING_311 = 39.541825892485399

SERIES_X = ComponentSet.from_arrays([1.7, 1.4], 2, [0.54, 0.66])
SERIES_XSTAR = ComponentSet.from_arrays([1.8, 1.3], 2, [0.5, 0.7])
PARALLEL_X = ComponentSet.from_arrays([1.32, 1.38], 2, [2.34, 2.26])
PARALLEL_XSTAR = ComponentSet.from_arrays([1.5, 1.2], 2, [2.1, 2.5])
PHI_A = ComponentSet.from_arrays(5, [0.1, 1.14, 0.3], 2)
PHI_B = ComponentSet.from_arrays(5, [0.6, 0.9, 0.04], 2)


class TestGrid:
    def test_default(self):
        xs = DEFAULT_GRID.points()
        assert xs[0] == pytest.approx(1e-2) and xs[-1] == pytest.approx(1e2) and xs.size == 4096

    def test_linear(self):
        xs = GridSpec(1, 2, 3, "linear").points()
        assert xs.tolist() == [1.0, 1.5, 2.0]

    @pytest.mark.parametrize("args", [(0, 1, 10), (2, 1, 10), (1, 2, 1), (1, np.inf, 10), (1, 2, 2.5)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            GridSpec(*args)

    def test_refined(self):
        g = GridSpec(1, 2, 10, Spacing.LINEAR).refined()
        assert g.count == 20 and g.spacing is Spacing.LINEAR


def test_verdict_crossing_consistency():
    with pytest.raises(AssertionError):
        DominanceVerdict(Relation.CROSSING, (), 0.0, DEFAULT_GRID)
    assert Relation.FIRST.swapped() is Relation.SECOND
    assert not Relation.CROSSING.conclusive


class TestStochastic:
    def test_identical_equal(self):
        v = compare_st(SERIES_X, SERIES_X, "series")
        assert v.relation is Relation.EQUAL and v.max_violation == 0.0

    def test_series_averaged_matrix_is_larger(self):
        v = compare_st(SERIES_X, SERIES_XSTAR, "series")
        assert v.relation is Relation.FIRST
        assert v.max_violation < 1e-10

    def test_parallel_averaged_matrix_is_smaller(self):
        v = compare_st(PARALLEL_X, PARALLEL_XSTAR, "parallel")
        assert v.relation is Relation.SECOND and not v.crossings

    def test_crossing_example(self):
        v = compare_st(PHI_A, PHI_B, "parallel")
        assert v.relation is Relation.CROSSING
        (lo, hi), = v.crossings
        assert lo <= CROSSING_311 <= hi and hi - lo < 1e-8 * lo

    @pytest.mark.parametrize("a, b, kind", [(SERIES_X, SERIES_XSTAR, "series"),
                                            (PARALLEL_X, PARALLEL_XSTAR, "parallel"),
                                            (PHI_A, PHI_B, "parallel")])
    def test_antisymmetric(self, a, b, kind):
        assert compare_st(b, a, kind).relation is compare_st(a, b, kind).relation.swapped()

    def test_permutation_invariant(self):
        v = compare_st(SERIES_X.permuted([1, 0]), SERIES_XSTAR, "series")
        assert v.relation is Relation.FIRST

    @pytest.mark.parametrize("a, b, kind", [(SERIES_X, SERIES_XSTAR, "series"),
                                            (PARALLEL_X, PARALLEL_XSTAR, "parallel")])
    def test_refinement_keeps_direction(self, a, b, kind):
        coarse = compare_st(a, b, kind, GridSpec(count=256))
        fine = compare_st(a, b, kind, GridSpec(count=256).refined(8))
        assert coarse.relation is fine.relation

    def test_dead_tail_ignored(self):
        # both survivals underflow far right of the window, any difference there is noise
        a = ComponentSet.from_arrays(1, 1, [1.0])
        b = ComponentSet.from_arrays(1, 1, [1.0 + 1e-13])
        v = compare_st(a, b, "series", GridSpec(1e3, 1e6, 64))
        assert v.relation is Relation.EQUAL


class TestFailureRates:
    def test_alpha_shift_series(self):
        # larger total alpha means a larger hazard for series systems with common theta, phi
        a = ComponentSet.from_arrays(1, 1.5, [0.5, 0.5])
        b = ComponentSet.from_arrays(1, 1.5, [1.0, 1.0])
        assert compare_fr(a, b, "series").relation is Relation.FIRST
        assert compare_fr(b, a, "series").relation is Relation.SECOND

    def test_rf_majorized_alpha(self):
        a = ComponentSet.from_arrays(1, 1, [3, 1, 1])
        b = ComponentSet.from_arrays(1, 1, [5 / 3] * 3)
        v = compare_rf(a, b)
        assert v.relation is Relation.FIRST
        assert compare_rf(a, a).relation is Relation.EQUAL

    def test_rf_matches_closed_form_sum(self):
        a = ComponentSet.from_arrays(1, 1, [3, 1, 1])
        xs = GridSpec(0.5, 4, 5).points()
        g = np.exp(evaluate(a, xs).log_rhazard("parallel"))
        np.testing.assert_allclose(g, parallel_reversed_hazard(a, xs), rtol=1e-12)


class TestLikelihoodRatio:
    def test_smaller_alpha_total_is_larger(self):
        a = ComponentSet.from_arrays(1.2, 1.1, [0.4, 0.9])
        b = ComponentSet.from_arrays(1.2, 1.1, [1.0, 1.3, 0.2])
        assert compare_lr(a, b, "series").relation is Relation.FIRST
        assert compare_lr(b, a, "series").relation is Relation.SECOND

    def test_equal(self):
        a = ComponentSet.from_arrays(1.2, 1.1, [0.4, 0.9])
        b = ComponentSet.from_arrays(1.2, 1.1, [0.65, 0.65])
        assert compare_lr(a, b, "series").relation is Relation.EQUAL

    def test_homogeneous_ratio_matches_densities(self):
        a = ComponentSet.from_arrays(1.2, 1.1, [0.4, 0.9])
        b = ComponentSet.from_arrays(1.2, 1.1, [2.0])
        xs = GridSpec(0.1, 10, 7).points()
        ratio, _ = log_density_ratio(a, b, "series", xs)
        direct = evaluate(a, xs).log_pdf("series") - evaluate(b, xs).log_pdf("series")
        np.testing.assert_allclose(ratio, direct, rtol=1e-10, atol=1e-12)

    def test_crossing_example_not_monotone(self):
        v = compare_lr(PHI_A, PHI_B, "parallel")
        assert v.relation in (Relation.CROSSING, Relation.INCONCLUSIVE)


class TestAudit:
    def test_identical(self):
        rep = implication_audit(SERIES_X, SERIES_X, "series")
        assert rep.ok
        assert all(v.relation is Relation.EQUAL for v in rep.verdicts.values())

    def test_alpha_total_instance(self):
        a = ComponentSet.from_arrays(0.7, 2.0, [0.3, 0.5])
        b = ComponentSet.from_arrays(0.7, 2.0, [0.6, 0.6])
        rep = implication_audit(a, b, "series")
        assert rep.ok
        assert rep.verdicts["lr"].relation is Relation.FIRST
        assert rep.verdicts["st"].relation is Relation.FIRST

    def test_random_common_parameters(self):
        rng = np.random.default_rng(20240611)
        grid = GridSpec(count=256)
        flags = []
        for _ in range(1000):
            theta, phi = rng.uniform(0.2, 4), rng.uniform(0.3, 3)
            a = ComponentSet.from_arrays(theta, phi, rng.uniform(0.2, 4, rng.integers(1, 6)))
            b = ComponentSet.from_arrays(theta, phi, rng.uniform(0.2, 4, rng.integers(1, 6)))
            flags += implication_audit(a, b, "series", grid).flags
        assert flags == []


class TestSchur:
    def test_alpha_series_flat(self):
        def f(alphas):
            return series_survival(ComponentSet.from_arrays(1.3, 0.8, alphas), 1.7)
        ev = schur_pair_condition(f, [0.5, 1.5, 2.5])
        assert ev.classification is SchurClass.BOTH
        assert max(abs(ev.min_pair_product), abs(ev.max_pair_product)) < 1e-9

    def test_rhazard_alpha_convex(self):
        def f(alphas):
            return parallel_reversed_hazard(ComponentSet.from_arrays(1, 1, alphas), 1.0)
        assert schur_pair_condition(f, [3, 1, 1], h=1e-5).classification is SchurClass.CONVEX

    def test_series_phi_concave(self):
        def f(phis):
            return series_survival(ComponentSet.from_arrays(1, phis, 2), 3.0)
        assert schur_pair_condition(f, [0.5, 1.5]).classification is SchurClass.CONCAVE

    def test_neither(self):
        ev = schur_pair_condition(lambda z: z[0] ** 2 - z[1] ** 2, [1.0, 2.0, 3.0])
        assert ev.classification is SchurClass.NEITHER

    def test_equal_entries_both(self):
        ev = schur_pair_condition(lambda z: float(np.sum(z ** 2)), [1.0, 1.0])
        assert ev.classification is SchurClass.BOTH


class TestChainCondition:
    @pytest.mark.parametrize("kind", list(SystemKind))
    def test_identical_columns(self, kind):
        assert chain_pair_condition(ParamMatrix((1.5, 1.5), (2, 2)), kind, 1.3) == pytest.approx(0, abs=1e-12)

    @pytest.mark.parametrize("x", [0.3, 1.0, 2.5, 8.0])
    def test_examples(self, x):
        assert chain_pair_condition(ParamMatrix((0.5, 0.7), (1.8, 1.3)), "series", x) <= 1e-9
        assert chain_pair_condition(ParamMatrix((2.1, 2.5), (1.5, 1.2)), "parallel", x) <= 1e-9

    def test_wrong_shape(self):
        with pytest.raises(ValueError):
            chain_pair_condition(ParamMatrix((1, 2, 3), (3, 2, 1)), "series", 1.0)


class TestCrossings:
    def test_none_for_identical(self):
        assert find_crossings(PHI_A, PHI_A, "parallel") == []

    def test_none_for_dominant_pair(self):
        a = ComponentSet.from_arrays(1, 1, [3, 1, 1])
        b = ComponentSet.from_arrays(1, 1, [5 / 3] * 3)
        assert find_crossings(a, b, "parallel") == []

    def test_example_root(self):
        roots = find_crossings(PHI_A, PHI_B, "parallel")
        assert len(roots) == 1
        assert roots[0] == pytest.approx(CROSSING_311, rel=1e-10)

    def test_touch_is_not_a_crossing(self):
        # at x = 1 every x**-phi equals 1, so the systems agree there without changing sign
        xs = np.array([1.0])
        np.testing.assert_allclose(evaluate(PHI_A, xs).cdf("parallel"),
                                   evaluate(PHI_B, xs).cdf("parallel"), rtol=1e-15)
        assert all(abs(r - 1.0) > 1e-3 for r in find_crossings(PHI_A, PHI_B, "parallel"))


alphas = st.lists(st.floats(0.2, 4), min_size=1, max_size=5)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.2, 4), st.floats(0.3, 3), alphas, alphas, st.sampled_from(["st", "fr", "lr"]))
def test_swapping_arguments_swaps_verdict(theta, phi, a, b, order):
    A = ComponentSet.from_arrays(theta, phi, a)
    B = ComponentSet.from_arrays(theta, phi, b)
    fn = {"st": compare_st, "fr": compare_fr, "lr": compare_lr}[order]
    grid = GridSpec(count=256)
    assert fn(B, A, "series", grid).relation is fn(A, B, "series", grid).relation.swapped()
