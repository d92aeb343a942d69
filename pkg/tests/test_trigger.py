import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taptrack.trigger import (
    EmpiricalCdf,
    TriggerState,
    default_cdf,
    next_interval,
    sample_indicator,
    should_update,
)

SMALL = EmpiricalCdf((0.3, 0.7, 1.0))


class TestEmpiricalCdf:
    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            EmpiricalCdf(())
        with pytest.raises(ValueError):
            EmpiricalCdf((0.5, 0.4, 1.0))
        with pytest.raises(ValueError):
            EmpiricalCdf((0.5, 0.99))
        with pytest.raises(ValueError):
            EmpiricalCdf((-0.1, 1.0))

    def test_value_clamps_beyond_support(self):
        assert SMALL.value(3) == 1.0
        assert SMALL.value(50) == 1.0
        with pytest.raises(ValueError):
            SMALL.value(0)

    def test_mean_of_point_mass(self):
        cdf = EmpiricalCdf((0.0, 1.0))
        assert cdf.mean() == 2.0


class TestShouldUpdate:
    def test_zero_indicator_always_fires(self):
        assert should_update(TriggerState(0.0, 1), SMALL)

    def test_forced_at_support_end(self):
        assert should_update(TriggerState(1.0, 3), SMALL)

    def test_direct_comparison(self):
        assert not should_update(TriggerState(0.5, 1), SMALL)
        assert should_update(TriggerState(0.5, 2), SMALL)


class TestNextInterval:
    @pytest.mark.parametrize(
        ("d_t", "expected"), [(0.5, 2), (0.0, 1), (1.0, 3), (0.3, 1), (0.30001, 2)]
    )
    def test_examples(self, d_t, expected):
        assert next_interval(d_t, SMALL) == expected

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            next_interval(1.5, SMALL)

    @given(d_t=st.floats(0, 1))
    @settings(max_examples=200)
    def test_equivalence_with_iterated_loop(self, d_t):
        cdf = default_cdf()
        fired = None
        for t in range(1, cdf.support + 1):
            if should_update(TriggerState(d_t, t), cdf):
                fired = t
                break
        assert fired == next_interval(d_t, cdf)

    def test_never_exceeds_support(self):
        cdf = default_cdf()
        for d_t in np.linspace(0, 1, 1001):
            assert next_interval(float(d_t), cdf) <= cdf.support


class TestDefaultCdf:
    def test_mean_is_eight(self):
        cdf = default_cdf()
        assert abs(cdf.mean() - 8.0) <= 1e-9

    def test_terminates_at_one_exactly(self):
        assert default_cdf().values[-1] == 1.0

    def test_deterministic_bit_for_bit(self):
        assert default_cdf().values == default_cdf().values

    def test_other_targets(self):
        cdf = default_cdf(support=10, mean_steps=4.0)
        assert cdf.support == 10
        assert abs(cdf.mean() - 4.0) <= 1e-9

    def test_unreachable_mean_rejected(self):
        with pytest.raises(ValueError):
            default_cdf(support=20, mean_steps=15.0)


class TestSampleIndicator:
    def test_same_seed_same_sequence(self):
        a = [sample_indicator(np.random.default_rng(42)) for _ in range(1)]
        r1, r2 = np.random.default_rng(7), np.random.default_rng(7)
        seq1 = [sample_indicator(r1) for _ in range(100)]
        seq2 = [sample_indicator(r2) for _ in range(100)]
        assert seq1 == seq2
        assert all(0.0 <= v <= 1.0 for v in seq1 + a)

    def test_law_of_large_numbers(self):
        rng = np.random.default_rng(123)
        draws = [sample_indicator(rng) for _ in range(100_000)]
        assert 0.497 <= np.mean(draws) <= 0.503

    def test_consumes_exactly_one_draw(self):
        r1, r2 = np.random.default_rng(9), np.random.default_rng(9)
        sample_indicator(r1)
        r2.random()
        assert r1.random() == r2.random()


class TestDistributionMatch:
    def test_interval_loop_matches_cdf(self):
        # generate intervals via the step-by-step trigger loop
        cdf = default_cdf()
        rng = np.random.default_rng(2024)
        intervals = []
        for _ in range(10_000):
            d_t = sample_indicator(rng)
            t = 1
            while not should_update(TriggerState(d_t, t), cdf):
                t += 1
            intervals.append(t)
        intervals = np.asarray(intervals)
        assert intervals.max() <= cdf.support
        empirical = [
            np.count_nonzero(intervals <= k) / intervals.size
            for k in range(1, cdf.support + 1)
        ]
        ks = max(abs(e - v) for e, v in zip(empirical, cdf.values))
        assert ks <= 0.02
