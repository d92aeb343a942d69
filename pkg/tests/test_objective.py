import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taptrack.model import Control, HumanLikeParams, State, rollout
from taptrack.objective import mse_window, mu1, mu2, total_cost

vel = st.floats(min_value=-300, max_value=300, allow_nan=False)


def states(*pairs):
    return [State(x, y) for x, y in pairs]


class TestMseWindow:
    def test_identical_sequences_cost_zero(self):
        seq = states((1, 2), (3, 4), (5, 6))
        assert mse_window(seq, seq) == 0.0

    def test_direct_arithmetic(self):
        assert mse_window(states((1, 0), (2, 0)), states((0, 0), (0, 0))) == 2.5

    def test_single_step_345(self):
        assert mse_window(states((3, 4)), states((0, 0))) == 25.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            mse_window(states((0, 0)), states((0, 0), (1, 1)))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            mse_window([], [])

    @given(dx=vel, dy=vel)
    @settings(max_examples=30)
    def test_translation_invariance(self, dx, dy):
        a = states((1, 2), (3, 4), (10, -5))
        b = states((0, 0), (4, 4), (8, -9))
        a2 = [State(s.x + dx, s.y + dy) for s in a]
        b2 = [State(s.x + dx, s.y + dy) for s in b]
        assert mse_window(a2, b2) == pytest.approx(mse_window(a, b), rel=1e-9, abs=1e-9)


class TestPenalties:
    @pytest.mark.parametrize(
        ("u", "expected"),
        [(Control(5, 5), 0.0), (Control(10, -10), 0.0), (Control(63.75, 0), 63.75)],
    )
    def test_mu1_examples(self, u, expected):
        assert mu1(u) == expected

    @pytest.mark.parametrize(
        ("u", "m", "expected"),
        [
            (Control(31.875, 31.875), 63.75, 0.0),
            (Control(0, 0), 63.75, 4064.0625),
            (Control(100, 0), 63.75, 1314.0625),
        ],
    )
    def test_mu2_examples(self, u, m, expected):
        assert mu2(u, m) == expected

    def test_mu2_requires_positive_target(self):
        with pytest.raises(ValueError):
            mu2(Control(1, 1), 0.0)

    @given(vx=vel, vy=vel)
    @settings(max_examples=50)
    def test_signed_permutation_symmetry(self, vx, vy):
        base1, base2 = mu1(Control(vx, vy)), mu2(Control(vx, vy), 63.75)
        for sx in (1, -1):
            for sy in (1, -1):
                for a, b in ((vx, vy), (vy, vx)):
                    u = Control(sx * a, sy * b)
                    assert mu1(u) == base1
                    assert mu2(u, 63.75) == base2


class TestTotalCost:
    def test_perfect_diagonal_tracking_is_free(self):
        params = HumanLikeParams()
        u = Control(31.875, 31.875)
        ref = [
            State(k * 0.283 * 31.875, k * 0.283 * 31.875)
            for k in range(1, params.window + 1)
        ]
        cost = total_cost(State(0, 0), u, ref, params)
        assert cost.total == pytest.approx(0.0, abs=1e-12)

    def test_zero_weights_stationary(self):
        params = HumanLikeParams(lambda1=0.0, lambda2=0.0)
        ref = [State(0, 0)] * params.window
        cost = total_cost(State(0, 0), Control(0, 0), ref, params)
        assert cost.total == 0.0

    def test_recomposition_oracle(self):
        # total must equal the independently recomputed weighted sum
        params = HumanLikeParams()
        rng = np.random.default_rng(7)
        for _ in range(100):
            state = State(rng.uniform(0, 1920), rng.uniform(0, 1080))
            u = Control(rng.uniform(-200, 200), rng.uniform(-200, 200))
            ref = [
                State(rng.uniform(0, 1920), rng.uniform(0, 1080))
                for _ in range(params.window)
            ]
            cost = total_cost(state, u, ref, params)
            predicted = rollout(state, u, params.dt, params.window)
            expected = (
                mse_window(predicted, ref)
                + 32.0 * mu1(u)
                + 0.6 * mu2(u, 63.75)
            )
            assert cost.total == pytest.approx(expected, rel=1e-12)
            assert cost.mse >= 0 and cost.mu1 >= 0 and cost.mu2 >= 0

    def test_window_length_enforced(self):
        params = HumanLikeParams()
        with pytest.raises(ValueError):
            total_cost(State(0, 0), Control(0, 0), [State(0, 0)] * 3, params)

    def test_piecewise_quadratic_in_u(self):
        # constant second difference along vx inside a fixed-sign region
        params = HumanLikeParams()
        ref = [State(50 + 10 * k, 40 + 5 * k) for k in range(1, params.window + 1)]
        state = State(40, 40)
        vy = 30.0  # region vx > vy > 0 keeps all signs fixed
        h = 0.5
        grid = [50.0 + h * i for i in range(8)]
        vals = [
            total_cost(state, Control(v, vy), ref, params).total for v in grid
        ]
        second = [vals[i + 2] - 2 * vals[i + 1] + vals[i] for i in range(len(vals) - 2)]
        for d in second[1:]:
            assert d == pytest.approx(second[0], rel=1e-6)
