"""Problem container and RNG stream behavior."""

import numpy as np
import pytest

from rmalm import DataError, RngStream, StochasticProblem, make_holdout_objective
from rmalm.projections import project_box


def quad_f0(x):
    return 0.5 * float(x @ x), x.copy()


def make_finite_sum_problem(n=3, nsamples=4):
    """f(x) = f0 + (1/N) sum_i [ d_i . x ], with fixed offsets d_i."""
    gen = np.random.default_rng(0)
    offsets = gen.normal(size=(nsamples, n))

    def sampler(x, i):
        return float(offsets[i] @ x), offsets[i].copy()

    def h0(x):
        return float(x[0] - 1.0), np.eye(n)[0].copy()

    def h1(x):
        return 0.5 * float(x @ x) - 2.0, x.copy()

    return StochasticProblem(
        dim=n,
        f0=quad_f0,
        constraints=[h0, h1],
        projector=lambda z: project_box(z, -10.0, 10.0),
        obj_sampler=sampler,
        finite_sum_size=nsamples,
        feasible_witness=np.zeros(n),
        meta={"offsets": offsets},
    ), offsets


class TestConstruction:
    def test_rejects_nonpositive_dim(self):
        with pytest.raises(ValueError, match="dim"):
            StochasticProblem(dim=0, f0=quad_f0, constraints=[],
                              projector=lambda z: z)

    def test_rejects_finite_sum_without_sampler(self):
        with pytest.raises(ValueError, match="obj_sampler"):
            StochasticProblem(dim=2, f0=quad_f0, constraints=[],
                              projector=lambda z: z, finite_sum_size=3)

    def test_rejects_witness_of_wrong_length(self):
        with pytest.raises(ValueError):
            StochasticProblem(dim=2, f0=quad_f0, constraints=[],
                              projector=lambda z: z,
                              feasible_witness=np.zeros(3))


class TestConstraints:
    def test_h_and_violations(self):
        prob, _ = make_finite_sum_problem()
        x = np.array([2.0, 0.0, 0.0])
        h = prob.h(x)
        assert np.allclose(h, [1.0, 0.0])
        avg, mx = prob.violations(x)
        assert avg == pytest.approx(0.5)
        assert mx == pytest.approx(1.0)
        assert avg <= mx

    def test_h_batch_values_and_grads(self):
        prob, _ = make_finite_sum_problem()
        x = np.array([1.0, 2.0, 0.0])
        vals, grads = prob.h_batch(x, [1, 0, 1])
        assert vals.shape == (3,)
        assert grads.shape == (3, 3)
        assert vals[1] == pytest.approx(0.0)
        assert np.allclose(grads[0], x)
        assert np.allclose(grads[1], [1.0, 0.0, 0.0])

    def test_h_batch_rejects_bad_indices(self):
        prob, _ = make_finite_sum_problem()
        with pytest.raises(ValueError, match="out of range"):
            prob.h_batch(np.zeros(3), [0, 2])
        with pytest.raises(ValueError, match="empty"):
            prob.h_batch(np.zeros(3), [])


class TestObjective:
    def test_finite_sum_average_matches_manual_sum(self):
        prob, offsets = make_finite_sum_problem()
        gen = np.random.default_rng(1)
        for _ in range(20):
            x = gen.normal(size=3)
            val, grad = prob.objective_value_grad(x)
            expect_val = 0.5 * x @ x + offsets.mean(axis=0) @ x
            expect_grad = x + offsets.mean(axis=0)
            assert val == pytest.approx(expect_val, abs=1e-12)
            assert np.allclose(grad, expect_grad, atol=1e-12)

    def test_deterministic_objective_is_f0(self):
        prob = StochasticProblem(dim=2, f0=quad_f0, constraints=[],
                                 projector=lambda z: z)
        val, grad = prob.objective_value_grad(np.array([1.0, 2.0]))
        assert val == pytest.approx(2.5)
        assert np.allclose(grad, [1.0, 2.0])

    def test_expectation_form_raises_on_exact_eval(self):
        prob = StochasticProblem(
            dim=2, f0=quad_f0, constraints=[], projector=lambda z: z,
            obj_sampler=lambda x, d: (float(d @ x), np.asarray(d, dtype=float)),
            xi_sampler=lambda gen, size: gen.normal(size=(size, 2)),
        )
        with pytest.raises(DataError, match="expectation"):
            prob.objective(np.zeros(2))

    def test_obj_batch_mean_matches_loop(self):
        prob, offsets = make_finite_sum_problem()
        x = np.array([0.5, -0.5, 1.0])
        val, grad = prob.obj_batch_mean(x, [0, 0, 2])
        manual = (offsets[0] @ x + offsets[0] @ x + offsets[2] @ x) / 3
        assert val == pytest.approx(manual, abs=1e-12)
        assert np.allclose(grad, (2 * offsets[0] + offsets[2]) / 3)

    def test_draw_objective_finite_sum_gives_indices(self):
        prob, _ = make_finite_sum_problem()
        draws = prob.draw_objective(np.random.default_rng(0), 10)
        assert draws.shape == (10,)
        assert draws.min() >= 0 and draws.max() < 4

    def test_start_point_is_projected_origin(self):
        prob, _ = make_finite_sum_problem()
        assert np.array_equal(prob.start_point(), np.zeros(3))


class TestHoldout:
    def test_holdout_is_exact_passthrough_for_finite_sum(self):
        prob, _ = make_finite_sum_problem()
        fn = make_holdout_objective(prob, size=10)
        x = np.array([1.0, 0.0, -1.0])
        assert fn(x) == pytest.approx(prob.objective(x))

    def test_holdout_on_expectation_form_is_deterministic(self):
        def sampler(x, d):
            return float(d @ x), np.asarray(d, dtype=float)

        prob = StochasticProblem(
            dim=2, f0=quad_f0, constraints=[], projector=lambda z: z,
            obj_sampler=sampler,
            xi_sampler=lambda gen, size: gen.normal(size=(size, 2)),
        )
        f1 = make_holdout_objective(prob, size=500, seed=7)
        f2 = make_holdout_objective(prob, size=500, seed=7)
        x = np.array([2.0, 1.0])
        assert f1(x) == f2(x)
        # mean of the sampled linear term is near zero, so value near f0
        assert abs(f1(x) - quad_f0(x)[0]) < 0.5


class TestRngStream:
    def test_same_seed_and_stream_reproduce_bits(self):
        a = RngStream(123, 4).generator().normal(size=32)
        b = RngStream(123, 4).generator().normal(size=32)
        assert np.array_equal(a, b)

    def test_streams_are_independent(self):
        a = RngStream(123, 0).generator().normal(size=32)
        b = RngStream(123, 1).generator().normal(size=32)
        assert not np.array_equal(a, b)

    def test_seeds_differ(self):
        a = RngStream(1, 0).generator().normal(size=32)
        b = RngStream(2, 0).generator().normal(size=32)
        assert not np.array_equal(a, b)

    def test_validation(self):
        with pytest.raises(ValueError):
            RngStream(-1, 0)
        with pytest.raises(ValueError):
            RngStream(0, -2)
