from dataclasses import replace

import numpy as np
import pytest

from app.core.errors import (
    InvalidDesign,
    NoFeasibleMeasure,
    NotMeasureIndependent,
    PreconditionM,
    SingularSystem,
    ZeroCoefficient,
)
from app.schemas.scenario import ScenarioConfig
from app.services.bounds_recovery import (
    bounds_over_measures,
    recover_first_moment,
    recover_frequency_response,
    recover_volume_fraction,
    reference_bounds,
    solve_two_time,
    volume_fraction_coefficient,
)
from app.services.response import ResponseKernel, simulate_response
from app.services.scenarios import BUILTIN_SCENARIOS, prepare
from app.services.signal_design import FrequencyProbe, build_design

GRID = 41


@pytest.fixture(scope="module")
def example3_moment():
    data = {
        **BUILTIN_SCENARIOS["example3"],
        "design": {"kind": "volume_fraction", "k": 1.0},
        "measure": {"masses": [[-1.0, 0.3], [1.0, 0.7]]},
        "constraints": {"mass": 1.0, "m1": 0.4},
    }
    return prepare(ScenarioConfig.model_validate(data))


class TestEnvelopes:
    def test_example1_envelope_collapses(self, prepared):
        sc = prepared("example1")
        env = bounds_over_measures(sc.context, sc.times, grid_points=GRID)
        assert np.max(env.width) < 1e-8
        assert np.allclose(env.lower, -0.6 * np.exp(sc.times), rtol=1e-6)

    def test_example1_unknown_a0(self, prepared):
        sc = prepared("example1")
        env = bounds_over_measures(sc.context, sc.times, a0_known=False, grid_points=GRID)
        assert np.all(env.upper == 0.0)
        assert np.allclose(env.lower, -2.0 * np.exp(sc.times), rtol=1e-6)

    def test_example1_first_moment_envelope_collapses(self, prepared):
        sc = prepared("example1-moment")
        env = bounds_over_measures(sc.context, sc.times, mass=1.0, m1=0.4, grid_points=GRID)
        assert np.max(env.width) < 1e-8
        expected = -0.6 * np.exp(sc.times) * (1.4 + 4.0 * sc.times)
        assert np.max(np.abs(env.lower - expected)) < 1e-6

    def test_example2_envelope_collapses(self, prepared):
        sc = prepared("example2")
        env = bounds_over_measures(sc.context, sc.times, grid_points=GRID)
        assert np.max(env.width) < 1e-8

    def test_example3_envelope_opens_away_from_t0(self, prepared):
        sc = prepared("example3")
        env = bounds_over_measures(sc.context, sc.times, grid_points=GRID)
        i_half = np.argmin(np.abs(sc.times - 0.5))
        i_zero = np.argmin(np.abs(sc.times))
        assert env.width[i_half] > 1e-3
        assert env.width[i_zero] < 1e-6
        assert env.lower[i_zero] == pytest.approx(-0.6, abs=1e-6)

    def test_moment_constraint_narrows_the_envelope(self, example3_moment):
        sc = example3_moment
        inner = bounds_over_measures(sc.context, sc.times, mass=1.0, m1=0.4, grid_points=GRID)
        outer = bounds_over_measures(sc.context, sc.times, mass=1.0, grid_points=GRID)
        tol = 1e-7 * (1.0 + np.abs(outer.lower) + np.abs(outer.upper))
        assert np.all(inner.lower >= outer.lower - tol)
        assert np.all(inner.upper <= outer.upper + tol)
        assert np.all(np.abs(inner.argmin) <= 1.0)

    def test_envelope_contains_the_simulated_response(self, example3_moment):
        sc = example3_moment
        env = bounds_over_measures(sc.context, sc.times, mass=1.0, m1=0.4, grid_points=GRID)
        v = simulate_response(sc.context, sc.times).values
        tol = 1e-7 * (1.0 + np.abs(v))
        assert np.all(v >= env.lower - tol)
        assert np.all(v <= env.upper + tol)

    def test_example3_envelope_is_stable_under_grid_doubling(self, prepared):
        sc = prepared("example3")
        times = sc.times[::20]
        coarse = bounds_over_measures(sc.context, times, grid_points=201)
        fine = bounds_over_measures(sc.context, times, grid_points=401)
        scale = 1.0 + np.abs(fine.lower) + np.abs(fine.upper)
        assert np.all(np.abs(coarse.lower - fine.lower) <= 5e-3 * scale)
        assert np.all(np.abs(coarse.upper - fine.upper) <= 5e-3 * scale)

    def test_pair_envelope_widens_on_a_nested_finer_grid(self, example3_moment):
        sc = example3_moment
        times = sc.times[::20]
        coarse = bounds_over_measures(sc.context, times, mass=1.0, m1=0.4, grid_points=21)
        fine = bounds_over_measures(sc.context, times, mass=1.0, m1=0.4, grid_points=41)
        tol = 1e-7 * (1.0 + np.abs(fine.lower) + np.abs(fine.upper))
        assert np.all(fine.lower <= coarse.lower + tol)
        assert np.all(fine.upper >= coarse.upper - tol)

    def test_zero_mass(self, prepared):
        sc = prepared("example1")
        env = bounds_over_measures(sc.context, sc.times, mass=0.0)
        assert not np.any(env.lower) and not np.any(env.upper)

    @pytest.mark.parametrize("mass, m1", [(-1.0, None), (1.0, 1.5), (0.0, 0.2)])
    def test_infeasible_constraints(self, prepared, mass, m1):
        sc = prepared("example1")
        with pytest.raises(NoFeasibleMeasure):
            bounds_over_measures(sc.context, sc.times, mass=mass, m1=m1)

    def test_reference_bounds(self):
        times = np.linspace(-3.0, 0.0, 31)
        env = reference_bounds(0.6, 30.0, 31j / 27, times, grid_points=GRID)
        assert np.allclose(env.lower, 0.6 * np.exp(31.0 * times / 27.0) / (1.0 - 30.0))
        assert np.allclose(env.upper, 0.6 * np.exp(31.0 * times / 27.0) / (-1.0 - 30.0))
        assert np.all(env.argmin == 1.0)


class TestVolumeFractionRecovery:
    @pytest.mark.parametrize("t", [0.0, -1.0, -2.5])
    def test_single_time(self, ex1_cls, ex1_design, t):
        result = recover_volume_fraction(ex1_cls, ex1_design, (t, -0.6 * np.exp(t)))
        assert result.f1 == pytest.approx(0.3, rel=1e-12)
        assert result.method == "single-time"

    def test_zero_response(self, ex1_cls, ex1_design):
        assert recover_volume_fraction(ex1_cls, ex1_design, (0.0, 0.0)).f1 == 0.0

    def test_least_squares_from_simulation(self, prepared):
        sc = prepared("example2")
        times = np.array([-2.0, -1.5, -1.0, -0.5, 0.0])
        values = simulate_response(sc.context, times).values
        result = recover_volume_fraction(sc.classification, sc.design, list(zip(times, values)))
        assert result.f1 == pytest.approx(0.3, abs=1e-6)
        assert result.method == "least-squares"
        assert result.residual < 1e-6

    def test_reference_time_only_for_example3(self, prepared):
        sc = prepared("example3")
        assert volume_fraction_coefficient(sc.classification, sc.design, 0.0) == -1.0
        result = recover_volume_fraction(sc.classification, sc.design, (0.0, -0.6))
        assert result.f1 == pytest.approx(0.3)
        with pytest.raises(NotMeasureIndependent):
            recover_volume_fraction(sc.classification, sc.design, (0.5, -1.0))

    def test_out_of_range_estimate_is_clipped(self, ex1_cls, ex1_design):
        result = recover_volume_fraction(ex1_cls, ex1_design, (0.0, -3.0))
        assert result.f1 == 1.0
        assert result.a0 == pytest.approx(3.0)

    def test_needs_the_k0_design(self, ex1_cls, ex1_moment_design):
        with pytest.raises(InvalidDesign):
            recover_volume_fraction(ex1_cls, ex1_moment_design, (0.0, -0.6))

    def test_noise_interval_contains_the_truth(self, ex1_cls, ex1_design, rng):
        trials = 100
        t = -1.0
        lams = rng.uniform(-1.0, 1.0, trials)
        row = ResponseKernel(ex1_design).matrix(lams, [t])[:, 0]
        for f1, k_value in zip(rng.uniform(0.05, 0.95, trials), row):
            value = 2.0 * f1 * k_value
            noisy = value * (1.0 + rng.uniform(-0.01, 0.01))
            epsilon = 0.0102 * abs(noisy)
            result = recover_volume_fraction(ex1_cls, ex1_design, (t, noisy), epsilon=epsilon)
            lo, hi = result.interval
            assert lo - 1e-9 <= f1 <= hi + 1e-9


class TestFirstMomentRecovery:
    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_recovers_first_moment(self, ex1_cls, ex1_moment_design, t):
        value = -0.6 * np.exp(t) * (1.4 + 4.0 * t)
        assert recover_first_moment(ex1_cls, ex1_moment_design, 0.6, (t, value)) == pytest.approx(0.4)

    def test_several_measurements_are_combined(self, ex1_cls, ex1_moment_design):
        times = [-1.5, -1.0, -0.5, 0.0]
        data = [(t, -0.6 * np.exp(t) * (1.4 + 4.0 * t)) for t in times]
        assert recover_first_moment(ex1_cls, ex1_moment_design, 0.6, data) == pytest.approx(0.4)

    def test_zero_a0(self, ex1_cls, ex1_moment_design):
        with pytest.raises(ZeroCoefficient):
            recover_first_moment(
ex1_cls, ex1_moment_design, 0.0, (0.0, 0.0))

    def test_needs_measure_independence(self, example3_moment):
        sc = example3_moment
        with pytest.raises(NotMeasureIndependent):
            recover_first_moment(sc.classification, sc.design, 0.6, (0.0, -0.84))


class TestFrequencyRecovery:
    def test_two_time_round_trip(self):
        kappa, sign, a0, xi = -1.2 + 0.3j, -1, 0.6, 0.2 - 0.7j
        times = [-1.0, -0.4]
        values = [-a0 * sign * 2.0 * np.real(xi * np.exp(-kappa * t)) for t in times]
        assert solve_two_time(kappa, sign, a0, list(zip(times, values))) == pytest.approx(xi)

    def test_two_time_singular(self):
        with pytest.raises(SingularSystem):
            solve_two_time(-1.2 + 0.3j, 1, 0.6, [(-1.0, 0.1), (-1.0, 0.2)])
        with pytest.raises(SingularSystem):
            solve_two_time(-1.2, 1, 0.6, [(-1.0, 0.1), (-0.5, 0.2)])

    def test_single_time_real_probe(self, ex1_cls, ex1_probe_design):
        t = 0.5
        value = 0.6 * np.exp(31.0 * t / 27.0) / (0.5 - 30.0)
        result = recover_frequency_response(ex1_cls, ex1_probe_design, 0.6, (t, value))
        assert result.markov_value == pytest.approx(-2.0 / 59.0, rel=1e-8)
        assert result.method == "single-time"
        assert result.xi == pytest.approx(-1.0 / 59.0, rel=1e-8)

    def test_real_frequency_point_least_squares(self, ex1_cls, ex1_probe_design):
        times = [-1.0, -0.5, 0.5]
        data = [(t, 0.6 * np.exp(31.0 * t / 27.0) / (0.5 - 30.0)) for t in times]
        result = recover_frequency_response(ex1_cls, ex1_probe_design, 0.6, data)
        assert result.markov_value == pytest.approx(-2.0 / 59.0, rel=1e-8)
        assert result.method == "least-squares"

    def test_two_time_least_squares(self):
        kappa, sign, a0, xi = -1.2 + 0.3j, 1, 0.6, 0.2 - 0.7j
        times = [-1.5, -1.0, -0.4]
        values = [-a0 * sign * 2.0 * np.real(xi * np.exp(-kappa * t)) for t in times]
        assert solve_two_time(kappa, sign, a0, list(zip(times, values))) == pytest.approx(xi)
        with pytest.raises(SingularSystem):
            solve_two_time(kappa, sign, a0, [(-1.0, 0.1)])

    def test_reference_time(self, ex1_cls, ex1_probe_design):
        result = recover_frequency_response(ex1_cls, ex1_probe_design, 0.6, (0.0, 0.6 * -2.0 / 59.0))
        assert result.markov_value == pytest.approx(-2.0 / 59.0)
        assert result.method == "reference-time"
        assert not result.real_part_only

    def test_two_time_complex_probe(self, prepared, ex1, standard_path, ex1_cls):
        z0 = 30.0 + 5.0j
        design = build_design(FrequencyProbe(z0=z0), ex1, standard_path, ex1_cls)
        ctx = replace(prepared("example1").context, design=design)
        times = np.array([-1.0, -0.5])
        values = simulate_response(ctx, times).values
        result = recover_frequency_response(ex1_cls, design, 0.6, list(zip(times, values)))
        assert result.method == "two-time"
        assert result.markov_value == pytest.approx(1.0 / (0.5 - z0), rel=1e-7)

    def test_example3_only_at_reference_time(self, ex3, ex3_path, ex3_cls):
        design = build_design(FrequencyProbe(z0=30.0), ex3, ex3_path, ex3_cls)
        with pytest.raises(PreconditionM):
            recover_frequency_response(ex3_cls, design, 0.6, (0.5, -0.01))
        result = recover_frequency_response(ex3_cls, design, 0.6, (0.0, -0.012))
        assert result.markov_value == pytest.approx(-0.02)

    def test_zero_a0(self, ex1_cls, ex1_probe_design):
        with pytest.raises(ZeroCoefficient):
            recover_frequency_response(ex1_cls, ex1_probe_design, 0.0, (0.0, 0.0))
