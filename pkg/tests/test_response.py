from dataclasses import replace

import numpy as np
import pytest

from app.core.errors import InvalidDesign, MissingMeasure, NotMeasureIndependent
from app.models.measure import SpectralMeasure
from app.services.response import (
    ResponseKernel,
    ScenarioResponseContext,
    predict_frequency_probe_response,
    predict_response,
    predict_volume_fraction_response,
    reference_response,
    simulate_response,
)
from app.services.signal_design import FrequencyProbe, VolumeFraction, build_design, synthesize_input

A0 = 0.6
TIMES = np.linspace(-3.0, 0.0, 601)


def context(design, measure=None, a0=A0, **kwargs):
    return ScenarioResponseContext(
        a0=a0,
        system=design.system,
        trajectory=design.trajectory,
        classification=design.classification,
        design=design,
        measure=measure,
        **kwargs,
    )


def random_measures(rng, count, max_masses=4):
    for _ in range(count):
        n = rng.integers(1, max_masses + 1)
        weights = rng.random(n)
        weights /= weights.sum()
        yield SpectralMeasure.from_pairs(zip(rng.uniform(-1.0, 1.0, n), weights))


def rel_error(actual, expected):
    return np.max(np.abs(actual - expected)) / np.max(np.abs(expected))


class TestVolumeFraction:
    def test_simulation_matches_exponential_for_any_measure(self, ex1_design, rng):
        kernel = ResponseKernel(ex1_design)
        expected = -A0 * np.exp(TIMES)
        for measure in random_measures(rng, 20):
            v = simulate_response(context(ex1_design, measure), TIMES, kernel)
            assert rel_error(v.values, expected) < 1e-6

    def test_closed_form(self, ex1_design):
        v = predict_volume_fraction_response(context(ex1_design), TIMES)
        assert np.allclose(v.values, -A0 * np.exp(TIMES), rtol=1e-12)
        assert v.label == "predicted"

    def test_first_moment_design(self, ex1_moment_design, rng):
        kernel = ResponseKernel(ex1_moment_design)
        for measure in random_measures(rng, 10):
            ctx = context(ex1_moment_design, measure)
            m0, m1 = ctx.moments()
            expected = -A0 * np.exp(TIMES) * (m0 + m1 + 4.0 * TIMES * m0)
            simulated = simulate_response(ctx, TIMES, kernel).values
            predicted = predict_response(ctx, TIMES).values
            assert np.allclose(predicted, expected, rtol=1e-12, atol=1e-12)
            assert np.max(np.abs(simulated - expected)) < 1e-6 * np.max(np.abs(expected))

    def test_first_moment_closed_form_from_constraints(self, ex1_moment_design):
        v = predict_volume_fraction_response(context(ex1_moment_design, first_moment=0.4), TIMES)
        assert np.allclose(v.values, -A0 * np.exp(TIMES) * (1.4 + 4.0 * TIMES), rtol=1e-12, atol=1e-12)

    def test_first_moment_required(self, ex1_moment_design):
        with pytest.raises(MissingMeasure):
            predict_volume_fraction_response(context(ex1_moment_design), TIMES)

    def test_example2_matches_example1(self, prepared):
        sc = prepared("example2")
        v = simulate_response(sc.context, sc.times)
        assert rel_error(v.values, -A0 * np.exp(sc.times)) < 1e-6

    def test_reference_time_identity_for_all_examples(self, prepared, rng):
        for name in ("example1", "example2", "example3"):
            sc = prepared(name)
            kernel = ResponseKernel(sc.design)
            for measure in random_measures(rng, 5):
                v = simulate_response(context(sc.design, measure), [0.0], kernel)
                assert v.values[0] == pytest.approx(-A0, abs=1e-8)

    def test_shifting_the_reference_time_shifts_everything(self, ex1, standard_path, ex1_cls, ex1_design):
        shift = 1.5
        shifted = build_design(VolumeFraction(k=0.0), ex1, standard_path, ex1_cls, t0=shift)
        measure = SpectralMeasure.from_pairs([(0.3, 0.7), (-0.6, 0.3)])
        times = np.linspace(-3.0, 0.0, 31)
        base = simulate_response(context(ex1_design, measure), times).values
        moved = simulate_response(context(shifted, measure), times + shift).values
        assert np.allclose(moved, base, rtol=1e-9, atol=1e-12)
        u = synthesize_input(ex1_design, times).values
        u_moved = synthesize_input(shifted, times + shift).values
        assert np.allclose(u_moved, u, rtol=1e-9, atol=1e-12)
        predicted = predict_response(context(shifted, measure), times + shift).values
        assert np.allclose(predicted, -A0 * np.exp(times), rtol=1e-12)

    def test_zero_measure(self, ex1_design):
        v = simulate_response(context(ex1_design, SpectralMeasure()), TIMES)
        assert not np.any(v.values)

    def test_simulation_needs_measure(self, ex1_design):
        with pytest.raises(MissingMeasure):
            simulate_response(context(ex1_design), TIMES)

    def test_wrong_recipe(self, ex1_probe_design):
        with pytest.raises(InvalidDesign):
            predict_volume_fraction_response(context(ex1_probe_design), TIMES)

    def test_a0_range(self, ex1_design):
        with pytest.raises(InvalidDesign):
            context(ex1_design, a0=2.5)


class TestMeasureDependence:
    def test_example3_depends_on_the_measure(self, prepared):
        sc = prepared("example3")
        times = sc.times
        kernel = ResponseKernel(sc.design)
        near = simulate_response(context(sc.design, SpectralMeasure.point_mass(0.5)), times, kernel).values
        far = simulate_response(context(sc.design, SpectralMeasure.point_mass(-0.5)), times, kernel).values
        away = np.abs(times) > 0.1
        assert np.max(np.abs(near - far)[away]) > 1e-3
        t0 = np.argmin(np.abs(times))
        assert near[t0] == pytest.approx(-A0, abs=1e-6)
        assert far[t0] == pytest.approx(-A0, abs=1e-6)

    def test_example3_closed_form_tracks_preimages(self, prepared):
        sc = prepared("example3")
        # h(-2) = 1/2, so the single preimage of 1/2 in Omega is -2
        expected = -A0 * np.exp(2.0 * sc.times)
        predicted = predict_response(sc.context, sc.times).values
        simulated = simulate_response(sc.context, sc.times).values
        assert np.allclose(predicted, expected, rtol=1e-9)
        assert rel_error(simulated, expected) < 1e-6

    def test_example3_closed_form_needs_measure(self, prepared):
        sc = prepared("example3")
        with pytest.raises(MissingMeasure):
            predict_volume_fraction_response(context(sc.design), sc.times)

    def test_real_axis_endpoint_blocks_closed_forms(self, ex1_design):
        cls = replace(ex1_design.classification, all_time_applicable=False)
        design = replace(ex1_design, classification=cls)
        ctx = ScenarioResponseContext(A0, design.system, design.trajectory, cls, design)
        with pytest.raises(NotMeasureIndependent):
            predict_volume_fraction_response(ctx, TIMES)


class TestFrequencyProbe:
    def test_reference_time_value(self, ex1_probe_design, rng):
        kernel = ResponseKernel(ex1_probe_design)
        for measure in random_measures(rng, 20):
            v = simulate_response(context(ex1_probe_design, measure), [0.0], kernel)
            expected = A0 * np.sum(measure.weights / (measure.locations - 30.0))
            assert abs(v.values[0] - expected) < 1e-8

    def test_point_mass_response(self, ex1_probe_design):
        measure = SpectralMeasure.point_mass(0.5)
        ctx = context(ex1_probe_design, measure)
        expected = A0 * np.exp(31.0 * TIMES / 27.0) / (0.5 - 30.0)
        simulated = simulate_response(ctx, TIMES).values
        predicted = predict_frequency_probe_response(ctx, TIMES).values
        assert rel_error(simulated, expected) < 1e-6
        assert np.allclose(predicted, expected, rtol=1e-9)

    def test_reference_response(self):
        measure = SpectralMeasure.point_mass(0.5)
        v0 = reference_response(A0, measure, 30.0, 31j / 27, TIMES)
        assert np.allclose(v0.values, A0 * np.exp(31.0 * TIMES / 27.0) / (0.5 - 30.0))
        with pytest.raises(InvalidDesign):
            reference_response(A0, measure, 0.2, 1j, TIMES)

    def test_complex_probe_point(self, ex1, standard_path, ex1_cls):
        design = build_design(FrequencyProbe(z0=30.0 + 5.0j), ex1, standard_path, ex1_cls)
        ctx = context(design, SpectralMeasure.from_pairs([(0.5, 0.6), (-0.2, 0.4)]))
        times = np.linspace(-2.0, 0.0, 41)
        simulated = simulate_response(ctx, times).values
        predicted = predict_response(ctx, times).values
        assert np.max(np.abs(simulated - predicted)) < 1e-7 * np.max(np.abs(predicted))
