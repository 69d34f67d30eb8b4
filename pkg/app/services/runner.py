"""Scenario-level operations shared by the CLI and the HTTP routes."""
import logging

import numpy as np
from pydantic import BaseModel

from app.core.errors import MissingMeasure, ScenarioError, SignalDesignError
from app.schemas.report import (
    ClassificationReport,
    EnvelopeReport,
    FrequencyRecoveryReport,
    MomentRecoveryReport,
    RecoveryReport,
)
from app.schemas.scenario import ScenarioConfig
from app.services.bounds_recovery import (
    BoundEnvelope,
    bounds_over_measures,
    recover_first_moment,
    recover_frequency_response,
    recover_volume_fraction,
)
from app.services.response import predict_response, reference_response, simulate_response
from app.services.scenarios import PreparedScenario, prepare
from app.services.signal_design import FrequencyProbe, synthesize_input

logger = logging.getLogger(__name__)


def verify(config: ScenarioConfig) -> ClassificationReport:
    sc = prepare(config)
    return ClassificationReport.from_classification(config.name, sc.classification)


def design_columns(config: ScenarioConfig, time_points: int | None = None) -> dict[str, np.ndarray]:
    sc = prepare(config, time_points=time_points)
    u = synthesize_input(sc.design, sc.times)
    return {"t": sc.times, "input": u.values}


def simulate_columns(config: ScenarioConfig, time_points: int | None = None) -> dict[str, np.ndarray]:
    """Simulated response plus the closed form (and the probe reference) when they apply."""
    sc = prepare(config, time_points=time_points)
    if sc.context.measure is None:
        raise MissingMeasure(f"Scenario '{config.name}' has no measure to simulate")
    columns = {"t": sc.times, "simulated": simulate_response(sc.context, sc.times).values}
    try:
        columns["predicted"] = predict_response(sc.context, sc.times).values
    except SignalDesignError as e:
        logger.info(f"No closed form for '{config.name}': {e}")
    recipe = sc.design.recipe
    if isinstance(recipe, FrequencyProbe) and recipe.omega0 is not None:
        ref = reference_response(sc.context.a0, sc.context.measure, recipe.z0, recipe.omega0, sc.times, sc.design.t0)
        columns["reference"] = ref.values
    return columns


def envelope(config: ScenarioConfig, grid_points: int | None = None, time_points: int | None = None) -> BoundEnvelope:
    sc = prepare(config, time_points=time_points)
    c = config.constraints
    return bounds_over_measures(sc.context, sc.times, mass=c.mass, m1=c.m1, a0_known=c.a0_known, grid_points=grid_points)


def envelope_report(config: ScenarioConfig, grid_points: int | None = None) -> EnvelopeReport:
    return EnvelopeReport.from_envelope(config.name, envelope(config, grid_points))


def recover(config: ScenarioConfig) -> BaseModel:
    """Dispatch on the design: volume fraction (k = 0), first moment (k != 0) or frequency response."""
    if not config.measurements:
        raise ScenarioError(f"Scenario '{config.name}' lists no measurements to invert")
    sc: PreparedScenario = prepare(config)
    recipe = sc.design.recipe
    if isinstance(recipe, FrequencyProbe):
        result = recover_frequency_response(sc.classification, sc.design, config.a0, config.measurements)
        return FrequencyRecoveryReport.from_result(config.name, result)
    if recipe.k != 0.0:
        data = [(float(t), float(v)) for t, v in config.measurements]
        m1 = recover_first_moment(sc.classification, sc.design, config.a0, data, mass=config.constraints.mass)
        return MomentRecoveryReport(scenario=config.name, first_moment=m1, a0=config.a0, times=[t for t, _ in data])
    result = recover_volume_fraction(sc.classification, sc.design, config.measurements, config.epsilon)
    return RecoveryReport.from_result(config.name, result)
