"""Figure tables for the built-in case studies: curve traces, input signals, responses and envelopes."""
import logging
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from app.core.errors import UnknownFigure
from app.models.measure import SpectralMeasure
from app.schemas.scenario import ScenarioConfig
from app.services.bounds_recovery import bounds_over_measures, reference_bounds
from app.services.curves import trace_curves
from app.services.response import (
    ResponseKernel,
    ScenarioResponseContext,
    predict_response,
    reference_response,
    simulate_response,
)
from app.services.scenarios import BUILTIN_SCENARIOS, PreparedScenario, prepare
from app.services.signal_design import synthesize_input

logger = logging.getLogger(__name__)

CURVE_SAMPLES = 401


@dataclass(frozen=True, eq=False)
class FigureTable:
    figure_id: str
    title: str
    x_name: str
    columns: dict[str, np.ndarray]

    @property
    def x(self) -> np.ndarray:
        return self.columns[self.x_name]

    def series(self) -> dict[str, np.ndarray]:
        return {k: v for k, v in self.columns.items() if k != self.x_name}


def _scenario(name: str, **overrides) -> ScenarioConfig:
    data = {**BUILTIN_SCENARIOS[name], **overrides}
    return ScenarioConfig.model_validate(data)


def _with_measure(ctx: ScenarioResponseContext, masses) -> ScenarioResponseContext:
    return replace(ctx, measure=SpectralMeasure.from_pairs(masses))


def _curves(figure_id: str, name: str, title: str) -> FigureTable:
    sc = prepare(_scenario(name))
    curves = trace_curves(sc.system, sc.trajectory, CURVE_SAMPLES)
    return FigureTable(
        figure_id,
        title,
        "s",
        {"s": curves.s, "c_re": curves.c.real, "c_im": curves.c.imag, "d_re": curves.d.real, "d_im": curves.d.imag},
    )


def _input(figure_id: str, name: str, title: str) -> FigureTable:
    sc = prepare(_scenario(name))
    u = synthesize_input(sc.design, sc.times)
    return FigureTable(figure_id, title, "t", {"t": sc.times, "input": u.values})


def _volume_fraction_figure(
    figure_id: str, sc: PreparedScenario, title: str, exact=None, grid_points: int | None = None
) -> FigureTable:
    t = sc.times
    ctx = sc.context
    kernel = ResponseKernel(sc.design)
    columns = {"t": t, "simulated": simulate_response(ctx, t, kernel).values}
    columns["predicted"] = predict_response(ctx, t).values
    if exact is not None:
        columns["exact"] = exact(t)
    m1 = sc.config.constraints.m1
    if m1 is not None:
        inner = bounds_over_measures(ctx, t, mass=1.0, m1=m1, grid_points=grid_points)
        outer = bounds_over_measures(ctx, t, mass=1.0, grid_points=grid_points)
        columns.update(lower=inner.lower, upper=inner.upper, outer_lower=outer.lower, outer_upper=outer.upper)
    else:
        known = bounds_over_measures(ctx, t, mass=1.0, grid_points=grid_points)
        unknown = bounds_over_measures(ctx, t, mass=1.0, a0_known=False, grid_points=grid_points)
        columns.update(
            lower=known.lower, upper=known.upper, lower_unknown_a0=unknown.lower, upper_unknown_a0=unknown.upper
        )
    return FigureTable(figure_id, title, "t", columns)


def _exact_k0(a0: float):
    return lambda t: -a0 * np.exp(t)


def _exact_k1(a0: float, m1: float):
    return lambda t: -a0 * np.exp(t) * (1.0 + m1 + 4.0 * t)


def fig1(grid_points=None) -> FigureTable:
    return _curves("fig1", "example1", "Example 1: C = z(path) and D = i*path")


def fig5(grid_points=None) -> FigureTable:
    return _curves("fig5", "example2", "Example 2: C = z(path) and D = i*path")


def fig7(grid_points=None) -> FigureTable:
    return _curves("fig7", "example3", "Example 3: C = z(path) and D = i*path")


def fig2a(grid_points=None) -> FigureTable:
    return _input("fig2a", "example1", "Example 1: input signal, k = 0")


def fig3a(grid_points=None) -> FigureTable:
    return _input("fig3a", "example1-moment", "Example 1: input signal, k = 1")


def fig2b(grid_points=None) -> FigureTable:
    sc = prepare(_scenario("example1"))
    return _volume_fraction_figure("fig2b", sc, "Example 1: response, k = 0", _exact_k0(sc.config.a0), grid_points)


def fig3b(grid_points=None) -> FigureTable:
    sc = prepare(_scenario("example1-moment"))
    exact = _exact_k1(sc.config.a0, sc.config.constraints.m1)
    return _volume_fraction_figure("fig3b", sc, "Example 1: response, k = 1", exact, grid_points)


def fig4a(grid_points=None) -> FigureTable:
    sc = prepare(_scenario("example1-probe"))
    t, ctx, recipe = sc.times, sc.context, sc.design.recipe
    response = bounds_over_measures(ctx, t, grid_points=grid_points)
    ref = reference_bounds(ctx.a0, recipe.z0, recipe.omega0, t, t0=sc.design.t0, grid_points=grid_points)
    return FigureTable(
        "fig4a",
        "Example 1: probe response and reference envelopes over point masses",
        "t",
        {"t": t, "lower": response.lower, "upper": response.upper, "reference_lower": ref.lower, "reference_upper": ref.upper},
    )


def fig4b(grid_points=None) -> FigureTable:
    sc = prepare(_scenario("example1-probe"))
    t, ctx, recipe = sc.times, sc.context, sc.design.recipe
    lam0 = float(ctx.measure.locations[0])
    return FigureTable(
        "fig4b",
        "Example 1: probe response for a single point mass",
        "t",
        {
            "t": t,
            "simulated": simulate_response(ctx, t).values,
            "predicted": predict_response(ctx, t).values,
            "reference": reference_response(ctx.a0, ctx.measure, recipe.z0, recipe.omega0, t, sc.design.t0).values,
            "exact": ctx.a0 * np.real(np.exp(-1j * recipe.omega0 * t) / (lam0 - recipe.z0)),
        },
    )


def fig6a(grid_points=None) -> FigureTable:
    sc = prepare(_scenario("example2"))
    return _volume_fraction_figure("fig6a", sc, "Example 2: response, k = 0", _exact_k0(sc.config.a0), grid_points)


def fig6b(grid_points=None) -> FigureTable:
    sc = prepare(
        _scenario(
            "example2",
            design={"kind": "volume_fraction", "k": 1.0},
            measure={"masses": [[-1.0, 0.3], [1.0, 0.7]]},
            constraints={"mass": 1.0, "m1": 0.4},
        )
    )
    return _volume_fraction_figure("fig6b", sc, "Example 2: response, k = 1", _exact_k1(sc.config.a0, 0.4), grid_points)


def fig8a(grid_points=None) -> FigureTable:
    sc = prepare(_scenario("example3"))
    table = _volume_fraction_figure("fig8a", sc, "Example 3: measure-dependent response, k = 0", None, grid_points)
    other = simulate_response(_with_measure(sc.context, [[-0.5, 1.0]]), sc.times).values
    return FigureTable(table.figure_id, table.title, "t", {**table.columns, "simulated_other": other})


def fig8b(grid_points=None) -> FigureTable:
    sc = prepare(
        _scenario(
            "example3",
            design={"kind": "volume_fraction", "k": 1.0},
            measure={"masses": [[-1.0, 0.3], [1.0, 0.7]]},
            constraints={"mass": 1.0, "m1": 0.4},
        )
    )
    return _volume_fraction_figure("fig8b", sc, "Example 3: measure-dependent response, k = 1", None, grid_points)


FIGURES: dict[str, Callable[..., FigureTable]] = {
    "fig1": fig1,
    "fig2a": fig2a,
    "fig2b": fig2b,
    "fig3a": fig3a,
    "fig3b": fig3b,
    "fig4a": fig4a,
    "fig4b": fig4b,
    "fig5": fig5,
    "fig6a": fig6a,
    "fig6b": fig6b,
    "fig7": fig7,
    "fig8a": fig8a,
    "fig8b": fig8b,
}


def reproduce_figure(figure_id: str, grid_points: int | None = None) -> FigureTable:
    builder = FIGURES.get(figure_id)
    if builder is None:
        raise UnknownFigure(f"Unknown figure id '{figure_id}' (known: {', '.join(FIGURES)})")
    logger.info(f"Reproducing {figure_id}")
    return builder(grid_points)
