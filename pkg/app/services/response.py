"""Forward simulation of Re v(t) and the closed forms that follow from the spectrum of h inside Omega."""
import logging
from dataclasses import dataclass

import numpy as np

from app.core.config import settings
from app.core.errors import (
    EvalAtMass,
    ExponentOverflow,
    InvalidDesign,
    MissingMeasure,
    NonSimplePole,
    NotMeasureIndependent,
)
from app.models.material import MaterialSystem
from app.models.measure import SpectralMeasure
from app.models.series import TimeSeries
from app.models.trajectory import Trajectory
from app.services.curves import CurveClassification
from app.services.material_models import eval_z
from app.services.measures import markov_eval, moment
from app.services.quadrature import composite_rule, integrate_rule
from app.services.signal_design import (
    EXPONENT_LIMIT,
    FrequencyProbe,
    SignalDesign,
    VolumeFraction,
    alpha,
    exp_factors,
)
from app.services.spectral_analysis import SpectralPoint

logger = logging.getLogger(__name__)

KERNEL_MASS_DISTANCE = 1e-12

__all__ = [
    "ResponseKernel",
    "ScenarioResponseContext",
    "TimeSeries",
    "predict_frequency_probe_response",
    "predict_response",
    "predict_volume_fraction_response",
    "reference_response",
    "simulate_response",
]


@dataclass(frozen=True, eq=False)
class ScenarioResponseContext:
    a0: float
    system: MaterialSystem
    trajectory: Trajectory
    classification: CurveClassification
    design: SignalDesign
    measure: SpectralMeasure | None = None
    mass: float = 1.0
    first_moment: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.a0 <= 2.0:
            raise InvalidDesign(f"a0 = 2*f1 must lie in [0, 2], got {self.a0}")

    @property
    def t0(self) -> float:
        return self.design.t0

    def moments(self) -> tuple[float, float | None]:
        if self.measure is not None:
            return moment(self.measure, 0), moment(self.measure, 1)
        return self.mass, self.first_moment


class ResponseKernel:
    """Re v(t) at unit a0 for a unit point mass at lambda.

    K(lambda, t) = Re sum_n q_n alpha(s_n) exp(-i omega(s_n)(t - t0)) / (lambda - z(s_n)),
    with q_n the composite Gauss-Legendre weights. Responses of any discrete measure are
    weighted sums of its rows.
    """

    def __init__(self, design: SignalDesign):
        self.design = design
        self.order = settings.QUAD_NODES
        self.panels: int | None = None

    def _path(self, nodes):
        omega = self.design.trajectory(nodes)
        return omega, eval_z(self.design.system, omega), alpha(self.design, nodes)

    @staticmethod
    def _inverse_distance(lams: np.ndarray, z: np.ndarray) -> np.ndarray:
        diff = lams[:, None] - z[None, :]
        if np.any(np.abs(diff) <= KERNEL_MASS_DISTANCE):
            raise EvalAtMass("C passes through a mass location of the measure")
        return 1.0 / diff

    def matrix(self, lams, times) -> np.ndarray:
        """K on the (lambda, t) grid, shape (len(lams), len(times)), converged by panel doubling."""
        lams = np.atleast_1d(np.asarray(lams, dtype=float))
        taus = np.atleast_1d(np.asarray(times, dtype=float)) - self.design.t0

        def apply(nodes, weights):
            omega, z, a = self._path(nodes)
            left = self._inverse_distance(lams, z)
            right = (weights * a)[:, None] * exp_factors(omega, taus).T
            return np.real(left @ right)

        result = integrate_rule(apply, order=self.order, label="response kernel")
        if self.panels != result.panels:
            logger.info(f"Response kernel converged with {result.panels} panels")
        self.panels = result.panels
        return result.value

    def pairs(self, lams, times) -> np.ndarray:
        """K(lams[i], times[i]) on the rule last used by matrix()."""
        if self.panels is None:
            raise RuntimeError("ResponseKernel.pairs needs a converged rule; call matrix() first")
        lams = np.asarray(lams, dtype=float)
        taus = np.asarray(times, dtype=float) - self.design.t0
        nodes, weights = composite_rule(self.panels, self.order)
        omega, z, a = self._path(nodes)
        left = self._inverse_distance(lams, z)
        return np.real(np.sum(left * exp_factors(omega, taus) * (weights * a)[None, :], axis=1))


def simulate_response(ctx: ScenarioResponseContext, times, kernel: ResponseKernel | None = None) -> TimeSeries:
    """Re v(t) by quadrature along the trajectory."""
    if ctx.measure is None:
        raise MissingMeasure("Simulation needs a spectral measure")
    times = np.asarray(times, dtype=float)
    if len(ctx.measure) == 0:
        return TimeSeries(times, np.zeros_like(times), label="simulated")
    kernel = kernel or ResponseKernel(ctx.design)
    k = kernel.matrix(ctx.measure.locations, times)
    return TimeSeries(times, ctx.a0 * (ctx.measure.weights @ k), label="simulated")


def _decay(points, taus: np.ndarray) -> np.ndarray:
    """exp(-p * tau) for each point p, shape (len(points), len(taus))."""
    locs = np.array([complex(p.location) for p in points], dtype=complex)
    exponent = -np.outer(locs, taus)
    if exponent.size and float(np.max(np.abs(exponent.real))) > EXPONENT_LIMIT:
        raise ExponentOverflow(f"exp(-beta*t) overflows on this time window (exponent > {EXPONENT_LIMIT:.0f})")
    return np.exp(exponent)


def _weighted_sum(points: tuple[SpectralPoint, ...] | list[SpectralPoint], taus: np.ndarray, coeff=None) -> np.ndarray:
    if not points:
        return np.zeros(taus.shape, dtype=complex)
    weights = np.array([p.weight * (1.0 if coeff is None else coeff(p)) for p in points], dtype=complex)
    return weights @ _decay(points, taus)


def _require_all_time(ctx: ScenarioResponseContext) -> CurveClassification:
    cls = ctx.classification
    if not cls.all_time_applicable:
        raise NotMeasureIndependent(
            f"{cls.system_name}: closed forms need both trajectory endpoints on the imaginary axis"
        )
    return cls


def predict_volume_fraction_response(ctx: ScenarioResponseContext, times, k: float | None = None) -> TimeSeries:
    """Closed form from poles and preimages of h in Omega.

    Re v = a0*sign*[ S_n (M0 + k M1) - k tau M0 S_b - sum_j w_j (1 + k lambda_j) sum_alpha w m e^(-alpha tau) ],
    S_n = sum w n e^(-beta tau), S_b = sum w b e^(-beta tau).
    """
    recipe = ctx.design.recipe
    if not isinstance(recipe, VolumeFraction):
        raise InvalidDesign("Volume-fraction prediction needs a volume-fraction design")
    if recipe.gauge:
        raise InvalidDesign("Closed forms are derived for the gauge-free recipe")
    k = recipe.k if k is None else float(k)
    if k != recipe.k:
        raise InvalidDesign(f"Prediction for k={k} requested but the design uses k={recipe.k}")

    cls = _require_all_time(ctx)
    times = np.asarray(times, dtype=float)
    taus = times - ctx.t0
    poles = cls.omega_poles
    if k != 0.0 and any(p.multiplicity > 1 for p in poles):
        raise NonSimplePole("The first-moment closed form assumes simple poles of h in Omega")

    if not cls.all_time_independent and ctx.measure is None:
        raise MissingMeasure(f"{cls.system_name} is measure dependent; supply a measure for the prediction")
    m0, m1 = ctx.moments()
    if k != 0.0 and m1 is None:
        raise MissingMeasure("The k != 0 closed form needs the first moment or a measure")
    m1 = m1 or 0.0

    total = _weighted_sum(poles, taus) * (m0 + k * m1)
    if k != 0.0:
        total -= k * taus * m0 * _weighted_sum(poles, taus, coeff=lambda p: p.residue)
    if ctx.measure is not None and not cls.all_time_independent:
        for lam, w in ctx.measure.masses:
            pre = cls.preimages(lam)
            total -= w * (1.0 + k * lam) * _weighted_sum(pre, taus)
    values = ctx.a0 * cls.sign * np.real(total)
    return TimeSeries(times, values, label="predicted")


def predict_frequency_probe_response(ctx: ScenarioResponseContext, times, z0: complex | None = None) -> TimeSeries:
    """Closed form for the probe design.

    Re v = a0*sign*sum_j w_j [ sum_alpha w m Re(1/(lambda_j - z0)) e^(-alpha tau)
                               - sum_kappa w p Re(e^(-kappa tau)/(lambda_j - z0)) ].
    """
    recipe = ctx.design.recipe
    if not isinstance(recipe, FrequencyProbe):
        raise InvalidDesign("Probe prediction needs a frequency-probe design")
    z0 = complex(recipe.z0 if z0 is None else z0)
    cls = _require_all_time(ctx)
    if ctx.measure is None:
        raise MissingMeasure("The probe closed form integrates against the measure")

    times = np.asarray(times, dtype=float)
    taus = times - ctx.t0
    kappas = cls.preimages(z0)
    kappa_sum = _weighted_sum(kappas, taus)
    total = np.zeros(times.shape, dtype=float)
    for lam, w in ctx.measure.masses:
        inv = 1.0 / (lam - z0)
        total -= w * np.real(kappa_sum * inv)
        if not cls.all_time_independent:
            total += w * inv.real * np.real(_weighted_sum(cls.preimages(lam), taus))
    return TimeSeries(times, ctx.a0 * cls.sign * total, label="predicted")


def predict_response(ctx: ScenarioResponseContext, times) -> TimeSeries:
    if isinstance(ctx.design.recipe, FrequencyProbe):
        return predict_frequency_probe_response(ctx, times)
    return predict_volume_fraction_response(ctx, times)


def reference_response(a0: float, measure: SpectralMeasure, z0: complex, omega0: complex, times, t0: float = 0.0) -> TimeSeries:
    """Re v0(t) = Re[a0 * G(z0) * exp(-i omega0 (t - t0))], the single-frequency target of the probe design."""
    z0 = complex(z0)
    if z0.imag == 0.0 and -1.0 <= z0.real <= 1.0:
        raise InvalidDesign(f"Reference frequency maps to z0={z0:.6g} inside [-1, 1]")
    times = np.asarray(times, dtype=float)
    factor = exp_factors(np.array([complex(omega0)]), times - t0)[:, 0]
    values = np.real(a0 * markov_eval(measure, z0) * factor)
    return TimeSeries(times, values, label="reference")
