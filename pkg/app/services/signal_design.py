"""Design recipes r(z), their pull-back alpha(s), beta(s) along the trajectory, and the synthesized input."""
import logging
from dataclasses import dataclass, field

import numpy as np

from app.core.errors import (
    ExponentOverflow,
    InconsistentCounts,
    InvalidDesign,
    PointOnCurve,
    ProbeInsideCurve,
    ProbePole,
)
from app.models.material import MaterialSystem
from app.models.series import TimeSeries
from app.models.trajectory import Trajectory
from app.services.curves import CurveClassification
from app.services.material_models import eval_coupling, eval_z, eval_z_prime
from app.services.quadrature import integrate, integrate_rule
from app.services.winding import winding_number

logger = logging.getLogger(__name__)

EXPONENT_LIMIT = 700.0
PROBE_POLE_TOL = 1e-12


@dataclass(frozen=True)
class VolumeFraction:
    """r(z) = -i(1 + kz)/(2*pi), plus an optional gauge -i * sum(a_n z^-n)/(2*pi)."""

    k: float = 0.0
    gauge: tuple[float, ...] = ()

    kind = "volume_fraction"


@dataclass(frozen=True)
class FrequencyProbe:
    """r(z) = i/(4*pi) * (1/(z - z0) + 1/(z - conj(z0)))."""

    z0: complex
    omega0: complex | None = None

    kind = "frequency_probe"


Recipe = VolumeFraction | FrequencyProbe


@dataclass(frozen=True, eq=False)
class SignalDesign:
    recipe: Recipe
    system: MaterialSystem
    trajectory: Trajectory
    sign: int = 1
    t0: float = 0.0
    classification: CurveClassification | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidDesign(f"Design sign must be +1 or -1, got {self.sign}")

    @property
    def is_probe(self) -> bool:
        return isinstance(self.recipe, FrequencyProbe)


def probe_from_frequency(system: MaterialSystem, omega0: complex) -> FrequencyProbe:
    return FrequencyProbe(z0=complex(eval_z(system, omega0)), omega0=complex(omega0))


def _check_frequency_point_counts(classification: CurveClassification, z0: complex) -> None:
    """Weighted preimages of z0 in Omega equal the weighted poles there (C winds zero times about z0)."""
    kappa_weight = sum(p.weight for p in classification.preimages(z0))
    pole_weight = sum(p.weight for p in classification.h_poles)
    if kappa_weight != pole_weight:
        raise InconsistentCounts(
            f"Preimages of z0={z0:.6g} in Omega ({kappa_weight}) do not balance the poles ({pole_weight})"
        )


def build_design(
    recipe: Recipe,
    system: MaterialSystem,
    trajectory: Trajectory,
    classification: CurveClassification,
    t0: float = 0.0,
) -> SignalDesign:
    """Attach the orientation sign and check that a probe point sits outside C and its mirror."""
    if isinstance(recipe, FrequencyProbe):
        z0 = complex(recipe.z0)
        if -1.0 <= z0.real <= 1.0 and z0.imag == 0.0:
            raise InvalidDesign(f"Probe point z0={z0:.6g} lies on the spectral interval [-1, 1]")
        try:
            wind = winding_number(classification.curves.closed_c, z0)
        except PointOnCurve as e:
            raise ProbeInsideCurve(f"Probe point z0={z0:.6g} lies on C: {e}") from e
        if wind != 0:
            raise ProbeInsideCurve(
                f"Probe point z0={z0:.6g} is enclosed by C (winding {wind}); Re v(t0) = 0 carries no information"
            )
        if classification.all_time_applicable:
            _check_frequency_point_counts(classification, z0)
    elif not isinstance(recipe, VolumeFraction):
        raise InvalidDesign(f"Unknown recipe {recipe!r}")
    return SignalDesign(recipe, system, trajectory, classification.sign, t0, classification)


def eval_r(design: SignalDesign, z):
    z = np.asarray(z, dtype=complex)
    recipe = design.recipe
    if isinstance(recipe, VolumeFraction):
        value = -1j * (1.0 + recipe.k * z) / (2.0 * np.pi)
        for n, a_n in enumerate(recipe.gauge, start=1):
            value = value - 1j * a_n * z ** (-n) / (2.0 * np.pi)
    else:
        z0 = complex(recipe.z0)
        near = np.minimum(np.abs(z - z0), np.abs(z - np.conj(z0)))
        if np.any(near <= PROBE_POLE_TOL * (1.0 + abs(z0))):
            raise ProbePole(f"r(z) evaluated at its pole z0={z0:.6g}")
        value = 1j / (4.0 * np.pi) * (1.0 / (z - z0) + 1.0 / (z - np.conj(z0)))
    value = design.sign * value
    return value if value.ndim else complex(value)


def path_derivative(design: SignalDesign, s):
    """dz/ds = z'(omega(s)) * omega'(s), exact."""
    omega = design.trajectory(s)
    return eval_z_prime(design.system, omega) * design.trajectory.derivative(s)


def alpha(design: SignalDesign, s):
    omega = design.trajectory(s)
    z = eval_z(design.system, omega)
    return 2.0 * eval_r(design, z) * path_derivative(design, s)


def beta(design: SignalDesign, s):
    return alpha(design, s) / eval_coupling(design.system, design.trajectory(s))


def exp_factors(omega: np.ndarray, taus: np.ndarray) -> np.ndarray:
    """Matrix exp(-i * omega_n * tau_t) with shape (len(taus), len(omega))."""
    exponent = -1j * np.outer(np.asarray(taus, dtype=float), np.asarray(omega, dtype=complex))
    worst = float(np.max(np.abs(exponent.real))) if exponent.size else 0.0
    if worst > EXPONENT_LIMIT:
        raise ExponentOverflow(f"Exponent {worst:.1f} exceeds {EXPONENT_LIMIT:.0f}; shorten the time window")
    return np.exp(exponent)


def synthesize_input(design: SignalDesign, times) -> TimeSeries:
    """Re u(t), the quadrature of beta(s) exp(-i omega(s)(t - t0)) over s in [0, 1]."""
    times = np.asarray(times, dtype=float)
    taus = times - design.t0

    def apply(nodes, weights):
        return exp_factors(design.trajectory(nodes), taus) @ (beta(design, nodes) * weights)

    result = integrate_rule(apply, label="input signal")
    logger.info(f"Synthesized input at {times.size} times with {result.panels} panels")
    return TimeSeries(times, np.real(result.value), label="input")


def contour_kernel(design: SignalDesign, lams) -> np.ndarray:
    """g(lambda): integral of r(z)/(lambda - z) over C followed by its mirror, both legs evaluated directly."""
    lams = np.atleast_1d(np.asarray(lams, dtype=float))

    def integrand(s):
        omega = design.trajectory(s)
        z = eval_z(design.system, omega)
        dz = path_derivative(design, s)
        forward = eval_r(design, z)[None, :] * dz[None, :] / (lams[:, None] - z[None, :])
        # Mirror leg runs s from 1 to 0 through conj(z), hence the minus sign.
        zb = np.conj(z)
        mirror = -eval_r(design, zb)[None, :] * np.conj(dz)[None, :] / (lams[:, None] - zb[None, :])
        return forward + mirror

    return integrate(integrand, label="contour kernel").value
