"""Response envelopes over admissible measures, and the inverse maps from measurements."""
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from app.core.config import settings
from app.core.errors import (
    InvalidDesign,
    NoFeasibleMeasure,
    NonSimplePole,
    NotMeasureIndependent,
    PreconditionM,
    ProbePreimageCount,
    SingularSystem,
    ZeroCoefficient,
    ZeroDenominator,
)
from app.services.curves import CurveClassification
from app.services.measures import pair_weights
from app.services.response import ResponseKernel, ScenarioResponseContext
from app.services.signal_design import FrequencyProbe, SignalDesign, VolumeFraction, exp_factors

logger = logging.getLogger(__name__)

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
T0_TOL = 1e-12

Measurement = tuple[float, float]


@dataclass(frozen=True, eq=False)
class BoundEnvelope:
    times: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    argmin: np.ndarray
    argmax: np.ndarray
    label: str = "envelope"

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower


def _lambda_grid(points: int | None) -> np.ndarray:
    return np.linspace(-1.0, 1.0, points or settings.LAMBDA_GRID)


def _golden_refine(kernel: ResponseKernel, grid, best_idx, best_val, times, sense: float, iterations: int):
    """Golden-section search of sense*K(lambda, t) around each grid optimum; keeps the grid value if better."""
    lo = grid[np.maximum(best_idx - 1, 0)]
    hi = grid[np.minimum(best_idx + 1, grid.size - 1)]
    best_lam = grid[best_idx].copy()
    best = best_val.copy()
    for _ in range(iterations):
        x1 = hi - GOLDEN * (hi - lo)
        x2 = lo + GOLDEN * (hi - lo)
        f1 = sense * kernel.pairs(x1, times)
        f2 = sense * kernel.pairs(x2, times)
        left_better = f1 < f2
        hi = np.where(left_better, x2, hi)
        lo = np.where(left_better, lo, x1)
        for x, f in ((x1, f1), (x2, f2)):
            improved = f < best
            best = np.where(improved, f, best)
            best_lam = np.where(improved, x, best_lam)
    return best, best_lam


def _point_mass_extremes(kernel: ResponseKernel, times, grid_points: int | None):
    grid = _lambda_grid(grid_points)
    k = kernel.matrix(grid, times)
    iterations = settings.GOLDEN_ITERATIONS
    imin = np.argmin(k, axis=0)
    imax = np.argmax(k, axis=0)
    cols = np.arange(k.shape[1])
    low, low_lam = _golden_refine(kernel, grid, imin, k[imin, cols], times, 1.0, iterations)
    high, high_lam = _golden_refine(kernel, grid, imax, -k[imax, cols], times, -1.0, iterations)
    return low, -high, low_lam, high_lam


def _pair_extremes(kernel: ResponseKernel, times, mass: float, m1: float, grid_points: int | None):
    mu = m1 / mass
    lams = np.unique(np.concatenate([_lambda_grid(grid_points), [mu]]))
    k = kernel.matrix(lams, times)
    single = k[np.searchsorted(lams, mu)] * mass
    low, high = single.copy(), single.copy()
    low_lam = np.full(single.shape, mu)
    high_lam = low_lam.copy()

    right = np.nonzero(lams > mu)[0]
    for i in np.nonzero(lams < mu)[0]:
        if right.size == 0:
            break
        w0, w1 = pair_weights(lams[i], lams[right], mass, m1)
        values = w0[:, None] * k[i][None, :] + w1[:, None] * k[right]
        heavier = np.where(w0 >= w1, lams[i], lams[right])
        jmin = np.argmin(values, axis=0)
        jmax = np.argmax(values, axis=0)
        cols = np.arange(values.shape[1])
        vmin, vmax = values[jmin, cols], values[jmax, cols]
        better_low = vmin < low
        better_high = vmax > high
        low = np.where(better_low, vmin, low)
        high = np.where(better_high, vmax, high)
        low_lam = np.where(better_low, heavier[jmin], low_lam)
        high_lam = np.where(better_high, heavier[jmax], high_lam)
    return low, high, low_lam, high_lam


def bounds_over_measures(
    ctx: ScenarioResponseContext,
    times,
    mass: float = 1.0,
    m1: float | None = None,
    a0_known: bool = True,
    grid_points: int | None = None,
) -> BoundEnvelope:
    """Lower and upper Re v(t) over point masses (mass only) or moment-matched pairs (mass and m1).

    With a0 unknown the envelope covers a0 in [0, 2].
    """
    times = np.asarray(times, dtype=float)
    if mass < 0.0:
        raise NoFeasibleMeasure(f"Total mass {mass} is negative")
    if m1 is not None and mass > 0.0 and abs(m1 / mass) > 1.0 + 1e-12:
        raise NoFeasibleMeasure(f"First moment {m1} is out of reach for mass {mass} on [-1, 1]")
    if m1 is not None and mass == 0.0 and m1 != 0.0:
        raise NoFeasibleMeasure("A zero measure has zero first moment")

    kernel = ResponseKernel(ctx.design)
    if mass == 0.0:
        zeros = np.zeros_like(times)
        return BoundEnvelope(times, zeros, zeros, zeros, zeros)
    if m1 is None:
        low, high, low_lam, high_lam = _point_mass_extremes(kernel, times, grid_points)
        low, high = low * mass, high * mass
    else:
        m1 = float(np.clip(m1, -mass, mass))
        low, high, low_lam, high_lam = _pair_extremes(kernel, times, mass, m1, grid_points)

    if a0_known:
        lower, upper = ctx.a0 * low, ctx.a0 * high
    else:
        lower, upper = np.minimum(0.0, 2.0 * low), np.maximum(0.0, 2.0 * high)
    logger.info(
        f"Envelope over {'pairs' if m1 is not None else 'point masses'} on {times.size} times: "
        f"max width {float(np.max(upper - lower)):.3g}"
    )
    return BoundEnvelope(times, lower, upper, low_lam, high_lam, label="bounds")


def reference_bounds(
    a0: float,
    z0: complex,
    omega0: complex,
    times,
    mass: float = 1.0,
    t0: float = 0.0,
    grid_points: int | None = None,
) -> BoundEnvelope:
    """Envelope of Re v0(t) over point masses."""
    times = np.asarray(times, dtype=float)
    grid = _lambda_grid(grid_points)
    factor = exp_factors(np.array([complex(omega0)]), times - t0)[:, 0]
    values = a0 * mass * np.real(factor[None, :] / (grid[:, None] - complex(z0)))
    imin, imax = np.argmin(values, axis=0), np.argmax(values, axis=0)
    cols = np.arange(times.size)
    return BoundEnvelope(times, values[imin, cols], values[imax, cols], grid[imin], grid[imax], label="reference")


# --- recovery ----------------------------------------------------------------------


@dataclass(frozen=True)
class RecoveryResult:
    f1: float
    interval: tuple[float, float]
    a0: float
    method: str
    times: tuple[float, ...] = ()
    residual: float = 0.0
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FrequencyRecovery:
    """G(z0) = integral of d(gamma)/(lambda - z0), and xi = G(z0)/2."""

    markov_value: complex
    method: str
    real_part_only: bool = False

    @property
    def xi(self) -> complex:
        return self.markov_value / 2.0


def _as_measurements(measurements: Measurement | Iterable[Measurement]) -> list[Measurement]:
    items = list(measurements)
    if len(items) == 2 and all(np.isscalar(x) for x in items):
        return [(float(items[0]), float(items[1]))]
    return [(float(t), float(v)) for t, v in items]


def _pole_sums(cls: CurveClassification, tau: float) -> tuple[float, float]:
    """(sum w n e^(-beta tau), sum w b e^(-beta tau)) over poles of h in Omega."""
    s_n = sum(p.weight * np.exp(-p.location * tau) for p in cls.omega_poles)
    s_b = sum(p.weight * (p.residue or 0.0) * np.exp(-p.location * tau) for p in cls.omega_poles)
    return float(np.real(s_n)), float(np.real(s_b))


def volume_fraction_coefficient(cls: CurveClassification, design: SignalDesign, t: float) -> float:
    """c(t) with Re v(t) = a0 * c(t) for a unit-mass measure under the k = 0 design."""
    tau = t - design.t0
    if cls.all_time_independent:
        return cls.sign * _pole_sums(cls, tau)[0]
    if abs(tau) <= T0_TOL:
        return -1.0
    raise NotMeasureIndependent(
        f"{cls.system_name} is measure dependent away from t0; measure at t = t0 = {design.t0}"
    )


def recover_volume_fraction(
    classification: CurveClassification,
    design: SignalDesign,
    measurements: Measurement | Sequence[Measurement],
    epsilon: float = 0.0,
) -> RecoveryResult:
    """f1 = a0/2 from one or more measurements of Re v, least squares when several are given.

    The interval maps value +/- epsilon through the same linear relation and is clipped to [0, 1].
    """
    recipe = design.recipe
    if not isinstance(recipe, VolumeFraction) or recipe.k != 0.0 or recipe.gauge:
        raise InvalidDesign("Volume-fraction recovery needs the gauge-free k = 0 design")
    if epsilon < 0.0:
        raise InvalidDesign(f"Measurement uncertainty must be nonnegative, got {epsilon}")

    data = _as_measurements(measurements)
    coeffs = np.array([volume_fraction_coefficient(classification, design, t) for t, _ in data])
    values = np.array([v for _, v in data])
    norm = float(coeffs @ coeffs)
    if norm < 1e-28:
        raise ZeroDenominator("Every measurement time has a vanishing coefficient sign * sum n e^(-beta t)")

    a0 = float(coeffs @ values) / norm
    residual = float(np.sqrt(np.sum((values - a0 * coeffs) ** 2)))
    spread = epsilon * float(np.sum(np.abs(coeffs))) / norm

    f1 = a0 / 2.0
    lo, hi = max(0.0, f1 - spread / 2.0), min(1.0, f1 + spread / 2.0)
    clipped = float(np.clip(f1, 0.0, 1.0))
    if clipped != f1:
        logger.warning(f"Recovered f1={f1:.6g} lies outside [0, 1]; clipping to {clipped}")
    if lo > hi:
        lo = hi = clipped
    method = "least-squares" if len(data) > 1 else "single-time"
    return RecoveryResult(
        f1=clipped,
        interval=(lo, hi),
        a0=a0,
        method=method,
        times=tuple(t for t, _ in data),
        residual=residual,
        diagnostics={"coefficients": coeffs.tolist(), "all_time_independent": classification.all_time_independent},
    )


def recover_first_moment(
    classification: CurveClassification,
    design: SignalDesign,
    a0: float,
    measurements: Measurement | Sequence[Measurement],
    mass: float = 1.0,
) -> float:
    """Invert the k-design closed form for the first moment M1, least squares over several measurements."""
    recipe = design.recipe
    if not isinstance(recipe, VolumeFraction) or recipe.k == 0.0:
        raise InvalidDesign("First-moment recovery needs a volume-fraction design with k != 0")
    if not classification.all_time_independent:
        raise NotMeasureIndependent(f"{classification.system_name} is not measure independent for all time")
    if not all(p.multiplicity == 1 for p in classification.omega_poles):
        raise NonSimplePole("First-moment recovery assumes simple poles of h in Omega")
    if a0 == 0.0:
        raise ZeroCoefficient("a0 = 0 leaves the response independent of M1")

    k = recipe.k
    coeffs, rhs = [], []
    for t, value in _as_measurements(measurements):
        tau = t - design.t0
        s_n, s_b = _pole_sums(classification, tau)
        scaled = value / (a0 * classification.sign)
        coeffs.append(k * s_n)
        rhs.append(scaled - mass * s_n + k * tau * mass * s_b)
    coeffs, rhs = np.array(coeffs), np.array(rhs)
    norm = float(coeffs @ coeffs)
    if norm < 1e-28:
        raise ZeroCoefficient("The M1 coefficient k * sum n e^(-beta tau) vanishes at every measurement time")
    return float(coeffs @ rhs) / norm


def solve_two_time(kappa: complex, sign: int, a0: float, measurements: Sequence[Measurement], t0: float = 0.0) -> complex:
    """Solve Re v(t_i) = -a0 * sign * (xi e^(-kappa tau_i) + conj(xi) e^(-conj(kappa) tau_i)) for xi.

    Two measurements give the exact solution; more are combined by least squares.
    """
    if len(measurements) < 2:
        raise SingularSystem(f"At least two measurements are needed, got {len(measurements)}")
    times = np.array([t for t, _ in measurements], dtype=float)
    values = np.array([v for _, v in measurements], dtype=float)
    if np.unique(times).size < 2:
        raise SingularSystem(f"Measurement times coincide at t={times[0]}")
    e = np.exp(-complex(kappa) * (times - t0))
    matrix = -2.0 * a0 * sign * np.column_stack([e.real, -e.imag])
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular[-1] <= 1e-14 * max(singular[0], 1e-300):
        raise SingularSystem(f"Two-time system is singular for kappa={complex(kappa):.6g} (real kappa or a0 = 0)")
    (re, im), *_ = np.linalg.lstsq(matrix, values, rcond=None)
    return complex(re, im)


def recover_frequency_response(
    classification: CurveClassification,
    design: SignalDesign,
    a0: float,
    measurements: Measurement | Sequence[Measurement],
) -> FrequencyRecovery:
    """G(z0) from probe-design measurements.

    One measurement at t0 gives Re G(z0) for any admissible scenario. Away from t0 the spectrum
    must avoid [-1, 1] in Omega: real z0 needs one measurement, complex z0 needs two.
    Extra measurements are combined by least squares.
    """
    recipe = design.recipe
    if not isinstance(recipe, FrequencyProbe):
        raise InvalidDesign("Frequency-response recovery needs a frequency-probe design")
    if a0 == 0.0:
        raise ZeroCoefficient("a0 = 0 carries no information about the response")
    z0 = complex(recipe.z0)
    real_z0 = z0.imag == 0.0
    data = _as_measurements(measurements)

    if len(data) == 1 and abs(data[0][0] - design.t0) <= T0_TOL:
        value = data[0][1] / a0
        return FrequencyRecovery(complex(value), "reference-time", real_part_only=not real_z0)

    if not classification.all_time_independent:
        raise PreconditionM(
            f"h takes values in [-1, 1] inside Omega; the response at omega0 is recoverable only at t0={design.t0}"
        )
    kappas = classification.preimages(z0)
    sign = classification.sign

    if real_z0:
        if not kappas:
            raise ProbePreimageCount(f"No preimage of z0={z0:.6g} inside Omega")
        coeffs = np.array(
            [-a0 * sign * np.real(sum(p.weight * np.exp(-p.location * (t - design.t0)) for p in kappas)) for t, _ in data]
        )
        values = np.array([v for _, v in data])
        norm = float(coeffs @ coeffs)
        if norm < 1e-28:
            raise ProbePreimageCount(f"The preimages of z0={z0:.6g} cancel at every measurement time")
        method = "single-time" if len(data) == 1 else "least-squares"
        return FrequencyRecovery(complex(float(coeffs @ values) / norm), method)

    if len(kappas) != 1 or kappas[0].multiplicity != 1:
        raise ProbePreimageCount(
            f"Two-time recovery needs exactly one simple preimage of z0 in Omega, found "
            f"{[(p.location, p.multiplicity) for p in kappas]}"
        )
    kappa = kappas[0]
    xi = solve_two_time(kappa.location, sign * kappa.winding, a0, data, design.t0)
    return FrequencyRecovery(2.0 * xi, "two-time" if len(data) == 2 else "least-squares")
