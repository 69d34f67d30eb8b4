"""Traces the frequency path, its images C = z(path) and D = i*path, and classifies the design geometry."""
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.polynomial import polynomial as P

from app.core.config import settings
from app.core.errors import (
    InconsistentCounts,
    NotEncircling,
    NotMeasureIndependent,
    PointOnCurve,
    TrajectoryInvalid,
    TrajectoryThroughPole,
)
from app.models.material import MaterialSystem
from app.models.rational import RationalFunction
from app.models.trajectory import Trajectory
from app.services.material_models import as_h, eval_z, pole_frequencies
from app.services.spectral_analysis import OmegaSpectrum, SpectralPoint, locate_poles, preimages_in_omega
from app.services.winding import winding_numbers

logger = logging.getLogger(__name__)

ENDPOINT_IMAG_TOL = 1e-9
PATH_HIT_TOL = 1e-9


class Orientation(str, Enum):
    ANTICLOCKWISE = "anticlockwise"
    CLOCKWISE = "clockwise"


def close_with_mirror(curve: np.ndarray) -> np.ndarray:
    """curve followed by its conjugate traversed backwards; both ends must be real."""
    mirror = np.conj(curve[::-1])
    return np.concatenate([curve, mirror[1:-1]])


@dataclass(frozen=True, eq=False)
class CurveSet:
    s: np.ndarray
    gamma: np.ndarray
    c: np.ndarray
    d: np.ndarray

    @property
    def c_mirror(self) -> np.ndarray:
        return np.conj(self.c[::-1])

    @property
    def d_mirror(self) -> np.ndarray:
        return np.conj(self.d[::-1])

    @property
    def closed_c(self) -> np.ndarray:
        return close_with_mirror(self.c)

    @property
    def closed_d(self) -> np.ndarray:
        return close_with_mirror(self.d)


def _check_pole_crossings(system: MaterialSystem, traj: Trajectory) -> None:
    coeffs = np.asarray(traj.coefficients, dtype=complex)
    for omega_p in pole_frequencies(system):
        shifted = coeffs.copy()
        shifted[0] -= omega_p
        if not np.any(shifted):
            raise TrajectoryThroughPole(f"Trajectory is constant at the pole omega={omega_p:.6g}")
        if shifted.size == 1:
            continue
        for s in P.polyroots(shifted):
            if abs(s.imag) <= PATH_HIT_TOL and -PATH_HIT_TOL <= s.real <= 1.0 + PATH_HIT_TOL:
                raise TrajectoryThroughPole(
                    f"Trajectory passes through the pole omega={omega_p:.6g} of z at s={s.real:.6f}"
                )


def trace_curves(system: MaterialSystem, traj: Trajectory, n: int | None = None) -> CurveSet:
    n = n or traj.samples
    _check_pole_crossings(system, traj)
    s = np.linspace(0.0, 1.0, n)
    gamma = np.asarray(traj(s), dtype=complex)
    c = np.asarray(eval_z(system, gamma), dtype=complex)
    return CurveSet(s=s, gamma=gamma, c=c, d=1j * gamma)


@dataclass(frozen=True, eq=False)
class CurveClassification:
    system_name: str
    start_image: float
    end_image: float
    probe_grid: np.ndarray
    probe_windings: np.ndarray
    sign: int
    encircles_interval: bool
    all_time_applicable: bool
    h: RationalFunction | None
    h_poles: tuple[SpectralPoint, ...]
    m_profile: tuple[tuple[SpectralPoint, ...], ...]
    all_time_independent: bool
    curves: CurveSet = field(repr=False)

    @property
    def orientation(self) -> Orientation:
        return Orientation.ANTICLOCKWISE if self.sign == 1 else Orientation.CLOCKWISE

    @property
    def omega_poles(self) -> tuple[SpectralPoint, ...]:
        return tuple(p for p in self.h_poles if p.in_omega)

    @property
    def spectrum(self) -> OmegaSpectrum:
        return OmegaSpectrum(
            self.omega_poles,
            {complex(lam): m for lam, m in zip(self.probe_grid, self.m_profile)},
        )

    def preimages(self, target: complex) -> list[SpectralPoint]:
        """Solutions of h(zeta) = target inside Omega."""
        if not self.all_time_applicable:
            raise NotMeasureIndependent(
                f"{self.system_name}: the all-time analysis needs both trajectory endpoints on the imaginary axis"
            )
        return preimages_in_omega(self.h, target, self.curves.closed_d)


def _endpoint_image(value: complex, label: str) -> float:
    if abs(value.imag) > ENDPOINT_IMAG_TOL * (1.0 + abs(value)):
        raise TrajectoryInvalid(f"{label}={value:.6g} is not real, so C and its mirror image do not close")
    return float(value.real)


def classify(
    system: MaterialSystem,
    traj: Trajectory,
    probe_grid=None,
    samples: int | None = None,
) -> CurveClassification:
    curves = trace_curves(system, traj, samples)
    a = _endpoint_image(complex(curves.c[0]), "z(omega(0))")
    b = _endpoint_image(complex(curves.c[-1]), "z(omega(1))")
    if not (abs(a) > 1.0 and abs(b) > 1.0 and a * b < 0.0):
        raise NotEncircling(f"Endpoint images A={a:.6g}, B={b:.6g} must lie beyond -1 and 1 on opposite sides")

    grid = np.linspace(-1.0, 1.0, settings.PROBE_GRID) if probe_grid is None else np.asarray(probe_grid, dtype=float)
    try:
        windings = winding_numbers(curves.closed_c, grid)
    except PointOnCurve as e:
        raise NotEncircling(f"C meets the interval [-1, 1]: {e}") from e
    if not (np.all(windings == windings[0]) and abs(windings[0]) == 1):
        raise NotEncircling(f"C and its mirror do not wind once around [-1, 1] (windings {sorted(set(windings))})")
    sign = int(windings[0])

    applicable = traj.imaginary_endpoints
    h = as_h(system)
    h_poles: tuple[SpectralPoint, ...] = ()
    m_profile: tuple[tuple[SpectralPoint, ...], ...] = ()
    independent = False
    if applicable:
        region = curves.closed_d
        h_poles = tuple(locate_poles(h, region))
        m_profile = tuple(tuple(preimages_in_omega(h, lam, region)) for lam in grid)
        pole_weight = sum(p.weight for p in h_poles)
        for lam, m, wind in zip(grid, m_profile, windings):
            if sum(x.weight for x in m) - pole_weight != wind:
                raise InconsistentCounts(
                    f"Preimage count at lambda={lam:.4f} ({sum(x.weight for x in m)}) minus pole count "
                    f"({pole_weight}) differs from the winding number {wind}"
                )
        independent = all(len(m) == 0 for m in m_profile)
    else:
        logger.info(f"{system.name or 'system'}: an endpoint is on the real axis; only reference-time results apply")

    logger.info(
        f"Classified {system.name or 'system'}: A={a:.6g}, B={b:.6g}, sign={sign:+d}, "
        f"poles in Omega={sum(1 for p in h_poles if p.in_omega)}, all-time independent={independent}"
    )
    return CurveClassification(
        system_name=system.name,
        start_image=a,
        end_image=b,
        probe_grid=grid,
        probe_windings=windings,
        sign=sign,
        encircles_interval=True,
        all_time_applicable=applicable,
        h=h,
        h_poles=h_poles,
        m_profile=m_profile,
        all_time_independent=independent,
        curves=curves,
    )
