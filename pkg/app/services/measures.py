import logging

import numpy as np

from app.core.errors import DegeneratePair, EvalAtMass, Infeasible
from app.models.measure import SpectralMeasure

logger = logging.getLogger(__name__)

MASS_DISTANCE = 1e-12
WEIGHT_TOL = 1e-12


def markov_eval(measure: SpectralMeasure, z):
    """Sum of w_j / (lambda_j - z), the Markov function of the measure, at one point or an array."""
    z_arr = np.asarray(z, dtype=complex)
    if len(measure) == 0:
        return np.zeros_like(z_arr) if z_arr.ndim else 0j
    diff = measure.locations[:, None] - z_arr.reshape(1, -1)
    if np.any(np.abs(diff) <= MASS_DISTANCE):
        raise EvalAtMass(f"Markov function evaluated within {MASS_DISTANCE:g} of a mass location")
    value = (measure.weights[:, None] / diff).sum(axis=0).reshape(z_arr.shape)
    return value if value.ndim else complex(value)


def moment(measure: SpectralMeasure, order: int) -> float:
    if order not in (0, 1):
        raise ValueError(f"Only moments of order 0 and 1 are supported, got {order}")
    if len(measure) == 0:
        return 0.0
    return float(np.sum(measure.weights * measure.locations**order))


def pair_weights(lam0, lam1, mass: float, m1: float):
    """Weights (w0, w1) of masses at lam0, lam1 matching (mass, m1); vectorized, no feasibility check."""
    lam0 = np.asarray(lam0, dtype=float)
    lam1 = np.asarray(lam1, dtype=float)
    span = lam1 - lam0
    w1 = (m1 - mass * lam0) / span
    return mass - w1, w1


def constrained_pair(lam0: float, lam1: float, mass: float, m1: float) -> SpectralMeasure:
    """Two point masses with prescribed zeroth and first moments."""
    if lam0 == lam1:
        raise DegeneratePair(f"Mass locations coincide at lambda={lam0}")
    w0, w1 = pair_weights(lam0, lam1, mass, m1)
    w0, w1 = float(w0), float(w1)
    if w0 < -WEIGHT_TOL or w1 < -WEIGHT_TOL:
        raise Infeasible(f"Moments (mass={mass}, m1={m1}) need weights ({w0:.6g}, {w1:.6g}) at ({lam0}, {lam1})")
    return SpectralMeasure(((lam0, max(w0, 0.0)), (lam1, max(w1, 0.0))))
