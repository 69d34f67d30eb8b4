"""Frequency responses of the phases and the contrast maps z(omega), h(zeta).

Every response is a real-coefficient rational in s = -i*omega, so the
real-symmetry conj(f(omega)) = f(-conj(omega)) holds by construction.
"""
import logging

import numpy as np

from app.core.errors import CouplingZero, PoleHit
from app.models.material import DirectZ, Duality, MaterialSystem, PhasePair
from app.models.rational import RationalFunction

logger = logging.getLogger(__name__)


def laplace(omega):
    """s = -i*omega."""
    return -1j * np.asarray(omega, dtype=complex)


def _scalar(value):
    return value if np.ndim(value) else complex(value)


def eval_mu(system: MaterialSystem, which: int, omega):
    """Frequency response of phase 1 or 2 at omega."""
    return _scalar(system.phase(which)(laplace(omega)))


def eval_z(system: MaterialSystem, omega):
    """z(omega) = (mu1 + mu2) / (mu2 - mu1), or the stored rational for DirectZ systems."""
    try:
        return _scalar(system.contrast(laplace(omega)))
    except PoleHit as e:
        raise PoleHit(f"z(omega) has a pole at omega={omega} ({system.name or 'system'}): {e}") from e


def eval_z_prime(system: MaterialSystem, omega):
    """dz/domega, from the exact rational derivative (ds/domega = -i)."""
    return _scalar(-1j * system.contrast.derivative()(laplace(omega)))


def eval_coupling(system: MaterialSystem, omega):
    """c(omega) linking alpha(s) = beta(s) c(omega(s))."""
    try:
        value = system.coupling(laplace(omega))
    except PoleHit as e:
        raise CouplingZero(f"Coupling c(omega) is singular or zero at omega={omega}") from e
    if np.any(np.abs(value) < 1e-14):
        raise CouplingZero(f"Coupling c(omega) vanishes along the trajectory ({system.name or 'system'})")
    return _scalar(value)


def as_h(system: MaterialSystem) -> RationalFunction:
    """h(zeta) = z(-i*zeta): substituting omega = -i*zeta gives s = -zeta."""
    return system.contrast.negated_argument()


def pole_frequencies(system: MaterialSystem) -> np.ndarray:
    """Frequencies omega where z(omega) is infinite (denominator roots in s, mapped by omega = i*s)."""
    den = system.contrast.denominator
    if den.size < 2:
        return np.zeros(0, dtype=complex)
    return 1j * np.polynomial.polynomial.polyroots(den)


# --- built-in systems -------------------------------------------------------------


def example1(duality: Duality = Duality.DIRECT) -> MaterialSystem:
    """mu1 = 1 + i/omega (= 1 + 1/s), mu2 = 2."""
    mu1 = RationalFunction((1.0, 1.0), (0.0, 1.0))
    mu2 = RationalFunction.constant(2.0)
    return MaterialSystem(PhasePair(mu1, mu2), duality, name="example1")


def example2(duality: Duality = Duality.DIRECT) -> MaterialSystem:
    """Plasma-like mu1 = 1 - 1/omega^2 (= 1 + 1/s^2) against mu2 = 1 + i/omega."""
    mu1 = RationalFunction((1.0, 0.0, 1.0), (0.0, 0.0, 1.0))
    mu2 = RationalFunction((1.0, 1.0), (0.0, 1.0))
    return MaterialSystem(PhasePair(mu1, mu2), duality, name="example2")


def example3(alphas: tuple[float, float, float] = (1.0, 5.0, 8.0)) -> MaterialSystem:
    """z = (s - a2) / ((s - a1)(s - a3)), built so that h takes values in [-1, 1] inside Omega."""
    a1, a2, a3 = alphas
    z = RationalFunction((-a2, 1.0), (a1 * a3, -(a1 + a3), 1.0))
    return MaterialSystem(DirectZ(z), Duality.DIRECT, name="example3")


BUILTIN_SYSTEMS = {
    "example1": example1,
    "example2": example2,
    "example3": example3,
}
