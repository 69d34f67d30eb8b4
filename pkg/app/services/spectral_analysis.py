"""Poles, preimages and residues of h(zeta) inside the region enclosed by D and its mirror image."""
import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from app.core.errors import AmbiguousMembership, PointOnCurve
from app.models.rational import RationalFunction
from app.services.roots import Root, polynomial_roots
from app.services.winding import winding_numbers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralPoint:
    """A pole or preimage of h, weighted by the winding of the closed D curve about it."""

    location: complex
    multiplicity: int
    winding: int
    residue: complex | None = None

    @property
    def in_omega(self) -> bool:
        return self.winding != 0

    @property
    def weight(self) -> int:
        return self.multiplicity * self.winding


@dataclass(frozen=True)
class OmegaSpectrum:
    poles: tuple[SpectralPoint, ...]
    preimages: dict[complex, tuple[SpectralPoint, ...]] = field(default_factory=dict)

    @property
    def pole_weight(self) -> int:
        return sum(p.weight for p in self.poles)

    @property
    def simple_poles(self) -> bool:
        return all(p.multiplicity == 1 for p in self.poles)


def _windings(region: np.ndarray, roots: list[Root]) -> np.ndarray:
    if not roots:
        return np.zeros(0, dtype=int)
    try:
        return winding_numbers(region, [r.location for r in roots])
    except PointOnCurve as e:
        raise AmbiguousMembership(f"Cannot decide membership in Omega: {e}") from e


def locate_poles(h: RationalFunction, region: np.ndarray) -> list[SpectralPoint]:
    """All finite poles of h with their winding weights (zero outside Omega)."""
    roots = polynomial_roots(h.denominator)
    windings = _windings(region, roots)
    den_prime = P.polyder(h.denominator)
    points = []
    for root, wind in zip(roots, windings):
        residue = None
        if root.multiplicity == 1:
            residue = complex(P.polyval(root.location, h.numerator) / P.polyval(root.location, den_prime))
        points.append(SpectralPoint(root.location, root.multiplicity, int(wind), residue))
    return points


def poles_in_omega(h: RationalFunction, region: np.ndarray) -> list[SpectralPoint]:
    return [p for p in locate_poles(h, region) if p.in_omega]


def preimages_in_omega(h: RationalFunction, target: complex, region: np.ndarray) -> list[SpectralPoint]:
    """Solutions of h(zeta) = target inside Omega, from the roots of num - target * den."""
    roots = polynomial_roots(h.level_set_polynomial(target))
    den_scale = np.max(np.abs(h.denominator))
    # Drop common roots of num and den; they are not preimages.
    roots = [r for r in roots if abs(P.polyval(r.location, h.denominator)) > 1e-10 * den_scale]
    windings = _windings(region, roots)
    return [SpectralPoint(r.location, r.multiplicity, int(w)) for r, w in zip(roots, windings) if w != 0]


def omega_spectrum(h: RationalFunction, region: np.ndarray, targets=()) -> OmegaSpectrum:
    preimages = {complex(t): tuple(preimages_in_omega(h, t, region)) for t in targets}
    return OmegaSpectrum(tuple(poles_in_omega(h, region)), preimages)
