import logging
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.signal import unique_roots

from app.core.errors import DegenerateTarget

logger = logging.getLogger(__name__)

CLUSTER_TOL = 1e-7
ACCEPT_TOL = 1e-10


@dataclass(frozen=True)
class Root:
    location: complex
    multiplicity: int = 1


def _trim(coeffs: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    significant = np.nonzero(np.abs(c) / scale > 1e-13)[0]
    return c[: significant[-1] + 1]


def _newton_polish(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    deriv = P.polyder(coeffs)
    value = P.polyval(roots, coeffs)
    slope = P.polyval(roots, deriv)
    step = np.zeros_like(roots)
    usable = np.abs(slope) > 1e-300
    step[usable] = value[usable] / slope[usable]
    polished = roots - step
    # Multiple roots make Newton crawl; keep whichever candidate has the smaller residual.
    keep = np.abs(P.polyval(polished, coeffs)) <= np.abs(value)
    return np.where(keep, polished, roots)


def _cluster(roots: np.ndarray) -> list[Root]:
    if roots.size == 0:
        return []
    tol = CLUSTER_TOL * (1.0 + float(np.max(np.abs(roots))))
    centres, counts = unique_roots(roots, tol=tol, rtype="avg")
    found = [Root(complex(c), int(n)) for c, n in zip(centres, counts)]
    return sorted(found, key=lambda r: (r.location.real, r.location.imag))


def polynomial_roots(coeffs) -> list[Root]:
    """Roots of a polynomial (ascending coefficients) with multiplicities.

    Companion-matrix eigenvalues, one Newton step, then clustering.
    Raises DegenerateTarget for the zero polynomial.
    """
    c = _trim(coeffs)
    if not np.any(c):
        raise DegenerateTarget("Polynomial is identically zero; every point is a root")
    if c.size == 1:
        return []
    raw = P.polyroots(c).astype(complex)
    polished = _newton_polish(c, raw)
    roots = _cluster(polished)

    scale = np.max(np.abs(c))
    for root in roots:
        if root.multiplicity > 1:
            continue
        residual = abs(P.polyval(root.location, c))
        tol = ACCEPT_TOL * scale * max(1.0, abs(root.location)) ** (c.size - 1)
        if residual > tol:
            logger.warning(f"Root {root.location:.6g} has residual {residual:.3g} above tolerance {tol:.3g}")
    return roots
