"""Composite Gauss-Legendre rules on [0, 1] with global panel doubling."""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from app.core.config import settings
from app.core.errors import QuadratureNotConverged

logger = logging.getLogger(__name__)

START_PANELS = 4


@lru_cache(maxsize=64)
def composite_rule(panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of an order-point Gauss-Legendre rule repeated on `panels` equal pieces of [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    width = 1.0 / panels
    left = np.arange(panels) * width
    nodes = (left[:, None] + 0.5 * width * (x[None, :] + 1.0)).ravel()
    weights = np.tile(0.5 * width * w, panels)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@dataclass(frozen=True)
class QuadratureResult:
    value: np.ndarray
    panels: int
    error_estimate: float


def integrate_rule(
    apply: Callable[[np.ndarray, np.ndarray], np.ndarray],
    *,
    order: int | None = None,
    rtol: float | None = None,
    atol: float | None = None,
    max_panels: int | None = None,
    label: str = "integral",
) -> QuadratureResult:
    """Converge `apply(nodes, weights)` by doubling the panel count.

    `apply` receives a composite rule and returns the (array-valued) integral it gives.
    Converged when max|I_2p - I_p| <= max(rtol * max|I_2p|, atol).
    """
    order = order or settings.QUAD_NODES
    rtol = settings.QUAD_RTOL if rtol is None else rtol
    atol = settings.QUAD_ATOL if atol is None else atol
    max_panels = max_panels or settings.QUAD_MAX_PANELS

    panels = START_PANELS
    previous = np.asarray(apply(*composite_rule(panels, order)))
    while panels < max_panels:
        panels *= 2
        current = np.asarray(apply(*composite_rule(panels, order)))
        change = float(np.max(np.abs(current - previous))) if current.size else 0.0
        scale = float(np.max(np.abs(current))) if current.size else 0.0
        if change <= max(rtol * scale, atol):
            logger.debug(f"{label} converged with {panels} panels (change {change:.3g})")
            return QuadratureResult(current, panels, change)
        previous = current
    raise QuadratureNotConverged(
        f"{label} did not converge within {max_panels} panels (last change {change:.3g}, scale {scale:.3g})"
    )


def integrate(integrand: Callable[[np.ndarray], np.ndarray], **kwargs) -> QuadratureResult:
    """Integrate integrand(s) over s in [0, 1]; the node axis must be last."""
    return integrate_rule(lambda nodes, weights: np.asarray(integrand(nodes)) @ weights, **kwargs)
