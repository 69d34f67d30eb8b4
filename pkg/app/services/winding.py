import numpy as np

from app.core.config import settings
from app.core.errors import NonIntegerWinding, PointOnCurve

ROUNDING_LIMIT = 0.25


def segment_distances(closed_curve: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest edge of a closed polygon (last vertex joins the first)."""
    a = np.asarray(closed_curve, dtype=complex)
    b = np.roll(a, -1)
    edge = b - a
    length2 = np.abs(edge) ** 2
    p = np.atleast_1d(np.asarray(points, dtype=complex))[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(length2 > 0, np.real((p - a) * np.conj(edge)) / length2, 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.min(np.abs(a + t * edge - p), axis=1)


def winding_numbers(closed_curve, points, band: float | None = None) -> np.ndarray:
    """Winding numbers of a sampled closed curve about several points.

    Sums the signed angle increments between consecutive vertices.
    """
    band = settings.WINDING_BAND if band is None else band
    curve = np.asarray(closed_curve, dtype=complex)
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    if pts.size == 0:
        return np.zeros(0, dtype=int)

    distance = segment_distances(curve, pts)
    close = distance <= band
    if np.any(close):
        raise PointOnCurve(
            f"Point {pts[close][0]:.6g} lies within {band:g} of the curve (distance {distance[close][0]:.3g})"
        )

    rel = curve[None, :] - pts[:, None]
    turns = np.angle(np.roll(rel, -1, axis=1) / rel).sum(axis=1) / (2.0 * np.pi)
    rounded = np.rint(turns)
    residual = np.abs(turns - rounded)
    bad = residual >= ROUNDING_LIMIT
    if np.any(bad):
        raise NonIntegerWinding(
            f"Winding about {pts[bad][0]:.6g} is {turns[bad][0]:.4f}; the curve is under-sampled"
        )
    return rounded.astype(int)


def winding_number(closed_curve, p: complex, band: float | None = None) -> int:
    return int(winding_numbers(closed_curve, [p], band)[0])
