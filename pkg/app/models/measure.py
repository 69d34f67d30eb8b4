from dataclasses import dataclass
from typing import Iterable

import numpy as np

from app.core.errors import InvalidModel

SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class SpectralMeasure:
    """Finite sum of point masses w_j * delta(lambda - lambda_j) on [-1, 1]."""

    masses: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        cleaned = []
        for lam, weight in self.masses:
            lam, weight = float(lam), float(weight)
            if abs(lam) > 1.0 + SUPPORT_TOL:
                raise InvalidModel(f"Mass location {lam} lies outside [-1, 1]")
            if weight < 0.0:
                raise InvalidModel(f"Mass weight {weight} is negative")
            cleaned.append((min(1.0, max(-1.0, lam)), weight))
        object.__setattr__(self, "masses", tuple(cleaned))

    @classmethod
    def point_mass(cls, lam: float, weight: float = 1.0) -> "SpectralMeasure":
        return cls(((lam, weight),))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "SpectralMeasure":
        return cls(tuple((float(lam), float(w)) for lam, w in pairs))

    @property
    def locations(self) -> np.ndarray:
        return np.array([lam for lam, _ in self.masses], dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.masses], dtype=float)

    def __len__(self) -> int:
        return len(self.masses)
