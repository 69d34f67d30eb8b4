from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial import Polynomial

from app.core.errors import TrajectoryInvalid

AXIS_TOL = 1e-12


class Axis(str, Enum):
    IMAGINARY = "imaginary"
    REAL = "real"


def _axis_of(omega: complex) -> Axis | None:
    tol = AXIS_TOL * (1.0 + abs(omega))
    if abs(omega.real) <= tol and omega.imag >= -tol:
        return Axis.IMAGINARY
    if abs(omega.imag) <= tol and omega.real > 0:
        return Axis.REAL
    return None


@dataclass(frozen=True)
class Trajectory:
    """Complex-frequency path omega(s), s in [0, 1], as a polynomial in s."""

    coefficients: tuple[complex, ...]
    samples: int = 2048

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        if not coeffs:
            raise TrajectoryInvalid("Trajectory needs at least one coefficient")
        if self.samples < 2:
            raise TrajectoryInvalid(f"Sample count must be at least 2, got {self.samples}")
        object.__setattr__(self, "coefficients", coeffs)

        for label, omega in (("omega(0)", self.start), ("omega(1)", self.end)):
            if _axis_of(omega) is None:
                raise TrajectoryInvalid(
                    f"{label}={omega:.6g} is on neither the positive imaginary nor the positive real axis"
                )
        path = self(np.linspace(0.0, 1.0, self.samples))
        tol = AXIS_TOL * (1.0 + np.max(np.abs(path)))
        outside = (path.real < -tol) | (path.imag < -tol)
        if np.any(outside):
            s_bad = np.linspace(0.0, 1.0, self.samples)[outside][0]
            raise TrajectoryInvalid(f"omega(s) leaves the closed first quadrant near s={s_bad:.4f}")

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial(np.asarray(self.coefficients, dtype=complex))

    def __call__(self, s):
        value = self.polynomial(np.asarray(s, dtype=float))
        return value if np.ndim(value) else complex(value)

    def derivative(self, s):
        value = self.polynomial.deriv()(np.asarray(s, dtype=float))
        return value if np.ndim(value) else complex(value)

    @property
    def start(self) -> complex:
        return complex(self.coefficients[0])

    @property
    def end(self) -> complex:
        return complex(sum(self.coefficients))

    @property
    def start_axis(self) -> Axis:
        return _axis_of(self.start)

    @property
    def end_axis(self) -> Axis:
        return _axis_of(self.end)

    @property
    def imaginary_endpoints(self) -> bool:
        return self.start_axis is Axis.IMAGINARY and self.end_axis is Axis.IMAGINARY

    def reversed(self) -> "Trajectory":
        """The same path traversed backwards, omega(1 - s)."""
        flipped = self.polynomial(Polynomial([1.0, -1.0]))
        return Trajectory(tuple(flipped.coef), self.samples)
