from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from app.core.errors import InvalidModel, PoleHit

TRIM_TOL = 1e-13
POLE_TOL = 1e-12
CANCEL_TOL = 1e-7


def trim_coefficients(coeffs: Sequence[float] | np.ndarray) -> np.ndarray:
    """Drop trailing coefficients that are negligible next to the largest one."""
    c = np.atleast_1d(np.asarray(coeffs, dtype=float))
    if c.size == 0:
        return np.zeros(1)
    scale = np.max(np.abs(c))
    if scale == 0.0:
        return np.zeros(1)
    significant = np.nonzero(np.abs(c) / scale > TRIM_TOL)[0]
    return c[: significant[-1] + 1].copy()


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """Ratio of two real polynomials, coefficients in ascending degree.

    Real coefficients make f(conj(x)) == conj(f(x)) hold structurally.
    """

    num: tuple[float, ...]
    den: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        num = trim_coefficients(self.num)
        den = trim_coefficients(self.den)
        if not np.any(den):
            raise InvalidModel("Denominator is identically zero")
        object.__setattr__(self, "num", tuple(float(c) for c in num))
        object.__setattr__(self, "den", tuple(float(c) for c in den))

    @classmethod
    def constant(cls, value: float) -> "RationalFunction":
        return cls((float(value),), (1.0,))

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> "RationalFunction":
        return cls(tuple(coeffs), (1.0,))

    @property
    def numerator(self) -> np.ndarray:
        return np.asarray(self.num)

    @property
    def denominator(self) -> np.ndarray:
        return np.asarray(self.den)

    def is_zero(self) -> bool:
        return not np.any(self.numerator)

    def __call__(self, x):
        """Evaluate at complex point(s); raises PoleHit on a numerical pole."""
        x = np.asarray(x, dtype=complex)
        n = P.polyval(x, self.numerator)
        d = P.polyval(x, self.denominator)
        hit = np.abs(d) < POLE_TOL * (1.0 + np.abs(n))
        if np.any(hit):
            where = x[hit] if x.ndim else x
            raise PoleHit(f"Rational function evaluated at a pole near x={np.ravel(where)[0]:.6g}")
        result = n / d
        return result if result.ndim else complex(result)

    # --- arithmetic ----------------------------------------------------------

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(tuple(-self.numerator), self.den)

    def __add__(self, other) -> "RationalFunction":
        other = _as_rational(other)
        if np.array_equal(self.denominator, other.denominator):
            return RationalFunction(tuple(P.polyadd(self.numerator, other.numerator)), self.den)
        num = P.polyadd(P.polymul(self.numerator, other.denominator), P.polymul(other.numerator, self.denominator))
        return RationalFunction(tuple(num), tuple(P.polymul(self.denominator, other.denominator))).reduced()

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        return self + (-_as_rational(other))

    def __rsub__(self, other) -> "RationalFunction":
        return _as_rational(other) - self

    def __mul__(self, other) -> "RationalFunction":
        other = _as_rational(other)
        return RationalFunction(
            tuple(P.polymul(self.numerator, other.numerator)),
            tuple(P.polymul(self.denominator, other.denominator)),
        ).reduced()

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalFunction":
        if self.is_zero():
            raise InvalidModel("Reciprocal of the zero function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other) -> "RationalFunction":
        return self * _as_rational(other).reciprocal()

    def __rtruediv__(self, other) -> "RationalFunction":
        return _as_rational(other) * self.reciprocal()

    # --- calculus and substitutions ------------------------------------------

    def derivative(self) -> "RationalFunction":
        n, d = self.numerator, self.denominator
        num = P.polysub(P.polymul(P.polyder(n), d) if n.size > 1 else np.zeros(1),
                        P.polymul(n, P.polyder(d)) if d.size > 1 else np.zeros(1))
        return RationalFunction(tuple(num), tuple(P.polymul(d, d)))

    def negated_argument(self) -> "RationalFunction":
        """Return x -> f(-x)."""
        signs_n = (-1.0) ** np.arange(self.numerator.size)
        signs_d = (-1.0) ** np.arange(self.denominator.size)
        return RationalFunction(tuple(self.numerator * signs_n), tuple(self.denominator * signs_d))

    def level_set_polynomial(self, target: complex) -> np.ndarray:
        """Coefficients of num - target * den, whose roots solve f(x) = target."""
        return P.polysub(self.numerator.astype(complex), complex(target) * self.denominator)

    def reduced(self) -> "RationalFunction":
        """Cancel numerator/denominator roots that agree to CANCEL_TOL."""
        n, d = self.numerator, self.denominator
        if n.size < 2 or d.size < 2:
            return self
        num_roots = list(P.polyroots(n))
        den_roots = list(P.polyroots(d))
        cancelled = False
        remaining_den = []
        for r in den_roots:
            match = next(
                (j for j, q in enumerate(num_roots) if abs(q - r) <= CANCEL_TOL * (1.0 + abs(r))),
                None,
            )
            if match is None:
                remaining_den.append(r)
            else:
                num_roots.pop(match)
                cancelled = True
        if not cancelled:
            return self
        new_num = n[-1] * np.real(P.polyfromroots(num_roots)) if num_roots else np.array([n[-1]])
        new_den = d[-1] * np.real(P.polyfromroots(remaining_den)) if remaining_den else np.array([d[-1]])
        scale = np.max(np.abs(new_den))
        return RationalFunction(tuple(new_num / scale), tuple(new_den / scale))

    def equals(self, other: "RationalFunction", tol: float = 1e-12) -> bool:
        """Identity test by cross multiplication."""
        other = _as_rational(other)
        cross = P.polysub(P.polymul(self.numerator, other.denominator), P.polymul(other.numerator, self.denominator))
        scale = max(np.max(np.abs(self.numerator)), np.max(np.abs(other.numerator)), 1.0)
        return bool(np.all(np.abs(cross) <= tol * scale))

    def __repr__(self) -> str:
        return f"RationalFunction(num={list(self.num)}, den={list(self.den)})"


def _as_rational(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction.constant(float(value))
