from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

from app.core.errors import InvalidModel
from app.models.rational import RationalFunction


class Duality(str, Enum):
    """Which averaged field is driven: <h> (direct) or <b> (dual)."""

    DIRECT = "direct"
    DUAL = "dual"


@dataclass(frozen=True)
class PhasePair:
    """Phase responses mu1, mu2 as rationals in the Laplace variable s = -i*omega."""

    mu1: RationalFunction
    mu2: RationalFunction

    def __post_init__(self):
        if self.mu1.equals(self.mu2):
            raise InvalidModel("mu1 and mu2 are identical, so z(omega) is infinite everywhere")


@dataclass(frozen=True)
class DirectZ:
    """A contrast z(s) given directly; the coupling defaults to 1 (no mu2 available)."""

    z: RationalFunction
    coupling: RationalFunction = field(default_factory=lambda: RationalFunction.constant(1.0))


@dataclass(frozen=True)
class MaterialSystem:
    variant: PhasePair | DirectZ
    duality: Duality = Duality.DIRECT
    name: str = ""

    @cached_property
    def contrast(self) -> RationalFunction:
        """z as a rational function of s."""
        if isinstance(self.variant, DirectZ):
            return self.variant.z.reduced()
        mu1, mu2 = self.variant.mu1, self.variant.mu2
        return ((mu1 + mu2) / (mu2 - mu1)).reduced()

    @cached_property
    def coupling(self) -> RationalFunction:
        """c(s): mu2 for the direct problem, 1/mu2 for the dual one."""
        base = self.variant.coupling if isinstance(self.variant, DirectZ) else self.variant.mu2
        return base if self.duality is Duality.DIRECT else base.reciprocal()

    def phase(self, which: int) -> RationalFunction:
        if isinstance(self.variant, DirectZ):
            raise InvalidModel(f"System '{self.name}' defines z directly and has no phase responses")
        if which == 1:
            return self.variant.mu1
        if which == 2:
            return self.variant.mu2
        raise InvalidModel(f"Phase index must be 1 or 2, got {which}")
