from typing import Literal

from pydantic import BaseModel, Field, field_validator, model_validator

ComplexInput = float | list[float]


def to_complex(value: ComplexInput) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    return complex(value[0], value[1])


def _check_pair(v):
    if isinstance(v, list) and len(v) != 2:
        raise ValueError("Complex numbers are written as [re, im]")
    return v


class RationalSpec(BaseModel):
    """Coefficients in s = -i*omega, ascending degree."""

    num: list[float]
    den: list[float] = [1.0]

    @field_validator("num", "den")
    @classmethod
    def validate_coefficients(cls, v: list[float]) -> list[float]:
        if not v:
            raise ValueError("Coefficient list cannot be empty")
        return v

    @field_validator("den")
    @classmethod
    def validate_denominator(cls, v: list[float]) -> list[float]:
        if not any(v):
            raise ValueError("Denominator cannot be identically zero")
        return v


class MaterialSpec(BaseModel):
    builtin: str | None = None
    mu1: RationalSpec | None = None
    mu2: RationalSpec | None = None
    z: RationalSpec | None = None
    coupling: RationalSpec | None = None
    duality: Literal["direct", "dual"] = "direct"

    @model_validator(mode="after")
    def validate_variant(self):
        variants = [self.builtin is not None, self.mu1 is not None or self.mu2 is not None, self.z is not None]
        if sum(variants) != 1:
            raise ValueError("Give exactly one of: builtin, mu1 + mu2, or z")
        if variants[1] and (self.mu1 is None or self.mu2 is None):
            raise ValueError("Phase-pair materials need both mu1 and mu2")
        if self.coupling is not None and self.z is None:
            raise ValueError("coupling is only used with a direct z")
        return self


class TrajectorySpec(BaseModel):
    coefficients: list[ComplexInput]
    samples: int | None = Field(default=None, ge=2)
    reverse: bool = False

    @field_validator("coefficients")
    @classmethod
    def validate_coefficients(cls, v: list[ComplexInput]) -> list[ComplexInput]:
        if not v:
            raise ValueError("Trajectory needs at least one coefficient")
        return [_check_pair(c) for c in v]


class DesignSpec(BaseModel):
    kind: Literal["volume_fraction", "frequency_probe"] = "volume_fraction"
    k: float = 0.0
    gauge: list[float] = []
    z0: ComplexInput | None = None
    omega0: ComplexInput | None = None
    t0: float = 0.0

    @field_validator("z0", "omega0")
    @classmethod
    def validate_complex(cls, v):
        return None if v is None else _check_pair(v)

    @model_validator(mode="after")
    def validate_probe(self):
        if self.kind == "frequency_probe" and self.z0 is None and self.omega0 is None:
            raise ValueError("A frequency probe needs z0 or omega0")
        return self


class MeasureSpec(BaseModel):
    masses: list[tuple[float, float]]

    @field_validator("masses")
    @classmethod
    def validate_masses(cls, v: list[tuple[float, float]]) -> list[tuple[float, float]]:
        for lam, w in v:
            if not -1.0 <= lam <= 1.0:
                raise ValueError(f"Mass location {lam} lies outside [-1, 1]")
            if w < 0:
                raise ValueError(f"Mass weight {w} is negative")
        return v


class ConstraintSpec(BaseModel):
    mass: float = Field(default=1.0, ge=0.0)
    m1: float | None = None
    a0_known: bool = True


class TimeGridSpec(BaseModel):
    start: float | None = None
    stop: float | None = None
    points: int | None = Field(default=None, ge=2)
    values: list[float] | None = None

    @model_validator(mode="after")
    def validate_grid(self):
        if self.values is not None:
            if any(b <= a for a, b in zip(self.values, self.values[1:])):
                raise ValueError("Time values must be strictly increasing")
            return self
        if self.start is None or self.stop is None:
            raise ValueError("Give start and stop, or explicit values")
        if self.stop <= self.start:
            raise ValueError("Time grid stop must exceed start")
        return self


class ScenarioConfig(BaseModel):
    name: str
    material: MaterialSpec
    trajectory: TrajectorySpec
    design: DesignSpec = DesignSpec()
    a0: float = Field(default=0.6, ge=0.0, le=2.0)
    measure: MeasureSpec | None = None
    constraints: ConstraintSpec = ConstraintSpec()
    times: TimeGridSpec
    measurements: list[tuple[float, float]] = []
    epsilon: float = Field(default=0.0, ge=0.0)

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("Scenario name cannot be empty")
        return v
