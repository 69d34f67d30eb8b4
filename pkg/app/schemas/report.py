from pydantic import BaseModel

from app.services.bounds_recovery import BoundEnvelope, FrequencyRecovery, RecoveryResult
from app.services.curves import CurveClassification
from app.services.spectral_analysis import SpectralPoint


def complex_pair(value: complex) -> list[float]:
    return [float(complex(value).real), float(complex(value).imag)]


class SpectralPointReport(BaseModel):
    location: list[float]
    multiplicity: int
    winding: int
    residue: list[float] | None = None

    @classmethod
    def from_point(cls, point: SpectralPoint) -> "SpectralPointReport":
        return cls(
            location=complex_pair(point.location),
            multiplicity=point.multiplicity,
            winding=point.winding,
            residue=None if point.residue is None else complex_pair(point.residue),
        )


class ClassificationReport(BaseModel):
    scenario: str
    start_image: float
    end_image: float
    sign: int
    orientation: str
    encircles_interval: bool
    all_time_applicable: bool
    all_time_independent: bool
    h_poles: list[SpectralPointReport]
    omega_poles: list[SpectralPointReport]
    preimage_counts: list[int]
    probe_points: int

    @classmethod
    def from_classification(cls, scenario: str, c: CurveClassification) -> "ClassificationReport":
        return cls(
            scenario=scenario,
            start_image=c.start_image,
            end_image=c.end_image,
            sign=c.sign,
            orientation=c.orientation.value,
            encircles_interval=c.encircles_interval,
            all_time_applicable=c.all_time_applicable,
            all_time_independent=c.all_time_independent,
            h_poles=[SpectralPointReport.from_point(p) for p in c.h_poles],
            omega_poles=[SpectralPointReport.from_point(p) for p in c.omega_poles],
            preimage_counts=[sum(p.multiplicity for p in m) for m in c.m_profile],
            probe_points=int(c.probe_grid.size),
        )


class SeriesReport(BaseModel):
    scenario: str
    label: str
    times: list[float]
    values: list[float]


class EnvelopeReport(BaseModel):
    scenario: str
    times: list[float]
    lower: list[float]
    upper: list[float]
    argmin: list[float]
    argmax: list[float]
    max_width: float

    @classmethod
    def from_envelope(cls, scenario: str, env: BoundEnvelope) -> "EnvelopeReport":
        return cls(
            scenario=scenario,
            times=env.times.tolist(),
            lower=env.lower.tolist(),
            upper=env.upper.tolist(),
            argmin=env.argmin.tolist(),
            argmax=env.argmax.tolist(),
            max_width=float(env.width.max()) if env.width.size else 0.0,
        )


class RecoveryReport(BaseModel):
    scenario: str
    f1: float
    interval: tuple[float, float]
    a0: float
    method: str
    times: list[float]
    residual: float

    @classmethod
    def from_result(cls, scenario: str, r: RecoveryResult) -> "RecoveryReport":
        return cls(
            scenario=scenario,
            f1=r.f1,
            interval=r.interval,
            a0=r.a0,
            method=r.method,
            times=list(r.times),
            residual=r.residual,
        )


class MomentRecoveryReport(BaseModel):
    scenario: str
    first_moment: float
    a0: float
    times: list[float]


class FrequencyRecoveryReport(BaseModel):
    scenario: str
    markov_value: list[float]
    xi: list[float]
    method: str
    real_part_only: bool

    @classmethod
    def from_result(cls, scenario: str, r: FrequencyRecovery) -> "FrequencyRecoveryReport":
        return cls(
            scenario=scenario,
            markov_value=complex_pair(r.markov_value),
            xi=complex_pair(r.xi),
            method=r.method,
            real_part_only=r.real_part_only,
        )
