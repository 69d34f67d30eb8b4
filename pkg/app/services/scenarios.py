"""Scenario files, the built-in case studies, and assembly of the full pipeline context."""
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import ScenarioError
from app.models.material import DirectZ, Duality, MaterialSystem, PhasePair
from app.models.measure import SpectralMeasure
from app.models.rational import RationalFunction
from app.models.trajectory import Trajectory
from app.schemas.scenario import MaterialSpec, RationalSpec, ScenarioConfig, to_complex
from app.services.curves import CurveClassification, classify
from app.services.material_models import BUILTIN_SYSTEMS
from app.services.response import ScenarioResponseContext
from app.services.signal_design import FrequencyProbe, SignalDesign, VolumeFraction, build_design, probe_from_frequency

logger = logging.getLogger(__name__)

# omega(s) = 1.5i + (2 + i)s - 2(1 + i)s^2
STANDARD_PATH = [[0.0, 1.5], [2.0, 1.0], [-2.0, -2.0]]
# omega(s) = 1.3i + (2 + i)s + (-2 + 5.4i)s^2
EXAMPLE3_PATH = [[0.0, 1.3], [2.0, 1.0], [-2.0, 5.4]]

BUILTIN_SCENARIOS: dict[str, dict] = {
    "example1": {
        "name": "example1",
        "material": {"builtin": "example1"},
        "trajectory": {"coefficients": STANDARD_PATH},
        "design": {"kind": "volume_fraction", "k": 0.0},
        "a0": 0.6,
        "measure": {"masses": [[0.5, 1.0]]},
        "times": {"start": -3.0, "stop": 0.0},
        "measurements": [[0.0, -0.6]],
    },
    "example1-moment": {
        "name": "example1-moment",
        "material": {"builtin": "example1"},
        "trajectory": {"coefficients": STANDARD_PATH},
        "design": {"kind": "volume_fraction", "k": 1.0},
        "a0": 0.6,
        "measure": {"masses": [[-1.0, 0.3], [1.0, 0.7]]},
        "constraints": {"mass": 1.0, "m1": 0.4},
        "times": {"start": -3.0, "stop": 0.0},
        "measurements": [[0.0, -0.84]],
    },
    "example1-probe": {
        "name": "example1-probe",
        "material": {"builtin": "example1"},
        "trajectory": {"coefficients": STANDARD_PATH},
        "design": {"kind": "frequency_probe", "omega0": [0.0, 31.0 / 27.0]},
        "a0": 0.6,
        "measure": {"masses": [[0.5, 1.0]]},
        "times": {"start": -3.0, "stop": 0.0},
    },
    "example2": {
        "name": "example2",
        "material": {"builtin": "example2"},
        "trajectory": {"coefficients": STANDARD_PATH},
        "design": {"kind": "volume_fraction", "k": 0.0},
        "a0": 0.6,
        "measure": {"masses": [[0.5, 1.0]]},
        "times": {"start": -3.0, "stop": 0.0},
        "measurements": [[0.0, -0.6]],
    },
    "example3": {
        "name": "example3",
        "material": {"builtin": "example3"},
        "trajectory": {"coefficients": EXAMPLE3_PATH},
        "design": {"kind": "volume_fraction", "k": 0.0},
        "a0": 0.6,
        "measure": {"masses": [[0.5, 1.0]]},
        "times": {"start": -1.0, "stop": 1.0},
        "measurements": [[0.0, -0.6]],
    },
}


def builtin_config(name: str) -> ScenarioConfig:
    if name not in BUILTIN_SCENARIOS:
        raise ScenarioError(f"Unknown built-in scenario '{name}' (known: {', '.join(BUILTIN_SCENARIOS)})")
    return ScenarioConfig.model_validate(BUILTIN_SCENARIOS[name])


def parse_config(raw: str | bytes | dict, source: str = "scenario") -> ScenarioConfig:
    try:
        data = json.loads(raw) if isinstance(raw, (str, bytes)) else raw
        return ScenarioConfig.model_validate(data)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{source}: not valid JSON ({e})") from e
    except ValidationError as e:
        raise ScenarioError(f"{source}: {e.error_count()} validation error(s): {e.errors()[0]['msg']}") from e


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    if not path.exists():
        raise ScenarioError(f"Scenario file not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"), source=str(path))


def resolve_config(name_or_path: str) -> ScenarioConfig:
    """A built-in scenario name or a path to a JSON scenario file."""
    if name_or_path in BUILTIN_SCENARIOS:
        return builtin_config(name_or_path)
    return load_config(name_or_path)


def _rational(spec: RationalSpec) -> RationalFunction:
    return RationalFunction(tuple(spec.num), tuple(spec.den))


def build_system(spec: MaterialSpec, name: str = "") -> MaterialSystem:
    duality = Duality(spec.duality)
    if spec.builtin is not None:
        factory = BUILTIN_SYSTEMS.get(spec.builtin)
        if factory is None:
            raise ScenarioError(f"Unknown built-in material '{spec.builtin}'")
        base = factory()
        return MaterialSystem(base.variant, duality, name=base.name)
    if spec.z is not None:
        variant = DirectZ(_rational(spec.z)) if spec.coupling is None else DirectZ(_rational(spec.z), _rational(spec.coupling))
    else:
        variant = PhasePair(_rational(spec.mu1), _rational(spec.mu2))
    return MaterialSystem(variant, duality, name=name)


def build_trajectory(config: ScenarioConfig, samples: int | None = None) -> Trajectory:
    spec = config.trajectory
    traj = Trajectory(
        tuple(to_complex(c) for c in spec.coefficients),
        samples or spec.samples or settings.SAMPLE_COUNT,
    )
    return traj.reversed() if spec.reverse else traj


def build_recipe(config: ScenarioConfig, system: MaterialSystem):
    spec = config.design
    if spec.kind == "volume_fraction":
        return VolumeFraction(k=spec.k, gauge=tuple(spec.gauge))
    if spec.z0 is not None:
        return FrequencyProbe(z0=to_complex(spec.z0), omega0=None if spec.omega0 is None else to_complex(spec.omega0))
    return probe_from_frequency(system, to_complex(spec.omega0))


def time_grid(config: ScenarioConfig, points: int | None = None) -> np.ndarray:
    grid = config.times
    if grid.values is not None:
        return np.asarray(grid.values, dtype=float)
    return np.linspace(grid.start, grid.stop, points or grid.points or settings.TIME_POINTS)


@dataclass(frozen=True, eq=False)
class PreparedScenario:
    config: ScenarioConfig
    system: MaterialSystem
    trajectory: Trajectory
    classification: CurveClassification
    design: SignalDesign
    context: ScenarioResponseContext
    times: np.ndarray

    @property
    def name(self) -> str:
        return self.config.name


def prepare(config: ScenarioConfig, samples: int | None = None, time_points: int | None = None) -> PreparedScenario:
    """Build, classify and design a scenario; all pipeline errors propagate unchanged."""
    system = build_system(config.material, name=config.name)
    trajectory = build_trajectory(config, samples)
    classification = classify(system, trajectory)
    design = build_design(build_recipe(config, system), system, trajectory, classification, t0=config.design.t0)
    measure = None if config.measure is None else SpectralMeasure.from_pairs(config.measure.masses)
    context = ScenarioResponseContext(
        a0=config.a0,
        system=system,
        trajectory=trajectory,
        classification=classification,
        design=design,
        measure=measure,
        mass=config.constraints.mass,
        first_moment=config.constraints.m1,
    )
    logger.info(f"Prepared scenario '{config.name}' ({design.recipe.kind}, sign {design.sign:+d})")
    return PreparedScenario(config, system, trajectory, classification, design, context, time_grid(config, time_points))
