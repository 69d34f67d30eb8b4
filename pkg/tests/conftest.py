import numpy as np
import pytest

from app.models.trajectory import Trajectory
from app.services.curves import classify
from app.services.material_models import example1, example2, example3
from app.services.scenarios import STANDARD_PATH, EXAMPLE3_PATH, builtin_config, prepare
from app.services.signal_design import FrequencyProbe, VolumeFraction, build_design


def path(coefficients) -> Trajectory:
    return Trajectory(tuple(complex(re, im) for re, im in coefficients))


@pytest.fixture(scope="session")
def make_path():
    return path


@pytest.fixture(scope="session")
def ex1():
    return example1()


@pytest.fixture(scope="session")
def ex2():
    return example2()


@pytest.fixture(scope="session")
def ex3():
    return example3()


@pytest.fixture(scope="session")
def standard_path():
    return path(STANDARD_PATH)


@pytest.fixture(scope="session")
def ex3_path():
    return path(EXAMPLE3_PATH)


@pytest.fixture(scope="session")
def ex1_cls(ex1, standard_path):
    return classify(ex1, standard_path)


@pytest.fixture(scope="session")
def ex1_reversed_cls(ex1, standard_path):
    return classify(ex1, standard_path.reversed())


@pytest.fixture(scope="session")
def ex2_cls(ex2, standard_path):
    return classify(ex2, standard_path)


@pytest.fixture(scope="session")
def ex3_cls(ex3, ex3_path):
    return classify(ex3, ex3_path)


@pytest.fixture(scope="session")
def ex1_design(ex1, standard_path, ex1_cls):
    return build_design(VolumeFraction(k=0.0), ex1, standard_path, ex1_cls)


@pytest.fixture(scope="session")
def ex1_moment_design(ex1, standard_path, ex1_cls):
    return build_design(VolumeFraction(k=1.0), ex1, standard_path, ex1_cls)


@pytest.fixture(scope="session")
def ex1_probe_design(ex1, standard_path, ex1_cls):
    return build_design(FrequencyProbe(z0=30.0, omega0=31j / 27), ex1, standard_path, ex1_cls)


@pytest.fixture(scope="session")
def prepared():
    cache = {}

    def _prepared(name: str):
        if name not in cache:
            cache[name] = prepare(builtin_config(name))
        return cache[name]

    return _prepared


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
