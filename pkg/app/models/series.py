from dataclasses import dataclass

import numpy as np

from app.core.errors import InvalidModel


@dataclass(frozen=True, eq=False)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray
    label: str = "value"

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).ravel()
        values = np.asarray(self.values, dtype=float).ravel()
        if times.shape != values.shape:
            raise InvalidModel(f"{times.size} times but {values.size} values")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise InvalidModel("Times must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise InvalidModel(f"Series '{self.label}' contains non-finite values")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.times.size
