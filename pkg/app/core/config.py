from contextlib import contextmanager

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical defaults, overridable from the environment or a .env file."""

    # Trajectory sampling and membership tests
    SAMPLE_COUNT: int = 2048
    PROBE_GRID: int = 201
    WINDING_BAND: float = 1e-6

    # Bound scans
    LAMBDA_GRID: int = 401
    GOLDEN_ITERATIONS: int = 3

    # Composite Gauss-Legendre quadrature
    QUAD_NODES: int = 16
    QUAD_RTOL: float = 1e-9
    QUAD_ATOL: float = 1e-12
    QUAD_MAX_PANELS: int = 2**14

    # Figure grids and output
    TIME_POINTS: int = 601
    OUTPUT_DIR: str = "results"

    LOG_LEVEL: str = "INFO"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="SIGNAL_DESIGN_",
        case_sensitive=False,
        extra="ignore",  # Ignore unrelated environment variables
    )


settings = Settings()


@contextmanager
def overridden(**values):
    """Temporarily replace settings fields, restoring them on exit."""
    saved = {name: getattr(settings, name) for name in values}
    try:
        for name, value in values.items():
            setattr(settings, name, value)
        yield settings
    finally:
        for name, value in saved.items():
            setattr(settings, name, value)
