import asyncio
import logging
from typing import Annotated

from fastapi import APIRouter, File, HTTPException, Query, UploadFile

from app.schemas.report import ClassificationReport, EnvelopeReport, SeriesReport
from app.schemas.scenario import ScenarioConfig
from app.services import runner
from app.services.scenarios import BUILTIN_SCENARIOS, builtin_config, parse_config

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/scenarios", tags=["scenarios"])

MAX_UPLOAD_BYTES = 1_000_000


@router.get("/builtin")
async def list_builtin_scenarios():
    """Names of the embedded case-study scenarios."""
    return {"scenarios": list(BUILTIN_SCENARIOS)}


@router.get("/builtin/{name}", response_model=ScenarioConfig)
async def get_builtin_scenario(name: str):
    if name not in BUILTIN_SCENARIOS:
        raise HTTPException(status_code=404, detail=f"Built-in scenario '{name}' not found")
    return builtin_config(name)


@router.post("/verify", response_model=ClassificationReport)
async def verify_scenario(config: ScenarioConfig):
    """Classify the trajectory: orientation, poles of h in Omega and all-time measure independence."""
    return await asyncio.to_thread(runner.verify, config)


@router.post("/simulate")
async def simulate_scenario(
    config: ScenarioConfig,
    points: Annotated[int | None, Query(ge=2, le=5001)] = None,
):
    columns = await asyncio.to_thread(runner.simulate_columns, config, points)
    times = columns.pop("t")
    return [
        SeriesReport(scenario=config.name, label=label, times=times.tolist(), values=values.tolist())
        for label, values in columns.items()
    ]


@router.post("/bounds", response_model=EnvelopeReport)
async def bound_scenario(
    config: ScenarioConfig,
    grid: Annotated[int | None, Query(ge=3, le=4001)] = None,
):
    return await asyncio.to_thread(runner.envelope_report, config, grid)


@router.post("/recover")
async def recover_scenario(config: ScenarioConfig):
    """Invert the scenario's measurements for f1, the first moment or the probe response."""
    report = await asyncio.to_thread(runner.recover, config)
    return report.model_dump()


@router.post("/upload", response_model=ClassificationReport)
async def upload_scenario(file: UploadFile = File(...)):
    """Verify a scenario JSON file sent as multipart form data."""
    if file.filename and not file.filename.lower().endswith(".json"):
        raise HTTPException(status_code=400, detail="Scenario files must be .json")
    raw = await file.read()
    if len(raw) > MAX_UPLOAD_BYTES:
        raise HTTPException(status_code=413, detail=f"Scenario file exceeds {MAX_UPLOAD_BYTES} bytes")
    config = parse_config(raw, source=file.filename or "upload")
    logger.info(f"Verifying uploaded scenario '{config.name}'")
    return await asyncio.to_thread(runner.verify, config)
