import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from app.api import figure_routes, scenario_routes
from app.core.config import settings
from app.core.errors import NumericalFailure, SignalDesignError
from app.core.log import configure_logging

configure_logging()
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    logger.info(
        f"Signal designer ready: {settings.SAMPLE_COUNT} path samples, {settings.LAMBDA_GRID}-point lambda grid, "
        f"quadrature rtol {settings.QUAD_RTOL:g}"
    )
    yield


app = FastAPI(title="Quasistatic signal designer", lifespan=lifespan)

app.include_router(scenario_routes.router)
app.include_router(figure_routes.router)


@app.exception_handler(SignalDesignError)
async def signal_design_error_handler(request: Request, exc: SignalDesignError):
    level = logging.ERROR if isinstance(exc, NumericalFailure) else logging.WARNING
    logger.log(level, f"{request.method} {request.url.path} failed: {exc}", exc_info=level == logging.ERROR)
    return JSONResponse(status_code=exc.http_status, content={"detail": str(exc), "kind": type(exc).__name__})


@app.get("/")
async def root():
    """Health check."""
    return {"status": "ok", "service": "signal-designer"}
