import asyncio
import io
from typing import Annotated

from fastapi import APIRouter, Query
from fastapi.responses import PlainTextResponse, Response

from app.services.export import csv_text, render_svg
from app.services.reproduce import FIGURES, reproduce_figure

router = APIRouter(prefix="/figures", tags=["figures"])


@router.get("/")
async def list_figures():
    return {"figures": list(FIGURES)}


@router.get("/{figure_id}")
async def get_figure(
    figure_id: str,
    format: Annotated[str, Query(pattern="^(csv|svg)$")] = "csv",
    grid: Annotated[int | None, Query(ge=3, le=4001)] = None,
):
    """Figure data as CSV, or as an SVG line plot."""
    table = await asyncio.to_thread(reproduce_figure, figure_id, grid)
    if format == "svg":
        buffer = io.BytesIO()
        await asyncio.to_thread(render_svg, buffer, table.x, table.series(), table.title)
        return Response(buffer.getvalue(), media_type="image/svg+xml")
    return PlainTextResponse(csv_text(table.columns), media_type="text/csv")
