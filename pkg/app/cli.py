"""Command-line runner: verify, design, simulate, bounds, recover and reproduce."""
import argparse
import json
import logging
import sys
from pathlib import Path

from app.core.config import overridden, settings
from app.core.errors import SignalDesignError
from app.core.log import configure_logging
from app.services import runner
from app.services.export import write_csv, write_svg
from app.services.reproduce import FIGURES, reproduce_figure
from app.services.scenarios import resolve_config

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="signal-designer", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", default="example1", help="Built-in scenario name or path to a JSON scenario")
    common.add_argument("--out", default=None, help=f"Output directory (default: {settings.OUTPUT_DIR})")
    common.add_argument("--svg", action="store_true", help="Also write an SVG line plot")
    common.add_argument("--grid", type=int, default=None, help="Lambda grid points for bound scans")
    common.add_argument("--tol", type=float, default=None, help="Relative quadrature tolerance")
    common.add_argument("--log-level", default=None, help="Logging level (default from settings)")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="Classify the trajectory and report poles and preimages")
    sub.add_parser("design", parents=[common], help="Synthesize the input signal Re u(t)")
    sub.add_parser("simulate", parents=[common], help="Simulate Re v(t) and its closed form")
    sub.add_parser("bounds", parents=[common], help="Envelope of Re v(t) over admissible measures")
    sub.add_parser("recover", parents=[common], help="Invert the scenario's measurements")
    reproduce = sub.add_parser("reproduce", parents=[common], help="Regenerate a figure table")
    reproduce.add_argument("figure", help=f"Figure id ({', '.join(FIGURES)})")
    return parser


def _write_table(out: Path, stem: str, columns: dict, svg: bool, title: str = "") -> Path:
    path = write_csv(out / f"{stem}.csv", columns)
    if svg:
        x_name = next(iter(columns))
        write_svg(out / f"{stem}.svg", columns[x_name], {k: v for k, v in columns.items() if k != x_name}, title or stem)
    return path


def _write_json(out: Path, stem: str, payload: dict) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{stem}.json"
    text = json.dumps(payload, indent=2, sort_keys=True)
    path.write_text(text + "\n", encoding="utf-8")
    print(text)
    logger.info(f"Wrote {path}")
    return path


def run(args: argparse.Namespace) -> Path:
    out = Path(args.out or settings.OUTPUT_DIR)
    if args.command == "reproduce":
        table = reproduce_figure(args.figure, args.grid)
        return _write_table(out, table.figure_id, table.columns, args.svg, table.title)

    config = resolve_config(args.scenario)
    name = config.name
    if args.command == "verify":
        return _write_json(out, f"{name}-verify", runner.verify(config).model_dump())
    if args.command == "design":
        return _write_table(out, f"{name}-input", runner.design_columns(config), args.svg)
    if args.command == "simulate":
        return _write_table(out, f"{name}-response", runner.simulate_columns(config), args.svg)
    if args.command == "bounds":
        env = runner.envelope(config, args.grid)
        columns = {"t": env.times, "lower": env.lower, "upper": env.upper, "argmin_lambda": env.argmin, "argmax_lambda": env.argmax}
        return _write_table(out, f"{name}-bounds", columns, args.svg)
    if args.command == "recover":
        return _write_json(out, f"{name}-recovery", runner.recover(config).model_dump())
    raise ValueError(f"Unhandled command {args.command}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    overrides = {} if args.tol is None else {"QUAD_RTOL": args.tol}
    label = args.figure if args.command == "reproduce" else args.scenario
    try:
        with overridden(**overrides):
            run(args)
    except SignalDesignError as e:
        logger.error(f"{label}: {type(e).__name__}: {e}", exc_info=True)
        print(f"{label}: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
