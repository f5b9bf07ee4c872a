"""Command-line entry points: run, serve, validate."""
from __future__ import annotations

import logging
import os
import sys

import click

from .config import build_config, load_config_file
from .errors import SpothullError
from .model import parse_dataset, validate_dataset
from .pipeline import run_pipeline


def _setup_logging():
    level_name = os.environ.get("SPOTHULL_LOG", "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


@click.group()
def main():
    """Cell-type region overlays for spatial spot data."""
    _setup_logging()


@main.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), help="Dataset file.")
@click.option("--format", "format_", type=click.Choice(["csv", "json"]), default=None, help="Input format (default csv).")
@click.option("--image", type=click.Path(dir_okay=False), default=None, help="Background image file.")
@click.option("--image-width", type=int, default=None, help="Image width in pixels.")
@click.option("--image-height", type=int, default=None, help="Image height in pixels.")
@click.option("--k", type=int, default=None, help="Number of clusters.")
@click.option("--seed", type=int, default=None, help="Clustering seed.")
@click.option("--restarts", type=int, default=None, help="k-means restarts.")
@click.option("--concavity", type=float, default=None, help="Hull dig threshold; 'inf' gives convex hulls.")
@click.option("--radius-factor", type=float, default=None, help="Neighbor radius as a multiple of the median NN distance.")
@click.option("--length-threshold", type=float, default=None, help="Edges at or below this length are never dug.")
@click.option("--min-region-size", type=int, default=None, help="Groups smaller than this stay as points.")
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Artifact directory (default ./out).")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None, help="JSON config file; flags override it.")
def run(input_path, format_, image, image_width, image_height, k, seed, restarts,
        concavity, radius_factor, length_threshold, min_region_size, out, config_path):
    """Run the full pipeline and write overlay artifacts."""
    try:
        file_values = load_config_file(config_path) if config_path else None
        cfg = build_config(
            file_values,
            input=input_path,
            format=format_,
            image=image,
            image_width=image_width,
            image_height=image_height,
            k=k,
            seed=seed,
            restarts=restarts,
            concavity=concavity,
            radius_factor=radius_factor,
            length_threshold=length_threshold,
            min_region_size=min_region_size,
            out=out,
        )
        result = run_pipeline(cfg)
    except SpothullError as exc:
        raise click.ClickException(str(exc)) from exc
    counts = {
        "spots": len(result.dataset),
        "clusters": result.model.k,
        "regions": len(result.regions),
        "retained": len(result.document.retained),
    }
    click.echo(
        "wrote {n} artifacts to {out} ({spots} spots, {clusters} clusters, "
        "{regions} regions, {retained} retained)".format(
            n=len(result.files), out=cfg.out, **counts
        )
    )


@main.command()
@click.option("--artifacts", type=click.Path(exists=True, file_okay=False), required=True, help="Directory written by 'run'.")
@click.option("--bind", default="127.0.0.1:8000", show_default=True, help="host:port to listen on.")
def serve(artifacts, bind):
    """Serve a written artifact directory over HTTP (read-only)."""
    host, sep, port_text = bind.rpartition(":")
    if not sep or not host or not port_text.isdigit():
        raise click.ClickException(f"--bind must look like host:port, got {bind!r}")
    try:
        from .server import create_app

        app = create_app(artifacts)
    except SpothullError as exc:
        raise click.ClickException(str(exc)) from exc
    import uvicorn

    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")


@main.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True, help="Dataset file.")
@click.option("--format", "format_", type=click.Choice(["csv", "json"]), default="csv", show_default=True, help="Input format.")
def validate(input_path, format_):
    """Parse and validate a dataset; report repairs and rejects."""
    try:
        with open(input_path, "rb") as fh:
            dataset = parse_dataset(fh.read(), format_)
        dataset, report = validate_dataset(dataset)
    except SpothullError as exc:
        raise click.ClickException(str(exc)) from exc
    for sid, msg in report.errors:
        click.echo(f"error: spot {sid}: {msg}")
    for sid, msg in report.warnings:
        click.echo(f"warning: spot {sid}: {msg}")
    click.echo(
        f"{len(dataset)} spots accepted, {len(report.errors)} rejected, "
        f"{report.normalized_count} renormalized"
    )
    if not report.accepted:
        sys.exit(1)


if __name__ == "__main__":
    main()
