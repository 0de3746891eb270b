"""Command line client for the experiment runners.

Thin layer over the same request models the HTTP service consumes: arguments
are merged into a JSON config, validated, and either executed in-process or
posted to a running service with ``--server``. Exit codes: 0 success,
2 configuration error, 3 solver failure.
"""

from __future__ import annotations

import json
import sys

import click
import pydantic

from .experiments import run_experiment
from .schemas import parse_config
from .sdp import SolverError

CONFIG_ERROR = 2
SOLVER_ERROR = 3


def _load_config(path: str | None, experiment: str) -> dict:
    if path is None:
        return {"experiment": experiment}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise _config_error(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _config_error(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise _config_error(f"config root in {path} must be a JSON object")
    data.setdefault("experiment", experiment)
    if data["experiment"] != experiment:
        raise _config_error(
            f"config file is for experiment {data['experiment']!r}, not {experiment!r}"
        )
    return data


class _ConfigError(click.ClickException):
    exit_code = CONFIG_ERROR


def _config_error(message: str) -> _ConfigError:
    return _ConfigError(message)


def _set_nested(data: dict, path: tuple, value) -> None:
    node = data
    for key in path[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise _config_error(f"cannot override non-object config key {key!r}")
    node[path[-1]] = value


def _parse(data: dict):
    try:
        return parse_config(data)
    except pydantic.ValidationError as exc:
        raise _config_error(str(exc)) from exc


def _execute(data: dict, out: str | None, server: str | None, overrides=()) -> None:
    cfg = _parse(data)
    if overrides:
        # overrides apply on top of the fully defaulted config
        data = cfg.model_dump()
        for path, value in overrides:
            _set_nested(data, path, value)
        cfg = _parse(data)

    if server is not None:
        csv_text = _run_remote(server, cfg.model_dump())
        output = out if out is not None else cfg.output
    else:
        try:
            result = run_experiment(cfg)
        except SolverError as exc:
            click.echo(f"solver failure: {exc}", err=True)
            sys.exit(SOLVER_ERROR)
        csv_text = result.to_csv()
        output = out if out is not None else cfg.output

    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
        click.echo(f"wrote {output}")
    else:
        click.echo(csv_text, nl=False)


def _run_remote(server: str, data: dict) -> str:
    import httpx

    try:
        resp = httpx.post(f"{server.rstrip('/')}/run", json=data, timeout=600.0)
    except httpx.HTTPError as exc:
        click.echo(f"service unreachable: {exc}", err=True)
        sys.exit(SOLVER_ERROR)
    if resp.status_code == 422:
        raise _config_error(f"service rejected config: {resp.text}")
    if resp.status_code != 200:
        click.echo(f"service error {resp.status_code}: {resp.text}", err=True)
        sys.exit(SOLVER_ERROR)
    return resp.json()["csv"]


def _common_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(), default=None,
                      help="JSON config file.")(fn)
    fn = click.option("--out", type=click.Path(), default=None,
                      help="CSV output path (default: config output or stdout).")(fn)
    fn = click.option("--server", default=None,
                      help="Run against a temporal-hierarchy service at this URL.")(fn)
    return fn


@click.group()
def main():
    """Temporal correlation quantifiers for qubit channels."""


@main.command()
@_common_options
@click.option("--points", type=int, default=None, help="Override grid point count.")
@click.option("--gamma", type=float, default=None, help="Override channel rate.")
def hierarchy(config_path, out, server, points, gamma):
    """Sweep f, steering robustness and CHSH; report vanishing times."""
    data = _load_config(config_path, "hierarchy")
    overrides = []
    if points is not None:
        overrides.append((("grid", "points"), points))
    if gamma is not None:
        overrides.append((("channel", "gamma"), gamma))
    _execute(data, out, server, overrides)


@main.command()
@_common_options
@click.option("--points", type=int, default=None, help="Override grid point count.")
@click.option("--j", "--J", "j", type=float, default=None, help="1-2 coupling strength.")
@click.option("--j31", "--J31", "j31", type=float, default=None, help="3-1 coupling strength.")
def causal(config_path, out, server, points, j, j31):
    """Common-cause vs direct-cause discrimination by steering of qubit 2."""
    data = _load_config(config_path, "causal")
    overrides = []
    if points is not None:
        overrides.append((("grid", "points"), points))
    if j is not None:
        overrides.append((("j",), j))
    if j31 is not None:
        overrides.append((("j31",), j31))
    _execute(data, out, server, overrides)


@main.command()
@_common_options
@click.option("--rows", type=int, default=None, help="Number of random (alpha, beta) rows.")
@click.option("--seed", type=int, default=None, help="Random seed for the sweep.")
@click.option("--gamma", type=float, default=None, help="Override dephasing rate.")
def classical(config_path, out, server, rows, seed, gamma):
    """Diagonal assemblages: steering robustness equals trace distance."""
    data = _load_config(config_path, "classical")
    overrides = []
    if rows is not None:
        overrides.append((("n_random",), rows))
    if seed is not None:
        overrides.append((("seed",), seed))
    if gamma is not None:
        overrides.append((("dephasing_gamma",), gamma))
    _execute(data, out, server, overrides)


@main.command()
@_common_options
@click.option("--points", type=int, default=None, help="Override grid point count.")
@click.option("--omega", type=float, default=None, help="Precession rate.")
@click.option("--gamma", type=float, default=None, help="Depolarizing rate.")
def lg(config_path, out, server, points, omega, gamma):
    """Leggett-Garg sweep over equal measurement intervals."""
    data = _load_config(config_path, "lg")
    overrides = []
    if points is not None:
        overrides.append((("grid", "points"), points))
    if omega is not None:
        overrides.append((("omega",), omega))
    if gamma is not None:
        overrides.append((("gamma",), gamma))
    _execute(data, out, server, overrides)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
