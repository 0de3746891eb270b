"""HTTP facade over the experiment runners.

A thin FastAPI application: one POST endpoint that accepts a full experiment
configuration and returns rows, summary and the rendered CSV. Configuration
validation errors surface as 422 responses; solver failures as 500.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import __version__
from .experiments import run_experiment
from .schemas import ExperimentConfig, RunResponse, config_adapter
from .sdp import SolverError

app = FastAPI(
    title="temporal-hierarchy",
    version=__version__,
    description=(
        "Temporal quantum correlation quantifiers for qubit channels: "
        "pseudo-density-matrix negativity, temporal steering robustness, "
        "and the normalized temporal CHSH maximum."
    ),
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/config-schema")
def config_schema() -> dict:
    """JSON schema of the experiment configuration union."""
    return config_adapter.json_schema()


@app.post("/run", response_model=RunResponse)
def run(config: ExperimentConfig) -> RunResponse:
    try:
        result = run_experiment(config)
    except SolverError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    return RunResponse(
        columns=list(result.columns),
        rows=[list(row) for row in result.rows],
        summary=result.summary,
        csv=result.to_csv(),
    )
