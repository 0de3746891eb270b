"""Pydantic request and response models shared by the CLI and the HTTP service.

The experiment configuration is a tagged union on the ``experiment`` field;
unknown keys are rejected everywhere.
"""

from __future__ import annotations

import math
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator

from .channels import AmplitudeDamping, Channel, Depolarizing, PhaseDamping


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class TimeGrid(StrictModel):
    start: float = Field(0.0, ge=0.0)
    stop: float
    points: int = Field(ge=2)

    @model_validator(mode="after")
    def _ordered(self):
        if not self.stop > self.start:
            raise ValueError("grid stop must exceed start")
        return self

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


class ChannelSpec(StrictModel):
    kind: Literal["amplitude_damping", "phase_damping", "depolarizing"] = "depolarizing"
    gamma: float = Field(1.0, gt=0.0)

    def build(self) -> Channel:
        cls = {
            "amplitude_damping": AmplitudeDamping,
            "phase_damping": PhaseDamping,
            "depolarizing": Depolarizing,
        }[self.kind]
        return cls(self.gamma)


class HierarchyConfig(StrictModel):
    """Sweep of the three quantifiers over time, with vanishing-time bisection."""

    experiment: Literal["hierarchy"] = "hierarchy"
    channel: ChannelSpec = ChannelSpec()
    grid: TimeGrid = TimeGrid(stop=2.0, points=201)
    settings: list[Literal["x", "y", "z"]] = ["x", "y", "z"]
    bisection_tol: float = Field(1e-6, gt=0.0)
    zero_threshold: float = Field(1e-7, gt=0.0)
    output: str | None = None

    @model_validator(mode="after")
    def _settings_unique(self):
        if len(set(self.settings)) != len(self.settings) or not self.settings:
            raise ValueError("settings must be a non-empty list of distinct axes")
        return self


class CausalConfig(StrictModel):
    """Common-cause versus direct-cause discrimination by steering of qubit 2."""

    experiment: Literal["causal"] = "causal"
    j: float = Field(1.0, gt=0.0)
    j31: float | None = Field(None, gt=0.0)
    grid: TimeGrid = TimeGrid(stop=4.0 * math.pi, points=100)
    direct_initial: str = "00"
    output: str | None = None

    @model_validator(mode="after")
    def _two_bits(self):
        if len(self.direct_initial) != 2 or any(b not in "01" for b in self.direct_initial):
            raise ValueError("direct_initial must be a two-bit string")
        return self


class ClassicalConfig(StrictModel):
    """Diagonal two-setting assemblages: robustness equals trace distance."""

    experiment: Literal["classical"] = "classical"
    pairs: list[tuple[float, float]] | None = None
    n_random: int = Field(50, ge=1)
    seed: int = 0
    dephasing_gamma: float = Field(1.0, ge=0.0)
    dephasing_time: float = Field(50.0, ge=0.0)
    tolerance: float = Field(1e-6, gt=0.0)
    output: str | None = None

    @model_validator(mode="after")
    def _pairs_in_range(self):
        for pair in self.pairs or ():
            if not all(0.0 <= v <= 1.0 for v in pair):
                raise ValueError("population pairs must lie in [0, 1]")
        return self


class LgConfig(StrictModel):
    """Leggett-Garg combination on an equal-interval sweep."""

    experiment: Literal["lg"] = "lg"
    dynamics: Literal["precession", "identity", "depolarizing"] = "precession"
    omega: float = Field(1.0, gt=0.0)
    gamma: float = Field(1.0, gt=0.0)
    q_direction: Literal["x", "y", "z"] = "z"
    grid: TimeGrid = TimeGrid(stop=math.pi, points=181)
    output: str | None = None


ExperimentConfig = Annotated[
    Union[HierarchyConfig, CausalConfig, ClassicalConfig, LgConfig],
    Field(discriminator="experiment"),
]

config_adapter: TypeAdapter = TypeAdapter(ExperimentConfig)


def parse_config(data: dict) -> ExperimentConfig:
    return config_adapter.validate_python(data)


class RunResponse(BaseModel):
    columns: list[str]
    rows: list[list[float | str]]
    summary: dict[str, float | str | bool | None]
    csv: str
