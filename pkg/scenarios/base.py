import time
from abc import ABC, abstractmethod
from datetime import datetime, timezone
UTC = timezone.utc
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from config.scenarios import ScenarioConfig, ScenarioKind
from evolution.state import SurfaceState
from spectral.field import SpectralField
from spectral.grid import Grid2D
from utils.errors import ConfigurationError, ToolkitError
from utils.logging import RunLoggerAdapter, get_logger, log_run_event


class ScenarioState(str, Enum):
    INACTIVE = "INACTIVE"
    RUNNING = "RUNNING"
    DONE = "DONE"
    ERROR = "ERROR"


class ScenarioResult(BaseModel):
    """Tables become CSV files, the summary becomes summary.json, fields become snapshots."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    kind: ScenarioKind
    tables: Dict[str, pd.DataFrame] = Field(default_factory=dict)
    summary: Dict[str, Any] = Field(default_factory=dict)
    fields: Dict[str, SpectralField] = Field(default_factory=dict)


class BaseScenario(ABC):
    """Base class for all harness scenarios"""

    @classmethod
    @abstractmethod
    def get_scenario_kind(cls) -> ScenarioKind:
        pass

    def __init__(self, config: ScenarioConfig):
        if config.kind != self.get_scenario_kind():
            raise ConfigurationError(
                f"{self.__class__.__name__} runs {self.get_scenario_kind().value}, got {config.kind.value}",
                {"kind": config.kind.value},
            )
        self.config = config
        self.name = config.name
        self.state = ScenarioState.INACTIVE
        self.logger: RunLoggerAdapter = get_logger(
            f"scenario.{self.__class__.__name__}",
            {"scenario": config.name, "kind": config.kind.value},
        )
        self.started_at: Optional[datetime] = None
        self.wall_time: Optional[float] = None
        self.last_error: Optional[str] = None

        self.grid: Grid2D = config.grid.build()
        self._validate_config()

        self.logger.info(f"Initialized scenario: {self.__class__.__name__} ({config.name})")

    @abstractmethod
    def _validate_config(self) -> None:
        """Refuse the run before any work (CFL, cone, dense sizes, ...)."""

    @abstractmethod
    def execute(self) -> ScenarioResult:
        pass

    def run(self) -> ScenarioResult:
        self.state = ScenarioState.RUNNING
        self.started_at = datetime.now(UTC)
        log_run_event(self.logger, "scenario_started", self.name, {"status": "running", "n": self.grid.n})
        start = time.perf_counter()
        try:
            result = self.execute()
        except ToolkitError as e:
            self.state = ScenarioState.ERROR
            self.last_error = e.message
            self.wall_time = time.perf_counter() - start
            log_run_event(self.logger, "scenario_failed", self.name, {"status": "error", **e.to_dict()}, "ERROR")
            raise
        self.wall_time = time.perf_counter() - start
        self.state = ScenarioState.DONE
        log_run_event(
            self.logger,
            "scenario_finished",
            self.name,
            {"status": "done", "wall_time": self.wall_time, "tables": sorted(result.tables)},
        )
        return result

    def result(self, **kwargs) -> ScenarioResult:
        return ScenarioResult(name=self.name, kind=self.get_scenario_kind(), **kwargs)

    def initial_surface(self, amplitude: Optional[float] = None) -> SurfaceState:
        """The configured initial profile at ``amplitude`` (default: the configured one)."""
        init = self.config.initial
        eps = init.amplitude if amplitude is None else amplitude
        g = self.grid
        if init.profile == "gaussian":
            r2 = g.x ** 2 + g.y ** 2
            bump = np.exp(-r2 / (2.0 * init.width ** 2))
            h = eps * bump
            psi = eps * init.secondary * g.x * bump
        else:
            h = eps * (np.cos(g.x) + init.secondary * np.sin(g.y))
            psi = eps * (np.sin(g.x) + init.secondary * np.cos(g.x + g.y))
        return SurfaceState.from_physical(g, h, psi)

    def unit_profile(self):
        """(h, psi) of the initial surface at unit amplitude."""
        state = self.initial_surface(1.0)
        return state.h, state.psi

    def get_status(self) -> Dict[str, Any]:
        return {
            "scenario": self.name,
            "kind": self.get_scenario_kind().value,
            "state": self.state.value,
            "started_at": self.started_at.isoformat() if self.started_at else None,
            "wall_time": self.wall_time,
            "last_error": self.last_error,
        }
