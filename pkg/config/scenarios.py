"""Scenario configuration: one pydantic model per block, loaded from YAML.

Every number that can change a result lives here, so the resolved config
hashed into the manifest fully describes a run.
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from dno.solver import BackendKind, DnoBackend
from evolution.integrators import Scheme
from evolution.rhs import Model, QuadraticVariant
from spectral.grid import Grid2D
from utils.errors import ConfigurationError


DEFAULT_SCENARIOS_DIR = "config/scenarios"


class ScenarioKind(str, Enum):
    EVOLVE = "evolve"
    DNO_CONVERGENCE = "dno-convergence"
    DECAY_PROBE = "decay-probe"
    NORM_MONITOR = "norm-monitor"
    SYMBOL_AUDIT = "symbol-audit"
    RESONANCE_MAP = "resonance-map"
    TOY_SCHRODINGER = "toy-schrodinger"
    PARALINEAR_RESIDUALS = "paralinear-residuals"


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GridConfig(_Block):
    n: int = Field(default=32, ge=8, le=2048)
    box_length: float = Field(default=2.0 * np.pi, gt=0)

    @field_validator("n")
    @classmethod
    def validate_even(cls, v: int) -> int:
        if v % 2:
            raise ValueError(f"n_points_per_axis must be even, got {v}")
        return v

    def build(self) -> Grid2D:
        return Grid2D.create(self.n, self.box_length)


class ConstantsConfig(_Block):
    """Desk-scale surrogates of the asymptotic constants."""

    alpha: float = Field(default=0.1, gt=0, lt=1)
    delta: float = Field(default=1e-9, gt=0, le=1e-9)
    n0: int = Field(default=8, ge=1, description="derivative count of the energy norm")
    high_weight: float = Field(default=10.0, gt=0)

    @property
    def delta_tilde(self) -> float:
        return 400.0 * self.delta


class DnoConfig(_Block):
    backend: BackendKind = BackendKind.FIXED_POINT
    z_nodes: int = Field(default=32, ge=2, le=256)
    tol: float = Field(default=1e-13, gt=0)
    max_iter: int = Field(default=60, ge=1)

    def build(self) -> DnoBackend:
        return DnoBackend(kind=self.backend, z_nodes=self.z_nodes, tol=self.tol, max_iter=self.max_iter)


class IntegratorConfig(_Block):
    scheme: Scheme = Scheme.INTEGRATING_FACTOR
    dt: float = Field(default=1e-3, gt=0)
    t_final: float = Field(default=1.0, ge=0)


class DiagnosticsConfig(_Block):
    cadence: int = Field(default=100, ge=1, description="steps between diagnostic records")
    snapshots: bool = False


class InitialDataConfig(_Block):
    """h = eps * (cos x + a sin y), psi = eps * (sin x + a cos(x + y)) or Gaussians."""

    profile: Literal["cosine", "gaussian"] = "cosine"
    amplitude: float = Field(default=1e-2, gt=0, lt=0.5)
    secondary: float = Field(default=0.5, ge=0)
    width: float = Field(default=1.0, gt=0)


class EvolveConfig(_Block):
    model: Model = Model.FULL
    quadratic_variant: QuadraticVariant = QuadraticVariant.LITERAL


class DnoConvergenceConfig(_Block):
    amplitudes: List[float] = Field(default_factory=lambda: [1e-3, 3e-3, 1e-2, 3e-2, 1e-1])
    order: int = Field(default=2, ge=1, le=3)

    @field_validator("amplitudes")
    @classmethod
    def validate_amplitudes(cls, v: List[float]) -> List[float]:
        if len(v) < 2 or any(a <= 0 or a >= 0.5 for a in v):
            raise ValueError("need at least two amplitudes in (0, 0.5)")
        return sorted(v)


class DecayProbeConfig(_Block):
    band: int = -2
    theta: float = Field(default=1.0, gt=0, le=1)
    times: List[float] = Field(default_factory=lambda: [0.0, 600.0, 900.0, 1200.0, 1500.0, 1800.0])
    profile: Literal["ring", "bump"] = "ring"
    center: float = Field(default=0.25, ge=0, description="ring radius in frequency")
    width: float = Field(default=0.05, gt=0)
    refine: int = Field(default=2, ge=1, le=4)


class NormMonitorConfig(_Block):
    normal_form: bool = False
    fourier_side: bool = False


class SymbolAuditConfig(_Block):
    samples: int = Field(default=10_000, ge=100)
    slope_resolution: int = Field(default=16, ge=14, le=64)
    constant_bands: List[Tuple[int, int]] = Field(default_factory=lambda: [(0, 0), (0, -4), (2, -2)])
    refinement: Tuple[int, int] = (32, 64)
    cubic_bands: List[int] = Field(default_factory=lambda: [-4, -3, -2, -1])
    cubic_resolution: int = Field(default=14, ge=14, le=16)


class ResonanceMapConfig(_Block):
    xis: List[Tuple[float, float]] = Field(default_factory=lambda: [(1.0, 0.0), (0.5, 0.5), (2.0, -1.0)])
    samples: int = Field(default=10_000, ge=100)
    max_frequency: float = Field(default=8.0, gt=0)


class ToySchrodingerConfig(_Block):
    center: Tuple[float, float] = (1.0, 0.0)
    width: float = Field(default=0.3, gt=0)
    peak: float = Field(default=0.01, gt=0)
    background: float = Field(default=1e-5, ge=0)
    sample_times: List[float] = Field(default_factory=lambda: [float(t) for t in range(1, 31)])
    fit_window: Tuple[float, float] = (1.0, 30.0)


class ParalinearConfig(_Block):
    amplitudes: List[float] = Field(default_factory=lambda: [3e-3, 6e-3, 1.2e-2, 2.4e-2])
    amplitude_order: int = Field(default=2, ge=1, le=3)


class ScenarioConfig(_Block):
    kind: ScenarioKind
    name: Optional[str] = None
    seed: int = 0
    grid: GridConfig = Field(default_factory=GridConfig)
    constants: ConstantsConfig = Field(default_factory=ConstantsConfig)
    dno: DnoConfig = Field(default_factory=DnoConfig)
    integrator: IntegratorConfig = Field(default_factory=IntegratorConfig)
    diagnostics: DiagnosticsConfig = Field(default_factory=DiagnosticsConfig)
    initial: InitialDataConfig = Field(default_factory=InitialDataConfig)
    evolve: EvolveConfig = Field(default_factory=EvolveConfig)
    dno_convergence: DnoConvergenceConfig = Field(default_factory=DnoConvergenceConfig)
    decay_probe: DecayProbeConfig = Field(default_factory=DecayProbeConfig)
    norm_monitor: NormMonitorConfig = Field(default_factory=NormMonitorConfig)
    symbol_audit: SymbolAuditConfig = Field(default_factory=SymbolAuditConfig)
    resonance_map: ResonanceMapConfig = Field(default_factory=ResonanceMapConfig)
    toy_schrodinger: ToySchrodingerConfig = Field(default_factory=ToySchrodingerConfig)
    paralinear: ParalinearConfig = Field(default_factory=ParalinearConfig)
    output_dir: Optional[str] = None

    @model_validator(mode="after")
    def default_name(self) -> "ScenarioConfig":
        if self.name is None:
            self.name = self.kind.value
        return self

    def resolved(self) -> Dict[str, Any]:
        """JSON-ready dump with enums as values; the manifest hashes this."""
        return self.model_dump(mode="json")


# per-kind starting points written by the loader when a file is missing
KIND_DEFAULTS: Dict[ScenarioKind, Dict[str, Any]] = {
    ScenarioKind.EVOLVE: {"grid": {"n": 32}, "integrator": {"dt": 1e-2, "t_final": 1.0}, "diagnostics": {"cadence": 10}},
    ScenarioKind.DNO_CONVERGENCE: {"grid": {"n": 16}, "dno": {"z_nodes": 16}},
    ScenarioKind.DECAY_PROBE: {"grid": {"n": 512, "box_length": 1200.0 * np.pi}},
    ScenarioKind.NORM_MONITOR: {
        "grid": {"n": 32},
        "integrator": {"dt": 1e-2, "t_final": 2.0},
        "diagnostics": {"cadence": 50},
        "dno": {"backend": "taylor2"},
        "initial": {"profile": "gaussian", "amplitude": 1e-2, "width": 0.8},
    },
    ScenarioKind.SYMBOL_AUDIT: {},
    ScenarioKind.RESONANCE_MAP: {},
    ScenarioKind.TOY_SCHRODINGER: {"grid": {"n": 64, "box_length": 10.0 * np.pi}, "integrator": {"dt": 0.05}},
    ScenarioKind.PARALINEAR_RESIDUALS: {"grid": {"n": 16}, "dno": {"backend": "taylor2", "z_nodes": 16}},
}


def default_scenario(kind: ScenarioKind) -> ScenarioConfig:
    kind = ScenarioKind(kind)
    return ScenarioConfig.model_validate({"kind": kind.value, **KIND_DEFAULTS.get(kind, {})})


# overrides

def parse_override(text: str) -> Tuple[List[str], Any]:
    """``a.b.c=value`` with the value read as YAML (numbers, lists, booleans)."""
    if "=" not in text:
        raise ConfigurationError(f"override {text!r} is not of the form path=value", {"override": text})
    path, raw = text.split("=", 1)
    keys = [k for k in path.strip().split(".") if k]
    if not keys:
        raise ConfigurationError(f"override {text!r} has an empty path", {"override": text})
    return keys, yaml.safe_load(raw)


def apply_overrides(data: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    out = dict(data)
    for text in overrides:
        keys, value = parse_override(text)
        node = out
        for key in keys[:-1]:
            child = node.get(key)
            child = dict(child) if isinstance(child, dict) else {}
            node[key] = child
            node = child
        node[keys[-1]] = value
    return out


def parse_sweep(text: str) -> Tuple[str, List[str]]:
    if "=" not in text:
        raise ConfigurationError(f"sweep {text!r} is not of the form path=v1,v2", {"sweep": text})
    key, raw = text.split("=", 1)
    values = [v.strip() for v in raw.split(",") if v.strip()]
    if not key.strip() or not values:
        raise ConfigurationError(f"sweep {text!r} names no path or no values", {"sweep": text})
    return key.strip(), values


class ScenarioLoader:
    """Reads scenario YAML files; writes the default file for a kind when it is missing."""

    def __init__(self, scenarios_dir: str = DEFAULT_SCENARIOS_DIR):
        self.scenarios_dir = Path(scenarios_dir)

    def path_for(self, kind: ScenarioKind) -> Path:
        return self.scenarios_dir / f"{ScenarioKind(kind).value}.yaml"

    def load_data(self, kind: Optional[ScenarioKind] = None, path: Optional[Path] = None) -> Dict[str, Any]:
        if path is not None:
            path = Path(path)
            if not path.exists():
                raise ConfigurationError(f"scenario file not found: {path}", {"path": str(path)})
        else:
            path = self.path_for(kind)
            if not path.exists():
                self.save(default_scenario(kind), path)
        with open(path, "r") as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ConfigurationError(f"scenario file {path} does not hold a mapping", {"path": str(path)})
        if kind is not None:
            data.setdefault("kind", ScenarioKind(kind).value)
        return data

    def load(
        self,
        kind: Optional[ScenarioKind] = None,
        path: Optional[Path] = None,
        overrides: Sequence[str] = (),
    ) -> ScenarioConfig:
        """Validated config; pydantic's ValidationError carries the field path on failure."""
        data = apply_overrides(self.load_data(kind, path), overrides)
        return ScenarioConfig.model_validate(data)


    def load_sweep(
        self,
        sweep: str,
        kind: Optional[ScenarioKind] = None,
        path: Optional[Path] = None,
        overrides: Sequence[str] = (),
    ) -> List[ScenarioConfig]:
        """``a.b=v1,v2,v3``: one config per value, named ``<name>-<b><value>``."""
        key, values = parse_sweep(sweep)
        data = apply_overrides(self.load_data(kind, path), overrides)
        base_name = data.get("name") or ScenarioKind(data.get("kind", kind)).value
        leaf = key.split(".")[-1]
        configs = []
        for raw in values:
            member = apply_overrides(data, [f"{key}={raw}"])
            member["name"] = f"{base_name}-{leaf}{raw}"
            configs.append(ScenarioConfig.model_validate(member))
        return configs

    def save(self, config: ScenarioConfig, path: Optional[Path] = None) -> Path:
        path = Path(path) if path is not None else self.path_for(config.kind)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            yaml.safe_dump(config.resolved(), f, default_flow_style=False, sort_keys=True)
        return path

    def available(self) -> List[str]:
        if not self.scenarios_dir.exists():
            return []
        return sorted(p.stem for p in self.scenarios_dir.glob("*.yaml"))


def validation_message(error) -> str:
    """One line per pydantic error, dotted field path first."""
    lines = []
    for item in error.errors():
        path = ".".join(str(p) for p in item.get("loc", ()))
        lines.append(f"{path or '<root>'}: {item.get('msg', 'invalid value')}")
    return "; ".join(lines)
