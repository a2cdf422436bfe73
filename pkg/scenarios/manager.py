import importlib
import inspect
import json
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Type

from pydantic import BaseModel, ConfigDict

from config.scenarios import ScenarioConfig, ScenarioKind
from config.settings import get_settings
from reports.golden import GoldenReport, Tolerances, compare_to_golden
from reports.manifest import build_manifest, config_hash, write_manifest
from reports.writer import to_jsonable, write_report
from scenarios.base import BaseScenario
from utils.errors import ConfigurationError, NumericalError, ReportIOError, ToolkitError
from utils.logging import RunLoggerAdapter, get_logger


ERROR_FILE = "error.json"


class ScenarioRegistry:
    """Registry for all available scenarios"""

    def __init__(self):
        self.scenarios: Dict[ScenarioKind, Type[BaseScenario]] = {}
        self.logger: RunLoggerAdapter = get_logger("scenario_registry")

    def register(self, scenario_class: Type[BaseScenario]) -> None:
        kind = scenario_class.get_scenario_kind()
        if kind in self.scenarios:
            self.logger.warning(f"Scenario {kind.value} already registered, overwriting")
        self.scenarios[kind] = scenario_class
        self.logger.debug(f"Registered scenario: {kind.value}")

    def get_scenario(self, kind: ScenarioKind) -> Type[BaseScenario]:
        kind = ScenarioKind(kind)
        if kind not in self.scenarios:
            raise ConfigurationError(f"no scenario registered for {kind.value}", {"kind": kind.value})
        return self.scenarios[kind]

    def list_scenarios(self) -> List[str]:
        return sorted(k.value for k in self.scenarios)

    def auto_discover_scenarios(self, scenarios_dir: Optional[Path] = None) -> int:
        """Import every module next to this one and register its BaseScenario subclasses."""
        if scenarios_dir is None:
            scenarios_dir = Path(__file__).parent

        discovered = 0
        for py_file in sorted(scenarios_dir.glob("*.py")):
            if py_file.name.startswith("_") or py_file.name in ("base.py", "manager.py"):
                continue
            module = importlib.import_module(f"scenarios.{py_file.stem}")
            for _, obj in inspect.getmembers(module, inspect.isclass):
                if issubclass(obj, BaseScenario) and obj is not BaseScenario and not inspect.isabstract(obj):
                    self.register(obj)
                    discovered += 1

        self.logger.info(f"Auto-discovered {discovered} scenarios")
        return discovered


class RunOutcome(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    kind: ScenarioKind
    run_dir: Path
    config_hash: str
    exit_code: int = 0
    summary: Dict[str, Any] = {}
    error: Optional[Dict[str, Any]] = None
    golden: Optional[GoldenReport] = None
    wall_time: float = 0.0

    @property
    def succeeded(self) -> bool:
        return self.exit_code == 0


class ScenarioManager:
    """Runs scenario configs into run directories and writes their reports."""

    def __init__(
        self,
        registry: Optional[ScenarioRegistry] = None,
        output_root: Optional[str] = None,
        workers: int = 1,
    ):
        settings = get_settings()
        if registry is None:
            registry = ScenarioRegistry()
            registry.auto_discover_scenarios()
        self.registry = registry
        self.output_root = Path(output_root or settings.output.root)
        self.workers = max(1, workers)
        self.logger: RunLoggerAdapter = get_logger("scenario_manager")

    def run_dir_for(self, config: ScenarioConfig) -> Path:
        """``<root>/<name>-<config hash prefix>``; the same config always lands in the same place."""
        root = Path(config.output_dir) if config.output_dir else self.output_root
        return root / f"{config.name}-{config_hash(config)[:12]}"

    def _dump_error(self, run_dir: Path, config: ScenarioConfig, error: ToolkitError, wall: float) -> None:
        try:
            run_dir.mkdir(parents=True, exist_ok=True)
            (run_dir / ERROR_FILE).write_text(
                json.dumps(to_jsonable(error.to_dict()), sort_keys=True, indent=2) + "\n", encoding="utf-8"
            )
            write_manifest(run_dir, build_manifest(config, [], wall, self.workers, error=error.to_dict()))
        except (OSError, ReportIOError) as e:
            self.logger.error(f"Failed to write diagnostic dump to {run_dir}: {e}")

    def run(
        self,
        config: ScenarioConfig,
        run_dir: Optional[Path] = None,
        golden_dir: Optional[Path] = None,
        tolerances: Optional[Tolerances] = None,
    ) -> RunOutcome:
        """Validate, execute, write the report; numerical failures leave error.json behind."""
        run_dir = Path(run_dir) if run_dir is not None else self.run_dir_for(config)
        scenario = self.registry.get_scenario(config.kind)(config)

        start = time.perf_counter()
        try:
            result = scenario.run()
        except NumericalError as e:
            self._dump_error(run_dir, config, e, time.perf_counter() - start)
            raise
        wall = time.perf_counter() - start

        paths = write_report(run_dir, result.tables, result.summary, result.fields)
        write_manifest(run_dir, build_manifest(config, paths, wall, self.workers))

        outcome = RunOutcome(
            name=config.name,
            kind=config.kind,
            run_dir=run_dir,
            config_hash=config_hash(config),
            summary=result.summary,
            wall_time=wall,
        )
        if golden_dir is not None:
            outcome.golden = compare_to_golden(run_dir, golden_dir, tolerances)
            if not outcome.golden.passed:
                outcome.exit_code = 1
        self.logger.info(
            f"Run {config.name} written to {run_dir}",
            extra_data={"wall_time": wall, "exit_code": outcome.exit_code},
        )
        return outcome

    @staticmethod
    def _golden_for(config: ScenarioConfig, golden_dir: Optional[Path]) -> Optional[Path]:
        """Sweep members compare against <golden>/<member name>."""
        return Path(golden_dir) / config.name if golden_dir is not None else None

    def _run_member(self, config: ScenarioConfig, golden_dir, tolerances) -> RunOutcome:
        try:
            return self.run(config, golden_dir=golden_dir, tolerances=tolerances)
        except ToolkitError as e:
            return RunOutcome(
                name=config.name,
                kind=config.kind,
                run_dir=self.run_dir_for(config),
                config_hash=config_hash(config),
                exit_code=e.exit_code,
                error=e.to_dict(),
            )

    def run_sweep(
        self,
        configs: Sequence[ScenarioConfig],
        golden_dir: Optional[Path] = None,
        tolerances: Optional[Tolerances] = None,
    ) -> List[RunOutcome]:
        """Independent members on a thread pool; outcomes keep the input order."""
        workers = max(1, min(self.workers, len(configs)))
        self.logger.info(f"Sweep of {len(configs)} runs on {workers} workers")
        if workers == 1:
            return [self._run_member(c, self._golden_for(c, golden_dir), tolerances) for c in configs]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda c: self._run_member(c, self._golden_for(c, golden_dir), tolerances), configs))
