import pandas as pd

from config.scenarios import ScenarioKind
from normal_form.audit import cancellation_audit
from scenarios.base import BaseScenario, ScenarioResult
from utils.errors import ConfigurationError


class SymbolAuditScenario(BaseScenario):
    @classmethod
    def get_scenario_kind(cls) -> ScenarioKind:
        return ScenarioKind.SYMBOL_AUDIT

    def _validate_config(self) -> None:
        coarse, fine = self.config.symbol_audit.refinement
        if not coarse < fine:
            raise ConfigurationError(
                f"refinement must increase, got {coarse} -> {fine}", {"refinement": [coarse, fine]}
            )

    def execute(self) -> ScenarioResult:
        cfg = self.config.symbol_audit
        audit = cancellation_audit(
            seed=self.config.seed,
            samples=cfg.samples,
            slope_resolution=cfg.slope_resolution,
            constant_bands=[tuple(b) for b in cfg.constant_bands],
            refinement=tuple(cfg.refinement),
            cubic_bands=tuple(cfg.cubic_bands),
            cubic_resolution=cfg.cubic_resolution,
        )
        violations = audit.violations()
        constants = pd.DataFrame(
            [{**c.model_dump(), "drift": c.drift} for c in audit.symbol_constants],
            columns=["name", "k1", "k2", "coarse", "fine", "drift"],
        )
        summary = {
            "passed": not violations,
            "violations": violations,
            "form_gap": audit.form_gap,
            "leading_part_slope": audit.slope.slope,
            "phase_floor": audit.phase_floor,
            "phase_constant": audit.phase_constant,
            "support_samples": audit.support_samples,
            "guarded_samples": audit.guarded,
            "max_constant_drift": float(constants["drift"].max()) if len(constants) else 0.0,
            "cubic_slope": audit.cubic_slope.slope if audit.cubic_slope else None,
            "e_values": audit.e_values,
        }
        tables = {
            "zero_checks": audit.to_frame(),
            "leading_part_slope": pd.DataFrame(audit.slope_rows),
            "symbol_constants": constants,
        }
        return self.result(tables=tables, summary=summary)
