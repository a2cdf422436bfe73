import itertools

import pandas as pd

from config.scenarios import ScenarioKind
from dispersion.phase import PhaseSignature
from dispersion.resonance import phase_lower_bound, resonance_locus
from scenarios.base import BaseScenario, ScenarioResult


class ResonanceMapScenario(BaseScenario):
    """Space-resonant points of all eight cubic phases and the quadratic lower-bound constants."""

    @classmethod
    def get_scenario_kind(cls) -> ScenarioKind:
        return ScenarioKind.RESONANCE_MAP

    def _validate_config(self) -> None:
        self.signatures = [PhaseSignature(signs=s) for s in itertools.product((1, -1), repeat=3)]

    def execute(self) -> ScenarioResult:
        cfg = self.config.resonance_map
        rows = []
        for sig in self.signatures:
            for xi in cfg.xis:
                point = resonance_locus(sig, xi).to_dict()
                rows.append({
                    "signature": point["signature"],
                    "class": point["class"],
                    "xi_1": point["xi"][0],
                    "xi_2": point["xi"][1],
                    "eta_1": point["eta"][0],
                    "eta_2": point["eta"][1],
                    "sigma_1": point["sigma"][0],
                    "sigma_2": point["sigma"][1],
                    "phase": point["phase"],
                    "gradient_norm": point["gradient_norm"],
                })
        locus = pd.DataFrame(rows)

        bounds = [
            phase_lower_bound(
                PhaseSignature(signs=s), samples=cfg.samples, max_frequency=cfg.max_frequency, seed=self.config.seed
            ).model_dump()
            for s in itertools.product((1, -1), repeat=2)
        ]
        lower = pd.DataFrame(bounds, columns=["signature", "constant", "samples", "excluded_radius"])

        summary = {
            "max_gradient_norm": float(locus["gradient_norm"].max()),
            "min_lower_bound_constant": float(lower["constant"].min()),
            "classes": {name: sorted(group["signature"].unique().tolist()) for name, group in locus.groupby("class")},
        }
        return self.result(tables={"resonance_locus": locus, "phase_lower_bound": lower}, summary=summary)
