import math

import pandas as pd

from config.scenarios import ScenarioKind
from evolution.toy_model import ToySymbols, run_toy_model, toy_initial_data
from scenarios.base import BaseScenario, ScenarioResult
from utils.errors import ConfigurationError


GROWTH_SLOPE = 1.0
SLOPE_TOLERANCE = 0.15
BOUNDED_FACTOR = 3.0


class ToySchrodingerScenario(BaseScenario):
    """Low-frequency profile of the Schrodinger toy model with and without the Q1 term."""

    @classmethod
    def get_scenario_kind(cls) -> ScenarioKind:
        return ScenarioKind.TOY_SCHRODINGER

    def _validate_config(self) -> None:
        toy = self.config.toy_schrodinger
        lo, hi = toy.fit_window
        inside = [t for t in toy.sample_times if lo <= t <= hi and t > 0]
        if len(inside) < 2:
            raise ConfigurationError(
                f"fit window {toy.fit_window} holds fewer than two sample times", {"fit_window": [lo, hi]}
            )

    def execute(self) -> ScenarioResult:
        toy = self.config.toy_schrodinger
        v0 = toy_initial_data(self.grid, toy.center, toy.width, toy.peak, toy.background)
        runs = {}
        for with_q1 in (True, False):
            runs[with_q1] = run_toy_model(
                v0,
                ToySymbols.default(with_q1=with_q1),
                dt=self.config.integrator.dt,
                sample_times=toy.sample_times,
                center=math.hypot(*toy.center),
                fit_window=tuple(toy.fit_window),
            )

        frame = pd.DataFrame({
            "t": runs[True].times,
            "with_q1": runs[True].low_frequency,
            "without_q1": runs[False].low_frequency,
        })
        grows, bounded = runs[True], runs[False]
        summary = {
            "slope_with_q1": grows.fit.slope if grows.fit else float("nan"),
            "slope_without_q1": bounded.fit.slope if bounded.fit else float("nan"),
            "growth_factor_with_q1": grows.growth_factor(),
            "growth_factor_without_q1": bounded.growth_factor(),
            "linear_growth": bool(grows.fit and grows.fit.within(GROWTH_SLOPE, SLOPE_TOLERANCE)),
            "bounded_without_q1": bounded.growth_factor() <= BOUNDED_FACTOR,
        }
        return self.result(tables={"low_frequency_profile": frame}, summary=summary)
