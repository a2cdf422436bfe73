from config.scenarios import ScenarioKind
from dispersion.propagation import check_cone, decay_probe, gaussian_bump, gaussian_ring
from scenarios.base import BaseScenario, ScenarioResult


SLOPE_TOLERANCE = 0.1


class DecayProbeScenario(BaseScenario):
    """sup-norm decay of one dyadic band under the linear flow."""

    @classmethod
    def get_scenario_kind(cls) -> ScenarioKind:
        return ScenarioKind.DECAY_PROBE

    def _validate_config(self) -> None:
        probe = self.config.decay_probe
        check_cone(self.grid, probe.band, max(abs(t) for t in probe.times))

    def execute(self) -> ScenarioResult:
        probe = self.config.decay_probe
        if probe.profile == "ring":
            f = gaussian_ring(self.grid, center=probe.center, width=probe.width)
        else:
            f = gaussian_bump(self.grid, width=probe.width)
        result = decay_probe(f, probe.band, probe.times, theta=probe.theta, refine=probe.refine)

        fit = result.fit
        summary = {
            "band": probe.band,
            "theta": probe.theta,
            "expected_slope": result.expected_slope,
            "slope": fit.slope if fit else float("nan"),
            "r_squared": fit.r_squared if fit else float("nan"),
            "within_tolerance": bool(fit and fit.within(result.expected_slope, SLOPE_TOLERANCE)),
            "tolerance": SLOPE_TOLERANCE,
            "refine": probe.refine,
        }
        return self.result(tables={"decay": result.to_frame()}, summary=summary)
