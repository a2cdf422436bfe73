import pandas as pd

from config.scenarios import ScenarioKind
from paralinear.energy import energy_drift_sweep
from paralinear.good_unknown import paralinear_residuals
from paralinear.symmetrization import gamma_checks
from scenarios.base import BaseScenario, ScenarioResult
from utils.errors import ConfigurationError
from utils.fitting import loglog_slope


RESIDUALS = ("dno", "mean_curvature", "velocity")


class ParalinearResidualsScenario(BaseScenario):
    """Amplitude sweeps of the paralinearization residuals, of gamma and of the energy rate."""

    @classmethod
    def get_scenario_kind(cls) -> ScenarioKind:
        return ScenarioKind.PARALINEAR_RESIDUALS

    def _validate_config(self) -> None:
        amplitudes = self.config.paralinear.amplitudes
        if len(amplitudes) < 2 or any(a <= 0 or a >= 0.5 for a in amplitudes):
            raise ConfigurationError("need at least two amplitudes in (0, 0.5)", {"amplitudes": amplitudes})

    def execute(self) -> ScenarioResult:
        cfg = self.config
        backend = cfg.dno.build()
        amplitudes = sorted(cfg.paralinear.amplitudes)
        order = cfg.paralinear.amplitude_order

        rows = []
        for eps in amplitudes:
            state = self.initial_surface(eps)
            rows.append({"amplitude": eps, **paralinear_residuals(state, backend).as_dict()})
        residuals = pd.DataFrame(rows, columns=["amplitude", *RESIDUALS])
        slopes = {name: loglog_slope(amplitudes, residuals[name]).slope for name in RESIDUALS}

        h, psi = self.unit_profile()
        gamma = gamma_checks(h, amplitudes, amplitude_order=order)
        gamma_frame = pd.DataFrame({
            "amplitude": list(gamma.amplitudes),
            "linear_residual": list(gamma.linear_residual),
            "sup_gamma": list(gamma.sup_gamma),
        })
        sweep = energy_drift_sweep(h, psi, amplitudes, backend, n0=cfg.constants.n0, amplitude_order=order)

        summary = {
            "residual_slopes": slopes,
            "residuals_at_least_quadratic": all(s >= 1.9 for s in slopes.values()),
            "gamma_linear_slope": gamma.linear_fit.slope,
            "gamma_dominance_slope": gamma.dominance_fit.slope,
            "flat_gamma_sup": gamma.flat_gamma_sup,
            "gamma_closed_form_deviation": gamma.closed_form_deviation,
            "energy_rate_slope": sweep.fit.slope,
            "max_energy_gap": max(sweep.comparability),
        }
        tables = {"residuals": residuals, "gamma": gamma_frame, "energy": sweep.to_frame()}
        return self.result(tables=tables, summary=summary)
