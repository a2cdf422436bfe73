import math

import numpy as np
import pandas as pd

from config.scenarios import ScenarioKind
from evolution.integrators import Scheme, SurfaceStepper, check_cfl
from evolution.rhs import Model, WaterWaveRhs
from evolution.state import to_complex_state
from normal_form.good_variable import check_depth, good_variable, profile
from norms.vector_fields import z2_terms
from norms.weighted import z1_norm
from scenarios.base import BaseScenario, ScenarioResult


class NormMonitorScenario(BaseScenario):
    """Z1 and Z2 norms of the profile along a full-system run.

    With ``normal_form`` the profile is taken of the quadratic good variable v
    instead of u.
    """

    @classmethod
    def get_scenario_kind(cls) -> ScenarioKind:
        return ScenarioKind.NORM_MONITOR

    def _validate_config(self) -> None:
        integ = self.config.integrator
        if integ.scheme == Scheme.RK4:
            check_cfl(self.grid, integ.dt)
        if self.config.norm_monitor.normal_form:
            check_depth(2, self.grid, None, None)
        self.n_steps = max(1, math.ceil(integ.t_final / integ.dt - 1e-9)) if integ.t_final > 0 else 0
        self.dt = integ.t_final / self.n_steps if self.n_steps else integ.dt

    def _row(self, state) -> dict:
        cfg = self.config
        u = to_complex_state(state)
        if cfg.norm_monitor.normal_form:
            g = good_variable(u, depth=2).g
        else:
            g = profile(u.u, state.time)
        z1 = z1_norm(g, cfg.constants.alpha, cfg.constants.high_weight)
        z2 = z2_terms(g, fourier_side=cfg.norm_monitor.fourier_side)
        for message in z2.warnings:
            self.logger.warning(message, extra_data={"time": state.time})
        return {
            "t": state.time,
            "z1": z1.total,
            "z2": z2.total,
            "l2": g.l2_norm(),
            "sup_u": u.u.sup_norm(),
            "localization_warnings": len(z2.warnings),
        }

    def execute(self) -> ScenarioResult:
        cfg = self.config
        backend = cfg.dno.build()
        context = {"scenario": self.name, "n": self.grid.n}
        stepper = SurfaceStepper(WaterWaveRhs(Model.FULL, backend, context=context), self.grid, cfg.integrator.scheme, context)

        state = self.initial_surface()
        rows = [self._row(state)]
        for step in range(1, self.n_steps + 1):
            state = stepper.step(state, self.dt)
            if step % cfg.diagnostics.cadence == 0 or step == self.n_steps:
                rows.append(self._row(state))

        frame = pd.DataFrame(rows, columns=["t", "z1", "z2", "l2", "sup_u", "localization_warnings"])
        t_end = float(frame["t"].iloc[-1])
        z1_growth = float(frame["z1"].max() / frame["z1"].iloc[0]) if frame["z1"].iloc[0] > 0 else float("nan")
        z2_growth = float(frame["z2"].max() / frame["z2"].iloc[0]) if frame["z2"].iloc[0] > 0 else float("nan")
        allowance = (1.0 + t_end) ** cfg.constants.delta_tilde
        summary = {
            "t_final": t_end,
            "steps": self.n_steps,
            "normal_form": cfg.norm_monitor.normal_form,
            "z2_path": "fourier" if cfg.norm_monitor.fourier_side else "physical",
            "z1_growth": z1_growth,
            "z2_growth": z2_growth,
            "z2_allowance": allowance,
            "z2_within_allowance": bool(np.isfinite(z2_growth) and z2_growth <= allowance * (1.0 + 1e-2)),
            "localization_warnings": int(frame["localization_warnings"].sum()),
        }
        self.logger.info(
            f"Norm monitor finished at t={t_end:g}",
            extra_data={"z1_growth": z1_growth, "z2_growth": z2_growth},
        )
        return self.result(tables={"norms": frame}, summary=summary)
