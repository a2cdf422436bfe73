import pandas as pd

from config.scenarios import ScenarioKind
from dno.solver import BackendKind, DnoBackend, DnoSolver
from scenarios.base import BaseScenario, ScenarioResult
from utils.fitting import loglog_slope


SLOPE_TOLERANCE = 0.2


class DnoConvergenceScenario(BaseScenario):
    """Fixed point against Taylor-k over an amplitude sweep; the residual slope should be k + 1."""

    @classmethod
    def get_scenario_kind(cls) -> ScenarioKind:
        return ScenarioKind.DNO_CONVERGENCE

    def _validate_config(self) -> None:
        self.order = self.config.dno_convergence.order
        self.amplitudes = list(self.config.dno_convergence.amplitudes)

    def execute(self) -> ScenarioResult:
        cfg = self.config.dno
        context = {"scenario": self.name, "n": self.grid.n}
        exact = DnoSolver(
            DnoBackend(kind=BackendKind.FIXED_POINT, z_nodes=cfg.z_nodes, tol=cfg.tol, max_iter=cfg.max_iter),
            context,
        )
        approx = DnoSolver(
            DnoBackend(kind=BackendKind(f"taylor{self.order}"), z_nodes=cfg.z_nodes, tol=cfg.tol, max_iter=cfg.max_iter),
            context,
        )
        h1, psi1 = self.unit_profile()

        rows = []
        for eps in self.amplitudes:
            h, psi = h1 * eps, psi1 * eps
            reference = exact.apply(h, psi)
            report = exact.last_report
            residual = (reference - approx.apply(h, psi)).l2_norm()
            rows.append({
                "amplitude": eps,
                "residual": residual,
                "reference_norm": reference.l2_norm(),
                "iterations": report.iterations,
                "final_increment": report.increments[-1],
                "laplace_residual": report.laplace_residual,
            })
            self.logger.debug("Amplitude done", extra_data={"amplitude": eps, "residual": residual})

        frame = pd.DataFrame(rows, columns=[
            "amplitude", "residual", "reference_norm", "iterations", "final_increment", "laplace_residual"
        ])
        fit = loglog_slope(frame["amplitude"], frame["residual"])
        expected = float(self.order + 1)
        summary = {
            "order": self.order,
            "expected_slope": expected,
            "slope": fit.slope,
            "r_squared": fit.r_squared,
            "within_tolerance": fit.within(expected, SLOPE_TOLERANCE),
            "tolerance": SLOPE_TOLERANCE,
            "z_nodes": cfg.z_nodes,
        }
        self.logger.info(f"Taylor{self.order} residual slope {fit.slope:.3f} (expected {expected:g})")
        return self.result(tables={"convergence": frame}, summary=summary)
