"""Conserved energy and momentum, and a drift monitor for evolution runs."""

from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel

from dno.solver import DnoBackend, DnoSolver
from evolution.state import SurfaceState
from spectral.dealias import physical_eval
from spectral.field import SpectralField
from spectral.multipliers import apply_radial_multiplier, gradient
from utils.logging import get_logger


logger = get_logger("evolution.diagnostics")


class ConservedQuantities(BaseModel):
    time: float
    energy: float
    momentum: float
    energy_proxy: float
    kinetic: float
    surface: float


def _integral(zero_mode: complex, box_length: float) -> float:
    return float(np.real(zero_mode)) * box_length ** 2


def surface_energy(h: SpectralField) -> float:
    """int |grad h|^2 / (1 + sqrt(1 + |grad h|^2)), the area excess of the surface."""
    grid = h.grid
    hx, hy = gradient(h)
    c = physical_eval(
        grid,
        lambda gx, gy: (gx ** 2 + gy ** 2) / (1.0 + np.sqrt(1.0 + gx ** 2 + gy ** 2)),
        hx.coefficients,
        hy.coefficients,
    )
    return _integral(c[0, 0], grid.box_length)


def energy_proxy(state: SurfaceState) -> float:
    """(||grad h||^2 + || |grad|^{1/2} tanh^{1/2}|grad| psi ||^2) / 2"""
    hx, hy = gradient(state.h)
    half = apply_radial_multiplier(state.psi, lambda r: np.sqrt(r * np.tanh(r)), zero_value=0.0)
    return 0.5 * (hx.l2_norm() ** 2 + hy.l2_norm() ** 2 + half.l2_norm(exclude_mean=True) ** 2)


def conserved_diagnostics(
    state: SurfaceState,
    backend: Optional[DnoBackend] = None,
    solver: Optional[DnoSolver] = None,
) -> ConservedQuantities:
    """Hamiltonian int psi G(h) psi / 2 + surface area excess, and int h."""
    solver = solver or DnoSolver(backend)
    g = solver.apply(state.h, state.psi)
    kinetic = 0.5 * float(np.real(state.psi.inner(g)))
    surface = surface_energy(state.h)
    return ConservedQuantities(
        time=state.time,
        energy=kinetic + surface,
        momentum=_integral(state.h.mean, state.grid.box_length),
        energy_proxy=energy_proxy(state),
        kinetic=kinetic,
        surface=surface,
    )


class ConservationMonitor:
    """Records diagnostics along a run and reports drift against the first record."""

    def __init__(self, backend: Optional[DnoBackend] = None, context: Optional[Dict] = None):
        self.solver = DnoSolver(backend, context)
        self.logger = get_logger("evolution.monitor", context)
        self.records: List[ConservedQuantities] = []

    def record(self, state: SurfaceState) -> ConservedQuantities:
        q = conserved_diagnostics(state, solver=self.solver)
        if not np.isfinite(q.energy):
            self.logger.error("Non-finite energy", extra_data={"time": state.time})
        self.records.append(q)
        return q

    @property
    def initial(self) -> ConservedQuantities:
        return self.records[0]

    def energy_drift(self) -> float:
        """max |E(t) - E(0)| / |E(0)| over the records"""
        e0 = self.initial.energy
        scale = abs(e0) if e0 != 0 else 1.0
        return max(abs(q.energy - e0) for q in self.records) / scale

    def momentum_drift(self) -> float:
        m0 = self.initial.momentum
        return max(abs(q.momentum - m0) for q in self.records)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame([q.model_dump() for q in self.records])
        if not frame.empty:
            frame["energy_drift"] = (frame["energy"] - frame["energy"].iloc[0]).abs()
            frame["momentum_drift"] = (frame["momentum"] - frame["momentum"].iloc[0]).abs()
        return frame
