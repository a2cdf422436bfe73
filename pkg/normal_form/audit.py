"""Numerical audit of the cancellations the normal form relies on.

Every check is evaluated on random or band samples and reported as data;
nothing here raises on a failed cancellation.
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from dno.symbols import e_symbol
from evolution.rhs import quadratic_symbol_q
from normal_form.symbols import (
    BULK_RATIO,
    build_normal_form_symbol,
    bulk_cubic_source,
    leading_quadratic_part,
    modified_quadratic_symbol,
)
from norms.s_infty import s_infty_estimate
from utils.fitting import SlopeFit, loglog_slope
from utils.logging import get_logger


logger = get_logger("normal_form.audit")

FORMS = ("cutoff", "identity")
SIGN_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))

# band window of the low input where q_tilde_{+,nu} - c(xi) is measured;
# below k1 - 11 the retained region covers the whole band
SLOPE_BANDS = (-16, -15, -14, -13, -12)
CONSTANT_BANDS = ((0, 0), (0, -4), (2, -2))
CUBIC_BANDS = (-4, -3, -2, -1)
E_RADII = (0.25, 0.5, 1.0, 2.0, 4.0)
REFINEMENT = (32, 64)
# largest relative change of a symbol constant between the two resolutions
DRIFT_TOLERANCE = 0.1


class ZeroCheck(BaseModel):
    """max |q_tilde| (expected zero) or max |q_tilde - q| (retained) on a region."""

    name: str
    form: str
    region: str
    samples: int
    max_abs: float
    scale: float
    expect_zero: bool

    @property
    def passed(self) -> bool:
        if self.expect_zero:
            return self.max_abs == 0.0
        return self.max_abs <= 1e-12 * max(self.scale, 1.0)


class SymbolConstant(BaseModel):
    name: str
    k1: int
    k2: int
    coarse: float
    fine: float

    @property
    def drift(self) -> float:
        return abs(self.fine - self.coarse) / max(self.fine, np.finfo(float).tiny)

    @property
    def stable(self) -> bool:
        return self.drift <= DRIFT_TOLERANCE


class CancellationAudit(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    zero_checks: List[ZeroCheck]
    form_gap: float
    slope: SlopeFit
    slope_rows: List[Dict[str, float]]
    phase_floor: float
    phase_constant: float
    support_samples: int
    guarded: int
    symbol_constants: List[SymbolConstant]
    cubic_slope: Optional[SlopeFit] = None
    e_values: Dict[str, Dict[str, float]]

    def violations(self) -> List[str]:
        out = [f"{c.name} ({c.form}) on {c.region}: {c.max_abs:.3e}" for c in self.zero_checks if not c.passed]
        if self.guarded:
            out.append(f"{self.guarded} support samples below the phase floor")
        out.extend(
            f"{c.name} on bands ({c.k1}, {c.k2}) drifts {c.drift:.3f} under refinement"
            for c in self.symbol_constants
            if not c.stable
        )
        return out

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([c.model_dump() for c in self.zero_checks])


def _directions(rng: np.random.Generator, n: int) -> np.ndarray:
    angle = rng.uniform(0.0, 2.0 * np.pi, n)
    return np.stack([np.cos(angle), np.sin(angle)], axis=-1)


def high_low_samples(rng: np.random.Generator, n: int, log2_range=(-4.0, 4.0)) -> Tuple[np.ndarray, np.ndarray]:
    """(xi - eta, eta) with 0 < |eta| <= 2^-10 |xi|."""
    r_xi = 2.0 ** rng.uniform(*log2_range, n)
    r_eta = BULK_RATIO * r_xi * (1.0 - rng.uniform(0.0, 1.0, n))
    xi = r_xi[:, None] * _directions(rng, n)
    eta = r_eta[:, None] * _directions(rng, n)
    return xi - eta, eta


def low_output_samples(rng: np.random.Generator, n: int, log2_range=(-4.0, 4.0)) -> Tuple[np.ndarray, np.ndarray]:
    """(xi - eta, eta) with |xi| <= 2^-10 |eta|."""
    r_eta = 2.0 ** rng.uniform(*log2_range, n)
    r_xi = BULK_RATIO * r_eta * rng.uniform(0.0, 1.0, n)
    eta = r_eta[:, None] * _directions(rng, n)
    xi = r_xi[:, None] * _directions(rng, n)
    return xi - eta, eta


def _zero_checks(rng: np.random.Generator, n: int) -> List[ZeroCheck]:
    regions = {
        "|eta| <= 2^-10 |xi|": high_low_samples(rng, n),
        "|xi| <= 2^-10 |eta|": low_output_samples(rng, n),
    }
    checks = []
    for form in FORMS:
        for mu, nu in SIGN_PAIRS:
            q_tilde = modified_quadratic_symbol(mu, nu, form)
            name = f"q_tilde_{'+' if mu > 0 else '-'}{'+' if nu > 0 else '-'}"
            for region, (zeta, eta) in regions.items():
                high_low = region.startswith("|eta|")
                expect_zero = mu < 0 if high_low else mu == nu
                values = q_tilde.evaluate(zeta, eta)
                q = quadratic_symbol_q(mu, nu, zeta, eta)
                deviation = values if expect_zero else values - q
                checks.append(
                    ZeroCheck(
                        name=name,
                        form=form,
                        region=region,
                        samples=n,
                        max_abs=float(np.max(np.abs(deviation))),
                        scale=float(np.max(np.abs(q))),
                        expect_zero=expect_zero,
                    )
                )
    return checks


def _form_gap(rng: np.random.Generator, n: int) -> float:
    """max |cutoff form - identity form| / max |q| on generic frequencies."""
    zeta = 2.0 ** rng.uniform(-6.0, 3.0, n)[:, None] * _directions(rng, n)
    eta = 2.0 ** rng.uniform(-6.0, 3.0, n)[:, None] * _directions(rng, n)
    gap, scale = 0.0, 0.0
    for mu, nu in SIGN_PAIRS:
        a = modified_quadratic_symbol(mu, nu, "cutoff").evaluate(zeta, eta)
        b = modified_quadratic_symbol(mu, nu, "identity").evaluate(zeta, eta)
        gap = max(gap, float(np.max(np.abs(a - b))))
        scale = max(scale, float(np.max(np.abs(quadratic_symbol_q(mu, nu, zeta, eta)))))
    return gap / scale if scale > 0 else 0.0


def _leading_part_remainder(mu: int, nu: int):
    q_tilde = modified_quadratic_symbol(mu, nu, "cutoff")

    def fn(w0, w1):
        return q_tilde.evaluate(w0, w1) - leading_quadratic_part(w0 + w1)

    return fn


def _leading_part_slope(bands: Sequence[int], samples: int) -> Tuple[SlopeFit, List[Dict[str, float]]]:
    """S-infinity size of (q_tilde_{+,nu} - c(xi)) psi_0(xi - eta) psi_k2(eta) against 2^k2."""
    rows = []
    for k2 in bands:
        estimates = []
        for nu in (1, -1):
            est = s_infty_estimate(_leading_part_remainder(1, nu), [0, k2], samples, with_derivatives=False)
            estimates.append(est.estimate)
        rows.append({"k1": 0, "k2": k2, "scale": 2.0 ** k2, "estimate": max(estimates)})
    fit = loglog_slope([r["scale"] for r in rows], [r["estimate"] for r in rows])
    return fit, rows


def _phase_samples(rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """xi - eta in band 0; eta spread over scales plus the xi/2 and low-output neighbourhoods."""
    r_zeta = rng.uniform(0.625, 1.5, n)
    zeta = r_zeta[:, None] * _directions(rng, n)
    third = n // 3
    spread = 2.0 ** rng.uniform(-12.0, 6.0, third)[:, None] * _directions(rng, third)
    near_half = zeta[third : 2 * third] + 0.05 * rng.uniform(0.0, 1.0, third)[:, None] * _directions(rng, third)
    rest = n - 2 * third
    near_low = -zeta[2 * third :] + 0.05 * rng.uniform(0.0, 1.0, rest)[:, None] * _directions(rng, rest)
    return zeta, np.concatenate([spread, near_half, near_low])


def phase_floor(
    rng: np.random.Generator, target: int = 10_000, batch: int = 20_000, max_batches: int = 50
) -> Tuple[float, float, int, int]:
    """(min |Phi|, min |Phi| / (m^2 (1 + m)^-1/2), support samples, guarded samples) over the a-symbols.

    m is the largest of |xi|, |xi - eta|, |eta|.
    """
    symbols = [build_normal_form_symbol(2, s) for s in SIGN_PAIRS]
    floor, constant, count, guarded = np.inf, np.inf, 0, 0
    for _ in range(max_batches):
        zeta, eta = _phase_samples(rng, batch)
        m = np.max(np.stack([np.linalg.norm(v, axis=-1) for v in (zeta, eta, zeta + eta)]), axis=0)
        for sym in symbols:
            live = sym.support(zeta, eta) != 0.0
            if not np.any(live):
                continue
            phi = np.abs(sym.phase(zeta, eta))[live]
            guarded += int(np.count_nonzero(phi < sym.floor))
            size = m[live] ** 2 / np.sqrt(1.0 + m[live])
            floor = min(floor, float(np.min(phi)))
            constant = min(constant, float(np.min(phi / size)))
            count += int(np.count_nonzero(live))
        if count >= target:
            break
    return float(floor), float(constant), count, guarded


def _symbol_constants(bands, refinement: Tuple[int, int]) -> List[SymbolConstant]:
    coarse_n, fine_n = refinement
    out = []
    for mu, nu in SIGN_PAIRS:
        sym = build_normal_form_symbol(2, (mu, nu))
        for k1, k2 in bands:
            coarse = s_infty_estimate(sym, [k1, k2], coarse_n, with_derivatives=False)
            fine = s_infty_estimate(sym, [k1, k2], fine_n, with_derivatives=False)
            scale = 2.0 ** max(k1, 0)
            out.append(
                SymbolConstant(
                    name=sym.name, k1=k1, k2=k2, coarse=coarse.constant(scale), fine=fine.constant(scale)
                )
            )
    return out


def _cubic_slope(bands: Sequence[int], samples: int) -> SlopeFit:
    """S-infinity size of the bulk cubic source against 2^k1 with both low inputs 12 bands down."""
    source = bulk_cubic_source(1)
    values = [
        s_infty_estimate(source, [k1, k1 - 12, k1 - 12], samples, with_derivatives=False).estimate
        for k1 in bands
    ]
    return loglog_slope([2.0 ** k for k in bands], values)


def e_values(radii: Sequence[float] = E_RADII) -> Dict[str, Dict[str, float]]:
    values = e_symbol(np.asarray(radii, dtype=float))
    return {f"{r:g}": {"re": float(v.real), "im": float(v.imag)} for r, v in zip(radii, values)}


def cancellation_audit(
    seed: int = 0,
    samples: int = 10_000,
    slope_bands: Sequence[int] = SLOPE_BANDS,
    slope_resolution: int = 16,
    constant_bands: Sequence[Tuple[int, int]] = CONSTANT_BANDS,
    refinement: Tuple[int, int] = REFINEMENT,
    cubic_bands: Optional[Sequence[int]] = CUBIC_BANDS,
    cubic_resolution: int = 14,
) -> CancellationAudit:
    """Run every cancellation and size check of the quadratic and cubic normal form."""
    rng = np.random.default_rng(seed)
    zero_checks = _zero_checks(rng, samples)
    gap = _form_gap(rng, samples)
    slope, rows = _leading_part_slope(slope_bands, slope_resolution)
    floor, constant, count, guarded = phase_floor(rng, samples)
    constants = _symbol_constants(constant_bands, refinement)
    cubic = _cubic_slope(cubic_bands, cubic_resolution) if cubic_bands else None

    report = CancellationAudit(
        zero_checks=zero_checks,
        form_gap=gap,
        slope=slope,
        slope_rows=rows,
        phase_floor=floor,
        phase_constant=constant,
        support_samples=count,
        guarded=guarded,
        symbol_constants=constants,
        cubic_slope=cubic,
        e_values=e_values(),
    )
    violations = report.violations()
    log = logger.warning if violations else logger.info
    log(
        "Cancellation audit finished",
        extra_data={
            "violations": violations,
            "slope": slope.slope,
            "phase_floor": floor,
            "form_gap": gap,
        },
    )
    return report
