"""Space-resonance geometry of cubic phases and the quadratic phase lower bound."""

from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from dispersion.phase import PhaseSignature, phase, phase_gradient


RESONANCE_CLASSES = {
    "S1": {(1, -1, -1), (-1, 1, 1)},
    "S2": {(1, -1, 1), (-1, 1, -1)},
    "S3": {(1, 1, -1), (-1, -1, 1)},
    "S4": {(1, 1, 1), (-1, -1, -1)},
}


class ResonancePoint(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    signature: str
    resonance_class: str
    xi: np.ndarray
    eta: np.ndarray
    sigma: np.ndarray
    inputs: list
    phase_value: float
    gradient_norm: float

    def to_dict(self) -> Dict:
        return {
            "signature": self.signature,
            "class": self.resonance_class,
            "xi": self.xi.tolist(),
            "eta": self.eta.tolist(),
            "sigma": self.sigma.tolist(),
            "inputs": [np.asarray(v).tolist() for v in self.inputs],
            "phase": self.phase_value,
            "gradient_norm": self.gradient_norm,
        }


def resonance_class(sig3: PhaseSignature) -> str:
    for name, members in RESONANCE_CLASSES.items():
        if sig3.signs in members:
            return name
    raise ValueError(f"no resonance class for {sig3.label()}")


def resonance_locus(sig3: PhaseSignature, xi) -> ResonancePoint:
    """Point where grad_eta and grad_sigma of the cubic phase both vanish.

    On that set xi = ((1 + tk)(1 + ki) - tk) sigma and eta = (1 + ki) sigma.
    """
    if sig3.arity != 3:
        raise ValueError("resonance_locus needs a cubic signature")
    tau, kappa, iota = sig3.signs
    xi = np.asarray(xi, dtype=float)
    scale = (1 + tau * kappa) * (1 + kappa * iota) - tau * kappa
    sigma = xi / scale
    eta = (1 + kappa * iota) * sigma
    freqs = (xi, eta, sigma)
    grad = np.concatenate([phase_gradient(sig3, freqs, 1), phase_gradient(sig3, freqs, 2)])
    return ResonancePoint(
        signature=sig3.label(),
        resonance_class=resonance_class(sig3),
        xi=xi,
        eta=eta,
        sigma=sigma,
        inputs=[xi - eta, eta - sigma, sigma],
        phase_value=float(phase(sig3, freqs)),
        gradient_norm=float(np.linalg.norm(grad)),
    )


class LowerBoundReport(BaseModel):
    signature: str
    constant: float
    samples: int
    excluded_radius: float


def phase_lower_bound(
    sig2: PhaseSignature,
    samples: int = 10_000,
    max_frequency: float = 8.0,
    excluded_ratio: float = 2.0 ** -10,
    seed: Optional[int] = 0,
) -> LowerBoundReport:
    """Measured c in |grad_eta Phi| >= c |xi| (|xi-eta| + |eta| + 1)^{-1/2}.

    Samples with |eta - xi/2| < excluded_ratio |xi| are rejected.
    """
    rng = np.random.default_rng(seed)
    xi = rng.uniform(-max_frequency, max_frequency, (samples, 2))
    eta = rng.uniform(-max_frequency, max_frequency, (samples, 2))
    xi_norm = np.linalg.norm(xi, axis=-1)
    keep = (np.linalg.norm(eta - xi / 2.0, axis=-1) >= excluded_ratio * xi_norm) & (xi_norm > 0)
    xi, eta, xi_norm = xi[keep], eta[keep], xi_norm[keep]

    grad = np.linalg.norm(phase_gradient(sig2, (xi, eta), 1), axis=-1)
    weight = xi_norm / np.sqrt(np.linalg.norm(xi - eta, axis=-1) + np.linalg.norm(eta, axis=-1) + 1.0)
    return LowerBoundReport(
        signature=sig2.label(),
        constant=float(np.min(grad / weight)),
        samples=int(keep.sum()),
        excluded_radius=excluded_ratio,
    )
