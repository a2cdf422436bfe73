"""Multilinear phases and their derivatives.

For signs (s_1, ..., s_m) and frequencies (f_0, ..., f_{m-1}) the phase is

    Phi = Lambda(|f_0|) - sum_i s_i Lambda(|a_i|),

with inputs a_i = f_i - f_{i+1} (i < m-1) and a_{m-1} = f_{m-1}, so that
m = 2 gives (xi - eta, eta), m = 3 gives (xi - eta, eta - sigma, sigma) and
so on. Frequencies are arrays whose last axis has length 2.
"""

from typing import List, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from dispersion.laws import Lambda, c_tilde, lam_prime


SLOT_NAMES = ("xi", "eta", "sigma", "kappa")


class PhaseSignature(BaseModel):
    model_config = ConfigDict(frozen=True)

    signs: Tuple[int, ...]

    @field_validator("signs")
    @classmethod
    def validate_signs(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(v) not in (2, 3, 4):
            raise ValueError(f"phase arity must be 2, 3 or 4, got {len(v)}")
        if any(s not in (1, -1) for s in v):
            raise ValueError(f"signs must be +1 or -1, got {v}")
        return v

    @classmethod
    def parse(cls, text: str) -> "PhaseSignature":
        """'+-' or '+,-,-' style notation"""
        symbols = [c for c in text if c in "+-"]
        return cls(signs=tuple(1 if c == "+" else -1 for c in symbols))

    @property
    def arity(self) -> int:
        return len(self.signs)

    def label(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)


def _as_vectors(freqs: Sequence) -> List[np.ndarray]:
    return [np.asarray(f, dtype=float) for f in freqs]


def _check(sig: PhaseSignature, freqs: Sequence) -> None:
    if len(freqs) != sig.arity:
        raise ValueError(f"signature {sig.label()} needs {sig.arity} frequencies, got {len(freqs)}")


def phase_inputs(freqs: Sequence) -> List[np.ndarray]:
    f = _as_vectors(freqs)
    return [f[i] - f[i + 1] for i in range(len(f) - 1)] + [f[-1]]


def _norm(v: np.ndarray) -> np.ndarray:
    return np.linalg.norm(v, axis=-1)


def _grad_Lambda(v: np.ndarray) -> np.ndarray:
    """grad of Lambda(|v|) = 2 lam'(|v|^2) v; zero at v = 0."""
    r2 = np.sum(v * v, axis=-1)
    return 2.0 * lam_prime(r2)[..., None] * v


def _slot_index(slot: Union[int, str]) -> int:
    if isinstance(slot, str):
        return SLOT_NAMES.index(slot)
    return int(slot)


def phase(sig: PhaseSignature, freqs: Sequence) -> np.ndarray:
    _check(sig, freqs)
    f = _as_vectors(freqs)
    value = Lambda(_norm(f[0]))
    for s, a in zip(sig.signs, phase_inputs(f)):
        value = value - s * Lambda(_norm(a))
    return value


def phase_gradient(sig: PhaseSignature, freqs: Sequence, slot: Union[int, str]) -> np.ndarray:
    """Closed-form gradient of the phase in one frequency slot."""
    _check(sig, freqs)
    j = _slot_index(slot)
    f = _as_vectors(freqs)
    inputs = phase_inputs(f)
    m = sig.arity
    grad = _grad_Lambda(f[0]) if j == 0 else np.zeros(np.broadcast(*f).shape)
    for i, (s, a) in enumerate(zip(sig.signs, inputs)):
        # d a_i / d f_j is +1 for j == i and -1 for j == i + 1 (i < m - 1)
        if j == i:
            grad = grad - s * _grad_Lambda(a)
        elif j == i + 1 and i < m - 1:
            grad = grad + s * _grad_Lambda(a)
    return grad


def phase_gradients(sig: PhaseSignature, freqs: Sequence, slot: Union[int, str]) -> np.ndarray:
    return phase_gradient(sig, freqs, slot)


def _perp(v: np.ndarray) -> np.ndarray:
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def vector_field_on_phase(sig: PhaseSignature, freqs: Sequence, which: str) -> np.ndarray:
    """sum_j Gamma_{f_j} Phi for Gamma = L (-f . grad_f) or Omega (-f_perp . grad_f)."""
    f = _as_vectors(freqs)
    total = 0.0
    for j, fj in enumerate(f):
        direction = fj if which == "L" else _perp(fj)
        total = total - np.sum(direction * phase_gradient(sig, f, j), axis=-1)
    return total


def phase_vectorfield_L(sig2: PhaseSignature, xi, eta) -> Tuple[np.ndarray, np.ndarray]:
    """(L_xi + L_eta) Phi and its remainder after removing c_tilde(xi - eta) Phi."""
    if sig2.arity != 2:
        raise ValueError("the L identity is stated for quadratic phases")
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    value = vector_field_on_phase(sig2, (xi, eta), "L")
    remainder = value - c_tilde(_norm(xi - eta)) * phase(sig2, (xi, eta))
    return value, remainder


def phase_vectorfield_Omega(sig2: PhaseSignature, xi, eta) -> np.ndarray:
    if sig2.arity != 2:
        raise ValueError("the Omega identity is stated for quadratic phases")
    return vector_field_on_phase(sig2, (xi, eta), "Omega")


def finite_difference_gradient(
    sig: PhaseSignature, freqs: Sequence, slot: Union[int, str], step: float = 1e-6
) -> np.ndarray:
    """Central differences, used to cross-check the closed forms."""
    j = _slot_index(slot)
    f = _as_vectors(freqs)
    out = []
    for axis in range(2):
        shift = np.zeros(2)
        shift[axis] = step
        plus = list(f)
        minus = list(f)
        plus[j] = f[j] + shift
        minus[j] = f[j] - shift
        out.append((phase(sig, plus) - phase(sig, minus)) / (2.0 * step))
    return np.stack(out, axis=-1)
