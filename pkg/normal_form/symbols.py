"""Symbols of the normal-form transformation.

Each symbol divides a source symbol by its phase on the frequency regions
where the phase is large but its gradient is unhelpful:

    a_{mu,nu}      = i q_{mu,nu} chi_{mu,nu} / Phi^{mu,nu}
    b_{tau,kap,io} = i c_{tau,kap,io} chi_{tau,kap,io} / Phi^{tau,kap,io}
    e_{...}        = i d_{...} chi_{...} / Phi^{...}

Inputs are the differences w_0 = xi - eta, w_1 = eta (- sigma), ... so that
xi is their sum. Every cutoff is a sum over the (at most two) dyadic bands
carrying the band-defining frequency, so identities such as
sum_k psi_k = 1 hold exactly in floating point. Indicator functions of
sign choices are exact 0/1.
"""

from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from dispersion.phase import PhaseSignature, phase
from dno.symbols import c_symbol, d_symbol
from evolution.bilinear import BilinearSymbol
from evolution.rhs import _sign, quadratic_symbol_q, sign_coefficient
from spectral.littlewood_paley import psi_ge, psi_k, psi_le
from utils.errors import ConfigurationError
from utils.logging import get_logger


logger = get_logger("normal_form.symbols")

# |Phi| below this inside a support set zeroes the sample
PHASE_FLOOR = 1e-10
# high-low regime of the cubic bulk: max(|w_1|, |w_2|) <= 2^-10 |w_0|
BULK_RATIO = 2.0 ** -10

CubicSource = Union[str, Callable[..., np.ndarray]]


def _norm(v: np.ndarray) -> np.ndarray:
    return np.linalg.norm(np.asarray(v, dtype=float), axis=-1)


def _band_sum(r: np.ndarray, bracket: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """sum_k psi_k(r) bracket(k) over the two bands that can carry r; 0 at r = 0."""
    r = np.asarray(r, dtype=float)
    live = r > 0
    base = np.floor(np.log2(np.where(live, r, 1.0)))
    total = 0.0
    for k in (base, base + 1.0):
        total = total + psi_k(k, r) * bracket(k)
    return np.where(live, total, 0.0)


def _frequencies(inputs: Sequence[np.ndarray]) -> Tuple[np.ndarray, ...]:
    """(xi, eta, sigma, ...) from the input differences: f_j = w_j + ... + w_{m-1}."""
    ws = np.broadcast_arrays(*(np.asarray(w, dtype=float) for w in inputs))
    out = []
    running = np.zeros_like(ws[0])
    for w in reversed(ws):
        running = running + w
        out.append(running)
    return tuple(reversed(out))


# quadratic cutoffs

def quadratic_cutoff(mu: int, nu: int, xi_minus_eta, eta) -> np.ndarray:
    """Support weight of a_{mu,nu}: the xi/2 neighbourhood, mu = - high-low, mu nu > 0 low output."""
    mu, nu = _sign(mu), _sign(nu)
    zeta, eta = np.broadcast_arrays(np.asarray(xi_minus_eta, dtype=float), np.asarray(eta, dtype=float))
    xi = zeta + eta
    r_zeta, r_xi, r_half = _norm(zeta), _norm(xi), _norm(xi - 2.0 * eta)

    def bracket(k):
        out = psi_le(k - 5, r_half) * psi_le(k + 4, r_zeta) * psi_ge(k - 5, r_xi)
        if mu < 0:
            out = out + psi_ge(k + 5, r_zeta)
        if mu * nu > 0:
            out = out + psi_le(k - 5, r_xi) * psi_le(k + 4, r_zeta)
        return out

    return _band_sum(_norm(eta), bracket)


def modified_quadratic_cutoff(mu: int, nu: int, xi_minus_eta, eta) -> np.ndarray:
    """Weight of q in the quadratic symbol left after the transformation."""
    mu, nu = _sign(mu), _sign(nu)
    zeta, eta = np.broadcast_arrays(np.asarray(xi_minus_eta, dtype=float), np.asarray(eta, dtype=float))
    xi = zeta + eta
    r_zeta, r_xi, r_half = _norm(zeta), _norm(xi), _norm(xi - 2.0 * eta)

    def bracket(k):
        out = psi_ge(k - 9, r_half) * psi_le(k + 4, r_zeta) * psi_ge(k - 5, r_xi)
        out = out + 0.5 * (1 + mu) * psi_ge(k + 5, r_zeta)
        out = out + 0.5 * (1 - mu * nu) * psi_le(k - 5, r_xi) * psi_le(k + 4, r_zeta)
        return out

    return _band_sum(_norm(eta), bracket)


# cubic and quartic cutoffs

RESONANT_TRIPLES = {(1, -1, -1), (-1, 1, -1), (-1, -1, 1)}


def cubic_cutoff(signs: Sequence[int], w0, w1, w2) -> np.ndarray:
    tau, kappa, iota = (_sign(s) for s in signs)
    xi, eta, sigma = _frequencies((w0, w1, w2))
    resonant = (tau, kappa, iota) in RESONANT_TRIPLES

    def bracket(k):
        low = lambda v: psi_le(k - 10, _norm(v))
        out = low(eta - 2.0 * xi / 3.0) * low(sigma - xi / 3.0) + low(eta - xi / 2.0) * low(sigma)
        if resonant:
            out = out + low((1 + tau) * xi - eta) * low(sigma + iota * xi)
        if tau < 0:
            out = out + low(eta - sigma) * low(sigma)
        return out

    return _band_sum(_norm(xi), bracket)


def quartic_cutoff(signs: Sequence[int], w0, w1, w2, w3) -> np.ndarray:
    mu1 = _sign(signs[0])
    xi, eta, sigma, kappa = _frequencies((w0, w1, w2, w3))

    def bracket(k):
        low = lambda v: psi_le(k - 10, _norm(v))
        tail = low(sigma - kappa) * low(kappa)
        out = low(eta - xi / 2.0) * tail
        if mu1 < 0:
            out = out + low(eta) * tail
        return out

    return _band_sum(_norm(xi), bracket)


# sources

@lru_cache(maxsize=1)
def _d_table(points: int = 8193, log2_min: float = -20.0, log2_max: float = 7.0):
    """d(r) / r^2 on a geometric grid; smooth in log r and finite at r -> 0."""
    r = 2.0 ** np.linspace(log2_min, log2_max, points)
    return np.log(r), d_symbol(r) / r ** 2


def bulk_d(r) -> np.ndarray:
    """d(r) interpolated from the quadrature table, exact quadrature beyond it."""
    r = np.asarray(r, dtype=float)
    log_r, ratio = _d_table()
    live = r > 0
    logs = np.log(np.where(live, r, 1.0))
    out = np.where(live, np.interp(logs, log_r, ratio) * r ** 2, 0.0)
    beyond = r > np.exp(log_r[-1])
    if np.any(beyond):
        out = np.array(out)
        out[beyond] = d_symbol(r[beyond])
    return out


def bulk_cubic_source(tau: int) -> Callable[..., np.ndarray]:
    """(c_tau / 4) d(|xi|) on the high-low regime of the first input, zero elsewhere."""
    c_tau = sign_coefficient(tau)

    def source(w0, w1, w2) -> np.ndarray:
        xi, _, _ = _frequencies((w0, w1, w2))
        low = np.maximum(_norm(w1), _norm(w2)) <= BULK_RATIO * _norm(w0)
        return np.where(low, 0.25 * c_tau * bulk_d(_norm(xi)), 0.0)

    return source


def _quadratic_source(mu: int, nu: int) -> Callable[..., np.ndarray]:
    return lambda w0, w1: quadratic_symbol_q(mu, nu, w0, w1)


class NormalFormSymbol(BaseModel):
    """i * source * cutoff / phase for one sign signature."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    order: int
    signs: Tuple[int, ...]
    source: Callable[..., np.ndarray]
    cutoff: Callable[..., np.ndarray]
    name: str
    regions: Tuple[str, ...] = ()
    floor: float = PHASE_FLOOR

    @field_validator("order")
    @classmethod
    def validate_order(cls, v: int) -> int:
        if v not in (2, 3, 4):
            raise ValueError(f"normal-form order must be 2, 3 or 4, got {v}")
        return v

    @property
    def signature(self) -> PhaseSignature:
        return PhaseSignature(signs=self.signs)

    def phase(self, *inputs) -> np.ndarray:
        return phase(self.signature, _frequencies(inputs))

    def support(self, *inputs) -> np.ndarray:
        return self.cutoff(*inputs)

    def evaluate_with_guard(self, *inputs) -> Tuple[np.ndarray, int]:
        """Symbol values and the number of support samples zeroed by the phase floor."""
        if len(inputs) != self.order:
            raise ValueError(f"{self.name} takes {self.order} inputs, got {len(inputs)}")
        chi = np.asarray(self.support(*inputs), dtype=float)
        live = chi != 0.0
        if not np.any(live):
            return np.zeros(chi.shape, dtype=complex), 0
        phi = self.phase(*inputs)
        small = live & (np.abs(phi) < self.floor)
        keep = live & ~small
        with np.errstate(all="ignore"):
            source = np.asarray(self.source(*inputs), dtype=complex)
            values = 1j * source * chi / np.where(keep, phi, 1.0)
        return np.where(keep, values, 0.0), int(np.count_nonzero(small))

    def __call__(self, *inputs) -> np.ndarray:
        return self.evaluate_with_guard(*inputs)[0]

    def times_phase(self, *inputs) -> np.ndarray:
        """symbol * Phi without the division, zero where the symbol is guarded."""
        chi = np.asarray(self.support(*inputs), dtype=float)
        keep = (chi != 0.0) & (np.abs(self.phase(*inputs)) >= self.floor)
        source = np.asarray(self.source(*inputs), dtype=complex)
        return np.where(keep, 1j * source * chi, 0.0)

    def as_bilinear(self) -> BilinearSymbol:
        if self.order != 2:
            raise ValueError(f"{self.name} is not bilinear")
        return BilinearSymbol.from_function(self.__call__, name=self.name)

    def weight(self, first: np.ndarray, *fixed: np.ndarray) -> np.ndarray:
        """Dense multilinear weight: the first input over the lattice, the rest fixed."""
        return self(first, *(np.broadcast_to(f, first.shape) for f in fixed))


def _label(signs: Sequence[int]) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


def build_normal_form_symbol(
    order: int,
    signs: Sequence[int],
    cubic_source: Optional[CubicSource] = "bulk",
    quartic_source: Optional[Callable[..., np.ndarray]] = None,
) -> NormalFormSymbol:
    """a, b or e for one sign signature.

    The cubic source is either "bulk", the leading (c_tau/4) d(xi) part on
    the high-low regime with the remainder dropped, or a callable of three
    inputs. Quartic symbols need an explicit callable of four inputs.
    """
    signs = tuple(_sign(s) for s in signs)
    if len(signs) != order:
        raise ConfigurationError(
            f"order {order} needs {order} signs, got {len(signs)}", {"order": order, "signs": list(signs)}
        )
    label = _label(signs)

    if order == 2:
        mu, nu = signs
        return NormalFormSymbol(
            order=2,
            signs=signs,
            source=_quadratic_source(mu, nu),
            cutoff=lambda w0, w1: quadratic_cutoff(mu, nu, w0, w1),
            name=f"a_{label}",
            regions=("xi/2", "mu=- high-low", "mu*nu=+ low output"),
        )

    if order == 3:
        if cubic_source is None:
            raise ConfigurationError("cubic normal form requested without a cubic source", {"order": 3})
        if isinstance(cubic_source, str):
            if cubic_source != "bulk":
                raise ConfigurationError(
                    f"unknown cubic source {cubic_source!r}; use 'bulk' or a callable",
                    {"order": 3, "cubic_source": cubic_source},
                )
            source = bulk_cubic_source(signs[0])
        else:
            source = cubic_source
        return NormalFormSymbol(
            order=3,
            signs=signs,
            source=source,
            cutoff=lambda w0, w1, w2: cubic_cutoff(signs, w0, w1, w2),
            name=f"b_{label}",
            regions=("resonant triple", "(xi/3, xi/3, xi/3)", "xi/2 with low sigma", "tau=- high-low"),
        )

    if order == 4:
        if quartic_source is None:
            raise ConfigurationError("quartic normal form requested without a quartic source", {"order": 4})
        return NormalFormSymbol(
            order=4,
            signs=signs,
            source=quartic_source,
            cutoff=lambda w0, w1, w2, w3: quartic_cutoff(signs, w0, w1, w2, w3),
            name=f"e_{label}",
            regions=("xi/2 with low sigma, kappa", "mu1=- high-low"),
        )

    raise ConfigurationError(f"normal-form order must be 2, 3 or 4, got {order}", {"order": order})


def modified_quadratic_symbol(mu: int, nu: int, form: str = "cutoff") -> BilinearSymbol:
    """The quadratic symbol after the transformation.

    ``cutoff`` is q times its modified cutoff; ``identity`` is q + i a Phi,
    the symbol of Q + i Lambda A - i mu A(Lambda ., .) - i nu A(., Lambda .).
    """
    mu, nu = _sign(mu), _sign(nu)
    label = _label((mu, nu))
    if form == "cutoff":
        def symbol(w0, w1):
            return quadratic_symbol_q(mu, nu, w0, w1) * modified_quadratic_cutoff(mu, nu, w0, w1)
    elif form == "identity":
        a = build_normal_form_symbol(2, (mu, nu))

        def symbol(w0, w1):
            return quadratic_symbol_q(mu, nu, w0, w1) + 1j * a.times_phase(w0, w1)
    else:
        raise ConfigurationError(f"unknown form {form!r}; use 'cutoff' or 'identity'", {"form": form})
    return BilinearSymbol.from_function(symbol, name=f"q_tilde_{label}_{form}")


def leading_quadratic_part(xi) -> np.ndarray:
    """c(|xi|), the limit of q_{+,nu}(xi - eta, eta) as eta -> 0."""
    return c_symbol(_norm(xi))
