"""Capillary dispersion relation on a flat bottom at unit depth.

Lambda(r) = r^{3/2} sqrt(tanh r), lam(x) = Lambda(sqrt x), and the
companion Lambda_tilde(r) = sqrt(r / tanh r) with lam_tilde(r^2) = Lambda_tilde(r).
All functions are vectorised and finite at r = 0.
"""

import numpy as np


# below this x the closed forms lose digits to cancellation
SERIES_THRESHOLD = 1e-4


def _tanh_and_sech2(r: np.ndarray):
    t = np.tanh(r)
    with np.errstate(over="ignore"):
        s = 1.0 / np.cosh(r) ** 2
    return t, s


def Lambda(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return r ** 1.5 * np.sqrt(np.tanh(r))


def lam(x) -> np.ndarray:
    return Lambda(np.sqrt(np.asarray(x, dtype=float)))


def lam_prime(x) -> np.ndarray:
    """d lam / dx, equal to 1 - x/3 + 19x^2/120 - ... near zero."""
    x = np.asarray(x, dtype=float)
    small = x < SERIES_THRESHOLD
    xs = np.where(small, SERIES_THRESHOLD, x)
    r = np.sqrt(xs)
    t, s = _tanh_and_sech2(r)
    closed = 0.75 * np.sqrt(t / r) + 0.25 * np.sqrt(r / t) * s
    series = 1.0 - x / 3.0 + 19.0 * x ** 2 / 120.0 - 55.0 * x ** 3 / 756.0
    return np.where(small, series, closed)


def lam_double_prime(x) -> np.ndarray:
    """d^2 lam / dx^2, equal to -1/3 + 19x/60 - ... near zero."""
    x = np.asarray(x, dtype=float)
    small = x < SERIES_THRESHOLD
    xs = np.where(small, SERIES_THRESHOLD, x)
    r = np.sqrt(xs)
    t, s = _tanh_and_sech2(r)
    da = 0.75 * (-0.5 * r ** -1.5 * np.sqrt(t) + 0.5 * r ** -0.5 * s / np.sqrt(t))
    db = 0.25 * (
        0.5 * r ** -0.5 * s / np.sqrt(t)
        - 0.5 * np.sqrt(r) * s ** 2 / t ** 1.5
        - 2.0 * np.sqrt(r * t) * s
    )
    closed = (da + db) / (2.0 * r)
    series = -1.0 / 3.0 + 19.0 * x / 60.0 - 55.0 * x ** 2 / 252.0
    return np.where(small, series, closed)


def group_velocity(r) -> np.ndarray:
    """Lambda'(r) = 2 r lam'(r^2)."""
    r = np.asarray(r, dtype=float)
    return 2.0 * r * lam_prime(r * r)


def radial_scaling(r) -> np.ndarray:
    """r Lambda'(r) = 2 lam'(r^2) r^2: the action of xi . grad_xi on Lambda(|xi|)."""
    r = np.asarray(r, dtype=float)
    return 2.0 * lam_prime(r * r) * r * r


def Lambda_tilde(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    safe = np.where(r > 0, r, 1.0)
    return np.where(r > 0, np.sqrt(safe / np.tanh(safe)), 1.0)


def lam_tilde(x) -> np.ndarray:
    return Lambda_tilde(np.sqrt(np.asarray(x, dtype=float)))


def inverse_Lambda_tilde(r) -> np.ndarray:
    return 1.0 / Lambda_tilde(r)


def c_tilde(r) -> np.ndarray:
    """-(2 lam''(r^2) r^2 + 2 lam'(r^2)) / lam'(r^2); equals -2 at r = 0."""
    x = np.asarray(r, dtype=float) ** 2
    lp = lam_prime(x)
    return -(2.0 * lam_double_prime(x) * x + 2.0 * lp) / lp


def small_r_expansion(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return r ** 2 - r ** 4 / 6.0
