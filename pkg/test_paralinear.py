#!/usr/bin/env python3
"""
Paralinear tests: paraproducts, x-dependent symbols, symmetrizer symbols,
the good unknown, paralinearization residuals and the symmetrized energy
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))


def _profile(grid):
    from spectral.field import SpectralField

    h = SpectralField.from_physical(grid, np.cos(grid.x) + 0.5 * np.sin(grid.y))
    psi = SpectralField.from_physical(grid, np.sin(grid.x) + 0.5 * np.cos(grid.x + grid.y))
    return h, psi


def _surface(grid, eps):
    from evolution.state import SurfaceState

    h, psi = _profile(grid)
    return SurfaceState(h=h * eps, psi=psi * eps)


def test_paraproduct():
    """Test T_a f on fields"""
    print("=" * 50)
    print("Testing Paraproduct...")

    from paralinear.paraproduct import paraproduct
    from spectral.field import SpectralField
    from spectral.grid import Grid2D
    from spectral.littlewood_paley import theta_ratio

    grid = Grid2D.create(32)
    one = SpectralField.from_physical(grid, np.ones(grid.shape))
    f = SpectralField.from_physical(grid, 0.3 + np.sin(2 * grid.x) * np.cos(grid.y) + 0.2 * np.cos(5 * grid.y))
    t1 = paraproduct(one, f)
    assert np.max(np.abs(t1.physical() - (f.physical() - 0.3))) < 1e-12
    print("✅ T_1 f = f - mean(f)")

    a = SpectralField.from_physical(grid, np.cos(grid.x) + 0.1 * np.sin(3 * grid.y))
    constant = SpectralField.from_physical(grid, np.full(grid.shape, 2.0))
    assert paraproduct(a, constant).sup_norm() < 1e-14
    print("✅ T_a of a constant vanishes")

    g = SpectralField.from_physical(grid, np.cos(3 * grid.x + grid.y))
    combined = paraproduct(a, f * 2.0 + g)
    separate = paraproduct(a, f) * 2.0 + paraproduct(a, g)
    assert (combined - separate).sup_norm() < 1e-12
    print("✅ T_a is linear in f")

    c = SpectralField.from_physical(grid, np.cos(grid.x))
    weight = float(theta_ratio(1.0, 1.0))
    expected = weight * np.cos(grid.x) ** 2
    assert np.max(np.abs(paraproduct(c, c).physical() - expected)) < 1e-13
    print(f"✅ T_cos cos = theta(1, 1) cos^2 with theta(1, 1) = {weight:.4f}")

    try:
        paraproduct(c, SpectralField.zeros(Grid2D.create(16)))
    except ValueError:
        print("✅ Mismatched grids rejected")
    else:
        raise AssertionError("mismatched grids should be rejected")


def test_symbol_algebra():
    """Test XDependentSymbol algebra, evaluation and paraproducts"""
    print("=" * 50)
    print("Testing Symbol Algebra...")

    from paralinear.symbol import XDependentSymbol, component, magnitude_power
    from spectral.field import SpectralField
    from spectral.grid import Grid2D
    from spectral.multipliers import laplacian
    from utils.errors import NonFiniteMultiplierError

    grid = Grid2D.create(16)
    f = SpectralField.from_physical(grid, np.sin(grid.x) * np.cos(2 * grid.y) + 0.5 * np.cos(3 * grid.x))
    square = XDependentSymbol.multiplier(grid, magnitude_power(2.0))
    assert (square.paraproduct(f) + laplacian(f)).sup_norm() < 1e-12
    print("✅ Constant symbol |xi|^2 acts as -Laplacian")

    eps = 1e-2
    one = XDependentSymbol.multiplier(grid)
    c = XDependentSymbol.field(SpectralField.from_physical(grid, eps * np.cos(grid.x)), order=1)
    root = (one + c).power(0.5, 2)
    assert np.max(np.abs(root.evaluate((1.0, 0.0)) - np.sqrt(1.0 + eps * np.cos(grid.x)))) < 1e-6
    print("✅ Binomial power matches sqrt(1 + eps cos x) to second order")

    assert not c.times(c, 1).terms
    assert len(c.times(c, 2).terms) == 1
    print("✅ Products truncate at the requested order")

    try:
        c.power(0.5, 2)
    except ValueError:
        print("✅ Power without a constant part rejected")
    else:
        raise AssertionError("a symbol without constant part cannot be expanded")

    cos_x = SpectralField.from_physical(grid, np.cos(grid.x))
    a = XDependentSymbol.field(cos_x, order=1, m=lambda v: component(0)(v) ** 2)
    mixed = a.mixed_derivative(1).evaluate((1.5, 0.0))
    assert np.max(np.abs(mixed - (-3.0 * np.sin(grid.x)))) < 1e-8
    print("✅ Mixed derivative of cos(x) xi_1^2 is -2 xi_1 sin x")

    shifted = a.x_derivative(0)
    assert np.max(np.abs(shifted.evaluate((2.0, 0.0)) + 4.0 * np.sin(grid.x))) < 1e-12
    assert not one.x_derivative(0).terms
    print("✅ x-derivatives drop constant coefficients")

    def inverse_magnitude(v):
        return 1.0 / np.linalg.norm(v, axis=-1)

    singular = XDependentSymbol.multiplier(grid, inverse_magnitude, name="1/|xi|")
    try:
        with np.errstate(divide="ignore"):
            singular.paraproduct(f)
    except NonFiniteMultiplierError as e:
        assert e.details["lattice_point"] == [0, 0]
        print("✅ Non-finite multiplier reported with its lattice point")
    else:
        raise AssertionError("a non-finite multiplier should be rejected")


def test_flat_symbols():
    """Test the symmetrizer symbols on a flat surface"""
    print("=" * 50)
    print("Testing Flat Symbols...")

    from evolution.state import SurfaceState
    from paralinear.symmetrization import symmetrization_symbols
    from spectral.grid import Grid2D

    grid = Grid2D.create(16)
    symbols = symmetrization_symbols(SurfaceState.zero(grid))
    xi = (1.0, 2.0)

    def close(symbol, value, tol=1e-13):
        return np.max(np.abs(symbol.evaluate(xi) - value)) <= tol * max(1.0, abs(value))

    assert close(symbols.lambda1, np.sqrt(5.0))
    assert close(symbols.lambda_full, np.sqrt(5.0))
    assert close(symbols.l_full, 5.0)
    assert close(symbols.p_full, 5.0 ** 0.25)
    assert close(symbols.q, 1.0)
    assert close(symbols.beta, 5.0 ** 4, tol=1e-12)
    print("✅ lambda = |xi|, l = |xi|^2, p = |xi|^(1/2), q = 1, beta = |xi|^(2 n0)")

    assert symbols.gamma.sup(xi) == 0.0
    assert symbols.lambda0.sup(xi) == 0.0
    print("✅ gamma and lambda0 vanish exactly")

    try:
        symmetrization_symbols(SurfaceState.zero(grid), amplitude_order=4)
    except ValueError:
        print("✅ amplitude_order above 3 rejected")
    else:
        raise AssertionError("amplitude_order is limited to 1..3")


def test_subprincipal_symbols():
    """Test the first-order sub-principal symbols"""
    print("=" * 50)
    print("Testing Sub-principal Symbols...")

    from evolution.state import SurfaceState
    from paralinear.symmetrization import gamma_linear_expansion, symmetrization_symbols
    from spectral.field import SpectralField
    from spectral.grid import Grid2D

    grid = Grid2D.create(16)
    eps = 0.01
    h = SpectralField.from_physical(grid, eps * (np.cos(grid.x) + 0.5 * np.sin(grid.y)))
    symbols = symmetrization_symbols(SurfaceState(h=h, psi=SpectralField.zeros(grid)))

    h_xx = -eps * np.cos(grid.x)
    h_yy = -0.5 * eps * np.sin(grid.y)
    unit = np.array([0.6, 0.8])
    along = unit[0] ** 2 * h_xx + unit[1] ** 2 * h_yy
    expected = 0.5 * (h_xx + h_yy - along)
    assert np.max(np.abs(symbols.lambda0.evaluate((3.0, 4.0)) - expected)) < 1e-8
    print("✅ lambda0 = (Lap h - xi^.grad(grad h . xi^)) / 2 at first order")

    gamma_sub = symbols.gamma_sub.evaluate((3.0, 4.0))
    linear = gamma_linear_expansion(h).evaluate((3.0, 4.0))
    assert np.max(np.abs(gamma_sub - linear)) < 1e-8
    assert np.max(np.abs(linear - 0.25 * np.sqrt(5.0) * (h_xx + h_yy - along))) < 1e-12
    print("✅ Order-1/2 part of Gamma matches its linear expansion")

    p_minus = symbols.p_minus_half.evaluate((3.0, 4.0))
    assert np.max(np.abs(p_minus + 0.25 / np.sqrt(5.0) * (h_xx + h_yy - along))) < 1e-8
    print("✅ p_minus_half = -(1/4)|xi|^(-1/2)(Lap h - xi^.grad(grad h . xi^))")


def test_gamma_checks():
    """Test the amplitude sweep of gamma"""
    print("=" * 50)
    print("Testing Gamma Checks...")

    from paralinear.symmetrization import gamma_checks
    from spectral.grid import Grid2D

    grid = Grid2D.create(16)
    h, _ = _profile(grid)

    checks = gamma_checks(h, [0.01, 0.005, 0.0025, 0.00125])
    assert checks.linear_fit.within(2.0, 0.1), checks.linear_fit.slope
    print(f"✅ gamma - eps * linear part scales like eps^{checks.linear_fit.slope:.3f}")

    assert checks.dominance_fit.within(1.0, 0.1), checks.dominance_fit.slope
    print(f"✅ sup|gamma| scales like eps^{checks.dominance_fit.slope:.3f}")

    assert checks.flat_gamma_sup == 0.0
    assert checks.closed_form_deviation > 0.0
    print(f"✅ Flat gamma is zero; closed form deviates by {checks.closed_form_deviation:.3f}")


def test_good_unknown():
    """Test B, V and omega"""
    print("=" * 50)
    print("Testing Good Unknown...")

    from dno.solver import DnoBackend
    from evolution.state import SurfaceState
    from paralinear.good_unknown import good_unknown
    from spectral.grid import Grid2D
    from utils.fitting import loglog_slope

    grid = Grid2D.create(16)
    backend = DnoBackend.taylor(2)

    flat = SurfaceState.from_physical(grid, np.zeros(grid.shape), np.cos(grid.x))
    good = good_unknown(flat, backend)
    assert np.max(np.abs(good.b.physical() - np.tanh(1.0) * np.cos(grid.x))) < 1e-13
    assert np.max(np.abs(good.v[0].physical() + np.sin(grid.x))) < 1e-13
    assert good.v[1].sup_norm() < 1e-13
    assert (good.omega - flat.psi).sup_norm() < 1e-14
    print("✅ Flat surface: B = G(0) psi, V = grad psi, omega = psi")

    zero = good_unknown(SurfaceState.zero(grid), backend)
    assert max(zero.b.sup_norm(), zero.v[0].sup_norm(), zero.v[1].sup_norm(), zero.omega.sup_norm()) == 0.0
    print("✅ Zero state gives zero good unknown")

    amplitudes = [0.04, 0.02, 0.01, 0.005]
    gaps = []
    for eps in amplitudes:
        state = _surface(grid, eps)
        gaps.append((good_unknown(state, backend).omega - state.psi).l2_norm())
    fit = loglog_slope(amplitudes, gaps)
    assert fit.within(2.0, 0.1), fit.slope
    print(f"✅ omega - psi scales like eps^{fit.slope:.3f}")


def test_paralinear_residuals():
    """Test that the paralinearization residuals are at least quadratic"""
    print("=" * 50)
    print("Testing Paralinear Residuals...")

    from dno.solver import DnoBackend
    from evolution.state import SurfaceState
    from paralinear.good_unknown import paralinear_residuals
    from spectral.grid import Grid2D
    from utils.fitting import loglog_slope

    grid = Grid2D.create(16)
    backend = DnoBackend.taylor(2)

    zero = paralinear_residuals(SurfaceState.zero(grid), backend)
    assert max(zero.as_dict().values()) == 0.0
    print("✅ Zero state has zero residuals")

    amplitudes = [0.04, 0.02, 0.01, 0.005]
    rows = [paralinear_residuals(_surface(grid, eps), backend).as_dict() for eps in amplitudes]
    for name in ("dno", "mean_curvature", "velocity"):
        fit = loglog_slope(amplitudes, [row[name] for row in rows])
        assert fit.slope >= 1.9, (name, fit.slope)
        print(f"✅ {name} residual scales like eps^{fit.slope:.3f}")


def test_symmetrized_energy():
    """Test the good variables and the symmetrized energy"""
    print("=" * 50)
    print("Testing Symmetrized Energy...")

    from dispersion.laws import Lambda
    from dno.solver import DnoBackend
    from evolution.state import SurfaceState
    from paralinear.energy import (
        linear_energy,
        symmetrized_energy,
        symmetrized_rhs,
    )
    from paralinear.good_unknown import good_unknown
    from paralinear.symmetrization import symmetrization_symbols
    from spectral.grid import Grid2D
    from spectral.multipliers import apply_radial_multiplier

    grid = Grid2D.create(16)
    backend = DnoBackend.taylor(2)

    flat = SurfaceState.from_physical(grid, np.zeros(grid.shape), np.cos(grid.x) + 0.3 * np.sin(2 * grid.y))
    energy = symmetrized_energy(flat, backend)
    assert energy.u1.sup_norm() == 0.0
    assert (energy.u2 - flat.psi).sup_norm() < 1e-14
    assert abs(energy.energy - linear_energy(flat)) <= 1e-12 * linear_energy(flat)
    print("✅ Flat surface: U1 = 0, U2 = psi, E equals the linear energy")

    assert symmetrized_energy(SurfaceState.zero(grid), backend).energy == 0.0
    print("✅ Zero state has zero energy")

    symbols = symmetrization_symbols(flat)
    good = good_unknown(flat, backend)
    du1, _ = symmetrized_rhs(flat, symbols, good)
    expected = apply_radial_multiplier(flat.psi, Lambda, zero_value=0.0)
    assert (du1 - expected).sup_norm() < 1e-13
    print("✅ d_t U1 = Lambda psi on a flat surface")

    gaps = []
    for eps in (5e-4, 1e-3):
        state = _surface(grid, eps)
        reference = linear_energy(state)
        gaps.append(abs(symmetrized_energy(state, backend).energy - reference) / reference)
    assert gaps[0] < 0.1 and gaps[0] < gaps[1], gaps
    print(f"✅ E stays comparable to the linear energy: relative gaps {gaps[0]:.2e}, {gaps[1]:.2e}")


def test_energy_drift():
    """Test that dE/dt is cubic in the amplitude"""
    print("=" * 50)
    print("Testing Energy Drift...")

    from dno.solver import DnoBackend
    from paralinear.energy import energy_drift_sweep
    from spectral.grid import Grid2D

    grid = Grid2D.create(16)
    h, psi = _profile(grid)
    sweep = energy_drift_sweep(h, psi, [3e-3, 6e-3, 1.2e-2], DnoBackend.taylor(2))
    assert sweep.fit.within(3.0, 0.3), sweep.fit.slope
    print(f"✅ |dE/dt| scales like eps^{sweep.fit.slope:.3f}")

    frame = sweep.to_frame()
    assert list(frame.columns) == ["amplitude", "energy", "abs_energy_rate", "relative_gap_to_linear_energy"]
    assert len(frame) == 3 and (frame["energy"] > 0).all()
    print("✅ Sweep frame has one row per amplitude")


def main():
    """Run all paralinear tests"""
    print("🔍 Starting Paralinear Tests...")

    tests = [
        ("Paraproduct", test_paraproduct),
        ("Symbol Algebra", test_symbol_algebra),
        ("Flat Symbols", test_flat_symbols),
        ("Sub-principal Symbols", test_subprincipal_symbols),
        ("Gamma Checks", test_gamma_checks),
        ("Good Unknown", test_good_unknown),
        ("Paralinear Residuals", test_paralinear_residuals),
        ("Symmetrized Energy", test_symmetrized_energy),
        ("Energy Drift", test_energy_drift),
    ]

    results = []

    for test_name, test_func in tests:
        try:
            test_func()
            results.append((test_name, True))
        except Exception as e:
            print(f"❌ {test_name} failed: {e}")
            results.append((test_name, False))

    print("=" * 50)
    print("📊 PARALINEAR TEST SUMMARY")
    print("=" * 50)

    passed = sum(1 for _, result in results if result)
    total = len(results)

    for test_name, result in results:
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"{status} - {test_name}")

    print("=" * 50)
    print(f"🎯 Results: {passed}/{total} tests passed ({passed/total*100:.1f}%)")

    if passed == total:
        print("🎉 All paralinear tests passed!")
    else:
        print("⚠️ Some paralinear tests failed. Check the errors above.")

    return passed == total


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
