#!/usr/bin/env python3
"""
Dirichlet-Neumann operator tests: strip transform, kernels, fixed point, backends, symbols
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))


def _surface(grid, eps):
    from spectral.field import SpectralField

    h = eps * (np.cos(grid.x) + 0.5 * np.sin(grid.y))
    psi = eps * (np.sin(grid.x) + 0.5 * np.cos(grid.x + grid.y))
    return SpectralField.from_physical(grid, h), SpectralField.from_physical(grid, psi)


def test_strip_quadrature():
    """Test z-nodes, weights and the differentiation matrix"""
    print("=" * 50)
    print("Testing Strip Quadrature...")

    from dno.strip import strip_quadrature
    from utils.errors import ConfigurationError

    q = strip_quadrature(8)
    assert q.points.shape == (10,)
    assert q.points[q.top_index] == 0.0 and q.points[q.bottom_index] == -1.0
    assert np.all((q.nodes > -1.0) & (q.nodes < 0.0))
    assert abs(q.integrate(q.nodes ** 2) - 1.0 / 3.0) < 1e-15
    print("✅ Nodes inside (-1, 0), int z^2 = 1/3")

    d = q.differentiation_matrix()
    z = q.points
    assert np.max(np.abs(d @ z ** 3 - 3.0 * z ** 2)) < 1e-11
    print("✅ Differentiation exact on cubics")

    try:
        strip_quadrature(1)
    except ConfigurationError:
        print("✅ A single node rejected")
    else:
        raise AssertionError("one quadrature node should be rejected")


def test_flat_strip_coefficients():
    """Test the strip coefficients and sources at h = 0"""
    print("=" * 50)
    print("Testing Flat Strip Coefficients...")

    from dno.strip import g_sources, linear_profile, strip_coefficients, strip_quadrature
    from spectral.field import SpectralField
    from spectral.grid import Grid2D

    grid = Grid2D.create(16)
    q = strip_quadrature(6)
    h = SpectralField.zeros(grid)
    coeffs = strip_coefficients(h, q)
    assert np.max(np.abs(coeffs.a_tilde[:, 0, 0] - 1.0)) < 1e-15
    assert np.max(np.abs(coeffs.a_tilde[:, 1:, :])) < 1e-15
    assert np.max(np.abs(coeffs.b_tilde)) == 0.0
    assert np.max(np.abs(coeffs.c_tilde_coef)) == 0.0
    print("✅ a = 1, b = 0, c = 0 on the flat strip")

    psi = SpectralField.from_physical(grid, np.cos(grid.x))
    g = g_sources(h, linear_profile(psi, q))
    assert np.max(np.abs(g.g1)) == 0.0 and np.max(np.abs(g.g2)) == 0.0 and np.max(np.abs(g.g3)) == 0.0
    print("✅ g1 = g2 = g3 = 0 on the flat strip")


def test_g1_linearization():
    """Test g1 against its part linear in h"""
    print("=" * 50)
    print("Testing g1 Linearization...")

    from dno.strip import g_sources, linear_profile, strip_quadrature
    from spectral.dealias import physical_eval
    from spectral.field import SpectralField
    from spectral.grid import Grid2D
    from spectral.multipliers import gradient_coefficients
    from utils.fitting import loglog_slope

    grid = Grid2D.create(16)
    q = strip_quadrature(6)
    z1 = q.points[:, None, None] + 1.0
    psi = SpectralField.from_physical(grid, np.cos(grid.x) + np.sin(grid.y))
    phi = linear_profile(psi, q)
    base = SpectralField.from_physical(grid, np.cos(grid.x + grid.y))

    amplitudes = [1e-3, 1e-2, 1e-1]
    residuals = []
    for eps in amplitudes:
        h = base * eps
        g1 = g_sources(h, phi).g1
        grad_h = gradient_coefficients(grid, h.coefficients)
        linear = physical_eval(
            grid,
            lambda hv, gh, gp, dz: 2.0 * hv * dz + z1 * (gh[0] * gp[0] + gh[1] * gp[1]),
            h.coefficients, grad_h, phi.gradient, phi.vertical,
        )
        residuals.append(float(np.max(np.abs(g1 - linear))))

    fit = loglog_slope(amplitudes, residuals)
    assert fit.slope > 1.9
    print(f"✅ Quadratic remainder slope {fit.slope:.3f}")


def test_kernels():
    """Test kernel zeros, the zero mode and quadrature refinement"""
    print("=" * 50)
    print("Testing Kernels...")

    from dno.kernels import kernel_apply, kernel_components
    from dno.strip import strip_quadrature
    from spectral.field import SpectralField
    from spectral.grid import Grid2D
    from utils.errors import ConfigurationError

    a, _ = kernel_components("K2", 0.0, np.linspace(-1, 0, 11), 3.0)
    assert np.max(np.abs(a)) == 0.0
    print("✅ K2 gradient component vanishes at z = 0")

    for which in ("K1", "K2", "K3"):
        a, b = kernel_components(which, -0.5, np.linspace(-1, 0, 11)[:, None], np.array([0.0, 1.0, 400.0]))
        assert np.all(np.isfinite(a)) and np.all(np.isfinite(b))
    print("✅ Kernels finite at |xi| = 400")

    grid = Grid2D.create(32)
    f = SpectralField.from_physical(grid, np.cos(3 * grid.x) + np.sin(2 * grid.x + 5 * grid.y) + 0.3)
    outputs = []
    for nz in (16, 32):
        nodes = strip_quadrature(nz).nodes
        source = [f * np.cos(2.0 * s) for s in nodes]
        outputs.append(kernel_apply("K3", source, -0.37, grid))
    (gx16, gy16), v16 = outputs[0]
    (gx32, gy32), v32 = outputs[1]
    change = max(
        float(np.max(np.abs(gx16.coefficients - gx32.coefficients))),
        float(np.max(np.abs(gy16.coefficients - gy32.coefficients))),
        float(np.max(np.abs(v16.coefficients - v32.coefficients))),
    )
    assert change < 1e-10
    print(f"✅ Node doubling changes K3 output by {change:.2e}")

    assert gx32.coefficients[0, 0] == 0.0 and gy32.coefficients[0, 0] == 0.0
    assert abs(v32.coefficients[0, 0]) > 0.0
    print("✅ Gradient component is zero at xi = 0")

    try:
        kernel_apply("K1", [f], -0.5, grid)
    except ConfigurationError:
        print("✅ Single-node source rejected")
    else:
        raise AssertionError("one node should be rejected")


def test_flat_dno():
    """Test G(0) cos x1 = tanh(1) cos x1 for every backend"""
    print("=" * 50)
    print("Testing Flat Surface DNO...")

    from dno.solver import BackendKind, DnoBackend, DnoSolver
    from spectral.field import SpectralField
    from spectral.grid import Grid2D

    grid = Grid2D.create(16)
    h = SpectralField.zeros(grid)
    psi = SpectralField.from_physical(grid, np.cos(grid.x))
    expected = 0.5 * np.tanh(1.0)

    for kind in BackendKind:
        solver = DnoSolver(DnoBackend(kind=kind, z_nodes=8))
        g = solver.apply(h, psi)
        assert abs(g.coefficients[1, 0] - expected) < 1e-14
        assert abs(g.coefficients[-1, 0] - expected) < 1e-14
        others = g.coefficients.copy()
        others[1, 0] = others[-1, 0] = 0.0
        assert np.max(np.abs(others)) < 1e-14
        print(f"✅ {kind.value}: coefficient {g.coefficients[1, 0].real:.6f} = tanh(1)/2")

    solver = DnoSolver(DnoBackend.fixed_point(z_nodes=8))
    solver.apply(h, psi)
    assert solver.last_report.iterations == 1
    print("✅ Fixed point returns the flat profile after one iteration")


def test_fixed_point_convergence():
    """Test contraction and residuals of the fixed-point solve"""
    print("=" * 50)
    print("Testing Fixed Point Convergence...")

    from dno.solver import fixed_point_solve
    from spectral.field import SpectralField
    from spectral.grid import Grid2D

    grid = Grid2D.create(64)
    eps = 1e-2
    h = SpectralField.from_physical(grid, eps * np.cos(grid.y))
    psi = SpectralField.from_physical(grid, np.cos(grid.x))
    phi, report = fixed_point_solve(h, psi, tol=1e-12, z_nodes=32)

    assert report.converged
    assert report.iterations <= 12
    assert report.contraction_factors[0] < 10 * eps
    print(f"✅ {report.iterations} iterations, first contraction factor {report.contraction_factors[0]:.3e}")

    assert report.laplace_residual <= 1e-8
    assert report.bottom_residual <= 1e-10
    assert report.top_residual <= 1e-12
    assert report.g1_bottom <= 1e-12
    print(f"✅ Laplace residual {report.laplace_residual:.2e}, bottom {report.bottom_residual:.2e}")

    data = report.to_dict()
    for key in ("iterations", "contraction_factors", "laplace_residual", "bottom_residual", "top_residual"):
        assert key in data
    print("✅ Report serialises")


def test_zero_mode():
    """Test that G(h)psi has zero mean"""
    print("=" * 50)
    print("Testing Zero Mode...")

    from dno.solver import BackendKind, DnoBackend, dno_apply
    from spectral.grid import Grid2D

    grid = Grid2D.create(32)
    h, psi = _surface(grid, 0.05)
    for kind in BackendKind:
        g = dno_apply(h, psi, DnoBackend(kind=kind, z_nodes=16))
        limit = 1e-12 if kind in (BackendKind.TAYLOR1, BackendKind.TAYLOR2) else 1e-10
        assert abs(g.mean) < limit
        print(f"✅ {kind.value}: |mean| = {abs(g.mean):.2e}")


def test_backend_consistency():
    """Test inter-order residual slopes in the amplitude"""
    print("=" * 50)
    print("Testing Backend Consistency...")

    from dno.solver import BackendKind, DnoBackend, dno_apply
    from spectral.grid import Grid2D
    from utils.fitting import loglog_slope

    grid = Grid2D.create(16)
    amplitudes = [5e-3, 1e-2, 2e-2, 4e-2]
    residuals = {1: [], 2: [], 3: []}
    for eps in amplitudes:
        h, psi = _surface(grid, eps)
        exact = dno_apply(h, psi, DnoBackend(kind=BackendKind.FIXED_POINT, z_nodes=16))
        for order in (1, 2, 3):
            backend = DnoBackend(kind=BackendKind(f"taylor{order}"), z_nodes=16)
            residuals[order].append((exact - dno_apply(h, psi, backend)).l2_norm())

    for order, target, tol in ((1, 2.0, 0.2), (2, 3.0, 0.2), (3, 4.0, 0.3)):
        fit = loglog_slope(amplitudes, residuals[order])
        assert fit.within(target, tol)
        print(f"✅ FixedPoint - Taylor{order}: slope {fit.slope:.3f} (expected {target})")


def test_taylor3_large_surface():
    """Test Taylor3 on surfaces well above the polarization amplitude"""
    print("=" * 50)
    print("Testing Taylor3 On Large Surfaces...")

    from dno.solver import BackendKind, DnoBackend, DnoSolver, dno_apply
    from spectral.field import SpectralField
    from spectral.grid import Grid2D

    grid = Grid2D.create(16)
    psi = SpectralField.from_physical(grid, np.cos(grid.x))
    solver = DnoSolver(DnoBackend(kind=BackendKind.TAYLOR3, z_nodes=16))

    def surface(a):
        return SpectralField.from_physical(grid, a * np.cos(grid.x))

    assert solver.polarization_step(surface(0.01)) == 1.0
    assert abs(solver.polarization_step(surface(0.2)) - 0.25) < 1e-12
    assert solver.polarization_step(SpectralField.zeros(grid)) == 0.0
    assert solver.cubic_term(SpectralField.zeros(grid), psi).l2_norm() == 0.0
    print("✅ Polarization step shrinks with the amplitude, flat surface gives zero")

    small = solver.cubic_term(surface(0.01), psi)
    large = solver.cubic_term(surface(0.2), psi)
    assert np.isfinite(large.l2_norm()) and large.l2_norm() > 0
    gap = (large - small * 400.0).l2_norm() / large.l2_norm()
    assert gap < 1e-2, gap
    print(f"✅ Cubic term at sup|h| = 0.2 is quadratic in h (relative gap {gap:.2e})")

    h = surface(0.27)
    result = solver.apply(h, psi)
    assert np.all(np.isfinite(result.coefficients))
    print("✅ sup|h| = 0.27 evaluates without leaving the admissible domain")

    h = surface(0.1)
    exact = dno_apply(h, psi, DnoBackend(kind=BackendKind.FIXED_POINT, z_nodes=16, max_iter=200))
    err2 = (exact - dno_apply(h, psi, DnoBackend(kind=BackendKind.TAYLOR2, z_nodes=16))).l2_norm()
    err3 = (exact - solver.apply(h, psi)).l2_norm()
    assert err3 < err2, (err3, err2)
    print(f"✅ At sup|h| = 0.1 Taylor3 error {err3:.2e} < Taylor2 error {err2:.2e}")


def test_failures():
    """Test degenerate domains and non-convergence"""
    print("=" * 50)
    print("Testing Failure Modes...")

    from dno.solver import fixed_point_solve
    from spectral.field import SpectralField
    from spectral.grid import Grid2D
    from utils.errors import DivergenceError, DomainDegeneracyError

    grid = Grid2D.create(16)
    psi = SpectralField.from_physical(grid, np.cos(grid.x))

    try:
        fixed_point_solve(SpectralField.from_physical(grid, 0.6 * np.cos(grid.y)), psi, z_nodes=8)
    except DomainDegeneracyError as e:
        assert e.exit_code == 3
        print(f"✅ Degenerate domain refused: {e.message}")
    else:
        raise AssertionError("amplitude 0.6 should be refused")

    try:
        fixed_point_solve(SpectralField.from_physical(grid, 0.1 * np.cos(grid.y)), psi, max_iter=2, z_nodes=8)
    except DivergenceError as e:
        assert len(e.factor_history) == 1
        print(f"✅ Non-convergence reported with factors {e.factor_history}")
    else:
        raise AssertionError("two iterations cannot reach tol 1e-13")


def test_special_symbols():
    """Test the scalar symbols c, d, e and c_tilde"""
    print("=" * 50)
    print("Testing Special Symbols...")

    from dno.symbols import special_symbols

    c1 = complex(special_symbols("c", 1.0))
    expected = -0.25j * (1.0 / np.sqrt(np.tanh(1.0))) * (1.0 - np.tanh(1.0) ** 2)
    assert abs(c1 - expected) < 1e-15
    assert abs(c1 - (-0.120318j)) < 1e-6
    print(f"✅ c(1) = {c1.imag:.6f} i")

    assert abs(complex(special_symbols("c", 40.0))) < 1e-25
    print("✅ c(r) -> 0 as r grows")

    d32 = float(special_symbols("d", 0.5, n_nodes=32))
    d64 = float(special_symbols("d", 0.5, n_nodes=64))
    assert abs(d32 - d64) < 1e-8
    print(f"✅ d(0.5) = {d32:.10f}, stable under node doubling")

    e = special_symbols("e", np.array([0.0, 0.5, 1.0, 3.0]))
    assert np.all(np.isfinite(e))
    assert e[0] == 0.0
    assert np.max(np.abs(e.real)) == 0.0
    print("✅ e(r) finite, e(0) = 0, purely imaginary")

    assert float(special_symbols("c_tilde", 0.0)) == -2.0
    try:
        special_symbols("c", -1.0)
    except ValueError:
        print("✅ Negative radius rejected")
    else:
        raise AssertionError("negative radius should be rejected")


def main():
    """Run all DNO tests"""
    print("🔍 Starting Dirichlet-Neumann Tests...")
    print("=" * 50)

    tests = [
        ("Strip Quadrature", test_strip_quadrature),
        ("Flat Strip Coefficients", test_flat_strip_coefficients),
        ("g1 Linearization", test_g1_linearization),
        ("Kernels", test_kernels),
        ("Flat Surface DNO", test_flat_dno),
        ("Fixed Point Convergence", test_fixed_point_convergence),
        ("Zero Mode", test_zero_mode),
        ("Backend Consistency", test_backend_consistency),
        ("Taylor3 Large Surface", test_taylor3_large_surface),
        ("Failure Modes", test_failures),
        ("Special Symbols", test_special_symbols),
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
    print("📊 DNO TEST SUMMARY")
    print("=" * 50)

    passed = sum(1 for _, result in results if result)
    total = len(results)

    for test_name, result in results:
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"{status} - {test_name}")

    print("=" * 50)
    print(f"🎯 Results: {passed}/{total} tests passed ({passed/total*100:.1f}%)")

    if passed == total:
        print("🎉 All DNO tests passed!")
    else:
        print("⚠️ Some DNO tests failed. Check the errors above.")

    return passed == total


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
