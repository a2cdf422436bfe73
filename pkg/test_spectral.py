#!/usr/bin/env python3
"""
Spectral core tests: grids, fields, dyadic cutoffs, multipliers, convolutions
"""

import sys
import tempfile
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))


def _random_real_field(grid, seed=0):
    from spectral.field import SpectralField

    rng = np.random.default_rng(seed)
    return SpectralField.from_physical(grid, rng.standard_normal(grid.shape))


def test_grid_validation():
    """Test grid construction rules"""
    print("=" * 50)
    print("Testing Grid Validation...")

    from pydantic import ValidationError
    from spectral.grid import Grid2D

    grid = Grid2D.create(16)
    assert grid.shape == (16, 16)
    assert abs(grid.dk - 1.0) < 1e-15
    print(f"✅ Grid created: n={grid.n}, dk={grid.dk}, nyquist={grid.nyquist}")

    for bad in (48, 3):
        try:
            Grid2D.create(bad)
        except ValidationError:
            print(f"✅ Rejected n_points_per_axis={bad}")
        else:
            raise AssertionError(f"n_points_per_axis={bad} should be rejected")

    assert grid.lattice_offset((15, 1)) == (-1, 1)
    assert grid.radius[0, 0] == 0.0
    print("✅ Lattice offsets and radius OK")


def test_field_round_trip_and_plancherel():
    """Test physical/Fourier round trip, reality and Plancherel"""
    print("=" * 50)
    print("Testing Field Round Trip...")

    from spectral.field import SpectralField
    from spectral.grid import Grid2D

    grid = Grid2D.create(32, 5.0)
    rng = np.random.default_rng(1)
    values = rng.standard_normal(grid.shape)
    f = SpectralField.from_physical(grid, values)

    err = np.max(np.abs(f.physical() - values)) / np.max(np.abs(values))
    assert err < 1e-12
    print(f"✅ Round trip relative error: {err:.2e}")

    assert f.hermitian_defect() < 1e-13
    print(f"✅ Hermitian defect: {f.hermitian_defect():.2e}")

    direct = np.sqrt(np.sum(values ** 2) * grid.dx ** 2)
    assert abs(f.l2_norm() - direct) / direct < 1e-12
    print(f"✅ Plancherel: {f.l2_norm():.12f} vs {direct:.12f}")

    g = SpectralField.from_physical(Grid2D.create(16), np.cos(Grid2D.create(16).x))
    assert abs(g.l2_norm() - np.pi * np.sqrt(2.0)) < 1e-12
    print("✅ ||cos x1|| on [0, 2pi]^2 = pi * sqrt(2)")


def test_field_immutability():
    """Test that fields never alias caller arrays"""
    print("=" * 50)
    print("Testing Field Immutability...")

    from spectral.field import SpectralField
    from spectral.grid import Grid2D

    grid = Grid2D.create(8)
    c = np.zeros(grid.shape, dtype=complex)
    f = SpectralField(grid=grid, coefficients=c, is_real=False)
    c[1, 1] = 5.0
    assert f.coefficients[1, 1] == 0.0
    assert not f.coefficients.flags.writeable
    print("✅ Coefficients copied and read-only")

    try:
        f * f
    except TypeError:
        print("✅ Field-by-field '*' refused")
    else:
        raise AssertionError("field product through '*' should be refused")


def test_partition_of_unity():
    """Test telescoping dyadic partition at every lattice radius"""
    print("=" * 50)
    print("Testing Partition of Unity...")

    from spectral.grid import Grid2D
    from spectral.littlewood_paley import dyadic_range, psi_k, psi_le

    for n, box in ((16, 2 * np.pi), (64, 10 * np.pi), (32, 3.0)):
        grid = Grid2D.create(n, box)
        k_min, k_max = dyadic_range(grid)
        r = grid.radius[grid.radius > 0]
        total = psi_le(k_min - 1, r) + sum(psi_k(k, r) for k in range(k_min, k_max + 1))
        err = np.max(np.abs(total - 1.0))
        assert err < 1e-12
        print(f"✅ n={n}, L={box:.3f}: bands [{k_min}, {k_max}], max error {err:.1e}")


def test_bump_support():
    """Test the support window of each dyadic piece"""
    print("=" * 50)
    print("Testing Bump Support...")

    from spectral.littlewood_paley import bump, psi_k

    assert bump(1.25) == 1.0 and bump(1.5) == 0.0 and bump(-1.2) == 1.0
    x = np.linspace(0.0, 20.0, 20001)
    for k in (-1, 0, 1, 3):
        live = x[psi_k(k, x) != 0.0]
        assert live.min() >= 2.0 ** (k - 2) * 2.5 - 1e-12
        assert live.max() <= 3.0 * 2.0 ** (k - 1) + 1e-12
    print("✅ psi_k(x) != 0 implies 5/2 * 2^(k-2) <= x <= 3 * 2^(k-1)")


def test_lp_project():
    """Test Littlewood-Paley projections"""
    print("=" * 50)
    print("Testing LP Projection...")

    from spectral.field import SpectralField
    from spectral.grid import Grid2D
    from spectral.littlewood_paley import dyadic_range, lp_project, residual_low_band

    grid = Grid2D.create(16)
    f = SpectralField.from_physical(grid, np.cos(grid.x))
    band0 = lp_project(f, 0)
    assert np.max(np.abs(band0.coefficients - f.coefficients)) < 1e-15
    for k in (-1, 1):
        assert np.max(np.abs(lp_project(f, k).coefficients)) < 1e-15
    print("✅ |xi| = 1 mode carried entirely by band 0")

    zero = SpectralField.zeros(grid)
    assert np.max(np.abs(lp_project(zero, 0).coefficients)) == 0.0

    g = _random_real_field(grid, seed=3)
    k_min, k_max = dyadic_range(grid)
    total = residual_low_band(g).coefficients.copy()
    for k in range(k_min, k_max + 1):
        total = total + lp_project(g, k).coefficients
    err = np.max(np.abs(total - g.coefficients))
    assert err < 1e-12
    print(f"✅ Bands plus residual recover the field: {err:.1e}")

    outside = lp_project(g, k_max + 3)
    assert np.max(np.abs(outside.coefficients)) == 0.0
    print("✅ Out-of-range band returns zero")


def test_multipliers():
    """Test radial multipliers and derivative operators"""
    print("=" * 50)
    print("Testing Multipliers...")

    from spectral.field import SpectralField
    from spectral.grid import Grid2D
    from spectral.littlewood_paley import lp_project
    from spectral.multipliers import (
        apply_dtanh,
        apply_radial_multiplier,
        gradient,
        sample_radial,
    )
    from utils.errors import NonFiniteMultiplierError

    grid = Grid2D.create(16)
    f = SpectralField.from_physical(grid, np.cos(grid.x))
    g = apply_dtanh(f)
    assert g.is_real
    assert np.max(np.abs(g.physical() - np.tanh(1.0) * np.cos(grid.x))) < 1e-13
    print(f"✅ |D|tanh|D| cos x1 = {np.tanh(1.0):.6f} cos x1")

    ident = apply_radial_multiplier(f, lambda r: np.ones_like(r))
    assert np.max(np.abs(ident.coefficients - f.coefficients)) == 0.0

    values = sample_radial(grid, lambda r: np.sqrt(r / np.tanh(r)), zero_value=1.0)
    assert values[0, 0] == 1.0
    print("✅ Removable singularity takes the supplied zero value")

    try:
        sample_radial(grid, lambda r: 1.0 / r)
    except NonFiniteMultiplierError as e:
        assert tuple(e.lattice_point) == (0, 0)
        print(f"✅ Non-finite multiplier reported at {e.lattice_point}")
    else:
        raise AssertionError("1/r should fail at the zero mode")

    h = _random_real_field(grid, seed=4)
    a = lp_project(apply_dtanh(h), 1)
    b = apply_dtanh(lp_project(h, 1))
    assert np.max(np.abs(a.coefficients - b.coefficients)) < 1e-14
    print("✅ Projection commutes with multipliers")

    dx, dy = gradient(h)
    half = grid.n // 2
    assert np.all(dx.coefficients[half, :] == 0.0) and np.all(dy.coefficients[:, half] == 0.0)
    assert dx.hermitian_defect() < 1e-13
    print("✅ Nyquist modes zeroed in derivatives, reality preserved")


def test_theta_cutoff():
    """Test the low-high cutoff values"""
    print("=" * 50)
    print("Testing Theta Cutoff...")

    from spectral.littlewood_paley import theta_cutoff, theta_tilde

    assert theta_cutoff([0.0, 0.0], [1.0, 0.0]) == 1.0
    assert theta_cutoff([2.0 ** 11, 0.0], [1.0, 0.0]) == 0.0
    assert theta_cutoff([2.0 ** -10, 0.0], [1.0, 0.0]) == 1.0
    assert theta_cutoff([2.0 ** 2, 0.0], [1.0, 0.0]) == 0.0
    mid = float(theta_cutoff([1.0, 0.0], [0.0, 1.0]))
    assert 0.0 < mid < 1.0
    print(f"✅ theta(1, 1) = {mid:.6f}")

    assert theta_cutoff([1.0, 0.0], [0.0, 0.0]) == 0.0
    print("✅ theta(., 0) = 0")

    rng = np.random.default_rng(5)
    a = rng.standard_normal((2000, 2)) * np.exp(rng.uniform(-8, 8, (2000, 1)))
    b = rng.standard_normal((2000, 2))
    tt = theta_tilde(a, b)
    assert tt.min() >= 0.0 and tt.max() <= 1.0
    print(f"✅ theta_tilde in [{tt.min():.3f}, {tt.max():.3f}]")


def test_spatial_localize():
    """Test spatial localization partition"""
    print("=" * 50)
    print("Testing Spatial Localization...")

    from spectral.grid import Grid2D
    from spectral.littlewood_paley import (
        j_range,
        lp_project,
        lp_project_range,
        spatial_localize,
        spatial_localizer,
    )
    from utils.errors import ConfigurationError

    grid = Grid2D.create(32, 8 * np.pi)
    f = _random_real_field(grid, seed=6)
    for k in (0, -1):
        j0, j_max = j_range(grid, k)
        total = sum(spatial_localize(f, k, j).coefficients for j in range(j0, j_max + 1))
        target = lp_project_range(lp_project(f, k), k - 2, k + 2).coefficients
        err = np.max(np.abs(total - target))
        assert err < 1e-10
        print(f"✅ k={k}: j in [{j0}, {j_max}] sums back, error {err:.1e}")

    try:
        spatial_localizer(grid, -2, 1)
    except ConfigurationError:
        print("✅ j below admissible minimum rejected")
    else:
        raise AssertionError("j=1 should be rejected for k=-2")


def test_dense_convolution():
    """Test dense lattice convolution against the dealiased product"""
    print("=" * 50)
    print("Testing Dense Convolution...")

    from spectral.convolution import dense_bilinear, dense_multilinear, unit_weight
    from spectral.dealias import physical_eval
    from spectral.grid import Grid2D
    from utils.errors import SizeLimitError

    grid = Grid2D.create(16, 3.0)
    rng = np.random.default_rng(7)
    f = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    g = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)

    dense = dense_bilinear(grid, unit_weight, f, g)
    pseudo = physical_eval(grid, np.multiply, f, g, real=False)
    err = np.max(np.abs(dense - pseudo))
    assert err < 1e-12
    print(f"✅ Unit-weight convolution equals dealiased product: {err:.1e}")

    try:
        dense_multilinear(Grid2D.create(32), unit_weight, [f, f, f])
    except SizeLimitError as e:
        print(f"✅ Trilinear refused at N=32: {e.details}")
    else:
        raise AssertionError("trilinear dense path should refuse N=32")


def test_snapshot_round_trip():
    """Test field snapshot save/load"""
    print("=" * 50)
    print("Testing Snapshot Round Trip...")

    from spectral.field import SpectralField
    from spectral.grid import Grid2D
    from spectral.snapshot import load_snapshot, save_snapshot

    grid = Grid2D.create(16, 7.0)
    real_field = _random_real_field(grid, seed=8)
    rng = np.random.default_rng(9)
    complex_field = SpectralField.from_physical(
        grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    )
    with tempfile.TemporaryDirectory() as tmp:
        for name, field in (("real", real_field), ("complex", complex_field)):
            path = save_snapshot(field, Path(tmp) / f"{name}.npz")
            loaded = load_snapshot(path)
            assert loaded.grid.same_as(field.grid)
            assert loaded.is_real == field.is_real
            assert np.max(np.abs(loaded.coefficients - field.coefficients)) < 1e-15
            print(f"✅ {name} snapshot restored")


def main():
    """Run all spectral tests"""
    print("🔍 Starting Spectral Core Tests...")
    print("=" * 50)

    tests = [
        ("Grid Validation", test_grid_validation),
        ("Field Round Trip", test_field_round_trip_and_plancherel),
        ("Field Immutability", test_field_immutability),
        ("Partition of Unity", test_partition_of_unity),
        ("Bump Support", test_bump_support),
        ("LP Projection", test_lp_project),
        ("Multipliers", test_multipliers),
        ("Theta Cutoff", test_theta_cutoff),
        ("Spatial Localization", test_spatial_localize),
        ("Dense Convolution", test_dense_convolution),
        ("Snapshot Round Trip", test_snapshot_round_trip),
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
    print("📊 SPECTRAL TEST SUMMARY")
    print("=" * 50)

    passed = sum(1 for _, result in results if result)
    total = len(results)

    for test_name, result in results:
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"{status} - {test_name}")

    print("=" * 50)
    print(f"🎯 Results: {passed}/{total} tests passed ({passed/total*100:.1f}%)")

    if passed == total:
        print("🎉 All spectral tests passed!")
    else:
        print("⚠️ Some spectral tests failed. Check the errors above.")

    return passed == total


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
