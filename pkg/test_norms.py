#!/usr/bin/env python3
"""
Norm tests: W and Z1 dyadic norms, the vector fields L and Omega, the Z2 norm
and S-infinity estimates of multilinear symbols
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))


def _gaussian(grid, width=1.0, center=(0.0, 0.0), anisotropy=1.0):
    from spectral.field import SpectralField

    x = grid.x - center[0]
    y = grid.y - center[1]
    return SpectralField.from_physical(grid, np.exp(-(x ** 2 + anisotropy * y ** 2) / (4.0 * width ** 2)))


def _relative(a, b):
    return abs(a - b) / max(abs(b), np.finfo(float).tiny)


def test_w_norm():
    """Test the W norm on single modes and its norm properties"""
    print("=" * 50)
    print("Testing W Norm...")

    from norms.weighted import w_norm
    from spectral.field import SpectralField
    from spectral.grid import Grid2D
    from utils.errors import ConfigurationError

    grid = Grid2D.create(32)
    assert w_norm(SpectralField.zeros(grid), 6.0, 1.1) == 0.0
    print("✅ Zero field has zero norm")

    amplitude = 0.7
    mode = SpectralField.from_physical(grid, amplitude * np.cos(grid.x))
    value = w_norm(mode, 6.0, 1.1)
    assert abs(value - 2.0 * amplitude) < 1e-12, value
    print(f"✅ Single mode at |xi|=1 carried by band 0 only ({value:.6f})")

    try:
        w_norm(mode, 1.0, 1.0)
    except ConfigurationError:
        print("✅ b >= gamma rejected")
    else:
        raise AssertionError("b >= gamma should be rejected")

    rng = np.random.default_rng(7)
    f = SpectralField.from_physical(grid, rng.standard_normal(grid.shape))
    g = SpectralField.from_physical(grid, rng.standard_normal(grid.shape))
    assert _relative(w_norm(f * -2.5, 6.0, 1.1), 2.5 * w_norm(f, 6.0, 1.1)) < 1e-12
    assert w_norm(f + g, 6.0, 1.1) <= (w_norm(f, 6.0, 1.1) + w_norm(g, 6.0, 1.1)) * (1.0 + 1e-12)
    print("✅ Homogeneity and triangle inequality")


def test_z1_norm():
    """Test the Z1 table against a brute-force summation"""
    print("=" * 50)
    print("Testing Z1 Norm...")

    from norms.weighted import z1_norm, z1_norm_direct
    from spectral.field import SpectralField
    from spectral.grid import Grid2D
    from spectral.littlewood_paley import dyadic_range

    grid = Grid2D.create(256, 50.0 * np.pi)
    assert z1_norm(SpectralField.zeros(grid)).total == 0.0
    print("✅ Zero field has zero norm")

    g = _gaussian(grid)
    report = z1_norm(g)
    direct = z1_norm_direct(g)
    assert _relative(report.total, direct.total) < 1e-8, (report.total, direct.total)
    print(f"✅ Batched and brute-force totals agree ({report.total:.6e})")

    assert abs(report.total - sum(b.value for b in report.bands)) <= 1e-12 * report.total
    assert report.k_range == dyadic_range(grid)
    assert set(report.j_ranges) == set(range(report.k_range[0], report.k_range[1] + 1))
    frame = report.to_frame()
    assert list(frame.columns) == ["k", "j", "value"] and len(frame) == len(report.bands)
    print("✅ Report states its ranges and sums its table")

    assert _relative(z1_norm(g * 3.0).total, 3.0 * report.total) < 1e-12
    other = _gaussian(grid, width=0.7, center=(3.0, -2.0))
    assert z1_norm(g + other).total <= (report.total + z1_norm(other).total) * (1.0 + 1e-12)
    print("✅ Homogeneity and triangle inequality")


def test_z1_linear_profile():
    """Test that the profile of a linear solution has a constant Z1 norm"""
    print("=" * 50)
    print("Testing Z1 Linear Profile...")

    from dispersion.propagation import linear_propagate
    from norms.weighted import z1_norm
    from spectral.grid import Grid2D

    grid = Grid2D.create(64, 50.0 * np.pi)
    v0 = _gaussian(grid, width=2.0)
    reference = z1_norm(v0).total
    for t in (0.5, 2.0, 7.5):
        solution = linear_propagate(v0, t, -1)
        profile = linear_propagate(solution, t, +1)
        assert _relative(z1_norm(profile).total, reference) < 1e-12
    print("✅ Z1 of the profile constant in time")


def test_vector_fields():
    """Test L and Omega on radial and symbolic test fields"""
    print("=" * 50)
    print("Testing Vector Fields...")

    from norms.vector_fields import check_localization, localization_defect, vector_field
    from spectral.field import SpectralField
    from spectral.grid import Grid2D

    grid = Grid2D.create(256, 50.0 * np.pi)
    r2 = grid.x ** 2 + grid.y ** 2
    g = SpectralField.from_physical(grid, np.exp(-r2 / 4.0) / (4.0 * np.pi))

    rotation = vector_field(g, "Omega")
    assert rotation.sup_norm() < 1e-10, rotation.sup_norm()
    print("✅ Omega annihilates a radial field")

    scaling = vector_field(g, "L")
    expected = 2.0 * grid.radius ** 2 * np.exp(-grid.radius ** 2)
    error = float(np.max(np.abs(grid.box_length ** 2 * scaling.coefficients - expected)))
    assert error < 1e-8, error
    print(f"✅ L matches -xi.grad_xi of exp(-|xi|^2) (error {error:.2e})")

    other = _gaussian(grid, width=1.5, center=(2.0, 1.0), anisotropy=2.0)
    combined = vector_field(g * 2.0 + other * -0.5, "L")
    separate = vector_field(g, "L") * 2.0 + vector_field(other, "L") * -0.5
    assert (combined - separate).l2_norm() <= 1e-12 * separate.l2_norm()
    print("✅ Linearity")

    assert localization_defect(g) < 1e-8 and check_localization(g) is None
    small = Grid2D.create(32)
    wide = SpectralField.from_physical(small, np.cos(small.x))
    assert check_localization(wide, "wave") is not None
    print("✅ Localization guard flags a field filling the box")


def test_fourier_side_vector_fields():
    """Test the physical and Fourier-side vector fields against each other"""
    print("=" * 50)
    print("Testing Fourier Side Vector Fields...")

    from norms.vector_fields import fourier_vector_field, vector_field
    from spectral.grid import Grid2D

    grid = Grid2D.create(512, 50.0 * np.pi)
    g = _gaussian(grid, width=1.0, center=(1.0, 0.0), anisotropy=2.0)
    for which in ("L", "Omega"):
        physical = vector_field(g, which)
        fourier = fourier_vector_field(g, which)
        gap = (physical - fourier).l2_norm() / physical.l2_norm()
        assert gap < 1e-6, (which, gap)
        print(f"✅ {which}: paths agree (relative gap {gap:.2e})")


def test_z2_norm():
    """Test the Z2 norm on radial fields and against its Fourier-side form"""
    print("=" * 50)
    print("Testing Z2 Norm...")

    from norms.vector_fields import vector_field, z2_norm, z2_terms
    from spectral.field import SpectralField
    from spectral.grid import Grid2D

    grid = Grid2D.create(512, 50.0 * np.pi)
    assert z2_norm(SpectralField.zeros(grid)) == 0.0
    print("✅ Zero field has zero norm")

    radial = _gaussian(grid, width=1.0)
    terms = z2_terms(radial)
    for name, value in terms.parts.items():
        if "Omega" in name:
            assert value < 1e-10 * terms.total, (name, value)
    lg = vector_field(radial, "L")
    reduced = vector_field(lg, "L").l2_norm() + lg.l2_norm()
    assert _relative(terms.total, reduced) < 1e-9
    assert not terms.warnings
    print(f"✅ Radial field: only L terms survive ({terms.total:.6e})")

    g = _gaussian(grid, width=1.0, center=(1.0, 0.0), anisotropy=2.0)
    physical = z2_terms(g)
    fourier = z2_terms(g, fourier_side=True)
    assert set(physical.parts) == {"L", "Omega", "LL", "LOmega", "OmegaL", "OmegaOmega"}
    assert _relative(fourier.total, physical.total) < 1e-6, (fourier.total, physical.total)
    print(f"✅ Fourier-side form agrees ({physical.total:.6e})")

    assert _relative(z2_norm(g * -1.5), 1.5 * physical.total) < 1e-12
    assert z2_norm(g + radial) <= (physical.total + terms.total) * (1.0 + 1e-12)
    print("✅ Homogeneity and triangle inequality")


def test_s_infty_guards():
    """Test the resolution and size guards of the band sampler"""
    print("=" * 50)
    print("Testing S-Infinity Guards...")

    from norms.s_infty import s_infty_estimate
    from utils.errors import ResolutionError, SizeLimitError

    def constant(*w):
        return np.ones(np.broadcast_shapes(*(v.shape[:-1] for v in w)))

    try:
        s_infty_estimate(constant, [0, 0], samples=8)
    except ResolutionError:
        print("✅ Box that stops short of the band support refused")
    else:
        raise AssertionError("a box smaller than the band should be refused")

    try:
        s_infty_estimate(constant, [0, 0], samples=32, spacing_factor=0.5)
    except ResolutionError:
        print("✅ Six lattice points across the band refused")
    else:
        raise AssertionError("an under-resolved band should be refused")

    try:
        s_infty_estimate(constant, [0, 0], samples=128)
    except SizeLimitError:
        print("✅ 128^4 samples refused")
    else:
        raise AssertionError("an oversized sample should be refused")


def test_s_infty_constant_symbol():
    """Test the estimate of a band cutoff under refinement and as a tensor product"""
    print("=" * 50)
    print("Testing S-Infinity Constant Symbol...")

    from evolution.bilinear import BilinearSymbol
    from norms.s_infty import sample_band_symbol, s_infty_estimate

    def one(w):
        return np.ones(w.shape[:-1])

    coarse = s_infty_estimate(one, [0], samples=256, with_derivatives=False)
    fine = s_infty_estimate(one, [0], samples=512, with_derivatives=False)
    assert _relative(coarse.estimate, fine.estimate) < 0.05, (coarse.estimate, fine.estimate)
    print(f"✅ Band 0 cutoff stable under refinement ({coarse.estimate:.4f} vs {fine.estimate:.4f})")

    coarse_values = sample_band_symbol(one, [0], 32)
    fine_values = sample_band_symbol(one, [0], 64)
    assert np.count_nonzero(coarse_values) == np.count_nonzero(fine_values)
    assert np.array_equal(coarse_values[8:24, 8:24], fine_values[24:40, 24:40])
    print("✅ Both resolutions sample the same frequency lattice")

    single = s_infty_estimate(one, [0], samples=32, with_derivatives=False)
    pair = s_infty_estimate(BilinearSymbol.constant().evaluate, [0, 0], samples=32)
    assert _relative(pair.estimate, single.estimate ** 2) < 1e-9
    print("✅ Two-input estimate is the square of the one-input estimate")

    assert pair.estimate >= pair.sup * (1.0 - 1e-12)
    assert pair.derivative_bound >= pair.sup
    print("✅ Estimate dominates the symbol's sup")


def test_s_infty_quadratic_symbol():
    """Test the quadratic symbol's band constant under refinement"""
    print("=" * 50)
    print("Testing S-Infinity Quadratic Symbol...")

    from evolution.rhs import quadratic_symbol
    from norms.s_infty import s_infty_estimate

    sym = quadratic_symbol(1, 1)
    coarse = s_infty_estimate(sym.evaluate, [0, 0], samples=32, output_band=0, with_derivatives=False)
    fine = s_infty_estimate(sym.evaluate, [0, 0], samples=64, output_band=0, with_derivatives=False)
    assert np.isfinite(coarse.estimate) and coarse.estimate >= coarse.sup * (1.0 - 1e-12)
    assert coarse.sup == fine.sup
    assert _relative(coarse.constant(1.0), fine.constant(1.0)) <= 0.1
    print(f"✅ q_++ on bands (0, 0, 0): C = {fine.constant(1.0):.4f} (coarse {coarse.constant(1.0):.4f})")


def test_young_check():
    """Test the lattice Young inequality through the bilinear path"""
    print("=" * 50)
    print("Testing Young Check...")

    from evolution.bilinear import BilinearSymbol
    from evolution.rhs import quadratic_symbol
    from norms.s_infty import lattice_s_infty, young_check
    from spectral.grid import Grid2D
    from utils.errors import SizeLimitError

    grid = Grid2D.create(8)

    def twisted(a, b):
        return np.exp(-0.1 * np.sum(a * a, axis=-1)) * np.cos(b[..., 0] + 0.5 * a[..., 1])

    symbols = [
        BilinearSymbol.constant(),
        quadratic_symbol(1, -1),
        BilinearSymbol.from_function(twisted, name="twisted"),
    ]
    result = young_check(symbols, grid, trials=100, seed=11)
    assert result.passed and result.trials == 100 and result.worst_ratio <= 1.0 + 1e-10
    print(f"✅ No violations in 100 trials (worst ratio {result.worst_ratio:.3f})")

    try:
        lattice_s_infty(symbols[0], Grid2D.create(64))
    except SizeLimitError:
        print("✅ Lattice estimate refused at N=64")
    else:
        raise AssertionError("lattice S-infinity should be refused at N=64")


def main():
    """Run all norm tests"""
    print("🔍 Starting Norm Tests...")
    print("=" * 50)

    tests = [
        ("W Norm", test_w_norm),
        ("Z1 Norm", test_z1_norm),
        ("Z1 Linear Profile", test_z1_linear_profile),
        ("Vector Fields", test_vector_fields),
        ("Fourier Side Vector Fields", test_fourier_side_vector_fields),
        ("Z2 Norm", test_z2_norm),
        ("S-Infinity Guards", test_s_infty_guards),
        ("S-Infinity Constant Symbol", test_s_infty_constant_symbol),
        ("S-Infinity Quadratic Symbol", test_s_infty_quadratic_symbol),
        ("Young Check", test_young_check),
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
    print("📊 NORM TEST SUMMARY")
    print("=" * 50)

    passed = sum(1 for _, result in results if result)
    total = len(results)

    for test_name, result in results:
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"{status} - {test_name}")

    print("=" * 50)
    print(f"🎯 Results: {passed}/{total} tests passed ({passed/total*100:.1f}%)")

    if passed == total:
        print("🎉 All norm tests passed!")
    else:
        print("⚠️ Some norm tests failed. Check the errors above.")

    return passed == total


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
