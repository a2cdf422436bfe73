#!/usr/bin/env python3
"""
Dispersion and phase tests: laws, phase identities, propagation, decay
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))


def test_dispersion_values():
    """Test scalar values and basic properties of the dispersion law"""
    print("=" * 50)
    print("Testing Dispersion Values...")

    from dispersion.laws import Lambda, Lambda_tilde, c_tilde, lam_tilde
    from spectral.grid import Grid2D

    assert Lambda(0.0) == 0.0
    assert abs(Lambda(1.0) - np.sqrt(np.tanh(1.0))) < 1e-15
    assert abs(Lambda(1.0) - 0.872694) < 1e-6
    print(f"✅ Lambda(1) = {float(Lambda(1.0)):.6f}")

    radii = np.unique(Grid2D.create(32, 7.0).radius)
    assert np.all(np.diff(Lambda(radii)) > 0)
    print("✅ Lambda strictly increasing on lattice radii")

    r = np.linspace(0.0, 10.0, 101)
    assert np.max(np.abs(lam_tilde(r ** 2) - Lambda_tilde(r))) < 1e-14
    assert Lambda_tilde(0.0) == 1.0
    print("✅ lam_tilde(r^2) = Lambda_tilde(r), Lambda_tilde(0) = 1")

    assert c_tilde(0.0) == -2.0
    print("✅ c_tilde(0) = -2")


def test_small_r_expansion():
    """Test |Lambda(r) - (r^2 - r^4/6)| = O(r^6)"""
    print("=" * 50)
    print("Testing Small-r Expansion...")

    from dispersion.laws import Lambda, small_r_expansion
    from utils.fitting import loglog_slope

    r = np.array([0.2, 0.1, 0.05, 0.025])
    err = np.abs(Lambda(r) - small_r_expansion(r))
    fit = loglog_slope(r, err)
    assert fit.slope >= 5.5
    constant = float(np.max(err / r ** 6))
    assert constant < 0.06
    print(f"✅ Slope {fit.slope:.3f}, frozen constant C = {constant:.5f}")


def test_lambda_derivatives():
    """Test closed-form lam', lam'' against finite differences"""
    print("=" * 50)
    print("Testing lam' and lam''...")

    from dispersion.laws import SERIES_THRESHOLD, lam, lam_double_prime, lam_prime

    for x in (1e-3, 0.05, 0.7, 2.0, 9.0):
        h = 1e-5 * x
        fd1 = (lam(x + h) - lam(x - h)) / (2 * h)
        fd2 = (lam_prime(x + h) - lam_prime(x - h)) / (2 * h)
        assert abs(fd1 - lam_prime(x)) <= 1e-8 * max(1.0, abs(fd1))
        assert abs(fd2 - lam_double_prime(x)) <= 1e-6 * max(1.0, abs(fd2))
    print("✅ Closed forms match finite differences")

    lo, hi = SERIES_THRESHOLD * (1 - 1e-9), SERIES_THRESHOLD * (1 + 1e-9)
    assert abs(lam_prime(lo) - lam_prime(hi)) < 1e-12
    assert abs(lam_double_prime(lo) - lam_double_prime(hi)) < 1e-10
    assert abs(lam_prime(0.0) - 1.0) < 1e-15
    print("✅ Series and closed forms agree at the switch point")


def test_phase_values():
    """Test phase values at reference points"""
    print("=" * 50)
    print("Testing Phase Values...")

    from dispersion.laws import Lambda
    from dispersion.phase import PhaseSignature, phase

    pp = PhaseSignature.parse("++")
    xi = np.array([1.0, 0.0])
    value = float(phase(pp, (xi, xi / 2)))
    assert abs(value - (Lambda(1.0) - 2 * Lambda(0.5))) < 1e-15
    assert abs(value - 0.39200) < 1e-4
    print(f"✅ Phi++(xi, xi/2) = {value:.5f}")

    pm = PhaseSignature.parse("+-")
    assert abs(float(phase(pm, (xi, np.zeros(2))))) < 1e-15
    print("✅ Phi+-(xi, 0) = 0")

    sigma = np.array([0.1, 0.0])
    ppp = PhaseSignature.parse("+,+,+")
    value = float(phase(ppp, (3 * sigma, 2 * sigma, sigma)))
    assert abs(value - (Lambda(0.3) - 3 * Lambda(0.1))) < 1e-15
    print(f"✅ Cubic phase at the S4 point: {value:.6f}")

    try:
        PhaseSignature(signs=(1, 2))
    except ValueError:
        print("✅ Invalid sign rejected")
    else:
        raise AssertionError("sign 2 should be rejected")


def test_phase_gradients():
    """Test closed-form phase gradients"""
    print("=" * 50)
    print("Testing Phase Gradients...")

    from dispersion.phase import PhaseSignature, finite_difference_gradient, phase_gradient
    from dispersion.resonance import phase_lower_bound

    rng = np.random.default_rng(11)
    for label in ("++", "+-", "-+", "--", "+-+", "---", "++-+"):
        sig = PhaseSignature.parse(label)
        freqs = [rng.uniform(-3, 3, (1000, 2)) for _ in range(sig.arity)]
        for slot in range(sig.arity):
            exact = phase_gradient(sig, freqs, slot)
            fd = finite_difference_gradient(sig, freqs, slot)
            err = np.linalg.norm(exact - fd, axis=-1)
            scale = np.maximum(1.0, np.linalg.norm(exact, axis=-1))
            assert np.max(err / scale) <= 1e-6
        print(f"✅ {label}: closed form matches finite differences")

    xi = np.array([1.3, 0.7])
    grad = phase_gradient(PhaseSignature.parse("++"), (xi, xi / 2), "eta")
    assert np.max(np.abs(grad)) < 1e-15
    print("✅ grad_eta Phi++(xi, xi/2) = 0")

    report = phase_lower_bound(PhaseSignature.parse("++"), samples=5000)
    assert report.constant > 0.0
    print(f"✅ Measured lower-bound constant: {report.constant:.3e}")


def test_omega_identity():
    """Test that rotations annihilate every phase"""
    print("=" * 50)
    print("Testing Omega Identity...")

    from dispersion.phase import PhaseSignature, phase_vectorfield_Omega, vector_field_on_phase

    rng = np.random.default_rng(12)
    for label in ("++", "+-", "-+", "--"):
        sig = PhaseSignature.parse(label)
        xi = rng.uniform(-4, 4, (10_000, 2))
        eta = rng.uniform(-4, 4, (10_000, 2))
        value = phase_vectorfield_Omega(sig, xi, eta)
        assert np.max(np.abs(value)) < 1e-12
        parallel = phase_vectorfield_Omega(sig, xi, 0.5 * xi)
        assert np.max(np.abs(parallel)) < 1e-12
    print("✅ Quadratic phases: max |(Omega_xi + Omega_eta) Phi| < 1e-12")

    sig3 = PhaseSignature.parse("+-+")
    freqs = [rng.uniform(-2, 2, (1000, 2)) for _ in range(3)]
    assert np.max(np.abs(vector_field_on_phase(sig3, freqs, "Omega"))) < 1e-12
    print("✅ Cubic phase annihilated as well")


def test_l_identity():
    """Test the scaling identity and its remainder order"""
    print("=" * 50)
    print("Testing L Identity...")

    from dispersion.laws import radial_scaling
    from dispersion.phase import PhaseSignature, phase_vectorfield_L
    from utils.fitting import loglog_slope

    rng = np.random.default_rng(13)
    for label in ("++", "+-", "-+", "--"):
        sig = PhaseSignature.parse(label)
        mu, nu = sig.signs
        xi = rng.uniform(-3, 3, (200, 2))
        eta = rng.uniform(-3, 3, (200, 2))
        value, _ = phase_vectorfield_L(sig, xi, eta)
        expected = (
            -radial_scaling(np.linalg.norm(xi, axis=-1))
            + mu * radial_scaling(np.linalg.norm(xi - eta, axis=-1))
            + nu * radial_scaling(np.linalg.norm(eta, axis=-1))
        )
        assert np.max(np.abs(value - expected)) < 1e-12
    print("✅ (L_xi + L_eta) Phi = -D(xi) + mu D(xi - eta) + nu D(eta)")

    value, remainder = phase_vectorfield_L(PhaseSignature.parse("++"), np.array([1.0, 0.0]), np.zeros(2))
    assert abs(value) < 1e-15 and abs(remainder) < 1e-15
    print("✅ eta = 0 gives zero value and remainder")

    scales = np.array([1e-2, 1e-3, 1e-4])
    direction = np.array([np.cos(0.7), np.sin(0.7)])
    for label in ("++", "+-"):
        sig = PhaseSignature.parse(label)
        xi = np.array([1.0, 0.0])
        rem = [abs(float(phase_vectorfield_L(sig, xi, s * direction)[1])) for s in scales]
        fit = loglog_slope(scales, rem)
        assert fit.within(2.0, 0.1)
        print(f"✅ {label}, |eta| -> 0: remainder slope {fit.slope:.3f}")

    other = np.array([np.cos(0.4), np.sin(0.4)])
    for label in ("+-", "-+"):
        sig = PhaseSignature.parse(label)
        eta = np.array([0.0, 1.0])
        rem = [abs(float(phase_vectorfield_L(sig, s * other, eta)[1])) for s in scales]
        fit = loglog_slope(scales, rem)
        assert fit.within(2.0, 0.1)
        print(f"✅ {label}, |xi| -> 0: remainder slope {fit.slope:.3f}")


def test_linear_propagation():
    """Test unitarity and the group law of e^{itLambda}"""
    print("=" * 50)
    print("Testing Linear Propagation...")

    from dispersion.propagation import linear_propagate
    from spectral.field import SpectralField
    from spectral.grid import Grid2D

    grid = Grid2D.create(32, 9.0)
    rng = np.random.default_rng(14)
    f = SpectralField.from_physical(grid, rng.standard_normal(grid.shape))

    assert linear_propagate(f, 0.0) is f
    g = linear_propagate(f, 37.5)
    assert abs(g.l2_norm() - f.l2_norm()) / f.l2_norm() < 1e-12
    print("✅ Unitary at t = 37.5")

    back = linear_propagate(g, 37.5, direction=-1)
    assert np.max(np.abs(back.coefficients - f.coefficients)) < 1e-12
    print("✅ Group law: propagate(t) then propagate(-t) is the identity")


def test_resonance_locus():
    """Test space-resonance points of cubic phases"""
    print("=" * 50)
    print("Testing Resonance Locus...")

    from dispersion.laws import Lambda
    from dispersion.phase import PhaseSignature
    from dispersion.resonance import resonance_locus

    xi = np.array([0.3, 0.0])
    point = resonance_locus(PhaseSignature.parse("+--"), xi)
    assert point.resonance_class == "S1"
    assert np.allclose(point.eta, 2 * xi) and np.allclose(point.sigma, xi)
    assert np.allclose(point.inputs[0], -xi) and np.allclose(point.inputs[1], xi)
    print(f"✅ S1 locus: eta = 2 xi, sigma = xi, inputs (-xi, xi, xi)")

    point = resonance_locus(PhaseSignature.parse("+++"), xi)
    assert point.resonance_class == "S4"
    assert np.allclose(point.eta, 2 * xi / 3) and np.allclose(point.sigma, xi / 3)
    expected = float(Lambda(0.3) - 3 * Lambda(0.1))
    assert abs(point.phase_value - expected) < 1e-15 and point.phase_value != 0.0
    print(f"✅ S4 locus phase {point.phase_value:.6f} (space resonant, not time resonant)")

    for label in ("+--", "+-+", "++-", "+++", "-++", "---"):
        point = resonance_locus(PhaseSignature.parse(label), np.array([0.7, -0.4]))
        assert point.gradient_norm < 1e-12
    print("✅ Both phase gradients vanish on every locus")


def test_decay_probe():
    """Test sup-norm decay of a low-band ring"""
    print("=" * 50)
    print("Testing Decay Probe...")

    from dispersion.propagation import decay_probe, gaussian_ring, max_admissible_time
    from spectral.dealias import refined_physical
    from spectral.grid import Grid2D
    from spectral.littlewood_paley import lp_project
    from utils.errors import ConeViolationError

    grid = Grid2D.create(512, 1200 * np.pi)
    f = gaussian_ring(grid, center=0.25, width=0.05)
    times = [0.0, 600.0, 900.0, 1200.0, 1500.0, 1800.0]
    result = decay_probe(f, -2, times, theta=1.0)

    start = float(np.max(np.abs(refined_physical(lp_project(f, -2).coefficients, 2))))
    assert abs(result.sup_norms[0] - start) < 1e-14 * start
    print(f"✅ t = 0 row equals sup |P_k f| = {start:.6e}")

    assert result.expected_slope == -1.0
    assert result.fit.within(-1.0, 0.15)
    print(f"✅ Decay slope {result.fit.slope:.3f} (expected -1.0)")

    frame = result.to_frame()
    assert list(frame.columns) == ["t", "sup_norm", "band", "theta"]

    try:
        decay_probe(f, -2, [0.0, 2.0 * max_admissible_time(grid, -2)])
    except ConeViolationError as e:
        assert abs(e.max_admissible_time - max_admissible_time(grid, -2)) < 1e-9
        print(f"✅ Cone guard refused, max admissible time {e.max_admissible_time:.1f}")
    else:
        raise AssertionError("cone guard should refuse")


def main():
    """Run all dispersion tests"""
    print("🔍 Starting Dispersion Tests...")
    print("=" * 50)

    tests = [
        ("Dispersion Values", test_dispersion_values),
        ("Small-r Expansion", test_small_r_expansion),
        ("Lambda Derivatives", test_lambda_derivatives),
        ("Phase Values", test_phase_values),
        ("Phase Gradients", test_phase_gradients),
        ("Omega Identity", test_omega_identity),
        ("L Identity", test_l_identity),
        ("Linear Propagation", test_linear_propagation),
        ("Resonance Locus", test_resonance_locus),
        ("Decay Probe", test_decay_probe),
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
    print("📊 DISPERSION TEST SUMMARY")
    print("=" * 50)

    passed = sum(1 for _, result in results if result)
    total = len(results)

    for test_name, result in results:
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"{status} - {test_name}")

    print("=" * 50)
    print(f"🎯 Results: {passed}/{total} tests passed ({passed/total*100:.1f}%)")

    if passed == total:
        print("🎉 All dispersion tests passed!")
    else:
        print("⚠️ Some dispersion tests failed. Check the errors above.")

    return passed == total


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
