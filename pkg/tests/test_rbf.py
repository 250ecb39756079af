"""Gaussian basis layer tests: worked activations, bounds, center init, and
the analytic-vs-finite-difference gradient cross-check."""

import math

import numpy as np
import pytest

from skidsim.rbf import RbfNetwork, basis_eval, basis_gradient, basis_norm, init_centers


class _HalfRng:
    """Stub rng whose every uniform draw is 0.5."""

    def random(self, shape):
        return np.full(shape, 0.5)


def _net(centers, width=1.0):
    centers = np.asarray(centers, dtype=float)
    return RbfNetwork(centers=centers, widths=np.full(centers.shape[0], width))


def test_activation_is_one_at_its_center():
    net = _net([[0.4, -0.2]])
    assert basis_eval(net, [0.4, -0.2])[0] == pytest.approx(1.0)


def test_activation_at_one_width_distance_is_inverse_e():
    # ||V - eps|| = alpha  =>  exp(-alpha^2/alpha^2) = e^-1
    net = _net([[0.0, 0.0]], width=0.5)
    assert basis_eval(net, [0.5, 0.0])[0] == pytest.approx(math.exp(-1.0), rel=1e-12)


def test_three_unit_example():
    # centers (0,0), (1,0), (0,1), alpha = 1, evaluated at the origin:
    # activations (1, e^-1, e^-1), norm sqrt(1 + 2 e^-2) = 1.1284...
    net = _net([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    phi = basis_eval(net, [0.0, 0.0])
    np.testing.assert_allclose(phi, [1.0, math.exp(-1), math.exp(-1)], rtol=1e-12)
    expected = math.sqrt(1.0 + 2.0 * math.exp(-2.0))
    assert basis_norm(net, [0.0, 0.0]) == pytest.approx(expected, rel=1e-12)
    assert basis_norm(net, [0.0, 0.0]) == pytest.approx(1.1272, abs=1e-4)


def test_single_unit_norm_at_center():
    net = _net([[0.1, 0.2]], width=0.3)
    assert basis_norm(net, [0.1, 0.2]) == pytest.approx(1.0)


def test_activations_bounded_and_norm_below_sqrt_l():
    # widths kept >= 0.25 so the exponent stays above the IEEE underflow
    # floor and strict positivity is actually representable
    rng = np.random.default_rng(31)
    for _ in range(100):
        count = int(rng.integers(1, 12))
        net = init_centers(count, rng, scale=float(rng.uniform(0.5, 2.0)),
                           width=float(rng.uniform(0.25, 1.0)))
        v = rng.uniform(-2, 2, size=2)
        phi = basis_eval(net, v)
        assert np.all(phi > 0.0)
        assert np.all(phi <= 1.0)
        assert basis_norm(net, v) <= math.sqrt(count) + 1e-12


def test_activation_radially_monotone():
    rng = np.random.default_rng(37)
    net = _net([[0.3, -0.1]], width=0.4)
    center = np.array([0.3, -0.1])
    for _ in range(100):
        ang = rng.uniform(0, 2 * math.pi)
        u = np.array([math.cos(ang), math.sin(ang)])
        r1, r2 = sorted(rng.uniform(0.01, 2.0, size=2))
        if r1 == r2:
            continue
        near = basis_eval(net, center + r1 * u)[0]
        far = basis_eval(net, center + r2 * u)[0]
        assert near > far


def test_init_centers_stub_rng_gives_origin():
    # 2*0.5 - 1 = 0 on both coordinates
    net = init_centers(1, _HalfRng())
    np.testing.assert_allclose(net.centers, [[0.0, 0.0]])


def test_init_centers_counts_and_bounds():
    rng = np.random.default_rng(101)
    net9 = init_centers(9, rng)
    assert net9.centers.shape == (9, 2)
    assert np.all(net9.centers >= -1.0) and np.all(net9.centers <= 1.0)
    net8 = init_centers(8, rng, scale=1.0, width=0.15)
    assert net8.centers.shape == (8, 2)
    assert np.all(np.abs(net8.centers) <= 1.0)
    assert np.all(net8.widths == 0.15)


def test_init_centers_scale_and_determinism():
    a = init_centers(6, np.random.default_rng(5), scale=2.5)
    b = init_centers(6, np.random.default_rng(5), scale=2.5)
    np.testing.assert_array_equal(a.centers, b.centers)
    assert np.all(np.abs(a.centers) <= 2.5)
    c = init_centers(6, np.random.default_rng(6), scale=2.5)
    assert not np.array_equal(a.centers, c.centers)


def test_gradient_matches_finite_difference():
    # central difference at h = 1e-5 against the analytic gradient,
    # relative error below 1e-6 on the stacked (L, 2) gradient
    rng = np.random.default_rng(53)
    h = 1e-5
    for _ in range(20):
        net = init_centers(int(rng.integers(1, 10)), rng,
                           scale=1.0, width=float(rng.uniform(0.3, 1.0)))
        v = rng.uniform(-1.0, 1.0, size=2)
        analytic = basis_gradient(net, v)
        fd = np.empty_like(analytic)
        for j in range(2):
            dv = np.zeros(2)
            dv[j] = h
            fd[:, j] = (basis_eval(net, v + dv) - basis_eval(net, v - dv)) / (2 * h)
        denom = max(float(np.linalg.norm(analytic)), 1e-12)
        rel = float(np.linalg.norm(fd - analytic)) / denom
        assert rel < 1e-6


def test_network_validation():
    with pytest.raises(ValueError):
        RbfNetwork(centers=np.zeros((0, 2)), widths=np.zeros(0))
    with pytest.raises(ValueError):
        RbfNetwork(centers=np.zeros((3, 1)), widths=np.ones(3))
    with pytest.raises(ValueError):
        RbfNetwork(centers=np.zeros((2, 2)), widths=np.ones(3))
    with pytest.raises(ValueError):
        RbfNetwork(centers=np.zeros((2, 2)), widths=np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        RbfNetwork(centers=np.array([[0.0, np.nan]]), widths=np.ones(1))
    with pytest.raises(ValueError):
        init_centers(0, np.random.default_rng(0))
    with pytest.raises(ValueError):
        init_centers(3, np.random.default_rng(0), scale=0.0)


def test_basis_eval_input_validation():
    net = _net([[0.0, 0.0]])
    with pytest.raises(ValueError):
        basis_eval(net, [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        basis_eval(net, [np.nan, 0.0])
