import numpy as np
import pytest

from conesparse.barriers import (
    Orthant,
    Product,
    Psd,
    SecondOrder,
    SpectralEpigraph,
    barrier_value,
    cone_from_spec,
    grad_dir,
    hess_bilin,
    hessian_norm,
    third_trilin,
)
from conesparse.errors import InputError, NonInterior


def test_nu_values():
    assert Orthant(4).nu == 4
    assert Psd(3).nu == 3
    assert SecondOrder(7).nu == 2
    assert SpectralEpigraph(5, 2).nu == 4
    assert SpectralEpigraph(5, 2, barrier="kplus1").nu == 3
    assert Product((Psd(2), Orthant(3))).nu == 5


def test_dims():
    assert Psd(3).dim == 9
    assert SpectralEpigraph(4, 2).dim == 9
    assert Product((Psd(2), SecondOrder(3))).dim == 7


def test_barrier_values():
    assert barrier_value(Orthant(3), np.ones(3)) == pytest.approx(0.0)
    assert barrier_value(Psd(2), np.diag([2.0, 0.5]).ravel()) == pytest.approx(0.0, abs=1e-14)
    assert barrier_value(SecondOrder(3), np.array([2.0, 1.0, 1.0])) == pytest.approx(-np.log(2.0))


def test_barrier_rejects_exterior():
    with pytest.raises(NonInterior):
        barrier_value(Orthant(2), np.array([1.0, 0.0]))


def test_grad_examples(cone, rng):
    for _ in range(20):
        e = cone.sample_interior(rng)
        assert grad_dir(cone, e, e) == pytest.approx(-cone.nu, rel=1e-10)
    assert grad_dir(Orthant(2), np.array([1.0, 2.0]), np.array([1.0, 0.0])) == pytest.approx(-1.0)
    I3 = np.eye(3).ravel()
    assert grad_dir(Psd(3), I3, I3) == pytest.approx(-3.0)


def test_hess_examples():
    assert hess_bilin(Orthant(2), np.ones(2), np.array([1.0, 0]), np.array([0, 1.0])) == 0.0
    I3 = np.eye(3).ravel()
    assert hess_bilin(Psd(3), I3, I3, I3) == pytest.approx(3.0)


def test_hess_psd_diag_fd_oracle():
    x = np.diag([1.0, 2.0]).ravel()
    u = np.eye(2).ravel()
    h = 1e-5
    fd = -(grad_dir(Psd(2), x + h * u, u) - grad_dir(Psd(2), x - h * u, u)) / (2 * h)
    exact = hess_bilin(Psd(2), x, u, u)
    assert exact == pytest.approx(1.25)
    assert abs(-fd - exact) <= 1e-6


def test_third_examples():
    one = np.ones(1)
    assert third_trilin(Orthant(1), one, one, one, one) == pytest.approx(-2.0)
    I2 = np.eye(2).ravel()
    assert third_trilin(Psd(2), I2, I2, I2, I2) == pytest.approx(-4.0)


def test_third_soc_fd(rng):
    cone = SecondOrder(3)
    for _ in range(20):
        x = cone.sample_interior(rng)
        u, v = cone.sample_direction(rng), cone.sample_direction(rng)
        h = 1e-5 * (1 + np.max(np.abs(x)))
        fd = (hess_bilin(cone, x + h * v, u, u) - hess_bilin(cone, x - h * v, u, u)) / (2 * h)
        assert fd == pytest.approx(third_trilin(cone, x, v, u, u), rel=1e-5, abs=1e-5)


def test_hessian_norm_examples(cone, rng):
    assert hessian_norm(Psd(2), np.eye(2).ravel(), np.diag([1.0, -1.0]).ravel()) == pytest.approx(np.sqrt(2))
    assert hessian_norm(Orthant(2), np.ones(2), np.array([3.0, 4.0])) == pytest.approx(5.0)
    e = cone.sample_interior(rng)
    assert hessian_norm(cone, e, np.zeros(cone.dim)) == 0.0


def test_order_norm_exact_bounded_by_hessian_norm(cone, rng):
    for _ in range(30):
        e = cone.sample_interior(rng)
        u = cone.sample_direction(rng)
        assert cone.order_norm_exact(e, u) <= hessian_norm(cone, e, u) * (1 + 1e-9) + 1e-12


def test_spec_roundtrip(cone):
    again = cone_from_spec(cone.to_spec())
    assert again == cone


def test_spec_errors():
    with pytest.raises(InputError):
        cone_from_spec({"type": "nope"})
    with pytest.raises(InputError):
        cone_from_spec({"type": "psd"})


def test_samples_membership(cone, rng):
    for _ in range(20):
        assert cone.is_interior(cone.sample_interior(rng))
        assert cone.contains(cone.sample_generator(rng))


def test_psd_hess_matches_trace_formula(rng):
    cone = Psd(3)
    for _ in range(10):
        X = cone.mat(cone.sample_interior(rng))
        U = cone.mat(cone.sample_direction(rng))
        V = cone.mat(cone.sample_direction(rng))
        Xi = np.linalg.inv(X)
        oracle = np.trace(Xi @ U @ Xi @ V)
        assert hess_bilin(cone, X.ravel(), U.ravel(), V.ravel()) == pytest.approx(oracle, rel=1e-10, abs=1e-12)
