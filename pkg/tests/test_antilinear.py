import numpy as np
import pytest

from eprkit import states as st
from eprkit.antilinear import (
    AntilinearMap,
    adjoint,
    apply,
    compose_anti_anti,
    compose_anti_linear,
    compose_linear_anti,
)
from eprkit.linalg import DimensionError, dagger
from eprkit.smap import smap_from_vector


def rand_map(rng, dst, src):
    return AntilinearMap(rng.standard_normal((dst, src)) + 1j * rng.standard_normal((dst, src)))


def rand_vec(rng, d):
    return rng.standard_normal(d) + 1j * rng.standard_normal(d)


def test_apply_conjugation():
    np.testing.assert_array_equal(apply(AntilinearMap.conjugation(2), [1, 1j]), [1, -1j])


def test_apply_bell_map():
    s = AntilinearMap(np.eye(2) / np.sqrt(2))
    np.testing.assert_allclose(s([1, 0]), [1 / np.sqrt(2), 0])


def test_antilinearity(rng):
    s = rand_map(rng, 3, 2)
    for _ in range(20):
        phi, lam = rand_vec(rng, 2), complex(*rng.standard_normal(2))
        np.testing.assert_allclose(s(lam * phi), np.conj(lam) * s(phi), atol=1e-13)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionError):
        apply(AntilinearMap(np.eye(2)), [1, 0, 0])


class TestAdjoint:
    def test_involution(self, rng):
        s = rand_map(rng, 3, 2)
        assert adjoint(adjoint(s)) == s

    def test_transpose_only(self):
        s = AntilinearMap(np.diag([1, 1j]))
        np.testing.assert_array_equal(adjoint(s).kmatrix, np.diag([1, 1j]))

    def test_inner_product_relation(self, rng):
        for _ in range(100):
            s = rand_map(rng, 3, 2)
            phi, chi = rand_vec(rng, 2), rand_vec(rng, 3)
            assert abs(np.vdot(chi, s(phi)) - np.vdot(phi, adjoint(s)(chi))) < 1e-12

    def test_reverses_composition_with_linear(self, rng):
        for _ in range(20):
            s, lin = rand_map(rng, 3, 2), rand_vec(rng, 12).reshape(4, 3)
            left = adjoint(compose_linear_anti(lin, s))
            right = compose_anti_linear(adjoint(s), dagger(lin))
            chi = rand_vec(rng, 4)
            assert np.max(np.abs(left(chi) - right(chi))) < 1e-10


class TestComposition:
    def test_bell_s_sstar(self):
        s = smap_from_vector(st.bell_state(0), "BA")
        np.testing.assert_allclose(compose_anti_anti(s, adjoint(s)), np.eye(2) / 2, atol=1e-15)

    def test_conjugation_squared(self):
        c = AntilinearMap.conjugation(3)
        np.testing.assert_array_equal(compose_anti_anti(c, c), np.eye(3))

    def test_pointwise(self, rng):
        s1, s2 = rand_map(rng, 3, 2), rand_map(rng, 4, 3)
        phi = rand_vec(rng, 2)
        np.testing.assert_allclose(compose_anti_anti(s2, s1) @ phi, s2(s1(phi)), atol=1e-12)

    def test_anti_anti_is_linear(self, rng):
        s1, s2 = rand_map(rng, 3, 2), rand_map(rng, 2, 3)
        m = compose_anti_anti(s2, s1)
        phi, lam = rand_vec(rng, 2), complex(*rng.standard_normal(2))
        np.testing.assert_allclose(m @ (lam * phi), lam * (m @ phi), atol=1e-12)

    def test_identity_neutral(self, rng):
        s = rand_map(rng, 3, 2)
        assert compose_anti_linear(s, np.eye(2)) == s
        assert compose_linear_anti(np.eye(3), s) == s

    def test_linear_after_anti(self, rng):
        s, lin = rand_map(rng, 3, 2), rand_vec(rng, 6).reshape(2, 3)
        phi = rand_vec(rng, 2)
        np.testing.assert_allclose(compose_linear_anti(lin, s)(phi), lin @ s(phi), atol=1e-12)

    def test_anti_after_linear(self, rng):
        # elementwise: s(L phi)_i = sum_j K_ij conj(sum_k L_jk phi_k)
        s, lin = rand_map(rng, 3, 2), rand_vec(rng, 4).reshape(2, 2)
        phi = rand_vec(rng, 2)
        k = s.kmatrix
        expected = [
            sum(k[i, j] * np.conj(sum(lin[j, q] * phi[q] for q in range(2))) for j in range(2))
            for i in range(3)
        ]
        np.testing.assert_allclose(compose_anti_linear(s, lin)(phi), expected, atol=1e-12)

    def test_matmul_sugar(self, rng):
        s, lin = rand_map(rng, 2, 2), rand_vec(rng, 4).reshape(2, 2)
        assert isinstance(s @ lin, AntilinearMap)
        assert isinstance(lin @ s, AntilinearMap)
        assert isinstance(s @ s, np.ndarray)
        assert (lin @ s) == compose_linear_anti(lin, s)

    def test_mismatch(self, rng):
        with pytest.raises(DimensionError):
            compose_anti_anti(rand_map(rng, 2, 2), rand_map(rng, 3, 2))
        with pytest.raises(DimensionError):
            compose_anti_linear(rand_map(rng, 2, 2), np.eye(3))
        with pytest.raises(DimensionError):
            compose_linear_anti(np.eye(3), rand_map(rng, 2, 2))


def test_no_tensoring_with_linear():
    s = AntilinearMap(np.eye(2))
    assert not hasattr(s, "tensor")
    assert not hasattr(s, "kron")
