import numpy as np
import pytest
from numpy.testing import assert_allclose

from affinedim import (InputError, canonical_form, gradient_norm2, mean_gamma,
                       norm2_closed, norm2_direct, point_gamma, rho,
                       squared_distances, value_and_gradient)


def finite_difference_gradient(h, b, weights=None):
    """Central differences with entry-relative steps; the independent oracle."""
    fd = np.zeros_like(b)
    for i in range(b.shape[0]):
        for j in range(b.shape[1]):
            step = 1e-6 * (1.0 + abs(b[i, j]))
            bp = b.copy()
            bp[i, j] += step
            bm = b.copy()
            bm[i, j] -= step
            fp = norm2_direct(squared_distances(h), squared_distances(h @ bp), weights).value
            fm = norm2_direct(squared_distances(h), squared_distances(h @ bm), weights).value
            fd[i, j] = (fp - fm) / (2.0 * step)
    return fd


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))[None, :]


class TestNorm2Direct:
    def test_zero_at_equality(self, rng):
        d = squared_distances(rng.standard_normal((6, 3)))
        assert norm2_direct(d, d).value == 0.0

    def test_two_point_case(self):
        dx = np.array([[0.0, 4.0], [4.0, 0.0]])
        dz = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert norm2_direct(dx, dz).value == pytest.approx(18.0, rel=1e-15)

    def test_unit_weights_match_unweighted(self, rng):
        dx = squared_distances(rng.standard_normal((7, 2)))
        dz = squared_distances(rng.standard_normal((7, 2)))
        plain = norm2_direct(dx, dz).value
        weighted = norm2_direct(dx, dz, np.ones(7)).value
        assert weighted == plain

    def test_weighted_matches_loop(self, rng):
        dx = squared_distances(rng.standard_normal((5, 2)))
        dz = squared_distances(rng.standard_normal((5, 2)))
        w = rng.uniform(0.5, 2.0, 5)
        expect = sum(w[i] * w[j] * (dx[i, j] - dz[i, j]) ** 2
                     for i in range(5) for j in range(5))
        assert norm2_direct(dx, dz, w).value == pytest.approx(expect, rel=1e-12)

    def test_size_mismatch(self):
        with pytest.raises(InputError):
            norm2_direct(np.zeros((3, 3)), np.zeros((2, 2)))

    def test_nonnegative(self, rng):
        dx = squared_distances(rng.standard_normal((6, 3)))
        dz = squared_distances(rng.standard_normal((6, 1)))
        assert norm2_direct(dx, dz).value >= 0.0


class TestRho:
    def test_square_orthogonal_b_gives_zero(self, rng):
        h = rng.standard_normal((8, 3))
        q = random_orthogonal(rng, 3)
        assert_allclose(rho(h, q), np.zeros(8), atol=1e-12)

    def test_zero_b_gives_projector_diagonal(self, rng):
        h = rng.standard_normal((6, 2))
        assert_allclose(rho(h, np.zeros((2, 1))), np.diag(h @ h.T), rtol=1e-12)

    def test_hexagon_first_axis(self, hexagon):
        h = hexagon.coords
        b = np.array([[1.0], [0.0]])
        assert_allclose(rho(h, b), 1.0 / 3.0 - h[:, 0] ** 2, atol=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(InputError):
            rho(np.zeros((4, 2)), np.zeros((3, 1)))


class TestNorm2Closed:
    def test_orthogonal_full_rank_is_zero(self, rng):
        h = rng.standard_normal((7, 3))
        q = random_orthogonal(rng, 3)
        out = norm2_closed(h, q)
        assert out.value == pytest.approx(0.0, abs=1e-18)
        assert out.gram_term == pytest.approx(0.0, abs=1e-22)

    def test_matches_direct_mean_centered(self, rng):
        for _ in range(25):
            x = rng.standard_normal((8, 4))
            cf = canonical_form(x, mean_gamma(8))
            b = rng.standard_normal((cf.rank, 2))
            closed = norm2_closed(cf.h, b)
            direct = norm2_direct(squared_distances(cf.h),
                                  squared_distances(cf.h @ b)).value
            assert closed.value == pytest.approx(direct, rel=1e-10, abs=1e-10)
            assert abs(closed.cross_term) < 1e-10 * (1.0 + direct)

    def test_matches_direct_point_centered(self, rng):
        saw_nonzero_cross = False
        for _ in range(25):
            x = rng.standard_normal((8, 4))
            cf = canonical_form(x, point_gamma(8, 0))
            b = rng.standard_normal((cf.rank, 2))
            closed = norm2_closed(cf.h, b)
            direct = norm2_direct(squared_distances(cf.h),
                                  squared_distances(cf.h @ b)).value
            assert closed.value == pytest.approx(direct, rel=1e-9, abs=1e-9)
            if abs(closed.cross_term) > 1e-6:
                saw_nonzero_cross = True
        assert saw_nonzero_cross

    def test_decomposition_identity(self, rng):
        h = rng.standard_normal((9, 4))  # arbitrary H, not semi-orthogonal
        b = rng.standard_normal((4, 2))
        out = norm2_closed(h, b)
        total = out.gram_term + out.rho_sum_term + out.rho_quad_term + out.cross_term
        assert out.value == pytest.approx(total, rel=1e-12)
        direct = norm2_direct(squared_distances(h), squared_distances(h @ b)).value
        assert out.value == pytest.approx(direct, rel=1e-9)

    def test_gauge_invariance(self, rng):
        h = rng.standard_normal((7, 3))
        b = rng.standard_normal((3, 2))
        q = random_orthogonal(rng, 2)
        v1 = norm2_closed(h, b).value
        v2 = norm2_closed(h, b @ q).value
        assert v2 == pytest.approx(v1, rel=1e-12)

    def test_hexagon_zero_map_cross_check(self, hexagon):
        h = hexagon.coords
        b = np.zeros((2, 1))
        direct = norm2_direct(squared_distances(h), squared_distances(h @ b)).value
        closed = norm2_closed(h, b).value
        assert closed == pytest.approx(direct, rel=1e-10)


class TestGradient:
    def test_zero_at_full_rank_orthogonal(self, rng):
        h = rng.standard_normal((8, 3))
        q = random_orthogonal(rng, 3)
        assert_allclose(gradient_norm2(h, q), np.zeros((3, 3)), atol=1e-9)

    def test_zero_at_b_zero(self, rng):
        h = rng.standard_normal((6, 2))
        assert_allclose(gradient_norm2(h, np.zeros((2, 1))), np.zeros((2, 1)))

    def test_finite_difference_agreement(self, rng):
        for _ in range(20):
            n = int(rng.integers(5, 12))
            r = int(rng.integers(2, 6))
            q = int(rng.integers(1, r))
            h = rng.standard_normal((n, r))
            b = rng.standard_normal((r, q))
            grad = gradient_norm2(h, b)
            fd = finite_difference_gradient(h, b)
            assert_allclose(grad, fd, rtol=1e-5, atol=1e-5 * (1 + np.abs(fd).max()))

    def test_finite_difference_agreement_weighted(self, rng):
        for _ in range(5):
            h = rng.standard_normal((7, 3))
            b = rng.standard_normal((3, 2))
            w = rng.uniform(0.5, 2.0, 7)
            grad = gradient_norm2(h, b, weights=w)
            fd = finite_difference_gradient(h, b, weights=w)
            assert_allclose(grad, fd, rtol=1e-5, atol=1e-5 * (1 + np.abs(fd).max()))

    def test_value_and_gradient_consistency(self, rng):
        h = rng.standard_normal((6, 3))
        b = rng.standard_normal((3, 2))
        value, grad = value_and_gradient(h, b)
        direct = norm2_direct(squared_distances(h), squared_distances(h @ b)).value
        assert value == direct
        assert_allclose(grad, gradient_norm2(h, b))
