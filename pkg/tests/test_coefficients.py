import cmath
import math
import random

import pytest

from metaplectic.coefficients import (F_km_cartan, Weight, apply_n_plus,
                                      casimir_apply, casimir_check,
                                      cayley_transfer, chi, f_km,
                                      f_km_prime, lift_F, lift_F_iwasawa,
                                      radial_profile)
from metaplectic.metgroup import (HalfInt, IwasawaCoords, cartan_h,
                                  from_iwasawa, identity, kappa, to_cartan,
                                  to_iwasawa, translation)

from conftest import FOUR_PI, random_coords, random_element

M52 = HalfInt(5)


def principal_power(z, exponent):
    # independent oracle: exp(m log z) with the principal logarithm,
    # valid verbatim for bases in the open upper half-plane
    return cmath.exp(exponent * cmath.log(z))


class TestChi:
    def test_at_zero(self):
        assert chi(HalfInt(7), 0.0) == 1.0

    def test_half_at_pi(self):
        assert abs(chi(HalfInt(1), math.pi) - (-1j)) < 1e-15

    def test_genuine_sign_at_two_pi(self):
        for k in range(4):
            n = M52 + 2 * k
            assert abs(chi(n, 2 * math.pi) + 1.0) < 1e-13

    def test_periodicity_mod_4pi(self):
        n = HalfInt(3)
        for t in (0.0, 1.1, 5.3):
            assert abs(chi(n, t + FOUR_PI) - chi(n, t)) < 1e-12


class TestFkm:
    def test_value_one_at_i_for_k0(self):
        for twice_m in (3, 5, 6, 9):
            assert abs(f_km(Weight(HalfInt(twice_m), 0), 1j) - 1.0) < 1e-14

    def test_vanishes_at_i_for_positive_k(self):
        for k in (1, 2, 5):
            assert f_km(Weight(M52, k), 1j) == 0.0

    def test_explicit_value_against_principal_log_oracle(self):
        # (2i)^{5/2} * i / (3i)^{7/2}; both bases lie in the upper
        # half-plane, where the branch power and the principal power agree
        w = Weight(M52, 1)
        oracle = principal_power(2j, 2.5) * 1j / principal_power(3j, 3.5)
        assert abs(f_km(w, 2j) - oracle) < 1e-15

    def test_random_points_against_principal_log_oracle(self, rng):
        for _ in range(200):
            z = complex(rng.uniform(-4, 4), math.exp(rng.uniform(-2, 2)))
            for w in (Weight(M52, 0), Weight(M52, 3), Weight(HalfInt(9), 2)):
                m = w.m_float
                oracle = (principal_power(2j, m) * (z - 1j) ** w.k
                          / principal_power(z + 1j, m + w.k))
                assert abs(f_km(w, z) - oracle) <= 1e-13 * max(
                    1.0, abs(oracle))

    def test_domain_error(self):
        with pytest.raises(ValueError):
            f_km(Weight(M52, 0), 1.0 - 0.5j)

    def test_cauchy_riemann(self):
        w = Weight(HalfInt(7), 2)
        h = 1e-6
        for z in (0.3 + 0.9j, -1.2 + 2.5j, 4.0 + 0.4j):
            dx = (f_km(w, z + h) - f_km(w, z - h)) / (2 * h)
            dy = (f_km(w, z + h * 1j) - f_km(w, z - h * 1j)) / (2 * h)
            assert abs(dx + 1j * dy) < 1e-7
            assert abs(dx - f_km_prime(w, z)) < 1e-7


class TestLift:
    def test_at_identity(self):
        f = lambda z: f_km(Weight(M52, 1), z)
        assert abs(lift_F(f, Weight(M52, 1), identity())
                   - f(1j)) < 1e-15

    def test_right_transformation_general_f(self, rng):
        # holds for every f, not only the isotypic ones
        f = lambda z: cmath.exp(2j * z) + 3.0 / (z + 2j)
        w = Weight(M52, 0)
        for _ in range(100):
            s = random_element(rng)
            t = rng.uniform(0, FOUR_PI)
            lhs = lift_F(f, w, s * kappa(t))
            rhs = chi(w.m, t) * lift_F(f, w, s)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))

    def test_iwasawa_formula_example(self):
        w = Weight(M52, 0)
        f = lambda z: f_km(w, z)
        s = translation(1.0) * from_iwasawa(IwasawaCoords(0.0, 2.0, 0.0))
        expected = f(1 + 2j) * 2.0 ** (w.m_float / 2)
        assert abs(lift_F(f, w, s) - expected) < 1e-14

    def test_two_formulas_agree(self, rng):
        for _ in range(300):
            coords = random_coords(rng)
            s = from_iwasawa(coords)
            for w in (Weight(M52, 0), Weight(HalfInt(9), 2)):
                f = lambda z: f_km(w, z)
                assert abs(lift_F(f, w, s)
                           - lift_F_iwasawa(f, w, coords)) < 1e-12


class TestCartanFormula:
    def test_radial_value_on_axis(self):
        for k, twice_m, t in [(0, 5, 0.8), (2, 7, 1.5), (1, 9, 0.1)]:
            w = Weight(HalfInt(twice_m), k)
            val = F_km_cartan(w, type(to_cartan(cartan_h(t)))(0.0, t, 0.0))
            expected = math.tanh(t) ** k / math.cosh(t) ** w.m_float
            assert abs(val - expected) < 1e-14

    def test_t_zero(self):
        from metaplectic.metgroup import CartanCoords
        assert F_km_cartan(Weight(M52, 0), CartanCoords(0, 0, 0)) == 1.0
        assert F_km_cartan(Weight(M52, 3), CartanCoords(0, 0, 0)) == 0.0

    def test_agrees_with_lift_on_random_coordinates(self, rng):
        from metaplectic.metgroup import CartanCoords, from_cartan
        for _ in range(300):
            c = CartanCoords(rng.uniform(0, FOUR_PI), rng.uniform(0, 3.0),
                             rng.uniform(0, FOUR_PI))
            s = from_cartan(c)
            for w in (Weight(M52, 0), Weight(M52, 1), Weight(HalfInt(7), 2)):
                lhs = F_km_cartan(w, c)
                rhs = lift_F(lambda z: f_km(w, z), w, s)
                assert abs(lhs - rhs) < 1e-10

    def test_modulus_bounded_by_one(self, rng):
        for _ in range(300):
            s = random_element(rng)
            for w in (Weight(M52, 0), Weight(HalfInt(11), 4)):
                assert abs(F_km_cartan(w, to_cartan(s))) <= 1.0 + 1e-14

    def test_underflow_is_zero(self):
        assert radial_profile(0, 2.5, 800.0) == 0.0
        assert radial_profile(3, 5.5, 400.0) == 0.0


class TestTransformationLaws:
    @pytest.mark.parametrize("twice_m,k", [(5, 0), (5, 1), (7, 2), (9, 3)])
    def test_both_k_types_and_genuine_flip(self, twice_m, k):
        rng = random.Random(1000 + twice_m + k)
        w = Weight(HalfInt(twice_m), k)
        F = lambda s: F_km_cartan(w, to_cartan(s))
        for _ in range(250):
            s = random_element(rng)
            t = rng.uniform(0, FOUR_PI)
            base = F(s)
            assert abs(F(s * kappa(t)) - chi(w.m, t) * base) < 1e-11
            assert abs(F(kappa(t) * s)
                       - chi(w.m + 2 * k, t) * base) < 1e-11
            assert abs(F(kappa(2 * math.pi) * s) + base) < 1e-11


class TestCasimir:
    def test_residual_at_reference_point(self):
        res = casimir_check(Weight(M52, 0), cartan_h(0.5), 1e-3)
        assert res <= 1e-5

    def test_residual_random_grid(self):
        rng = random.Random(77)
        for _ in range(100):
            s = from_iwasawa(IwasawaCoords(rng.uniform(-1, 1),
                                           math.exp(rng.uniform(-0.7, 0.7)),
                                           rng.uniform(0, FOUR_PI)))
            for k in range(4):
                for twice_m in (5, 7, 9, 11):
                    assert casimir_check(Weight(HalfInt(twice_m), k),
                                         s, 1e-3) <= 1e-5

    def test_operator_annihilates_zero_function(self):
        assert casimir_apply(lambda x, y, t: 0.0, 0.2, 1.3, 2.2, 1e-3) == 0.0

    def test_step_validation(self):
        with pytest.raises(ValueError):
            casimir_check(Weight(M52, 0), identity(), 1.0)


class TestNPlus:
    def test_right_k_type_is_m_plus_2(self, rng):
        w = Weight(M52, 1)
        for _ in range(100):
            s = random_element(rng, 2.0, 1.5)
            t = rng.uniform(0, FOUR_PI)
            lhs = apply_n_plus(w, s * kappa(t))
            rhs = chi(w.m + 2, t) * apply_n_plus(w, s)
            assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(rhs))

    def test_left_k_type_is_m_plus_2k(self, rng):
        w = Weight(M52, 2)
        for _ in range(100):
            s = random_element(rng, 2.0, 1.5)
            t = rng.uniform(0, FOUR_PI)
            lhs = apply_n_plus(w, kappa(t) * s)
            rhs = chi(w.m + 2 * w.k, t) * apply_n_plus(w, s)
            assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(rhs))

    def test_against_central_differences(self, rng):
        h = 1e-5
        for _ in range(50):
            coords = random_coords(rng, 2.0, 1.0)
            s = from_iwasawa(coords)
            for w in (Weight(M52, 0), Weight(HalfInt(7), 1)):
                G = lambda x, y, t: lift_F_iwasawa(
                    lambda z: f_km(w, z), w, IwasawaCoords(x, y, t))
                x, y, t = coords.x, coords.y, coords.t
                gx = (G(x + h, y, t) - G(x - h, y, t)) / (2 * h)
                gy = (G(x, y + h, t) - G(x, y - h, t)) / (2 * h)
                gt = (G(x, y, t + h) - G(x, y, t - h)) / (2 * h)
                fd = (1j * y * cmath.exp(-2j * t) * (gx - 1j * gy)
                      + 0.5j * cmath.exp(-2j * t) * gt)
                assert abs(apply_n_plus(w, s) - fd) < 1e-6


class TestCayleyTransfer:
    def test_k0_is_one(self):
        assert abs(cayley_transfer(Weight(M52, 0), 0.3) - 1.0) < 1e-13

    def test_k2_example(self):
        w = 0.1 + 0.2j
        assert abs(cayley_transfer(Weight(HalfInt(7), 2), w) - w ** 2) < 1e-13

    def test_zero_of_positive_k(self):
        for k in (1, 3):
            assert cayley_transfer(Weight(M52, k), 0.0) == 0.0

    def test_equals_monomial_on_random_disk_points(self, rng):
        for _ in range(200):
            r = math.sqrt(rng.uniform(0.0, 0.96))
            wd = r * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
            for k in range(6):
                w = Weight(HalfInt(5 + 2 * (k % 3)), k)
                assert abs(cayley_transfer(w, wd) - wd ** k) <= 1e-10

    def test_domain_error(self):
        with pytest.raises(ValueError):
            cayley_transfer(Weight(M52, 0), 1.2)


def test_weight_validation():
    with pytest.raises(ValueError):
        Weight(HalfInt(1), 0)
    with pytest.raises(ValueError):
        Weight(M52, -1)
    assert Weight(2.5, 1).m.twice == 5
