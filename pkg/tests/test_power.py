"""Tests for the power structure and its axiom checker."""
from fractions import Fraction
from math import comb

import pytest

from powerstruct.exceptions import ContractError, NonUnitConstantError
from powerstruct.power import (
    AxiomSample,
    power,
    run_axiom_suite,
    specialize_series,
    verify_axioms,
)
from powerstruct.rings import HODGE, INTEGERS, MOTIVIC, MotivicClass, sigma_motivic
from powerstruct.sampling import random_element, random_unit_series, sample_shape
from powerstruct.series import (
    TruncatedSeries,
    mul,
    ordinary_power,
    sigma_series,
    substitute_power,
    substitute_scaled,
    truncate,
)

L = MotivicClass.lefschetz()


def one_plus_t(ring, order):
    return TruncatedSeries(ring, (order,), {(0,): ring.one, (1,): ring.one})


class TestPower:
    """Test (A(t))^m."""

    def test_integer_exponent_matches_ordinary_power(self, rng):
        """Test that integer exponents agree with repeated multiplication."""
        a = random_unit_series(INTEGERS, (5,), rng)
        for k in (-2, -1, 0, 1, 3):
            assert power(a, k) == ordinary_power(a, k)

    def test_binomial_over_integers(self):
        """Test (1 + t)^m = sum C(m, n) t^n."""
        assert power(one_plus_t(INTEGERS, 5), 3).to_list() == [1, 3, 3, 1, 0, 0]
        assert power(one_plus_t(INTEGERS, 4), -1).to_list() == [1, -1, 1, -1, 1]

    def test_geometric_series_gives_kapranov_zeta(self):
        """Test (1/(1 - t))^[X] = zeta_X(t)."""
        x = 1 + L + L ** 2
        geometric = sigma_series(MOTIVIC, 1, 5)
        assert power(geometric, x) == sigma_series(MOTIVIC, x, 5)

    def test_engine_identity_for_scaled_factor(self):
        """Test that (1 - L^a t^r)^(-X) computed through the engine is sigma_{L^a X}(t^r)."""
        order, r = 6, 2
        base = sigma_series(MOTIVIC, 1, order // r)
        factor = substitute_scaled(base, L, (r,), (order,))
        x = 2 + L
        expected = substitute_scaled(sigma_series(MOTIVIC, L * x, order // r), 1, (r,), (order,))
        assert power(factor, x) == expected

    def test_binomial_over_motivic(self):
        """Test (1 + t)^[X] coefficients are the classes of configuration spaces: [X] at t."""
        x = 1 + L
        result = power(one_plus_t(MOTIVIC, 3), x)
        assert result.coefficient(1) == x
        # [B_2 P^1] = [S^2 P^1] - [P^1] = L^2
        assert result.coefficient(2) == L ** 2

    def test_multivariable(self):
        """Test a two-variable power with an integer exponent."""
        a = TruncatedSeries(INTEGERS, (2, 2), {(0, 0): 1, (1, 0): 1, (0, 1): 1})
        squared = power(a, 2)
        assert squared.coefficient((1, 1)) == 2
        assert squared.coefficient((2, 0)) == 1

    def test_non_unit_constant(self):
        with pytest.raises(NonUnitConstantError):
            power(TruncatedSeries(INTEGERS, (2,), {(0,): 2}), 3)

    def test_exponent_from_literal(self):
        """Test that motivic exponents may be given as literals."""
        assert power(sigma_series(MOTIVIC, 1, 3), "1+L") == sigma_series(MOTIVIC, 1 + L, 3)


class TestSpecialization:
    """Test Euler and Hodge specializations of series."""

    def test_euler_commutes_with_power(self, rng):
        """Test that L -> 1 respects the power structure."""
        a = random_unit_series(MOTIVIC, (4,), rng)
        m = 1 + 2 * L - MotivicClass.lefschetz(Fraction(1, 2))
        lhs = specialize_series(power(a, m), "euler")
        rhs = power(specialize_series(a, "euler"), m.euler())
        assert lhs == rhs

    def test_hodge_commutes_with_power(self, rng):
        """Test that L -> uv respects the power structure."""
        a = random_unit_series(MOTIVIC, (4,), rng)
        m = L - 1
        lhs = specialize_series(power(a, m), "hodge")
        rhs = power(specialize_series(a, "hodge"), m.hodge())
        assert lhs == rhs

    def test_commutes_on_random_cases(self, rng):
        """Test both specializations against power on random series and exponents to order 6."""
        for _ in range(50):
            a = random_unit_series(MOTIVIC, (6,), rng)
            m = random_element(MOTIVIC, rng)
            power_a = power(a, m)
            assert specialize_series(power_a, "euler") == power(specialize_series(a, "euler"), m.euler())
            assert specialize_series(power_a, "hodge") == power(specialize_series(a, "hodge"), m.hodge())

    def test_none_is_identity(self):
        a = sigma_series(MOTIVIC, L, 3)
        assert specialize_series(a, "none") is a

    def test_unknown(self):
        with pytest.raises(ContractError):
            specialize_series(sigma_series(MOTIVIC, L, 3), "betti")


class TestAxioms:
    """Test the randomized verification of properties 1)-7)."""

    @pytest.mark.parametrize("ring", [INTEGERS, MOTIVIC, HODGE], ids=lambda r: r.name)
    def test_suite_passes(self, ring):
        """Test that every property holds on seeded random data."""
        report = run_axiom_suite(ring, seed=7, cases=4, bounds=(5,))
        assert report.passed
        assert [r.property for r in report.results] == [1, 2, 3, 4, 5, 6, 7]
        assert all(r.cases == 4 for r in report.results)

    def test_suite_passes_in_two_variables(self):
        report = run_axiom_suite(MOTIVIC, seed=3, cases=2, bounds=(2, 2))
        assert report.passed

    @pytest.mark.parametrize("bounds", [(5,), (2, 2), (1, 1, 1)], ids=["r1", "r2", "r3"])
    @pytest.mark.parametrize("ring", [INTEGERS, MOTIVIC, HODGE], ids=lambda r: r.name)
    def test_fifty_cases(self, ring, bounds):
        report = run_axiom_suite(ring, seed=11, cases=50, bounds=bounds)
        assert report.passed, [r.counterexample for r in report.results if not r.passed]
        assert all(r.cases == 50 for r in report.results)

    def test_sparse_samples_in_large_boxes(self):
        assert sample_shape((5,)) == (0.6, 2)
        assert sample_shape((2, 2)) == (0.6, 2)
        assert sample_shape((3, 3, 3)) == (6 / 63, 1)

    def test_three_variable_suite_with_sparse_samples(self):
        report = run_axiom_suite(MOTIVIC, seed=5, cases=3, bounds=(3, 3, 3))
        assert report.passed

    def test_counterexample_reported(self, monkeypatch):
        """Test that a broken power is caught with a counterexample."""
        import powerstruct.power as power_module

        real_power = power_module.power
        monkeypatch.setattr(power_module, "power", lambda a, m: real_power(a, m + m))
        a = one_plus_t(INTEGERS, 3)
        sample = AxiomSample(a=a, b=a, m=1, n=2)
        report = verify_axioms(INTEGERS, [sample], properties=(1, 2))
        assert report.results[0].passed
        assert not report.results[1].passed
        assert report.results[1].counterexample is not None
        assert not report.passed

    def test_report_serializes(self):
        report = run_axiom_suite(INTEGERS, seed=1, cases=1, bounds=(3,))
        data = report.model_dump()
        assert data["passed"] is True
        assert data["ring"] == "int"

    def test_property_seven_by_hand(self):
        """Test (A(t^2))^m = A(t)^m at t -> t^2 for A = 1 + L t."""
        a = TruncatedSeries(MOTIVIC, (6,), {(0,): 1, (1,): L})
        m = 1 + L
        assert power(substitute_power(a, 2), m) == substitute_power(power(a, m), 2)

    def test_random_elements_are_in_ring(self, rng):
        for ring in (INTEGERS, MOTIVIC, HODGE):
            assert ring.contains(random_element(ring, rng))


class TestPowerIdentities:
    """Test identities the power structure must reproduce."""

    def test_symmetric_powers_of_finite_set(self):
        """Test (1/(1 - t))^m = sum C(m + n - 1, n) t^n."""
        geometric = TruncatedSeries.from_list(INTEGERS, [1] * 6)
        assert power(geometric, 4).to_list() == [comb(4 + n - 1, n) for n in range(6)]

    def test_zeta_of_affine_space(self):
        """Test zeta_{L^n}(t) = 1/(1 - L^n t)."""
        assert sigma_motivic(L ** 3, 3) == (1, L ** 3, L ** 6, L ** 9)

    def test_product_rule(self, rng):
        a = random_unit_series(MOTIVIC, (4,), rng)
        b = random_unit_series(MOTIVIC, (4,), rng)
        m = 2 - L
        assert power(mul(a, b), m) == mul(power(a, m), power(b, m))

    def test_geometric_series_to_random_exponents(self, rng):
        """Test (1/(1 - t))^a = sigma_a(t) for random classes a."""
        geometric = sigma_series(MOTIVIC, 1, 6)
        for _ in range(20):
            a = random_element(MOTIVIC, rng)
            assert power(geometric, a) == sigma_series(MOTIVIC, a, 6)


class TestFiniteDeterminacy:
    """Test that coefficients up to n never see the input above n."""

    def test_one_variable(self, rng):
        for _ in range(20):
            a = random_unit_series(MOTIVIC, (6,), rng)
            m = random_element(MOTIVIC, rng)
            full = power(a, m)
            for top in (0, 2, 4):
                assert power(truncate(a, (top,)), m) == truncate(full, (top,))

    def test_perturbation_above_the_box(self, rng):
        """Test that changing coefficients outside {e <= (1, 2)} leaves that box of A^m alone."""
        box = (1, 2)
        for _ in range(10):
            a = random_unit_series(MOTIVIC, (3, 3), rng)
            noise = random_unit_series(MOTIVIC, (3, 3), rng)
            perturbed = TruncatedSeries(MOTIVIC, (3, 3), {
                e: v for e, v in list(a.items()) + [(e, w) for e, w in noise.items()
                                                    if not (e[0] <= box[0] and e[1] <= box[1])]
            })
            m = random_element(MOTIVIC, rng)
            assert truncate(power(perturbed, m), box) == truncate(power(a, m), box)
