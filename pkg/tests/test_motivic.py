"""Tests for the Hilbert-scheme generating-series combinators."""
import pytest
from pydantic import ValidationError

from powerstruct.exceptions import MissingLocalDataError, ShapeMismatchError
from powerstruct.models import series_to_json
from powerstruct.motivic import (
    SLOT_MONOMIALS,
    LocalSeriesData,
    NestedPackage,
    build_cheah_local,
    cheah_main,
    goettsche_series,
    hilb_global,
    hilb_local_curve,
    hilb_local_surface,
    incidence_series,
    kapranov_zeta,
    li_qin_series,
    local_data_for_dimension,
    nested_d1_local,
    nested_global,
    pair_local_surface,
)
from powerstruct.power import specialize_series
from powerstruct.rings import MOTIVIC, MotivicClass, sigma_motivic
from powerstruct.sampling import random_element
from powerstruct.series import TruncatedSeries, mul, sigma_series

L = MotivicClass.lefschetz()
PARTITIONS = [1, 1, 2, 3, 5, 7, 11, 15]


def euler_list(s):
    return specialize_series(s, "euler").to_list()


class TestLocalSeries:
    """Test the built-in punctual series."""

    def test_curve(self):
        assert hilb_local_curve(4).to_list() == [1, 1, 1, 1, 1]

    def test_surface(self):
        """Test prod (1 - L^(k-1) t^k)^(-1) at low order."""
        s = hilb_local_surface(3)
        assert s.to_list() == [1, 1, 1 + L, 1 + L + L ** 2]

    def test_surface_euler_is_partitions(self):
        assert euler_list(hilb_local_surface(7)) == PARTITIONS

    def test_pair_local_surface(self):
        """Test that the punctual incidence series starts t + (1 + L) t^2."""
        s = pair_local_surface(3)
        assert s.coefficient(0) == 0
        assert s.coefficient(1) == 1
        assert s.coefficient(2) == 1 + L

    def test_nested_d1_local(self):
        """Test that only non-decreasing exponents carry a one."""
        s = nested_d1_local(2, (2, 2))
        assert dict(s.coeffs) == {
            (0, 0): 1, (0, 1): 1, (0, 2): 1, (1, 1): 1, (1, 2): 1, (2, 2): 1,
        }

    def test_nested_d1_local_bounds(self):
        with pytest.raises(ShapeMismatchError):
            nested_d1_local(3, (2, 2))


class TestGlobalSeries:
    """Test powers of local series."""

    def test_kapranov_zeta_of_projective_line(self):
        z = kapranov_zeta(1 + L, 3)
        assert z.to_list() == [1, 1 + L, 1 + L + L ** 2, 1 + L + L ** 2 + L ** 3]

    def test_curve_hilbert_is_zeta(self):
        """Test that Hilb^n of a curve is its symmetric power."""
        x = 2 + L
        assert hilb_global(x, hilb_local_curve(5), 5) == kapranov_zeta(x, 5)

    def test_goettsche_point(self):
        """Test that a point gives the partition numbers under L -> 1."""
        assert euler_list(goettsche_series(MOTIVIC.one, 7)) == PARTITIONS

    def test_goettsche_second_coefficient(self):
        """Test [Hilb^2 S] = [S^2 S] + L [S]."""
        x = 1 + L + L ** 2
        s = goettsche_series(x, 2)
        assert s.coefficient(1) == x
        assert s.coefficient(2) == sigma_motivic(x, 2)[2] + L * x

    def test_goettsche_euler_of_p2(self):
        """Test chi(Hilb^n P^2) = coefficients of prod (1 - t^k)^(-3)."""
        assert euler_list(goettsche_series(1 + L + L ** 2, 3)) == [1, 3, 9, 22]

    def test_hilb_global_truncates_local(self):
        s = hilb_global(MOTIVIC.one, hilb_local_surface(6), 3)
        assert s.bounds == (3,)

    def test_nested_curve_depth_one(self):
        """Test that depth-one nested Hilbert schemes of curves are symmetric powers."""
        x = 1 + L
        assert nested_global(x, nested_d1_local(1, (4,))) == kapranov_zeta(x, 4)

    def test_nested_point_is_local(self):
        local = nested_d1_local(2, (3, 3))
        assert nested_global(MOTIVIC.one, local) == local

    def test_nested_global_with_bounds(self):
        s = nested_global(1 + L, nested_d1_local(2, (3, 3)), (2, 2))
        assert s.bounds == (2, 2)
        assert s.coefficient((1, 1)) == 1 + L

    def test_nested_diagonal_is_symmetric_power(self, rng):
        """Test that the (n, n) coefficient of the depth-two curve series is [S^n X]."""
        local = nested_d1_local(2, (5, 5))
        for _ in range(5):
            x = random_element(MOTIVIC, rng)
            nested = nested_global(x, local)
            zeta = kapranov_zeta(x, 5)
            assert [nested.coefficient((n, n)) for n in range(6)] == zeta.to_list()

    @pytest.mark.parametrize("n", range(5))
    def test_kapranov_zeta_of_projective_space(self, n):
        """Test zeta of [P^n] = 1 + L + ... + L^n is prod_{i <= n} 1/(1 - L^i t)."""
        expected = sigma_series(MOTIVIC, MOTIVIC.one, 6)
        for i in range(1, n + 1):
            expected = mul(expected, sigma_series(MOTIVIC, L ** i, 6))
        assert kapranov_zeta(sum((L ** i for i in range(1, n + 1)), MOTIVIC.one), 6) == expected


class TestIncidence:
    """Test sum [Z^(n-1,n)_S] t^n."""

    def test_euler_of_point(self):
        assert euler_list(incidence_series(MOTIVIC.one, 5)) == [0, 1, 2, 4, 7, 12]

    def test_first_coefficient(self):
        """Test that Z^(0,1)_S = S."""
        x = 1 + L + L ** 2
        assert incidence_series(x, 3).coefficient(1) == x

    def test_point_matches_pair_local(self):
        assert incidence_series(MOTIVIC.one, 5) == pair_local_surface(5)


class TestCheah:
    """Test the eight-series nested package."""

    def test_zero_class(self):
        """Test that [X] = 0 leaves only the hilb slot, equal to one."""
        package = cheah_main(local_data_for_dimension(2, 4), MOTIVIC.zero, 4)
        assert package.hilb == TruncatedSeries.one(MOTIVIC, (4,))
        for name in SLOT_MONOMIALS:
            if name != "hilb":
                assert not getattr(package, name).coeffs

    def test_hilb_slot_is_goettsche(self):
        x = 1 + L
        package = cheah_main(local_data_for_dimension(2, 4), x, 4)
        assert package.hilb == goettsche_series(x, 4)

    def test_pair_slot_is_incidence(self):
        """Test that the t3 slot reproduces the incidence series."""
        x = 1 + L + L ** 2
        package = cheah_main(local_data_for_dimension(2, 4), x, 4)
        assert package.z_pair == incidence_series(x, 4)

    def test_point_slot_t1(self):
        """Test the t1 slot for a point: H - 1."""
        package = cheah_main(local_data_for_dimension(2, 4), MOTIVIC.one, 4)
        h = hilb_local_surface(4)
        assert package.f == h - TruncatedSeries.one(MOTIVIC, (4,))
        assert package.f == package.f_prime

    def test_local_series_shape(self):
        f = build_cheah_local(local_data_for_dimension(2, 3), 3)
        assert f.bounds == (3, 1, 1, 1)
        assert f.coefficient((0, 0, 0, 0)) == 1
        assert f.coefficient((1, 1, 0, 1)) == 0
        assert f.coefficient((2, 1, 1, 1)) == pair_local_surface(3).coefficient(2)

    def test_missing_pair_local(self):
        with pytest.raises(MissingLocalDataError):
            cheah_main(local_data_for_dimension(1, 3), MOTIVIC.one, 3)

    def test_slots_mapping(self):
        package = cheah_main(local_data_for_dimension(2, 2), L, 2)
        assert list(package.slots()) == list(SLOT_MONOMIALS)

    def test_package_rejects_unequal_f_slots(self):
        one = TruncatedSeries.one(MOTIVIC, (2,))
        zero = TruncatedSeries.zero(MOTIVIC, (2,))
        slots = {name: zero for name in SLOT_MONOMIALS}
        slots["f"] = one
        with pytest.raises(ValidationError):
            NestedPackage(**slots)


class TestLocalSeriesData:
    """Test validation of user-supplied local data."""

    def test_from_json(self):
        data = LocalSeriesData.model_validate({
            "dimension": 2,
            "hilbLocal": series_to_json(hilb_local_surface(3)),
            "pairLocal": series_to_json(pair_local_surface(3)),
        })
        assert data.hilb_local == hilb_local_surface(3)
        assert data.nested_local is None
        assert data.to_json()["pairLocal"] == series_to_json(pair_local_surface(3))

    def test_rejects_non_unit_constant(self):
        with pytest.raises(ValidationError):
            LocalSeriesData(dimension=2, hilb_local=TruncatedSeries(MOTIVIC, (2,), {(0,): 2}))

    def test_rejects_non_monotone_nested(self):
        bad = TruncatedSeries(MOTIVIC, (2, 2), {(0, 0): 1, (1, 0): 1})
        with pytest.raises(ValidationError):
            LocalSeriesData(dimension=1, hilb_local=hilb_local_curve(2), nested_local=bad)

    def test_rejects_unknown_dimension(self):
        with pytest.raises(MissingLocalDataError):
            local_data_for_dimension(3, 2)


class TestLiQin:
    """Test the moduli series of a curve fibration."""

    def test_trivial_fibre(self):
        """Test that [C] = 0 gives [S] * hilbLocal^[X]."""
        local = local_data_for_dimension(2, 4)
        s, x = 1 + L, 1 + L + L ** 2
        result = li_qin_series(s, x, MOTIVIC.zero, local, hilb_local_surface(4), 4)
        expected = goettsche_series(x, 4)
        assert result == TruncatedSeries(MOTIVIC, (4,), {e: s * v for e, v in expected.items()})

    def test_fibre_with_same_local_series(self):
        """Test that mLocal = hilbLocal recovers the plain Hilbert series."""
        local = local_data_for_dimension(2, 3)
        x, c = 2 + L, 1 + L
        result = li_qin_series(MOTIVIC.one, x, c, local, hilb_local_surface(3), 3)
        assert result == goettsche_series(x, 3)
