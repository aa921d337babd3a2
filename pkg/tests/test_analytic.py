import math

import pytest

from gaussree import (
    DomainError,
    ValidationError,
    d_bin,
    fock_relative_entropy_thermal,
    isotropic_reverse_ree,
    tilted_binary_minimum,
)


class TestBinaryDivergence:
    def test_frozen_value(self):
        assert d_bin(0.3, 0.6) == pytest.approx(0.26514844544032273, abs=1e-15)

    def test_boundary_conventions(self):
        assert d_bin(0.0, 0.5) == pytest.approx(1.0)  # -log2(1-p)
        assert d_bin(1.0, 0.5) == pytest.approx(1.0)
        assert d_bin(0.0, 0.0) == 0.0
        assert d_bin(1.0, 1.0) == 0.0
        assert math.isinf(d_bin(0.5, 0.0))
        assert math.isinf(d_bin(0.5, 1.0))
        assert d_bin(0.4, 0.4) == pytest.approx(0.0, abs=1e-15)

    def test_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            d_bin(-0.1, 0.5)
        with pytest.raises(DomainError):
            d_bin(0.5, 1.2)


class TestTiltedMinimum:
    def test_frozen_point(self):
        q, val = tilted_binary_minimum(0.25, 1.5)
        assert q == pytest.approx(0.10542649822871225, abs=1e-15)
        assert val == pytest.approx(0.2543094291890119, abs=1e-14)

    def test_zero_tilt_stays_put(self):
        q, val = tilted_binary_minimum(0.3, 0.0)
        assert q == pytest.approx(0.3)
        assert val == pytest.approx(0.0, abs=1e-14)

    def test_is_a_minimum(self):
        p, t = 0.25, 1.5
        q_star, val = tilted_binary_minimum(p, t)
        for q in (q_star - 1e-3, q_star + 1e-3):
            assert d_bin(q, p) + q * t >= val

    def test_domain(self):
        with pytest.raises(DomainError):
            tilted_binary_minimum(0.0, 1.0)
        with pytest.raises(DomainError):
            tilted_binary_minimum(1.0, 1.0)


class TestIsotropic:
    def test_frozen_values(self):
        assert isotropic_reverse_ree(2, 0.9) == pytest.approx(
            0.7369655941662063, abs=1e-15
        )
        assert isotropic_reverse_ree(3, 0.7) == pytest.approx(
            0.41120561966623415, abs=1e-15
        )

    def test_zero_at_and_below_threshold(self):
        assert isotropic_reverse_ree(2, 0.5) == 0.0
        assert isotropic_reverse_ree(4, 0.1) == 0.0

    def test_divergence_at_unit_fidelity(self):
        assert math.isinf(isotropic_reverse_ree(2, 1.0))

    def test_validation(self):
        with pytest.raises(ValidationError):
            isotropic_reverse_ree(1, 0.5)
        with pytest.raises(DomainError):
            isotropic_reverse_ree(2, 1.5)


class TestFockThermal:
    def test_frozen_values(self):
        # geometric-distribution sums, computed independently
        assert fock_relative_entropy_thermal(0.5, 1.0) == pytest.approx(
            0.12255624891826557, abs=1e-10
        )
        assert fock_relative_entropy_thermal(1.5, 0.5) == pytest.approx(
            0.5350297656662183, abs=1e-10
        )

    def test_vacuum_sigma(self):
        # D(vacuum || thermal nbar=1) = log2(2) = 1
        assert fock_relative_entropy_thermal(0.0, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_cutoff_guard(self):
        with pytest.raises(DomainError, match="cutoff"):
            fock_relative_entropy_thermal(50.0, 1.0, cutoff=100)

    def test_rho_must_be_mixed(self):
        with pytest.raises(DomainError):
            fock_relative_entropy_thermal(0.5, 0.0)
