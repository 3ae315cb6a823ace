"""
Unit tests for the closed-form hyperbolic metrics
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.errors import DomainError
from src.geometry import MoebiusMap, unit
from src.hyperbolic import (
    DiskDomain, HalfPlaneDomain, TangentHalfPlane, rho_disk, rho_from_tanh_half, rho_halfplane,
    rho_tangent, rho_unit_disk, tanh_half_rho_disk, tanh_half_rho_general_halfplane,
    tanh_half_rho_halfplane, tanh_half_rho_tangent, tanh_half_rho_unit_disk, to_upper_halfplane
)

angles = st.floats(min_value=0.0, max_value=2 * math.pi, exclude_max=True)


@st.composite
def disk_points(draw, max_modulus=0.95):
    r = draw(st.floats(min_value=0.0, max_value=max_modulus))
    return r * unit(draw(angles))


class TestUnitDisk:
    """Test th(rho_U / 2)"""

    def test_examples(self):
        """Test values from the direct formula"""
        assert tanh_half_rho_unit_disk(0, 0.5) == pytest.approx(0.5)
        assert tanh_half_rho_unit_disk(0.3 + 0.4j, 0.3 + 0.4j) == 0.0

    def test_off_axis_pair(self):
        """Test a generic pair against |u - v| / |1 - u conj(v)| evaluated by hand"""
        # |u - v| = sqrt(0.2), 1 - u conj(v) = 0.95 + 0.1i
        value = tanh_half_rho_unit_disk(0.3 + 0.4j, -0.1 + 0.2j)
        assert value == pytest.approx(math.sqrt(0.2) / math.sqrt(0.95 ** 2 + 0.1 ** 2), abs=1e-15)
        assert value == pytest.approx(0.468165, abs=1e-6)

    def test_rejects_boundary(self):
        """Test strict membership"""
        with pytest.raises(DomainError):
            tanh_half_rho_unit_disk(1.0, 0.0)
        with pytest.raises(DomainError):
            tanh_half_rho_unit_disk(0.0, 2j)

    def test_moebius_invariance(self):
        """Test invariance under canonical maps on random triples"""
        rng = np.random.default_rng(1)
        for _ in range(10000):
            m = MoebiusMap(rng.uniform(0.0, 0.99))
            u, v = (rng.uniform(0.0, 0.95) * unit(rng.uniform(0, 2 * math.pi)) for _ in range(2))
            before = tanh_half_rho_unit_disk(u, v)
            after = tanh_half_rho_unit_disk(m(u), m(v))
            assert abs(before - after) <= 1e-12

    @given(u=disk_points(), v=disk_points())
    def test_symmetry_and_range(self, u, v):
        """Test symmetry and 0 <= th < 1"""
        value = tanh_half_rho_unit_disk(u, v)
        assert value == pytest.approx(tanh_half_rho_unit_disk(v, u), abs=1e-15)
        assert 0.0 <= value < 1.0

    @given(u=disk_points(), v=disk_points(), vartheta=angles)
    def test_dominates_tangent_halfplanes(self, u, v, vartheta):
        """Test that the smaller domain gives the larger metric"""
        assert tanh_half_rho_unit_disk(u, v) >= tanh_half_rho_tangent(TangentHalfPlane(vartheta), u, v) - 1e-15


class TestHalfPlane:
    """Test th(rho_H / 2) in the upper half-plane"""

    def test_examples(self):
        """Test hand-evaluated pairs"""
        assert tanh_half_rho_halfplane(1j, 2 + 1j) == pytest.approx(2 / math.sqrt(8))
        assert tanh_half_rho_halfplane(1j, 1j) == 0.0
        assert tanh_half_rho_halfplane(1j, 3j) == pytest.approx(0.5)

    def test_rejects_lower_half(self):
        """Test that Im z must be positive"""
        with pytest.raises(DomainError):
            tanh_half_rho_halfplane(1.0, 1j)
        with pytest.raises(DomainError):
            tanh_half_rho_halfplane(1j, -1j)

    def test_general_halfplane_matches_upper(self):
        """Test that the real axis directed to the right bounds the upper half-plane"""
        h = HalfPlaneDomain(0j, 1.0)
        assert h.contains(1j)
        assert not h.contains(-1j)
        assert h.reflect(2 + 3j) == pytest.approx(2 - 3j)
        assert tanh_half_rho_general_halfplane(h, 1j, 2 + 1j) == pytest.approx(tanh_half_rho_halfplane(1j, 2 + 1j))

    def test_general_halfplane_rigid_motion(self):
        """Test invariance under rotating the half-plane and the points together"""
        rotation = unit(1.1)
        shift = 0.3 - 2j
        h = HalfPlaneDomain(shift, rotation)
        u, v = 0.5 + 1j, -1 + 2.5j
        expected = tanh_half_rho_halfplane(u, v)
        assert tanh_half_rho_general_halfplane(h, shift + rotation * u, shift + rotation * v) == pytest.approx(expected)

    def test_general_halfplane_rejects_outside(self):
        """Test membership check"""
        with pytest.raises(DomainError):
            tanh_half_rho_general_halfplane(HalfPlaneDomain(0j, 1.0), -1j, 1j)

    def test_zero_direction(self):
        """Test that a degenerate direction is rejected"""
        with pytest.raises(DomainError):
            HalfPlaneDomain(0j, 0j)


class TestDisk:
    """Test th(rho_K / 2) on K(z0, R)"""

    def test_examples(self):
        """Test hand-evaluated pairs"""
        assert tanh_half_rho_disk(DiskDomain(0j, 1.0), 0, 0.5) == pytest.approx(0.5)
        assert tanh_half_rho_disk(DiskDomain(1 + 0j, 2.0), 1, 2) == pytest.approx(0.5)
        assert tanh_half_rho_disk(DiskDomain(1j, 3.0), 0.5j, 0.5j) == 0.0

    def test_reduces_to_unit_disk(self):
        """Test that K(0, 1) agrees with the unit disk formula"""
        rng = np.random.default_rng(2)
        d = DiskDomain(0j, 1.0)
        for _ in range(10000):
            u, v = (rng.uniform(0.0, 0.999) * unit(rng.uniform(0, 2 * math.pi)) for _ in range(2))
            assert abs(tanh_half_rho_disk(d, u, v) - tanh_half_rho_unit_disk(u, v)) <= 1e-14

    @given(u=disk_points(), v=disk_points())
    def test_monotone_in_domain(self, u, v):
        """Test that K(0, 1) inside K(0, 2) gives larger values"""
        small = tanh_half_rho_disk(DiskDomain(0j, 1.0), u, v)
        large = tanh_half_rho_disk(DiskDomain(0j, 2.0), u, v)
        if u != v:
            assert small > large
        else:
            assert small == large == 0.0

    def test_rejects_outside_and_bad_radius(self):
        """Test membership and radius validation"""
        with pytest.raises(DomainError):
            tanh_half_rho_disk(DiskDomain(0j, 1.0), 0, 1.5)
        with pytest.raises(DomainError):
            DiskDomain(0j, 0.0)


class TestTangentHalfPlane:
    """Test half-planes supporting the unit disk"""

    def test_examples(self):
        """Test values at vartheta = 0 and pi"""
        assert tanh_half_rho_tangent(TangentHalfPlane(0.0), 0, 0.5) == pytest.approx(1 / 3)
        assert tanh_half_rho_tangent(TangentHalfPlane(math.pi), 0, -0.5) == pytest.approx(1 / 3)
        assert tanh_half_rho_tangent(TangentHalfPlane(2.0), 0.1j, 0.1j) == 0.0

    def test_membership(self):
        """Test that the tangent half-plane contains the disk but not points beyond the line"""
        h = TangentHalfPlane(0.0)
        assert h.contains(0.99)
        assert h.contains(-5.0)
        assert not h.contains(1.0)
        with pytest.raises(DomainError):
            tanh_half_rho_tangent(h, 1.5, 0)

    @given(vartheta=angles, u=disk_points(), v=disk_points())
    def test_rigid_motion_to_upper_halfplane(self, vartheta, u, v):
        """Test that the rigid motion preserves the metric"""
        h = TangentHalfPlane(vartheta)
        expected = tanh_half_rho_tangent(h, u, v)
        mapped = tanh_half_rho_halfplane(to_upper_halfplane(h, u), to_upper_halfplane(h, v))
        assert mapped == pytest.approx(expected, abs=1e-12)

    def test_vartheta_is_normalized(self):
        """Test that angles are reduced to [0, 2*pi)"""
        assert TangentHalfPlane(-math.pi / 2).vartheta == pytest.approx(3 * math.pi / 2)


class TestRho:
    """Test the rho wrappers"""

    def test_examples(self):
        """Test rho = 2 artanh(t)"""
        assert rho_from_tanh_half(0.0) == 0.0
        assert rho_from_tanh_half(0.5) == pytest.approx(1.098612, abs=1e-6)

    def test_round_trip(self):
        """Test that tanh(x / 2) maps back to x"""
        for x in np.linspace(0.0, 20.0, 201):
            # 1 - tanh(x / 2) ~ 2 e^{-x}, so the rounding of t is amplified by e^x
            tol = max(1e-12, 1e-15 * math.exp(x))
            assert rho_from_tanh_half(math.tanh(x / 2)) == pytest.approx(x, abs=tol)

    def test_range(self):
        """Test that t must lie in [0, 1)"""
        with pytest.raises(DomainError):
            rho_from_tanh_half(1.0)
        with pytest.raises(DomainError):
            rho_from_tanh_half(-0.1)

    def test_wrappers(self):
        """Test each domain wrapper"""
        assert rho_unit_disk(0, 0.5) == pytest.approx(2 * math.atanh(0.5))
        assert rho_halfplane(1j, 3j) == pytest.approx(math.log(3))
        assert rho_disk(DiskDomain(0j, 2.0), 0, 1) == pytest.approx(2 * math.atanh(0.5))
        assert rho_tangent(TangentHalfPlane(0.0), 0, 0.5) == pytest.approx(2 * math.atanh(1 / 3))
