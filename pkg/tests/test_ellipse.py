"""
Unit tests for focal ellipses and the auxiliary proof curve
"""

import math

import numpy as np
import pytest

from src.ellipse import (
    FocalEllipse, bisector_residual, max_modulus, maximal_inscribed_ellipse, proof_ellipse,
    proof_ellipse_curve, same_argument_residual, zeta
)
from src.errors import DomainError, InvalidInputError
from src.geometry import angle_distance, unit
from src.trimetric import s_unit_disk


def random_pairs(seed, count, max_modulus=0.999):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        z1 = rng.uniform(0.0, max_modulus) * unit(rng.uniform(0.0, 2 * math.pi))
        z2 = rng.uniform(0.0, max_modulus) * unit(rng.uniform(0.0, 2 * math.pi))
        if z1 != z2:
            yield z1, z2


class TestFocalEllipse:
    """Test FocalEllipse geometry"""

    def test_axes(self):
        """Test semi-axes from the distance sum and focal distance"""
        e = FocalEllipse(0.5, -0.5, 2.0)
        assert e.semi_major == pytest.approx(1.0)
        assert e.semi_minor == pytest.approx(math.sqrt(0.75))
        assert e.center == 0
        assert not e.is_segment

    def test_segment(self):
        """Test the degenerate case of equality"""
        e = FocalEllipse(0j, 1 + 0j, 1.0)
        assert e.is_segment

    def test_rejects_short_sum(self):
        """Test that the sum must cover the focal distance"""
        with pytest.raises(InvalidInputError):
            FocalEllipse(0j, 1 + 0j, 0.5)

    def test_sample_points_satisfy_definition(self):
        """Test |w - f1| + |w - f2| = distance sum on samples"""
        e = FocalEllipse(0.2 + 0.1j, -0.3 + 0.4j, 1.3)
        points = e.sample(64)
        sums = np.abs(points - e.focus1) + np.abs(points - e.focus2)
        np.testing.assert_allclose(sums, 1.3, atol=1e-12)


class TestMaximalInscribedEllipse:
    """Test the largest focal ellipse inside the unit disk"""

    def test_examples(self):
        """Test distance sums and contacts"""
        symmetric = maximal_inscribed_ellipse(0.5, -0.5)
        assert symmetric.ellipse.distance_sum == pytest.approx(2.0)
        assert symmetric.contacts == pytest.approx([0.0, math.pi], abs=1e-9)
        assert symmetric.ellipse.semi_minor == pytest.approx(math.sqrt(0.75))

        radial = maximal_inscribed_ellipse(0, 0.5)
        assert radial.ellipse.distance_sum == pytest.approx(1.5)
        assert radial.contacts == pytest.approx([0.0], abs=1e-9)
        assert not radial.degenerate

    def test_coincident_foci(self):
        """Test the circle case"""
        center = maximal_inscribed_ellipse(0, 0)
        assert center.degenerate
        assert center.ellipse.distance_sum == 2.0
        assert center.contacts == [0.0]

        off_center = maximal_inscribed_ellipse(0.5j, 0.5j)
        assert off_center.contacts == pytest.approx([math.pi / 2])
        assert off_center.ellipse.distance_sum == pytest.approx(1.0)

    def test_contained_in_disk(self):
        """Test that sampled ellipse points stay in the closed disk"""
        for z1, z2 in random_pairs(10, 300):
            e = maximal_inscribed_ellipse(z1, z2).ellipse
            assert max_modulus(e) <= 1.0 + 1e-9

    def test_contacts_match_witnesses(self):
        """Test agreement with s_unit_disk's witness angle"""
        for z1, z2 in random_pairs(11, 300):
            inscribed = maximal_inscribed_ellipse(z1, z2)
            _, contact = s_unit_disk(z1, z2)
            assert angle_distance(inscribed.contacts[0], contact.witness_angle) <= 1e-8

    def test_to_dict(self):
        """Test serialization"""
        data = maximal_inscribed_ellipse(0, 0.5).to_dict()
        assert data['distance_sum'] == pytest.approx(1.5)
        assert data['focus2'] == {'re': 0.5, 'im': 0.0}
        assert data['degenerate'] is False


class TestBisectorResidual:
    """Test the reflection law at boundary points"""

    def test_examples(self):
        """Test symmetric and collinear configurations"""
        assert bisector_residual(1, 0.5j, -0.5j) == pytest.approx(0.0, abs=1e-15)
        assert bisector_residual(1, 0, 0.5) == pytest.approx(0.0, abs=1e-15)
        assert bisector_residual(1, 0.5j, 0) > 0.1

    def test_errors(self):
        """Test that w must be on the circle and differ from the foci"""
        with pytest.raises(DomainError):
            bisector_residual(0.5, 0, 0.1)

    def test_holds_at_contacts(self):
        """Test the reflection law at the computed contacts"""
        for z1, z2 in random_pairs(12, 1000):
            phi = maximal_inscribed_ellipse(z1, z2).contacts[0]
            assert bisector_residual(unit(phi), z1, z2) <= 1e-8


class TestProofEllipse:
    """Test the curve zeta1(phi) + conj(zeta2(phi))"""

    def test_examples(self):
        """Test minimum modulus and its location"""
        data = proof_ellipse(0, 0.5)
        assert data.r == pytest.approx(1.5)
        assert data.psi == pytest.approx(0.0, abs=1e-9)
        assert data.eta == pytest.approx(0.0, abs=1e-9)

        origin = proof_ellipse(0, 0)
        assert origin.degenerate
        assert origin.r == 2.0

        symmetric = proof_ellipse(0.5, -0.5)
        assert symmetric.r == pytest.approx(2.0)
        assert symmetric.psi == pytest.approx(0.0, abs=1e-9)

    def test_curve_stays_outside_radius(self):
        """Test |curve| >= r on samples and |curve(psi)| = r"""
        for z1, z2 in random_pairs(13, 300):
            data = proof_ellipse(z1, z2)
            curve = proof_ellipse_curve(z1, z2)
            assert np.min(np.abs(curve)) >= data.r - 1e-10
            at_psi = complex(zeta(z1, data.psi)) + complex(zeta(z2, data.psi)).conjugate()
            assert abs(abs(at_psi) - data.r) <= 1e-10

    def test_product_bound_at_contact(self):
        """Test |zeta1(psi)| |zeta2(psi)| <= r / 2"""
        for z1, z2 in random_pairs(14, 300):
            data = proof_ellipse(z1, z2)
            product = abs(complex(zeta(z1, data.psi))) * abs(complex(zeta(z2, data.psi)))
            assert product <= data.r / 2 + 1e-10

    def test_to_dict(self):
        """Test serialization"""
        assert set(proof_ellipse(0, 0.5).to_dict()) == {'r', 'eta', 'psi', 'degenerate'}


class TestSameArgumentResidual:
    """Test that zeta1(psi) and conj(zeta2(psi)) point the same way"""

    def test_examples(self):
        """Test hand-checked configurations"""
        assert same_argument_residual(0, 0.5, 0.0) == pytest.approx(0.0, abs=1e-15)
        assert same_argument_residual(0.5j, -0.5j, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_holds_at_witness(self):
        """Test the residual at the contact from s_unit_disk"""
        for z1, z2 in random_pairs(15, 1000):
            _, contact = s_unit_disk(z1, z2)
            assert same_argument_residual(z1, z2, contact.witness_angle) <= 1e-8
