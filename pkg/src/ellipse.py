"""
Maximal focal ellipses in the unit disk and the auxiliary curve
zeta1(phi) + conj(zeta2(phi)), zeta_k(phi) = 1 - e^{-i phi} z_k
"""

import cmath
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

# Add project root to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config.config import BOUNDARY_TOL, CONTAINMENT_SAMPLES, TWO_PI
from src.errors import DomainError, InvalidInputError
from src.geometry import PointLike, as_point, as_real, normalize_angle, point_to_dict, unit
from src.trimetric import UNIT_DISK, tangent_denominator, unit_circle_contacts


@dataclass(frozen=True)
class FocalEllipse:
    """Ellipse {w : |w - focus1| + |w - focus2| = distance_sum}"""

    focus1: complex
    focus2: complex
    distance_sum: float

    def __post_init__(self):
        if self.distance_sum < abs(self.focus1 - self.focus2) * (1.0 - 1e-15):
            raise InvalidInputError(
                f"distance sum {self.distance_sum} is shorter than the focal distance "
                f"{abs(self.focus1 - self.focus2)}"
            )

    @property
    def center(self) -> complex:
        return 0.5 * (self.focus1 + self.focus2)

    @property
    def semi_major(self) -> float:
        return 0.5 * self.distance_sum

    @property
    def semi_minor(self) -> float:
        c = 0.5 * abs(self.focus1 - self.focus2)
        return math.sqrt(max(self.semi_major ** 2 - c * c, 0.0))

    @property
    def rotation(self) -> float:
        """Direction of the major axis"""
        if self.focus1 == self.focus2:
            return 0.0
        return cmath.phase(self.focus2 - self.focus1)

    @property
    def is_segment(self) -> bool:
        return self.semi_minor == 0.0

    def sample(self, n: int = CONTAINMENT_SAMPLES) -> np.ndarray:
        t = np.linspace(0.0, TWO_PI, n, endpoint=False)
        local = self.semi_major * np.cos(t) + 1j * self.semi_minor * np.sin(t)
        return self.center + unit(self.rotation) * local

    def to_dict(self) -> Dict[str, Any]:
        return {
            'focus1': point_to_dict(self.focus1),
            'focus2': point_to_dict(self.focus2),
            'distance_sum': self.distance_sum,
            'semi_major': self.semi_major,
            'semi_minor': self.semi_minor,
        }


@dataclass(frozen=True)
class InscribedEllipse:
    """Maximal focal ellipse in U with every angle where it touches the unit circle"""

    ellipse: FocalEllipse
    contacts: List[float] = field(default_factory=list)
    degenerate: bool = False

    def to_dict(self) -> Dict[str, Any]:
        data = self.ellipse.to_dict()
        data['contacts'] = list(self.contacts)
        data['degenerate'] = self.degenerate
        return data


@dataclass(frozen=True)
class ProofEllipseData:
    """Closest approach of zeta1(phi) + conj(zeta2(phi)) to the origin"""

    r: float
    eta: float
    psi: float
    degenerate: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {'r': self.r, 'eta': self.eta, 'psi': self.psi, 'degenerate': self.degenerate}


def zeta(z: complex, phi) -> complex:
    """zeta(phi) = 1 - e^{-i phi} z"""
    return 1.0 - np.exp(-1j * np.asarray(phi, dtype=float)) * z


def maximal_inscribed_ellipse(z1: PointLike, z2: PointLike) -> InscribedEllipse:
    """
    Largest ellipse with foci z1, z2 inside the unit disk

    For coincident foci the ellipse is a circle; its single contact is the
    nearest boundary point, or angle 0 when both foci sit at the origin.
    """
    z1, z2 = UNIT_DISK.validate_points(z1, z2)
    if z1 == z2:
        angle = normalize_angle(cmath.phase(z1)) if z1 != 0 else 0.0
        ellipse = FocalEllipse(z1, z2, 2.0 * (1.0 - abs(z1)))
        return InscribedEllipse(ellipse, [angle], degenerate=True)

    contacts = unit_circle_contacts(z1, z2)
    ellipse = FocalEllipse(z1, z2, contacts[0][1])
    return InscribedEllipse(ellipse, [angle for angle, _ in contacts])


def max_modulus(ellipse: FocalEllipse, samples: int = CONTAINMENT_SAMPLES) -> float:
    """Largest |w| over sampled ellipse points"""
    return float(np.max(np.abs(ellipse.sample(samples))))


def bisector_residual(w: PointLike, u: PointLike, v: PointLike) -> float:
    """
    Angle mismatch of the reflection law at a boundary point w

    Compares the angles that w->u and w->v make with the inward normal -w;
    zero exactly when the normal bisects the angle between them.
    """
    w = as_point(w, 'w')
    if abs(abs(w) - 1.0) > BOUNDARY_TOL:
        raise DomainError(f"w = {w} is not on the unit circle")
    u, v = UNIT_DISK.validate_points(u, v)
    if u == w or v == w:
        raise DomainError("w must differ from both foci")
    normal = -w
    angle_u = abs(cmath.phase((u - w) / normal))
    angle_v = abs(cmath.phase((v - w) / normal))
    return abs(angle_u - angle_v)


def proof_ellipse(z1: PointLike, z2: PointLike) -> ProofEllipseData:
    """
    Minimum modulus r of the ellipse phi -> zeta1(phi) + conj(zeta2(phi))

    psi is the minimizing parameter (smallest angle on ties) and eta the
    argument of the curve point there. The curve collapses to the point 2
    when both points are the origin.
    """
    z1, z2 = UNIT_DISK.validate_points(z1, z2)
    if z1 == 0 and z2 == 0:
        return ProofEllipseData(r=2.0, eta=0.0, psi=0.0, degenerate=True)

    psi, r = unit_circle_contacts(z1, z2)[0]
    eta = normalize_angle(cmath.phase(complex(tangent_denominator(z1, z2, psi))))
    return ProofEllipseData(r=r, eta=eta, psi=psi)


def proof_ellipse_curve(z1: PointLike, z2: PointLike, samples: int = CONTAINMENT_SAMPLES) -> np.ndarray:
    """Sampled points of zeta1(phi) + conj(zeta2(phi))"""
    z1, z2 = as_point(z1, 'z1'), as_point(z2, 'z2')
    phi = np.linspace(0.0, TWO_PI, samples, endpoint=False)
    return tangent_denominator(z1, z2, phi)


def same_argument_residual(z1: PointLike, z2: PointLike, psi: float) -> float:
    """|arg zeta1(psi) - arg conj(zeta2(psi))| folded to [0, pi]"""
    z1, z2 = UNIT_DISK.validate_points(z1, z2)
    psi = as_real(psi, 'psi')
    first = complex(zeta(z1, psi))
    second = complex(zeta(z2, psi)).conjugate()
    if first == 0 or second == 0:
        raise DomainError(f"zeta vanishes at psi = {psi}")
    return abs(cmath.phase(first / second))
