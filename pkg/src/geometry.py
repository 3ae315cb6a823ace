"""
Complex-plane primitives and Moebius automorphisms of the unit disk

Points are Python complex numbers. The canonical automorphism is
f(z) = (z + a) / (1 + a z) with 0 <= a < 1; everything else in the
toolkit is expressed through it.
"""

import cmath
import math
import os
import sys
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Tuple, Union

# Add project root to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config.config import TANGENCY_EPS, TWO_PI
from src.errors import DomainError, InvalidInputError

PointLike = Union[complex, float, int, Tuple[float, float]]


def as_point(z: PointLike, name: str = 'point') -> complex:
    """Coerce to a finite complex number"""
    if isinstance(z, tuple):
        if len(z) != 2:
            raise InvalidInputError(f"{name} must be a (re, im) pair, got {z!r}")
        z = complex(float(z[0]), float(z[1]))
    try:
        z = complex(z)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"{name} is not a complex number: {z!r}") from e
    if not cmath.isfinite(z):
        raise InvalidInputError(f"{name} must be finite, got {z!r}")
    return z


def as_real(x: float, name: str = 'value') -> float:
    """Coerce to a finite float"""
    try:
        x = float(x)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"{name} is not a real number: {x!r}") from e
    if not math.isfinite(x):
        raise InvalidInputError(f"{name} must be finite, got {x!r}")
    return x


def point_to_dict(z: complex) -> Dict[str, float]:
    """Serialize a point as {"re", "im"}"""
    return {'re': z.real, 'im': z.imag}


def point_from_dict(data: Dict[str, Any]) -> complex:
    """Inverse of point_to_dict"""
    return as_point((data['re'], data['im']))


def normalize_angle(t: float) -> float:
    """Reduce an angle to [0, 2*pi)"""
    t = math.fmod(t, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    # fmod of a tiny negative angle lands on 2*pi after the shift
    if t >= TWO_PI:
        t = 0.0
    return t


def angle_distance(s: float, t: float) -> float:
    """Distance between two angles on the circle, in [0, pi]"""
    d = abs(normalize_angle(s) - normalize_angle(t))
    return min(d, TWO_PI - d)


def unit(t: float) -> complex:
    """e^{it}"""
    return complex(math.cos(t), math.sin(t))


@dataclass(frozen=True)
class MoebiusMap:
    """Canonical disk automorphism f(z) = (z + a) / (1 + a z)"""

    a: float

    def __post_init__(self):
        a = as_real(self.a, 'a')
        if not 0.0 <= a < 1.0:
            raise InvalidInputError(f"Moebius parameter must satisfy 0 <= a < 1, got {a}")
        object.__setattr__(self, 'a', a)

    @property
    def pole(self) -> complex:
        """f^{-1}(infinity) = -1/a; infinite for the identity"""
        if self.a == 0.0:
            return complex(math.inf, 0.0)
        return complex(-1.0 / self.a, 0.0)

    def __call__(self, z: PointLike) -> complex:
        return mobius_apply(self, z)

    def inverse(self, w: PointLike) -> complex:
        return mobius_inverse(self, w)


class TangencyKind(Enum):
    """How the preimage of a supporting line meets the unit circle"""

    INTERNAL = 'internal'
    EXTERNAL = 'external'
    LINE = 'line'


@dataclass(frozen=True)
class Line:
    """Straight line through `point` with unit direction `unit_direction`"""

    point: complex
    unit_direction: complex

    def __post_init__(self):
        d = as_point(self.unit_direction, 'unit_direction')
        if abs(abs(d) - 1.0) > 1e-12:
            raise InvalidInputError(f"Line direction must have unit modulus, got |d| = {abs(d)}")
        object.__setattr__(self, 'point', as_point(self.point, 'point'))
        object.__setattr__(self, 'unit_direction', d)

    def signed_distance(self, z: complex) -> float:
        """Positive to the left of the direction of travel"""
        return ((z - self.point) * self.unit_direction.conjugate()).imag

    def contains(self, z: complex) -> bool:
        """Strictly on the same side as the origin"""
        return self.signed_distance(z) * self.signed_distance(0j) > 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': 'line',
            'point': point_to_dict(self.point),
            'unit_direction': point_to_dict(self.unit_direction),
        }


@dataclass(frozen=True)
class Circle:
    """Circle with strictly positive radius"""

    center: complex
    radius: float

    def __post_init__(self):
        r = as_real(self.radius, 'radius')
        if r <= 0.0:
            raise InvalidInputError(f"Circle radius must be positive, got {r}")
        object.__setattr__(self, 'center', as_point(self.center, 'center'))
        object.__setattr__(self, 'radius', r)

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        """Closed-disk membership with slack `tol`; tol = 0 means the open disk"""
        d = abs(z - self.center)
        return d <= self.radius + tol if tol > 0.0 else d < self.radius

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': 'circle',
            'center': point_to_dict(self.center),
            'radius': self.radius,
        }


GeneralizedCircle = Union[Line, Circle]


def mobius_apply(m: MoebiusMap, z: PointLike) -> complex:
    """w = (z + a) / (1 + a z)"""
    z = as_point(z, 'z')
    denominator = 1.0 + m.a * z
    if denominator == 0.0:
        raise DomainError(f"z = {z} is the pole of the map")
    return (z + m.a) / denominator


def mobius_inverse(m: MoebiusMap, w: PointLike) -> complex:
    """z = (w - a) / (1 - a w)"""
    w = as_point(w, 'w')
    denominator = 1.0 - m.a * w
    if denominator == 0.0:
        raise DomainError(f"w = {w} is the pole of the inverse map")
    return (w - m.a) / denominator


def theta_from_phi(m: MoebiusMap, phi: float) -> float:
    """Argument of f^{-1}(e^{i phi}), in [0, 2*pi)"""
    phi = as_real(phi, 'phi')
    return normalize_angle(cmath.phase(mobius_inverse(m, unit(phi))))


def classify_tangency(m: MoebiusMap, phi: float) -> TangencyKind:
    """
    Position of the preimage of the supporting line at e^{i phi}

    The supporting line passes through f(infinity) = 1/a exactly when
    cos(phi) = a; then the preimage is a line. The identity map keeps
    every supporting line a line.
    """
    phi = as_real(phi, 'phi')
    if m.a == 0.0:
        return TangencyKind.LINE
    gap = math.cos(phi) - m.a
    if gap > TANGENCY_EPS:
        return TangencyKind.INTERNAL
    if gap < -TANGENCY_EPS:
        return TangencyKind.EXTERNAL
    return TangencyKind.LINE


def _signed_radius(a: float, theta: float) -> float:
    # negative values describe circles tangent from outside
    c = math.cos(theta)
    return (1.0 + 2.0 * a * c + a * a) / (2.0 * a * (a + c))


def circle_radius_R(m: MoebiusMap, theta: float) -> float:
    """
    Radius of the preimage circle tangent internally at e^{i theta}

    Solves |(1 - R) e^{i theta} + 1/a| = R for R.
    """
    theta = as_real(theta, 'theta')
    if m.a == 0.0:
        raise DomainError("Radius is undefined for the identity map")
    if math.cos(theta) <= -m.a:
        raise DomainError(
            f"No internally tangent circle at theta = {theta}: cos(theta) <= -a = {-m.a}"
        )
    return _signed_radius(m.a, theta)


def preimage_of_supporting_line(m: MoebiusMap, phi: float) -> Tuple[GeneralizedCircle, float]:
    """
    Preimage under f of the line supporting the unit disk at e^{i phi}

    Returns the curve together with its tangency angle theta. Circles are
    centered at (1 - R) e^{i theta} for the signed radius R, which places
    internal circles around the disk and external ones outside it.
    """
    phi = normalize_angle(as_real(phi, 'phi'))
    theta = theta_from_phi(m, phi)
    if classify_tangency(m, phi) is TangencyKind.LINE:
        touch = unit(theta)
        return Line(point=touch, unit_direction=1j * touch), theta
    R = _signed_radius(m.a, theta)
    return Circle(center=(1.0 - R) * unit(theta), radius=abs(R)), theta


def preimage_region_contains(m: MoebiusMap, phi: float, z: PointLike) -> bool:
    """Whether z lies in f^{-1}(H_phi), i.e. Re(1 - e^{-i phi} f(z)) > 0"""
    w = mobius_apply(m, z)
    return (1.0 - unit(-as_real(phi, 'phi')) * w).real > 0.0


@dataclass(frozen=True)
class DiskAutomorphism:
    """General automorphism g(z) = e^{i rotation} (z - center) / (1 - conj(center) z)"""

    rotation: float
    center: complex

    def __post_init__(self):
        c = as_point(self.center, 'center')
        if abs(c) >= 1.0:
            raise InvalidInputError(f"Automorphism center must lie in the unit disk, got |z0| = {abs(c)}")
        object.__setattr__(self, 'center', c)
        object.__setattr__(self, 'rotation', as_real(self.rotation, 'rotation'))

    def apply(self, z: PointLike) -> complex:
        z = as_point(z, 'z')
        return unit(self.rotation) * (z - self.center) / (1.0 - self.center.conjugate() * z)

    def canonical(self) -> Tuple[float, MoebiusMap, float]:
        """
        Split into rotations around the canonical map

        Returns (pre, m, post) with g(z) = e^{i post} f(e^{i pre} z).
        Rotations are isometries of the triangular ratio metric in the
        disk, so the distortion of g equals that of m.
        """
        a = abs(self.center)
        alpha = cmath.phase(-self.center) if a > 0.0 else 0.0
        return normalize_angle(-alpha), MoebiusMap(a), normalize_angle(self.rotation + alpha)
