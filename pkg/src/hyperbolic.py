"""
Closed-form hyperbolic metric in the unit disk, half-planes and disks

Every metric is returned as th(rho / 2); rho itself is a thin wrapper.
Domain membership is strict, with no tolerance.
"""

import math
import os
import sys
from dataclasses import dataclass

# Add project root to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.errors import DomainError
from src.geometry import PointLike, as_point, as_real, normalize_angle, unit


@dataclass(frozen=True)
class TangentHalfPlane:
    """H_vartheta = {z : Re(1 - e^{-i vartheta} z) > 0}, supporting the unit disk at e^{i vartheta}"""

    vartheta: float

    def __post_init__(self):
        object.__setattr__(self, 'vartheta', normalize_angle(as_real(self.vartheta, 'vartheta')))

    def contains(self, z: complex) -> bool:
        return (1.0 - unit(-self.vartheta) * z).real > 0.0


@dataclass(frozen=True)
class DiskDomain:
    """Open disk K(z0, R)"""

    center: complex
    radius: float

    def __post_init__(self):
        r = as_real(self.radius, 'radius')
        if r <= 0.0:
            raise DomainError(f"Disk radius must be positive, got {r}")
        object.__setattr__(self, 'center', as_point(self.center, 'center'))
        object.__setattr__(self, 'radius', r)

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) < self.radius


@dataclass(frozen=True)
class HalfPlaneDomain:
    """Open half-plane to the left of the directed line through `point` along `unit_direction`"""

    point: complex
    unit_direction: complex

    def __post_init__(self):
        d = as_point(self.unit_direction, 'unit_direction')
        if d == 0:
            raise DomainError("Half-plane direction must be nonzero")
        object.__setattr__(self, 'point', as_point(self.point, 'point'))
        object.__setattr__(self, 'unit_direction', d / abs(d))

    def contains(self, z: complex) -> bool:
        return ((z - self.point) * self.unit_direction.conjugate()).imag > 0.0

    def reflect(self, z: complex) -> complex:
        """Mirror image across the boundary line"""
        d = self.unit_direction
        return self.point + d * ((z - self.point) * d.conjugate()).conjugate()


def tanh_half_rho_unit_disk(u: PointLike, v: PointLike) -> float:
    """th(rho_U(u, v) / 2) = |u - v| / |1 - u conj(v)|"""
    u, v = as_point(u, 'u'), as_point(v, 'v')
    for name, z in (('u', u), ('v', v)):
        if not abs(z) < 1.0:
            raise DomainError(f"{name} = {z} is not inside the unit disk")
    return abs(u - v) / abs(1.0 - u * v.conjugate())


def tanh_half_rho_halfplane(u: PointLike, v: PointLike) -> float:
    """th(rho_H(u, v) / 2) = |u - v| / |u - conj(v)| in the upper half-plane"""
    u, v = as_point(u, 'u'), as_point(v, 'v')
    for name, z in (('u', u), ('v', v)):
        if not z.imag > 0.0:
            raise DomainError(f"{name} = {z} is not in the upper half-plane")
    return abs(u - v) / abs(u - v.conjugate())


def tanh_half_rho_disk(d: DiskDomain, u: PointLike, v: PointLike) -> float:
    """th(rho_K(u, v) / 2) = R |u - v| / |R^2 - (u - z0)(conj(v) - conj(z0))|"""
    u, v = as_point(u, 'u'), as_point(v, 'v')
    for name, z in (('u', u), ('v', v)):
        if not d.contains(z):
            raise DomainError(f"{name} = {z} is not inside the disk K({d.center}, {d.radius})")
    R = d.radius
    z0 = d.center
    return R * abs(u - v) / abs(R * R - (u - z0) * (v - z0).conjugate())


def tanh_half_rho_tangent(h: TangentHalfPlane, z1: PointLike, z2: PointLike) -> float:
    """th(rho_{H_vartheta}(z1, z2) / 2) = |z1 - z2| / |2 - e^{-i vartheta} z1 - e^{i vartheta} conj(z2)|"""
    z1, z2 = as_point(z1, 'z1'), as_point(z2, 'z2')
    for name, z in (('z1', z1), ('z2', z2)):
        if not h.contains(z):
            raise DomainError(f"{name} = {z} is not in the half-plane tangent at angle {h.vartheta}")
    e = unit(h.vartheta)
    return abs(z1 - z2) / abs(2.0 - e.conjugate() * z1 - e * z2.conjugate())


def tanh_half_rho_general_halfplane(h: HalfPlaneDomain, u: PointLike, v: PointLike) -> float:
    """th(rho_H(u, v) / 2) = |u - v| / |u - v*| with v* the mirror image of v"""
    u, v = as_point(u, 'u'), as_point(v, 'v')
    for name, z in (('u', u), ('v', v)):
        if not h.contains(z):
            raise DomainError(f"{name} = {z} is not in the half-plane")
    return abs(u - v) / abs(u - h.reflect(v))


def to_upper_halfplane(h: TangentHalfPlane, z: PointLike) -> complex:
    """Rigid motion z -> i (1 - e^{-i vartheta} z) carrying H_vartheta onto Im > 0"""
    return 1j * (1.0 - unit(-h.vartheta) * as_point(z))


def rho_from_tanh_half(t: float) -> float:
    """rho = 2 artanh(t)"""
    t = as_real(t, 't')
    if not 0.0 <= t < 1.0:
        raise DomainError(f"th(rho / 2) must lie in [0, 1), got {t}")
    return 2.0 * math.atanh(t)


def rho_unit_disk(u: PointLike, v: PointLike) -> float:
    return rho_from_tanh_half(tanh_half_rho_unit_disk(u, v))


def rho_halfplane(u: PointLike, v: PointLike) -> float:
    return rho_from_tanh_half(tanh_half_rho_halfplane(u, v))


def rho_disk(d: DiskDomain, u: PointLike, v: PointLike) -> float:
    return rho_from_tanh_half(tanh_half_rho_disk(d, u, v))


def rho_tangent(h: TangentHalfPlane, z1: PointLike, z2: PointLike) -> float:
    return rho_from_tanh_half(tanh_half_rho_tangent(h, z1, z2))
