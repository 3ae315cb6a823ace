"""
Planar domains on which the triangular ratio metric is evaluated
"""

import math
import os
import sys
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Sequence

import numpy as np

# Add project root to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config.config import POLYGON_COLLINEAR_TOL, TWO_PI
from src.errors import DomainError, InvalidInputError
from src.geometry import PointLike, as_point, point_to_dict
from src.hyperbolic import DiskDomain, HalfPlaneDomain


class BoundaryPiece(ABC):
    """A parametrized piece of a domain boundary"""

    periodic = False

    @abstractmethod
    def parameter_range(self):
        """(start, stop) of the parameter"""

    @abstractmethod
    def point(self, t):
        """Boundary point(s) at parameter t; accepts scalars and arrays"""

    @property
    @abstractmethod
    def length(self) -> float:
        """Arclength, used to spread samples uniformly"""

    def sample(self, n: int) -> np.ndarray:
        """n parameters, uniform in arclength"""
        start, stop = self.parameter_range()
        return np.linspace(start, stop, n, endpoint=not self.periodic)


class ArcPiece(BoundaryPiece):
    """Full circle, parametrized by angle"""

    periodic = True

    def __init__(self, center: complex, radius: float):
        self.center = center
        self.radius = radius

    def parameter_range(self):
        return 0.0, TWO_PI

    def point(self, t):
        return self.center + self.radius * np.exp(1j * np.asarray(t, dtype=float))

    @property
    def length(self) -> float:
        return TWO_PI * self.radius


class SegmentPiece(BoundaryPiece):
    """Closed segment [start, end], parametrized on [0, 1]"""

    def __init__(self, start: complex, end: complex):
        self.start = start
        self.end = end

    def parameter_range(self):
        return 0.0, 1.0

    def point(self, t):
        return self.start + np.asarray(t, dtype=float) * (self.end - self.start)

    @property
    def length(self) -> float:
        return abs(self.end - self.start)


class MetricDomain(ABC):
    """Abstract base class for the supported domains"""

    kind = 'domain'

    @abstractmethod
    def contains(self, z: complex) -> bool:
        """Strict interior membership"""

    @abstractmethod
    def boundary_pieces(self, u: complex, v: complex) -> List[BoundaryPiece]:
        """Boundary pieces that contain a minimizer of |u - w| + |w - v|"""

    @abstractmethod
    def nearest_boundary_point(self, z: complex) -> complex:
        """Closest boundary point to an interior point"""

    def describe(self) -> Dict[str, Any]:
        """Serializable description"""
        return {'kind': self.kind}

    def validate_points(self, *points: PointLike) -> List[complex]:
        """Coerce points and require each to lie strictly inside"""
        result = []
        for index, p in enumerate(points, start=1):
            z = as_point(p, f'point {index}')
            if not self.contains(z):
                raise DomainError(f"point {index} = {z} is not strictly inside the {self.kind} domain")
            result.append(z)
        return result


class Disk(MetricDomain):
    """Open disk K(z0, R)"""

    kind = 'disk'

    def __init__(self, center: PointLike = 0j, radius: float = 1.0):
        self.disk = DiskDomain(as_point(center, 'center'), radius)

    @property
    def center(self) -> complex:
        return self.disk.center

    @property
    def radius(self) -> float:
        return self.disk.radius

    def contains(self, z: complex) -> bool:
        return self.disk.contains(z)

    def boundary_pieces(self, u: complex, v: complex) -> List[BoundaryPiece]:
        return [ArcPiece(self.center, self.radius)]

    def nearest_boundary_point(self, z: complex) -> complex:
        offset = z - self.center
        direction = offset / abs(offset) if offset != 0 else 1.0
        return self.center + self.radius * direction

    def describe(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'center': point_to_dict(self.center), 'radius': self.radius}


class UnitDisk(Disk):
    """The unit disk U"""

    kind = 'unit-disk'

    def __init__(self):
        super().__init__(0j, 1.0)

    def contains(self, z: complex) -> bool:
        return abs(z) < 1.0

    def describe(self) -> Dict[str, Any]:
        return {'kind': self.kind}


class UpperHalfPlane(MetricDomain):
    """Im z > 0"""

    kind = 'halfplane'

    def contains(self, z: complex) -> bool:
        return z.imag > 0.0

    def boundary_pieces(self, u: complex, v: complex) -> List[BoundaryPiece]:
        # the straight path from u to conj(v) crosses the axis between Re u and Re v
        lo = min(u.real, v.real) - 1.0
        hi = max(u.real, v.real) + 1.0
        return [SegmentPiece(complex(lo, 0.0), complex(hi, 0.0))]

    def nearest_boundary_point(self, z: complex) -> complex:
        return complex(z.real, 0.0)


class ConvexPolygon(MetricDomain):
    """Strictly convex polygon with counterclockwise vertices"""

    kind = 'polygon'

    def __init__(self, vertices: Sequence[PointLike]):
        points = [as_point(p, 'vertex') for p in vertices]
        if len(points) < 3:
            raise InvalidInputError(f"Polygon needs at least 3 vertices, got {len(points)}")
        scale = max(abs(p - q) for p in points for q in points)
        if scale == 0.0:
            raise InvalidInputError("Polygon vertices coincide")
        for i in range(len(points)):
            a, b, c = points[i - 1], points[i], points[(i + 1) % len(points)]
            if _cross(b - a, c - b) <= POLYGON_COLLINEAR_TOL * scale * scale:
                raise InvalidInputError(
                    f"Polygon is not strictly convex and counterclockwise at vertex {i} = {b}"
                )
        if signed_area(points) <= 0.0:
            raise InvalidInputError("Polygon vertices must be in counterclockwise order")
        self.vertices = points

    @property
    def edges(self):
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def edge_halfplanes(self) -> List[HalfPlaneDomain]:
        """Supporting half-planes bounded by the edge lines"""
        return [HalfPlaneDomain(a, b - a) for a, b in self.edges]

    def contains(self, z: complex) -> bool:
        return all(_cross(b - a, z - a) > 0.0 for a, b in self.edges)

    def boundary_pieces(self, u: complex, v: complex) -> List[BoundaryPiece]:
        return [SegmentPiece(a, b) for a, b in self.edges]

    def nearest_boundary_point(self, z: complex) -> complex:
        best = None
        for a, b in self.edges:
            d = b - a
            t = min(max(((z - a) * d.conjugate()).real / abs(d) ** 2, 0.0), 1.0)
            w = a + t * d
            if best is None or abs(z - w) < abs(z - best):
                best = w
        return best

    def describe(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'vertices': [point_to_dict(p) for p in self.vertices]}


def _cross(p: complex, q: complex) -> float:
    return p.real * q.imag - p.imag * q.real


def signed_area(points: Sequence[complex]) -> float:
    """Shoelace area; positive for counterclockwise order"""
    n = len(points)
    return 0.5 * math.fsum(_cross(points[i], points[(i + 1) % n]) for i in range(n))


def create_domain(kind: str = 'unit-disk', **kwargs) -> MetricDomain:
    """Factory function to create domain instances"""
    domains = {
        'unit-disk': UnitDisk,
        'halfplane': UpperHalfPlane,
        'disk': Disk,
        'polygon': ConvexPolygon,
    }

    if kind not in domains:
        raise InvalidInputError(f"Unknown domain kind: {kind}")

    return domains[kind](**kwargs)
