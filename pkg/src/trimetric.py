"""
Triangular ratio metric s_D on the supported domains

    s_D(u, v) = |u - v| / inf_{w in boundary} (|u - w| + |w - v|)

In the unit disk the infimum is the minimum over tangent half-planes of
|2 - e^{-it} z1 - e^{it} conj(z2)|; polygons use the reflection trick per
edge; a sampled boundary search serves as the oracle for both.
"""

import cmath
import math
import os
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

# Add project root to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config.config import (
    BRUTEFORCE_SAMPLES, CONTACT_ANGLE_TOL, CONTACT_VALUE_TOL, LEADING_COEFFICIENT_TOL,
    MIN_BRUTEFORCE_SAMPLES, NEWTON_MAX_STEP, NEWTON_STEPS, REFINE_XTOL, ROOT_MODULUS_TOL, TWO_PI
)
from src.domains import ConvexPolygon, Disk, MetricDomain, UnitDisk, UpperHalfPlane
from src.errors import InvalidInputError
from src.geometry import PointLike, angle_distance, normalize_angle, point_to_dict, unit
from src.hyperbolic import DiskDomain, tanh_half_rho_general_halfplane, tanh_half_rho_halfplane

UNIT_DISK = UnitDisk()


@dataclass(frozen=True)
class BoundaryInfResult:
    """Infimum of |u - w| + |w - v| over the boundary and a point attaining it"""

    value: float
    witness: complex
    witness_angle: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'value': self.value,
            'witness': point_to_dict(self.witness),
            'witness_angle': self.witness_angle,
        }


def tangent_denominator(z1: complex, z2: complex, t):
    """2 - e^{-it} z1 - e^{it} conj(z2); vectorized over t"""
    e = np.exp(1j * np.asarray(t, dtype=float))
    return 2.0 - z1 / e - e * np.conj(z2)


def _quartic_roots(coefficients: np.ndarray) -> np.ndarray:
    # stacked companion matrices; rows with a negligible leading term drop to a cubic
    roots = np.full((coefficients.shape[0], 4), np.nan, dtype=complex)
    scale = np.max(np.abs(coefficients), axis=1)
    full = np.abs(coefficients[:, 0]) > LEADING_COEFFICIENT_TOL * scale
    if np.any(full):
        monic = coefficients[full, 1:] / coefficients[full, :1]
        companion = np.zeros((monic.shape[0], 4, 4), dtype=complex)
        companion[:, 0, :] = -monic
        companion[:, 1, 0] = companion[:, 2, 1] = companion[:, 3, 2] = 1.0
        roots[full] = np.linalg.eigvals(companion)
    for k in np.flatnonzero(~full):
        reduced = np.roots(coefficients[k, 1:]) if scale[k] > 0.0 else np.empty(0)
        roots[k, :reduced.size] = reduced
    return roots


@dataclass(frozen=True)
class ContactTable:
    """
    Critical angles of |2 - e^{-it} z1 - e^{it} conj(z2)| for arrays of pairs

    One row per pair, one column per root of the critical-point quartic.
    `contacts` marks the columns within CONTACT_VALUE_TOL of the row minimum.
    """

    angles: np.ndarray
    values: np.ndarray
    contacts: np.ndarray

    @property
    def first_index(self) -> np.ndarray:
        """Column of the smallest contact angle in each row"""
        return np.argmin(np.where(self.contacts, self.angles, np.inf), axis=1)

    @property
    def first_angle(self) -> np.ndarray:
        return np.take_along_axis(self.angles, self.first_index[:, None], axis=1)[:, 0]

    @property
    def first_value(self) -> np.ndarray:
        return np.take_along_axis(self.values, self.first_index[:, None], axis=1)[:, 0]


def contact_table(z1, z2) -> ContactTable:
    """
    Exact minimization of the tangent-half-plane denominator, vectorized

    |D(t)|^2 = p0 + 2 Re(p1 e^{it} + p2 e^{2it}) with p1 = -2 conj(z1 + z2)
    and p2 = conj(z1 z2). Its derivative times e^{2it} is the quartic

        2 p2 x^4 + p1 x^3 - conj(p1) x - 2 conj(p2),  x = e^{it}

    whose unimodular roots are the critical angles. Roots are polished by
    Newton steps on the derivative wherever the curvature is positive.
    """
    z1 = np.atleast_1d(np.asarray(z1, dtype=complex))
    z2 = np.atleast_1d(np.asarray(z2, dtype=complex))
    p1 = -2.0 * np.conj(z1 + z2)
    p2 = np.conj(z1 * z2)
    coefficients = np.stack([2.0 * p2, p1, np.zeros_like(p1), -np.conj(p1), -2.0 * np.conj(p2)], axis=1)
    roots = _quartic_roots(coefficients)

    valid = np.abs(np.abs(roots) - 1.0) <= ROOT_MODULUS_TOL
    # a constant denominator has no isolated critical point
    empty = ~np.any(valid, axis=1)
    valid[empty, 0] = True
    angles = np.angle(np.where(valid, roots, 1.0))

    p1, p2 = p1[:, None], p2[:, None]
    for _ in range(NEWTON_STEPS):
        e = np.exp(1j * angles)
        slope = -2.0 * np.imag(p1 * e + 2.0 * p2 * e * e)
        curvature = -2.0 * np.real(p1 * e + 4.0 * p2 * e * e)
        convex = curvature > 0.0
        step = np.where(convex, slope / np.where(convex, curvature, 1.0), 0.0)
        angles = angles - np.where(np.abs(step) < NEWTON_MAX_STEP, step, 0.0)

    angles = np.mod(angles, TWO_PI)
    angles = np.where(angles >= TWO_PI, 0.0, angles)
    values = np.where(valid, np.abs(tangent_denominator(z1[:, None], z2[:, None], angles)), np.inf)
    best = np.min(values, axis=1, keepdims=True)
    return ContactTable(angles=angles, values=values, contacts=valid & (values - best <= CONTACT_VALUE_TOL))


def unit_circle_contacts(z1: complex, z2: complex) -> List[Tuple[float, float]]:
    """
    Global minimizers of |2 - e^{-it} z1 - e^{it} conj(z2)| over t

    Minima within CONTACT_VALUE_TOL of the best are all returned, sorted
    by angle; angles closer than CONTACT_ANGLE_TOL count once.

    Returns:
        List of (angle in [0, 2*pi), denominator modulus)
    """
    table = contact_table(z1, z2)
    mask = table.contacts[0]
    candidates = sorted(zip(table.angles[0][mask].tolist(), table.values[0][mask].tolist()))
    contacts = []
    for angle, value in candidates:
        if contacts and angle_distance(angle, contacts[-1][0]) < CONTACT_ANGLE_TOL:
            continue
        contacts.append((angle, value))
    if len(contacts) > 1 and angle_distance(contacts[0][0], contacts[-1][0]) < CONTACT_ANGLE_TOL:
        contacts.pop()
    return contacts


def s_unit_disk_batch(z1, z2) -> Tuple[np.ndarray, ContactTable]:
    """
    s_U over arrays of distinct pairs inside the unit disk

    No validation; the first contact of each row gives the denominator,
    as in s_unit_disk.
    """
    table = contact_table(z1, z2)
    distance = np.abs(np.asarray(z1, dtype=complex) - np.asarray(z2, dtype=complex))
    return np.atleast_1d(distance) / table.first_value, table


def s_halfplane(u: PointLike, v: PointLike) -> float:
    """s_H(u, v) = |u - v| / |u - conj(v)|, identical to th(rho_H / 2)"""
    return tanh_half_rho_halfplane(u, v)


def s_unit_disk(z1: PointLike, z2: PointLike) -> Tuple[float, BoundaryInfResult]:
    """
    Triangular ratio metric in the unit disk with its contact point

    Non-unique contacts resolve to the smallest angle. Coincident points
    give 0 with the contact at the boundary point nearest to them.
    """
    z1, z2 = UNIT_DISK.validate_points(z1, z2)
    if z1 == z2:
        w = UNIT_DISK.nearest_boundary_point(z1)
        return 0.0, BoundaryInfResult(2.0 * (1.0 - abs(z1)), w, normalize_angle(cmath.phase(w)))

    psi, denominator = unit_circle_contacts(z1, z2)[0]
    return abs(z1 - z2) / denominator, BoundaryInfResult(denominator, unit(psi), psi)


def s_disk(d: DiskDomain, u: PointLike, v: PointLike) -> float:
    """s on K(z0, R) by rescaling to the unit disk"""
    u, v = Disk(d.center, d.radius).validate_points(u, v)
    value, _ = s_unit_disk((u - d.center) / d.radius, (v - d.center) / d.radius)
    return value


def _edge_minimum(a: complex, b: complex, u: complex, v: complex) -> Tuple[float, complex]:
    # reflect u across the edge line, clamp the crossing of the path to v onto the segment
    d = b - a
    e = d / abs(d)
    hu = ((u - a) * e.conjugate()).imag
    hv = ((v - a) * e.conjugate()).imag
    su = ((u - a) * e.conjugate()).real
    sv = ((v - a) * e.conjugate()).real
    s = su + (sv - su) * hu / (hu + hv)
    t = min(max(s / abs(d), 0.0), 1.0)
    w = a + t * d
    return abs(u - w) + abs(w - v), w


def s_convex_polygon(p: ConvexPolygon, u: PointLike, v: PointLike) -> Tuple[float, BoundaryInfResult]:
    """s on a convex polygon; edges are scanned in vertex order and the first minimum wins"""
    u, v = p.validate_points(u, v)
    if u == v:
        w = p.nearest_boundary_point(u)
        return 0.0, BoundaryInfResult(2.0 * abs(u - w), w)

    best_sum, best_w = math.inf, None
    for a, b in p.edges:
        total, w = _edge_minimum(a, b, u, v)
        if total < best_sum:
            best_sum, best_w = total, w
    return abs(u - v) / best_sum, BoundaryInfResult(best_sum, best_w)


def s_via_supporting_halfplanes(p: ConvexPolygon, u: PointLike, v: PointLike) -> float:
    """Supremum of th(rho_H / 2) over the half-planes bounded by the edge lines"""
    u, v = p.validate_points(u, v)
    if u == v:
        return 0.0
    return max(tanh_half_rho_general_halfplane(h, u, v) for h in p.edge_halfplanes())


def _local_minima(sums: np.ndarray, periodic: bool) -> np.ndarray:
    if periodic:
        left, right = np.roll(sums, 1), np.roll(sums, -1)
    else:
        left = np.concatenate(([np.inf], sums[:-1]))
        right = np.concatenate((sums[1:], [np.inf]))
    return np.flatnonzero((sums <= left) & (sums <= right))


def s_bruteforce(domain: MetricDomain, u: PointLike, v: PointLike, n: int = BRUTEFORCE_SAMPLES) -> float:
    """
    Oracle: sampled boundary infimum refined by bounded golden-section search

    Samples are spread over the boundary pieces in proportion to their
    length. Every discrete local minimum of the sampled sums is refined
    on its neighbouring sample interval.
    """
    if n < MIN_BRUTEFORCE_SAMPLES:
        raise InvalidInputError(f"Oracle needs at least {MIN_BRUTEFORCE_SAMPLES} samples, got {n}")
    u, v = domain.validate_points(u, v)
    if u == v:
        return 0.0

    pieces = domain.boundary_pieces(u, v)
    total_length = sum(piece.length for piece in pieces)
    best = math.inf
    for piece in pieces:
        count = max(3, int(round(n * piece.length / total_length)))
        params = piece.sample(count)
        points = piece.point(params)
        sums = np.abs(u - points) + np.abs(points - v)
        start, stop = piece.parameter_range()
        step = params[1] - params[0]

        def boundary_sum(t, piece=piece):
            w = complex(piece.point(t))
            return abs(u - w) + abs(w - v)

        minima = _local_minima(sums, piece.periodic)
        for k in minima[np.argsort(sums[minima])][:8]:
            lo, hi = params[k] - step, params[k] + step
            if not piece.periodic:
                lo, hi = max(lo, start), min(hi, stop)
            res = minimize_scalar(boundary_sum, bounds=(lo, hi), method='bounded',
                                  options={'xatol': REFINE_XTOL})
            best = min(best, float(res.fun), float(sums[k]))
    return abs(u - v) / best


def triangular_ratio(domain: MetricDomain, u: PointLike, v: PointLike) -> float:
    """Closed-form s_D for any supported domain"""
    if isinstance(domain, UnitDisk):
        return s_unit_disk(u, v)[0]
    if isinstance(domain, Disk):
        return s_disk(domain.disk, u, v)
    if isinstance(domain, UpperHalfPlane):
        return s_halfplane(u, v)
    if isinstance(domain, ConvexPolygon):
        return s_convex_polygon(domain, u, v)[0]
    raise InvalidInputError(f"Unsupported domain: {domain.kind}")
